//! Futaki invariant of the degeneration to the normal cone of a divisor.
//!
//! For a smooth surface X polarized by L and a smooth divisor Z with
//! deformation parameter c, the invariant is assembled from intersection
//! numbers alone:
//!
//! ```text
//! F = int_0^c (c-x) alpha_2 dx + (c/2) alpha_1(0) - mu int_0^c (c-x) alpha_1(x) dx
//! ```
//!
//! with alpha_1(x) = Z.(L - xZ), alpha_2 = -(K+Z).Z / 2 and average
//! scalar slope mu = -K.L / L.L.  On the ruled surfaces this reproduces
//! the weight-asymptotics invariant exactly for every admissible (m, c).

use crate::{FutakiError, Result};
use exact_geometry::poly::Poly;
use exact_geometry::rational::{format_rat, rat_int};
use exact_geometry::Rat;

/// Intersection numbers of (X, L, Z) needed for the normal-cone invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDivisorData {
    /// Z.Z
    pub zz: Rat,
    /// L.Z
    pub lz: Rat,
    /// L.L
    pub ll: Rat,
    /// K.L
    pub kl: Rat,
    /// K.Z
    pub kz: Rat,
}

impl SurfaceDivisorData {
    /// (K+Z).Z, which is 2 g(Z) - 2 for a smooth curve Z by adjunction.
    pub fn adjunction_value(&self) -> Rat {
        &self.kz + &self.zz
    }
}

/// Data of the negative section Z = S_inf on the ruled surface with
/// polarization slope m.
pub fn ruled_surface_divisor_data(m: &Rat) -> SurfaceDivisorData {
    SurfaceDivisorData {
        zz: rat_int(-1),
        lz: rat_int(1),
        ll: m * m + rat_int(2) * m,
        kl: m - rat_int(2),
        kz: rat_int(3),
    }
}

/// Evaluates the normal-cone Futaki invariant at deformation parameter c.
///
/// The admissible range of c is bounded by a Seshadri-type constant of
/// (L, Z) that this module does not compute; when the caller supplies
/// `seshadri`, values of c at or above it are rejected.
pub fn normal_cone_futaki(
    data: &SurfaceDivisorData,
    c: &Rat,
    seshadri: Option<&Rat>,
) -> Result<Rat> {
    if data.ll <= rat_int(0) {
        return Err(FutakiError::NonPositivePolarization);
    }
    if *c <= rat_int(0) {
        return Err(FutakiError::ParameterRange(format!(
            "deformation parameter must be positive, got {}",
            format_rat(c)
        )));
    }
    if let Some(bound) = seshadri {
        if c >= bound {
            return Err(FutakiError::ParameterRange(format!(
                "deformation parameter {} must stay below the supplied Seshadri bound {}",
                format_rat(c),
                format_rat(bound)
            )));
        }
    }
    let alpha1 = Poly::new(vec![data.lz.clone(), -data.zz.clone()]);
    let alpha2 = -data.adjunction_value() / rat_int(2);
    let mu = -&data.kl / &data.ll;
    let c_minus_x = Poly::new(vec![c.clone(), rat_int(-1)]);
    let zero = rat_int(0);
    let curvature_term = alpha2 * c * c / rat_int(2);
    let boundary_term = c / rat_int(2) * alpha1.eval(&zero);
    let slope_term = mu * (&c_minus_x * &alpha1).definite_integral(&zero, c);
    Ok(curvature_term + boundary_term - slope_term)
}
