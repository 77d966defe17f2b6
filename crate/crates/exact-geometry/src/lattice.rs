//! Lattice point enumeration and the expansion of weighted lattice sums over
//! dilated polygons: for an integral polygon P and polynomial weight Q,
//! S(k) = Σ_{p ∈ kP ∩ ℤ²} Q(p) is a polynomial in k whose top coefficient is
//! the interior moment of Q's top-degree part and whose next coefficient adds
//! half the boundary moment.

use num::{One, Zero};
use rayon::prelude::*;

use crate::bivariate::Poly2;
use crate::poly::Poly;
use crate::polygon::RationalPolygon;
use crate::rational::{Int, Rat};
use crate::{GeometryError, Result};

/// All integer points in the closed polygon, by bounding-box scan.
pub fn lattice_points(polygon: &RationalPolygon) -> Vec<(Int, Int)> {
    let (xmin, xmax, ymin, ymax) = polygon.bounding_box();
    let x_lo = xmin.ceil().to_integer();
    let x_hi = xmax.floor().to_integer();
    let y_lo = ymin.ceil().to_integer();
    let y_hi = ymax.floor().to_integer();
    let mut out = Vec::new();
    let mut x = x_lo;
    while x <= x_hi {
        let mut y = y_lo.clone();
        while y <= y_hi {
            let p = (Rat::from_integer(x.clone()), Rat::from_integer(y.clone()));
            if polygon.contains(&p) {
                out.push((x.clone(), y.clone()));
            }
            y += 1;
        }
        x += 1;
    }
    out
}

pub fn lattice_point_count(polygon: &RationalPolygon) -> usize {
    lattice_points(polygon).len()
}

/// k·P for a positive integer k (sigma scales are carried over).
pub fn dilate(polygon: &RationalPolygon, k: u32) -> RationalPolygon {
    let kr = Rat::from_integer(Int::from(k));
    let verts = polygon
        .vertices()
        .iter()
        .map(|(x, y)| (x * &kr, y * &kr))
        .collect();
    let scales = polygon
        .edges()
        .iter()
        .map(|e| e.sigma_scale.clone())
        .collect();
    RationalPolygon::new(verts)
        .and_then(|p| p.with_sigma_scales(scales))
        .expect("dilation preserves validity")
}

#[derive(Clone, Debug)]
pub struct LatticeExpansion {
    /// S(k) as an exact polynomial in k.
    pub counting_polynomial: Poly,
    /// Coefficient of k^(d+2), d the total degree of the weight.
    pub leading: Rat,
    /// Coefficient of k^(d+1).
    pub subleading: Rat,
    /// ∫_P Q_top dμ, the interior moment of the top-degree part.
    pub interior_moment: Rat,
    /// ½ ∮_∂P Q_top dσ + ∫_P Q_next dμ (lattice boundary measure, unscaled).
    pub boundary_moment_term: Rat,
    /// The sample values (k, S(k)) used for the fit.
    pub samples: Vec<(u32, Rat)>,
}

/// Homogeneous part of the given total degree.
fn homogeneous_part(q: &Poly2, degree: usize) -> Poly2 {
    let mut acc = Poly2::zero();
    for (b, col) in q.y_coeffs().iter().enumerate() {
        for (a, c) in col.coeffs().iter().enumerate() {
            if a + b == degree && !c.is_zero() {
                acc = &acc + &Poly2::monomial(a, b).scale(c);
            }
        }
    }
    acc
}

/// Boundary moment with every edge weighted by its lattice length only
/// (ignores any custom sigma scales; the counting measure is intrinsic).
fn intrinsic_boundary_moment(polygon: &RationalPolygon, w: &Poly2) -> Rat {
    let unit = polygon
        .clone()
        .with_sigma_scales(vec![Rat::one(); polygon.edges().len()])
        .expect("unit scales");
    unit.integrate_poly_boundary(w)
}

fn weighted_lattice_sum(polygon: &RationalPolygon, q: &Poly2, k: u32) -> Rat {
    let dilated = dilate(polygon, k);
    lattice_points(&dilated)
        .into_iter()
        .map(|(x, y)| q.eval(&Rat::from_integer(x), &Rat::from_integer(y)))
        .sum()
}

/// Fit S(k) exactly and cross-check the two top coefficients against the
/// moment integrals. Requires an integral polygon.
pub fn lattice_sum_expansion(polygon: &RationalPolygon, weight: &Poly2) -> Result<LatticeExpansion> {
    for (x, y) in polygon.vertices() {
        if !x.is_integer() || !y.is_integer() {
            return Err(GeometryError::NotLatticePolygon);
        }
    }
    let d = weight.total_degree().unwrap_or(0);
    let fit_points = d + 3; // degree d + 2 polynomial
    let check_points = 3usize;
    let ks: Vec<u32> = (1..=(fit_points + check_points) as u32).collect();
    let sums: Vec<(u32, Rat)> = ks
        .par_iter()
        .map(|&k| (k, weighted_lattice_sum(polygon, weight, k)))
        .collect();
    let fit_data: Vec<(Rat, Rat)> = sums[..fit_points]
        .iter()
        .map(|(k, s)| (Rat::from_integer(Int::from(*k)), s.clone()))
        .collect();
    let counting = Poly::lagrange_interpolate(&fit_data)?;
    for (k, s) in &sums[fit_points..] {
        if &counting.eval(&Rat::from_integer(Int::from(*k))) != s {
            return Err(GeometryError::FitResidual(*k));
        }
    }
    let top = homogeneous_part(weight, d);
    let next = if d > 0 {
        homogeneous_part(weight, d - 1)
    } else {
        Poly2::zero()
    };
    let interior_moment = polygon.integrate_poly_interior(&top);
    let half = Rat::new(Int::one(), Int::from(2));
    let boundary_moment_term =
        intrinsic_boundary_moment(polygon, &top) * &half + polygon.integrate_poly_interior(&next);
    let leading = counting.coeff(d + 2);
    let subleading = counting.coeff(d + 1);
    Ok(LatticeExpansion {
        counting_polynomial: counting,
        leading,
        subleading,
        interior_moment,
        boundary_moment_term,
        samples: sums,
    })
}
