//! Lower bounds for the Calabi functional from destabilizing actions.
//!
//! A test degeneration with Futaki invariant F and squared norm |a|^2
//! forces, on an n-fold,
//!
//! ```text
//! |S - S_hat|_{L^2}^2 >= 4 (2pi)^n F^2 / |a|^2          (F < 0)
//! ```
//!
//! while relative to the extremal field chi the sharper bound
//!
//! ```text
//! |S - S_hat|_{L^2}^2 >= 2 (2pi)^n F_chi^2 / |a|^2 + |chi|_{L^2}^2
//! ```
//!
//! holds, where the algebraic norm relates to the differential one by
//! |chi|_{L^2} = 2 (2pi)^{n/2} |chi|_alg, so |chi|_{L^2}^2 contributes
//! 4 <chi,chi> to the (2pi)^n coefficient.  An extremal metric attains
//! the relative bound, which is why F_chi = 0 is admissible there.

use crate::{FutakiError, Result};
use exact_geometry::rational::{rat_int, to_f64};
use exact_geometry::Rat;

/// A Calabi-functional lower bound, kept exact as a (2 pi)^n multiple.
#[derive(Debug, Clone, PartialEq)]
pub struct CalabiBound {
    pub n: usize,
    /// Exact coefficient of (2 pi)^n in the bound.
    pub coefficient: Rat,
    /// Float preview of the bound itself.
    pub value: f64,
}

/// Evaluates the absolute (`relative = false`) or relative bound.
///
/// `futaki` is F for the absolute bound and F_chi for the relative one;
/// `norm_chi_sq` is the algebraic <chi,chi> and participates only in the
/// relative bound.  The absolute bound requires F strictly negative and
/// the relative one F_chi <= 0; otherwise the statement is vacuous.
pub fn calabi_lower_bound(
    futaki: &Rat,
    norm_alpha_sq: &Rat,
    norm_chi_sq: Option<&Rat>,
    relative: bool,
    n: usize,
) -> Result<CalabiBound> {
    if n == 0 {
        return Err(FutakiError::ParameterRange(
            "variety dimension must be at least 1".into(),
        ));
    }
    if *norm_alpha_sq <= rat_int(0) {
        return Err(FutakiError::ParameterRange(
            "squared norm of the action must be positive".into(),
        ));
    }
    let coefficient = if relative {
        if *futaki > rat_int(0) {
            return Err(FutakiError::VacuousBound);
        }
        let chi = norm_chi_sq.cloned().unwrap_or_else(|| rat_int(0));
        rat_int(2) * futaki * futaki / norm_alpha_sq + rat_int(4) * chi
    } else {
        if *futaki >= rat_int(0) {
            return Err(FutakiError::VacuousBound);
        }
        rat_int(4) * futaki * futaki / norm_alpha_sq
    };
    let value = to_f64(&coefficient) * std::f64::consts::TAU.powi(n as i32);
    Ok(CalabiBound { n, coefficient, value })
}
