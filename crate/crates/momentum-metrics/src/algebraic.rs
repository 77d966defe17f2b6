//! Rational approximants for the algebraic numbers entering the glued
//! minimizers: junction positions like √(m+1) − 1 and the positivity
//! thresholds k₁ (largest root of a quartic) and k₂ (real root of a
//! cubic). Everything downstream works with a rational approximant of
//! configurable precision instead of symbolic algebraic numbers; the
//! precision is chosen so that junction defects stay far below the
//! certified tolerances.

use exact_geometry::poly::Poly;
use exact_geometry::roots::{isolate_real_roots, refine_root};
use exact_geometry::{rat, rat_int, Rat};
use num::Zero;

use crate::{MetricsError, Result};

/// Decimal digits used for algebraic junction approximants. Defaults to 50
/// and can be overridden through the KSTAB_PRECISION_DIGITS environment
/// variable (clamped to [12, 4096]).
pub fn precision_digits() -> u32 {
    std::env::var("KSTAB_PRECISION_DIGITS")
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .map(|d| d.clamp(12, 4096))
        .unwrap_or(50)
}

pub(crate) fn precision_eps(digits: u32) -> Rat {
    num::pow(rat(1, 10), digits as usize)
}

/// m⁴ − 16m³ − 52m² − 48m − 12, the discriminant of the quadratic bracket
/// of the smooth profile numerator. Its unique positive root k₁ ≈ 18.8892
/// is the parameter below which smooth extremal profiles stay positive.
pub fn smooth_threshold_poly() -> Poly {
    Poly::new(vec![
        rat_int(-12),
        rat_int(-48),
        rat_int(-52),
        rat_int(-16),
        rat_int(1),
    ])
}

/// m³ − 3m² − 9m − 6, the endpoint value of the linear bracket of the
/// complete profile numerators (up to sign). Its unique real root
/// k₂ ≈ 5.0275 bounds positivity for both complete classes.
pub fn complete_threshold_poly() -> Poly {
    Poly::new(vec![rat_int(-6), rat_int(-9), rat_int(-3), rat_int(1)])
}

/// k₁ as a double, for error reports only; all decisions are made through
/// exact sign evaluations of [`smooth_threshold_poly`].
pub(crate) const SMOOTH_THRESHOLD_APPROX: f64 = 18.889204110452658;

/// Both threshold polynomials have exactly one sign change in their
/// coefficients, hence exactly one positive root; for positive rational m
/// the comparison with that root is a single exact sign evaluation.
pub(crate) fn exceeds_smooth_threshold(m: &Rat) -> bool {
    smooth_threshold_poly().eval(m).is_positive()
}

/// The largest real root of p, refined to within eps, returned as the
/// midpoint of the final isolating interval.
pub(crate) fn largest_root_approx(p: &Poly, eps: &Rat) -> Result<Rat> {
    let intervals = isolate_real_roots(p).map_err(MetricsError::from)?;
    let last = intervals
        .last()
        .ok_or_else(|| MetricsError::Internal("threshold polynomial has no real root".into()))?;
    Ok(refine_root(p, last, eps).midpoint())
}

/// Whether m lies beyond the plateau cutoff k₂(k₂+2), i.e. whether
/// √(m+1) − 1 > k₂. Decided exactly by shrinking the isolating interval of
/// k₂ until m + 1 separates from (k₂+1)²; the cubic has no rational root,
/// so the loop terminates for every rational m.
pub(crate) fn beyond_plateau_cutoff(m: &Rat) -> Result<bool> {
    let p = complete_threshold_poly();
    let intervals = isolate_real_roots(&p).map_err(MetricsError::from)?;
    let mut iv = intervals
        .last()
        .ok_or_else(|| MetricsError::Internal("cubic threshold lost its root".into()))?
        .clone();
    let target = m + rat_int(1);
    loop {
        let lo = &iv.lo + rat_int(1);
        let hi = &iv.hi + rat_int(1);
        if target <= &lo * &lo {
            return Ok(false);
        }
        if target >= &hi * &hi {
            return Ok(true);
        }
        let w = iv.width();
        if w.is_zero() {
            return Err(MetricsError::Internal(
                "plateau cutoff coincides with a rational parameter".into(),
            ));
        }
        iv = refine_root(&p, &iv, &(w / rat_int(2)));
    }
}
