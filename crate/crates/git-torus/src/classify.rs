//! Stability classification and the exact-arithmetic stability checks.

use exact_geometry::rational::{format_rat, rat_int, to_f64, Rat};
use num::{Signed, Zero};

use crate::action::WeightedAction;
use crate::{hull, Result, StabilityError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityClass {
    Unstable,
    SemistableNotPolystable,
    PolystableNotStable,
    Stable,
}

impl StabilityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityClass::Unstable => "unstable",
            StabilityClass::SemistableNotPolystable => "semistable-not-polystable",
            StabilityClass::PolystableNotStable => "polystable-not-stable",
            StabilityClass::Stable => "stable",
        }
    }

    pub fn is_semistable(self) -> bool {
        !matches!(self, StabilityClass::Unstable)
    }

    pub fn is_polystable(self) -> bool {
        matches!(
            self,
            StabilityClass::PolystableNotStable | StabilityClass::Stable
        )
    }
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything the weight-hull geometry says about one action.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub class: StabilityClass,
    /// Whether the orthogonal projection of the origin onto the affine
    /// hull of the supported weights lies in the hull's relative interior.
    pub relative_polystable: bool,
    /// Squared distance from the origin to the hull boundary within the
    /// affine hull: zero when not polystable, None (infinite) when the
    /// hull is a single point and has no boundary.
    pub modulus_sq: Option<Rat>,
    /// Minus the closest point of the hull to the origin; present exactly
    /// when the action is unstable.
    pub worst_direction: Option<Vec<Rat>>,
    /// Squared distance from the origin to the hull, which equals
    /// inf ||mu||^2 over the complexified orbit.
    pub inf_moment_norm_sq: Rat,
}

impl StabilityReport {
    pub fn modulus(&self) -> f64 {
        match &self.modulus_sq {
            None => f64::INFINITY,
            Some(sq) => to_f64(sq).sqrt(),
        }
    }

    pub fn inf_moment_norm(&self) -> f64 {
        to_f64(&self.inf_moment_norm_sq).sqrt()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let modulus_sq = match &self.modulus_sq {
            None => serde_json::Value::Null,
            Some(sq) => exact_value(sq),
        };
        let modulus = if self.modulus().is_finite() {
            serde_json::json!(self.modulus())
        } else {
            serde_json::Value::Null
        };
        let worst = match &self.worst_direction {
            None => serde_json::Value::Null,
            Some(v) => serde_json::Value::Array(v.iter().map(exact_value).collect()),
        };
        serde_json::json!({
            "class": self.class.as_str(),
            "relative_polystable": self.relative_polystable,
            "modulus_sq": modulus_sq,
            "modulus": modulus,
            "inf_moment_norm_sq": exact_value(&self.inf_moment_norm_sq),
            "inf_moment_norm": self.inf_moment_norm(),
            "worst_direction": worst,
        })
    }
}

fn exact_value(r: &Rat) -> serde_json::Value {
    serde_json::json!({ "exact": format_rat(r), "value": to_f64(r) })
}

fn margin_positive(margin: Option<Rat>) -> bool {
    matches!(margin, Some(t) if t.is_positive())
}

/// Classify an action by the position of the origin relative to the hull
/// of its supported weights: semistable when the hull contains the
/// origin, polystable when the origin is relatively interior, stable when
/// the hull also spans the full weight space.
pub fn classify_stability(a: &WeightedAction) -> Result<StabilityReport> {
    let pts = a.supported_points();
    let closest = hull::closest_point(&pts);
    let semistable = closest.dist_sq.is_zero();
    let origin = vec![Rat::zero(); a.dimension()];
    let polystable = semistable && margin_positive(hull::relint_margin(&pts, &origin)?);
    let stable = polystable && hull::affine_dim(&pts) == a.dimension();
    let class = if !semistable {
        StabilityClass::Unstable
    } else if !polystable {
        StabilityClass::SemistableNotPolystable
    } else if !stable {
        StabilityClass::PolystableNotStable
    } else {
        StabilityClass::Stable
    };
    let projection = hull::affine_hull_projection(&pts);
    let relative_polystable = margin_positive(hull::relint_margin(&pts, &projection)?);
    let modulus_sq = if polystable {
        hull::boundary_distance_sq(&pts)?
    } else {
        Some(Rat::zero())
    };
    let worst_direction = if semistable {
        None
    } else {
        Some(closest.point.iter().map(|x| -x).collect())
    };
    Ok(StabilityReport {
        class,
        relative_polystable,
        modulus_sq,
        worst_direction,
        inf_moment_norm_sq: closest.dist_sq,
    })
}

/// Modulus of stability, worst destabilising direction and infimum of the
/// moment-map norm, in one call: (modulus squared, worst direction,
/// inf ||mu||^2).  Polystable actions have zero infimum and positive
/// modulus; unstable actions have zero modulus and the worst direction is
/// minus the closest hull point.
pub fn modulus_and_worst_direction(
    a: &WeightedAction,
) -> Result<(Option<Rat>, Option<Vec<Rat>>, Rat)> {
    let report = classify_stability(a)?;
    Ok((
        report.modulus_sq,
        report.worst_direction,
        report.inf_moment_norm_sq,
    ))
}

/// Hilbert-Mumford weight of the one-parameter subgroup generated by xi:
/// the maximum of <xi, alpha_j> over the supported weights.
pub fn hm_weight(a: &WeightedAction, xi: &[Rat]) -> Result<Rat> {
    if xi.len() != a.dimension() {
        return Err(StabilityError::DimensionMismatch {
            expected: a.dimension(),
            got: xi.len(),
        });
    }
    if xi.iter().all(Zero::is_zero) {
        return Err(StabilityError::ZeroDirection);
    }
    let best = a
        .supported_points()
        .iter()
        .map(|p| hull::dot(xi, p))
        .max()
        .expect("validated actions have supported weights");
    Ok(best)
}

/// Orthogonal projection of the origin onto the affine hull of the
/// supported weights.  This is the dual of the weight functional on the
/// directions fixing the point, hence the canonical choice of chi for
/// `moment_lower_bound_check`, and the direction whose relative-interior
/// membership defines `relative_polystable`.
pub fn extremal_direction(a: &WeightedAction) -> Result<Vec<Rat>> {
    Ok(hull::affine_hull_projection(&a.supported_points()))
}

/// One run of the lower-bound test for the moment-map norm on an orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentLowerBound {
    /// Adjusted weight F(alpha) − <alpha, chi>; the bound needs it negative.
    pub futaki_weight: Rat,
    /// inf ||mu||^2 over the orbit = squared distance from the origin to
    /// the supported weight hull.
    pub lhs_sq: Rat,
    /// ||chi||^2 + futaki_weight^2 / ||alpha||^2.
    pub rhs_sq: Rat,
    /// Some(lhs ≥ rhs) when the precondition held, None when the check
    /// was skipped because the adjusted weight was not negative.
    pub holds: Option<bool>,
}

impl MomentLowerBound {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "futaki_weight": exact_value(&self.futaki_weight),
            "lhs_sq": exact_value(&self.lhs_sq),
            "rhs_sq": exact_value(&self.rhs_sq),
            "holds": self.holds,
        })
    }
}

/// Check inf ||mu||^2 ≥ ||chi||^2 + F^2 / ||alpha||^2 for a destabilising
/// direction alpha, where F is the Hilbert-Mumford weight adjusted by
/// <alpha, chi>.  The inequality is the content of the lower-bound
/// theorem when chi is the canonical relative direction returned by
/// `extremal_direction`; when F fails to be negative the check is
/// reported as skipped rather than asserted.
pub fn moment_lower_bound_check(
    a: &WeightedAction,
    alpha: &[i64],
    chi: &[Rat],
) -> Result<MomentLowerBound> {
    if chi.len() != a.dimension() {
        return Err(StabilityError::DimensionMismatch {
            expected: a.dimension(),
            got: chi.len(),
        });
    }
    let alpha_r: Vec<Rat> = alpha.iter().map(|&x| rat_int(x)).collect();
    let weight = hm_weight(a, &alpha_r)?;
    let futaki_weight = weight - hull::dot(&alpha_r, chi);
    let lhs_sq = hull::closest_point(&a.supported_points()).dist_sq;
    let rhs_sq =
        hull::norm_sq(chi) + &futaki_weight * &futaki_weight / hull::norm_sq(&alpha_r);
    let holds = if futaki_weight.is_negative() {
        Some(lhs_sq >= rhs_sq)
    } else {
        None
    };
    Ok(MomentLowerBound {
        futaki_weight,
        lhs_sq,
        rhs_sq,
        holds,
    })
}
