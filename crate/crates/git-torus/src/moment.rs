//! Moment-map evaluation, Kempf-Ness minimisation of the norm functional
//! and the eigenvalue bound at a moment-map zero.

use exact_geometry::rational::{rat_int, to_f64, Rat};
use nalgebra::{DMatrix, DVector};

use crate::action::WeightedAction;
use crate::classify::classify_stability;
use crate::{hull, Result, StabilityError};

/// Iterate-norm threshold past which a minimisation that has plateaued at
/// the certified unstable distance is declared divergent.
pub const DEFAULT_DIVERGENCE_RADIUS: f64 = 1e3;

const MAX_ITERATIONS: usize = 500;
const MAX_STEP_LENGTH: f64 = 50.0;

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_f(a: &[f64]) -> f64 {
    dot_f(a, a).sqrt()
}

struct Softmax {
    probabilities: Vec<f64>,
    /// log Σ_j exp(2 <xi, alpha_j>), the norm functional being minimised.
    log_norm: f64,
}

/// Softmax weights over the supported points, stabilised by subtracting
/// the largest exponent so extreme xi cannot overflow.
fn softmax(points: &[Vec<f64>], xi: &[f64]) -> Softmax {
    let exponents: Vec<f64> = points.iter().map(|p| 2.0 * dot_f(p, xi)).collect();
    let peak = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = exponents.iter().map(|e| (e - peak).exp()).collect();
    let total: f64 = scaled.iter().sum();
    Softmax {
        probabilities: scaled.iter().map(|w| w / total).collect(),
        log_norm: peak + total.ln(),
    }
}

fn weighted_mean(points: &[Vec<f64>], probabilities: &[f64]) -> Vec<f64> {
    let d = points[0].len();
    let mut mean = vec![0.0; d];
    for (p, point) in probabilities.iter().zip(points) {
        for (m, x) in mean.iter_mut().zip(point) {
            *m += p * x;
        }
    }
    mean
}

/// Moment map of the torus action at xi: the softmax-weighted average of
/// the supported weights, Σ_j alpha_j e^{2<xi,alpha_j>} / Σ_j e^{2<xi,alpha_j>}.
pub fn moment_map(a: &WeightedAction, xi: &[f64]) -> Result<Vec<f64>> {
    if xi.len() != a.dimension() {
        return Err(StabilityError::DimensionMismatch {
            expected: a.dimension(),
            got: xi.len(),
        });
    }
    let points = a.supported_points_f64();
    let sm = softmax(&points, xi);
    Ok(weighted_mean(&points, &sm.probabilities))
}

/// Result of minimising the norm functional log Σ e^{2<xi,alpha>}.
#[derive(Clone, Debug)]
pub struct KempfNessOutcome {
    pub xi: Vec<f64>,
    pub moment: Vec<f64>,
    /// True when ||mu|| dropped below the requested tolerance.
    pub converged: bool,
    /// Unit recession direction, certified when the iterates escape along
    /// a destabilising direction instead of converging.
    pub recession: Option<Vec<f64>>,
    pub iterations: usize,
}

/// Gram-Schmidt over float renditions of exactly independent rational
/// rows; the basis stays well conditioned because independence is certified
/// upstream.
fn orthonormal_basis(rows: &[Vec<Rat>]) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for row in rows {
        let mut v = DVector::from_iterator(row.len(), row.iter().map(to_f64));
        for b in &basis {
            let c = b.dot(&v);
            v -= c * b;
        }
        let n = v.norm();
        if n > 1e-12 {
            basis.push(v / n);
        }
    }
    basis
}

/// Modified Newton direction: invert the restricted Hessian along its
/// well-conditioned eigendirections and fall back to the raw gradient on
/// flat ones.  The norm functional is linear along directions orthogonal
/// to the affine hull and flattens out along destabilising rays, so a
/// naive ridge inverse would overshoot into curvature-free subspaces.
fn newton_direction(hessian: &DMatrix<f64>, gradient: &DVector<f64>) -> DVector<f64> {
    let eigen = hessian.clone().symmetric_eigen();
    let cutoff = 1e-8 * eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let mut direction = DVector::zeros(gradient.len());
    for (i, &lambda) in eigen.eigenvalues.iter().enumerate() {
        let v = eigen.eigenvectors.column(i).clone_owned();
        let coeff = v.dot(gradient);
        let scale = if lambda > cutoff && cutoff > 0.0 { lambda } else { 1.0 };
        direction -= (coeff / scale) * v;
    }
    direction
}

pub fn minimize_norm_functional(a: &WeightedAction, tol: f64) -> Result<KempfNessOutcome> {
    minimize_norm_functional_with_radius(a, tol, DEFAULT_DIVERGENCE_RADIUS)
}

/// Damped Newton on the norm functional over the directions spanned by
/// the supported weights (for semistable actions this is exactly the
/// affine hull's direction space).  Convergence means ||mu|| ≤ tol.
/// Divergence is certified against the exact hull geometry: once the
/// iterate leaves the given radius, has a moment norm plateauing at the
/// certified unstable distance and points along the certified worst
/// direction, the exact limit direction is reported.
pub fn minimize_norm_functional_with_radius(
    a: &WeightedAction,
    tol: f64,
    radius: f64,
) -> Result<KempfNessOutcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(StabilityError::Malformed("tolerance must be positive".into()));
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(StabilityError::Malformed(
            "divergence radius must be positive".into(),
        ));
    }
    let rational = a.supported_points();
    let closest = hull::closest_point(&rational);
    let unstable_distance = to_f64(&closest.dist_sq).sqrt();
    let worst_unit: Option<Vec<f64>> = if unstable_distance > 0.0 {
        let w: Vec<f64> = closest.point.iter().map(|x| -to_f64(x)).collect();
        let n = norm_f(&w);
        Some(w.iter().map(|x| x / n).collect())
    } else {
        None
    };

    let d = a.dimension();
    let points = a.supported_points_f64();
    let basis = orthonormal_basis(&hull::span_basis(&rational));
    if basis.is_empty() {
        // Every supported weight vanishes, so mu is identically zero.
        return Ok(KempfNessOutcome {
            xi: vec![0.0; d],
            moment: vec![0.0; d],
            converged: true,
            recession: None,
            iterations: 0,
        });
    }
    let u = DMatrix::from_columns(&basis);
    let r = u.ncols();

    let functional = |t: &DVector<f64>| {
        let xi = &u * t;
        softmax(&points, xi.as_slice()).log_norm
    };

    let mut t = DVector::zeros(r);
    for iteration in 0..MAX_ITERATIONS {
        let xi_vec = &u * &t;
        let xi: Vec<f64> = xi_vec.as_slice().to_vec();
        let sm = softmax(&points, &xi);
        let mu = weighted_mean(&points, &sm.probabilities);
        let mu_norm = norm_f(&mu);
        if mu_norm <= tol {
            return Ok(KempfNessOutcome {
                xi,
                moment: mu,
                converged: true,
                recession: None,
                iterations: iteration,
            });
        }
        if xi_vec.norm() > radius && unstable_distance > tol {
            let plateaued = mu_norm <= unstable_distance * (1.0 + 1e-6) + tol;
            let aligned = worst_unit
                .as_ref()
                .is_some_and(|w| dot_f(&xi, w) / xi_vec.norm() > 0.9);
            if plateaued && aligned {
                // The iterate direction approaches the worst direction
                // like O(1/||xi||); report the certified limit instead of
                // the truncated iterate.
                return Ok(KempfNessOutcome {
                    xi,
                    moment: mu,
                    converged: false,
                    recession: worst_unit,
                    iterations: iteration,
                });
            }
        }

        let gradient = 2.0 * (u.transpose() * DVector::from_vec(mu.clone()));
        let mut covariance = DMatrix::zeros(d, d);
        for (p, point) in sm.probabilities.iter().zip(&points) {
            let v = DVector::from_vec(point.clone());
            covariance += *p * (&v * v.transpose());
        }
        let mean = DVector::from_vec(mu);
        covariance -= &mean * mean.transpose();
        let hessian = 4.0 * (u.transpose() * covariance * &u);

        let mut direction = newton_direction(&hessian, &gradient);
        let length = direction.norm();
        if length > MAX_STEP_LENGTH {
            direction *= MAX_STEP_LENGTH / length;
        }
        let slope = gradient.dot(&direction);

        let mut step = 1.0;
        let mut accepted = None;
        while step >= 1e-12 {
            let candidate = &t + step * &direction;
            if functional(&candidate) <= sm.log_norm + 1e-4 * step * slope {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            return Err(StabilityError::NonConvergence { iterations: iteration });
        };
        t = next;
    }
    Err(StabilityError::NonConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Outcome of comparing the moment-map derivative at its zero against the
/// modulus-of-stability bound.
#[derive(Clone, Debug)]
pub struct EigenvalueBound {
    /// Smallest eigenvalue of 2 Σ p_j alpha_j alpha_j^T − 2 mu mu^T on the
    /// span of the supported weights, evaluated at the Kempf-Ness zero.
    pub min_eigenvalue: f64,
    /// Exact bound 2 lambda^2 / n with lambda the modulus of stability
    /// and n the number of supported weights.
    pub bound: Rat,
    pub supported_count: usize,
    pub holds: bool,
    /// Kempf-Ness zero at which the derivative was evaluated.
    pub xi: Vec<f64>,
}

impl EigenvalueBound {
    pub fn bound_value(&self) -> f64 {
        to_f64(&self.bound)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "min_eigenvalue": self.min_eigenvalue,
            "bound": {
                "exact": exact_geometry::rational::format_rat(&self.bound),
                "value": self.bound_value(),
            },
            "supported_count": self.supported_count,
            "holds": self.holds,
        })
    }
}

/// Evaluate the derivative of the moment map at its zero and compare its
/// smallest eigenvalue (restricted to the span of the supported weights,
/// the directions that move the point) against 2 lambda^2 / n.
pub fn eigenvalue_bound_check(a: &WeightedAction) -> Result<EigenvalueBound> {
    let report = classify_stability(a)?;
    if !report.class.is_polystable() {
        return Err(StabilityError::NotPolystable);
    }
    let Some(modulus_sq) = report.modulus_sq else {
        return Err(StabilityError::TrivialAction);
    };
    let kn = minimize_norm_functional(a, 1e-10)?;
    if !kn.converged {
        return Err(StabilityError::NonConvergence {
            iterations: kn.iterations,
        });
    }
    let d = a.dimension();
    let points = a.supported_points_f64();
    let sm = softmax(&points, &kn.xi);
    let mu = DVector::from_vec(weighted_mean(&points, &sm.probabilities));
    let mut derivative = DMatrix::zeros(d, d);
    for (p, point) in sm.probabilities.iter().zip(&points) {
        let v = DVector::from_vec(point.clone());
        derivative += 2.0 * *p * (&v * v.transpose());
    }
    derivative -= 2.0 * (&mu * mu.transpose());
    let basis = orthonormal_basis(&hull::span_basis(&a.supported_points()));
    let u = DMatrix::from_columns(&basis);
    let restricted = u.transpose() * derivative * &u;
    let min_eigenvalue = restricted
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let supported_count = a.supported_count();
    let bound = rat_int(2) * modulus_sq / rat_int(supported_count as i64);
    let holds = min_eigenvalue + 1e-9 >= to_f64(&bound);
    Ok(EigenvalueBound {
        min_eigenvalue,
        bound,
        supported_count,
        holds,
        xi: kn.xi,
    })
}
