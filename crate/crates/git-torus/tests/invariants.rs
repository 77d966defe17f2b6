//! Structural properties of the classifier and the moment map on random
//! actions: lattice symmetry, convexity certificates, and the agreement
//! between the exact hull geometry and the analytic minimisation.

use exact_geometry::rational::{rat, rat_int, to_f64, Rat};
use git_torus::{
    classify_stability, hm_weight, moment_map, StabilityClass, WeightedAction,
};
use nalgebra::DMatrix;
use num::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn action_strategy() -> impl Strategy<Value = WeightedAction> {
    (1usize..=3)
        .prop_flat_map(|d| {
            (
                Just(d),
                proptest::collection::vec(proptest::collection::vec(-4i64..=4, d), 1..=6),
            )
        })
        .prop_flat_map(|(d, weights)| {
            let m = weights.len();
            (
                Just(d),
                Just(weights),
                proptest::collection::vec(any::<bool>(), m),
            )
        })
        .prop_map(|(d, weights, mut support)| {
            if !support.iter().any(|&s| s) {
                support[0] = true;
            }
            WeightedAction::new(d, weights, support).expect("generated actions are well formed")
        })
}

/// Elementary integer row operations on the weight coordinates; each one
/// is invertible over the integers, so their composition is a unimodular
/// change of basis for the acting torus.
fn shear_weights(weights: &[Vec<i64>], ops: &[(u8, usize, usize, i64)], d: usize) -> Vec<Vec<i64>> {
    weights
        .iter()
        .map(|w| {
            let mut v = w.clone();
            for &(kind, i, j, k) in ops {
                let (i, j) = (i % d, j % d);
                match kind % 3 {
                    0 => v.swap(i, j),
                    1 => v[i] = -v[i],
                    _ => {
                        if i != j {
                            v[i] += k * v[j];
                        }
                    }
                }
            }
            v
        })
        .collect()
}

fn rat_dot_int(xs: &[Rat], ys: &[i64]) -> Rat {
    xs.iter()
        .zip(ys)
        .fold(Rat::zero(), |acc, (x, &y)| acc + x * rat_int(y))
}

fn float_dot(xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter().zip(ys).map(|(x, y)| x * y).sum()
}

/// Value of the norm functional (1/2) log sum exp(2<xi, alpha>) over the
/// supported weights, stabilised by the max shift.
fn half_log_norm(weights: &[Vec<f64>], xi: &[f64]) -> f64 {
    let exponents: Vec<f64> = weights.iter().map(|w| 2.0 * float_dot(xi, w)).collect();
    let peak = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = exponents.iter().map(|e| (e - peak).exp()).sum();
    0.5 * (peak + total.ln())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_invariant_under_unimodular_basis_changes(
        action in action_strategy(),
        ops in proptest::collection::vec((0u8..3, 0usize..3, 0usize..3, -2i64..=2), 0..6),
    ) {
        let base = classify_stability(&action).unwrap();
        let sheared = WeightedAction::new(
            action.dimension(),
            shear_weights(action.weights(), &ops, action.dimension()),
            action.support().to_vec(),
        )
        .unwrap();
        let transformed = classify_stability(&sheared).unwrap();
        prop_assert_eq!(base.class, transformed.class);
    }

    #[test]
    fn reports_are_invariant_under_weight_permutations(
        action in action_strategy(),
        seed in any::<u64>(),
    ) {
        let m = action.weights().len();
        let mut order: Vec<usize> = (0..m).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..m).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let permuted = WeightedAction::new(
            action.dimension(),
            order.iter().map(|&i| action.weights()[i].clone()).collect(),
            order.iter().map(|&i| action.support()[i]).collect(),
        )
        .unwrap();
        let base = classify_stability(&action).unwrap();
        let shuffled = classify_stability(&permuted).unwrap();
        prop_assert_eq!(base, shuffled);
    }

    #[test]
    fn one_parameter_weights_dominate_moment_pairings(
        action in action_strategy(),
        xi_raw in proptest::collection::vec(-3i64..=3, 3),
        eta_raw in proptest::collection::vec(-2.0f64..2.0, 3),
    ) {
        let d = action.dimension();
        let mut xi_int = xi_raw[..d].to_vec();
        if xi_int.iter().all(|&c| c == 0) {
            xi_int[0] = 1;
        }
        let xi_rat: Vec<Rat> = xi_int.iter().map(|&c| rat_int(c)).collect();
        let weight = hm_weight(&action, &xi_rat).unwrap();

        let mu = moment_map(&action, &eta_raw[..d]).unwrap();
        let xi_float: Vec<f64> = xi_int.iter().map(|&c| c as f64).collect();
        let pairing = float_dot(&xi_float, &mu);
        prop_assert!(
            to_f64(&weight) + 1e-9 >= pairing,
            "support function {} undercuts pairing {}",
            to_f64(&weight),
            pairing
        );
    }

    #[test]
    fn report_fields_agree_with_the_classification(action in action_strategy()) {
        let report = classify_stability(&action).unwrap();
        let unstable = report.class == StabilityClass::Unstable;
        prop_assert_eq!(unstable, report.inf_moment_norm_sq.is_positive());
        prop_assert_eq!(unstable, report.worst_direction.is_some());
        let modulus_positive = match &report.modulus_sq {
            None => true,
            Some(sq) => sq.is_positive(),
        };
        prop_assert_eq!(report.class.is_polystable(), modulus_positive);
        if !unstable {
            prop_assert!(report.inf_moment_norm_sq.is_zero());
        }
    }

    #[test]
    fn worst_directions_carry_an_exact_optimality_certificate(action in action_strategy()) {
        let report = classify_stability(&action).unwrap();
        let Some(worst) = &report.worst_direction else { return Ok(()) };

        // The minus of the worst direction is the hull point closest to the
        // origin; closestness is equivalent to every supported weight lying
        // in the halfspace <h, w> >= |h|^2.
        let closest: Vec<Rat> = worst.iter().map(|c| -c).collect();
        let norm_sq = closest
            .iter()
            .fold(Rat::zero(), |acc, c| acc + c * c);
        prop_assert_eq!(&norm_sq, &report.inf_moment_norm_sq);
        for (w, &s) in action.weights().iter().zip(action.support()) {
            if s {
                prop_assert!(rat_dot_int(&closest, w) >= norm_sq);
            }
        }

        // Flowing along the worst direction is destabilising: the supported
        // maximum of the pairings is strictly negative.
        let weight = hm_weight(&action, worst).unwrap();
        prop_assert!(weight <= -norm_sq.clone());
    }
}

#[test]
fn moment_map_gradient_and_hessian_match_the_norm_functional() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=5);
        let weights: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..d).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let action = WeightedAction::all_supported(d, weights.clone()).unwrap();
        let xi: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();

        let float_weights: Vec<Vec<f64>> = weights
            .iter()
            .map(|w| w.iter().map(|&c| c as f64).collect())
            .collect();
        let mu = moment_map(&action, &xi).unwrap();

        // Central differences of (1/2) log sum exp(2<xi, alpha>) recover the
        // moment map coordinate by coordinate.
        let h = 1e-5;
        for i in 0..d {
            let mut up = xi.clone();
            let mut down = xi.clone();
            up[i] += h;
            down[i] -= h;
            let derivative =
                (half_log_norm(&float_weights, &up) - half_log_norm(&float_weights, &down))
                    / (2.0 * h);
            assert!(
                (derivative - mu[i]).abs() < 1e-6,
                "gradient mismatch at coordinate {i}: {derivative} vs {}",
                mu[i]
            );
        }

        // The analytic Hessian is twice the softmax covariance, which must
        // be positive semidefinite.
        let exponents: Vec<f64> = float_weights
            .iter()
            .map(|w| 2.0 * float_dot(&xi, w))
            .collect();
        let peak = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let scaled: Vec<f64> = exponents.iter().map(|e| (e - peak).exp()).collect();
        let total: f64 = scaled.iter().sum();
        let probabilities: Vec<f64> = scaled.iter().map(|s| s / total).collect();
        let mut hessian = DMatrix::<f64>::zeros(d, d);
        for (w, &p) in float_weights.iter().zip(&probabilities) {
            for r in 0..d {
                for c in 0..d {
                    hessian[(r, c)] += 2.0 * p * w[r] * w[c];
                }
            }
        }
        for r in 0..d {
            for c in 0..d {
                hessian[(r, c)] -= 2.0 * mu[r] * mu[c];
            }
        }
        let eigenvalues = hessian.symmetric_eigen().eigenvalues;
        let min_eig = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min_eig > -1e-9, "Hessian has negative eigenvalue {min_eig}");
    }
}

#[test]
fn moment_map_values_stay_relatively_interior() {
    // tanh profile on the symmetric pair: strictly inside (-1, 1).
    let pair = WeightedAction::all_supported(1, vec![vec![-1], vec![1]]).unwrap();
    for xi in [-5.0, -1.0, -0.3, 0.0, 0.7, 2.5, 5.0] {
        let mu = moment_map(&pair, &[xi]).unwrap()[0];
        assert!(mu.abs() < 1.0);
        assert!((mu - (2.0 * xi).tanh()).abs() < 1e-12);
    }

    // Logistic profile on a boundary-origin segment: strictly inside (0, 1).
    let segment = WeightedAction::all_supported(1, vec![vec![0], vec![1]]).unwrap();
    for xi in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let mu = moment_map(&segment, &[xi]).unwrap()[0];
        assert!(mu > 0.0 && mu < 1.0);
    }

    // Diamond: the image stays strictly inside |x| + |y| < 1.
    let diamond = WeightedAction::all_supported(
        2,
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let xi = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let mu = moment_map(&diamond, &xi).unwrap();
        assert!(mu[0].abs() + mu[1].abs() < 1.0);
    }
}

#[test]
fn grid_minima_of_the_moment_norm_converge_from_above() {
    let cases = [
        (vec![vec![1i64, 1], vec![2, 1]], rat(2, 1)),
        (vec![vec![1, 0], vec![0, 1]], rat(1, 2)),
    ];
    let radius = 6.0;
    for (weights, dist_sq) in cases {
        let action = WeightedAction::all_supported(2, weights).unwrap();
        let dist = to_f64(&dist_sq).sqrt();
        let mut previous = f64::INFINITY;
        for n in [8usize, 16, 32, 64, 128] {
            // Offset angles keep the optimal ray off the grid, so the
            // minimum genuinely improves under refinement.
            let grid_min = (0..n)
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / n as f64;
                    let xi = [radius * theta.cos(), radius * theta.sin()];
                    let mu = moment_map(&action, &xi).unwrap();
                    float_dot(&mu, &mu).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(
                grid_min >= dist - 1e-12,
                "grid minimum {grid_min} dips below the infimum {dist}"
            );
            assert!(
                grid_min <= previous + 1e-9,
                "refinement worsened the minimum: {previous} -> {grid_min}"
            );
            previous = grid_min;
        }
        assert!(
            previous <= dist * 1.02,
            "dense grid minimum {previous} is far from the infimum {dist}"
        );
    }
}
