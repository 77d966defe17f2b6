//! Exact convex geometry on finite weight sets: closest point to the
//! origin, interior margins, affine data and facet distances.
//!
//! Everything is brute force over point subsets.  Stability instances are
//! short weight lists in low dimension, where a certified rational answer
//! is worth far more than asymptotic cleverness.

use exact_geometry::lp::{solve_standard_form, LpOutcome};
use exact_geometry::rational::{rat_int, Rat};
use itertools::Itertools;
use num::{One, Signed, Zero};

use crate::{Result, StabilityError};

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn norm_sq(a: &[Rat]) -> Rat {
    dot(a, a)
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Solve the square system m·t = rhs by Gauss-Jordan elimination; None
/// when the matrix is singular.
fn solve_square(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let lead = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &lead;
        }
        rhs[col] = &rhs[col] / &lead;
        let pivot_row = m[col].clone();
        let pivot_rhs = rhs[col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
            rhs[r] = &rhs[r] - &(&factor * &pivot_rhs);
        }
    }
    Some(rhs)
}

/// Orthogonal projection of the origin onto the affine span of `subset`,
/// returned together with its barycentric coordinates.  None when the
/// subset is affinely dependent (singular Gram matrix of differences).
fn project_origin(subset: &[&Vec<Rat>]) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let v0 = subset[0];
    let diffs: Vec<Vec<Rat>> = subset[1..].iter().map(|v| sub(v, v0)).collect();
    let coeffs = if diffs.is_empty() {
        Vec::new()
    } else {
        let gram: Vec<Vec<Rat>> = diffs
            .iter()
            .map(|a| diffs.iter().map(|b| dot(a, b)).collect())
            .collect();
        let rhs: Vec<Rat> = diffs.iter().map(|a| -dot(a, v0)).collect();
        solve_square(gram, rhs)?
    };
    let mut foot = v0.clone();
    for (c, diff) in coeffs.iter().zip(&diffs) {
        for (f, x) in foot.iter_mut().zip(diff) {
            *f = &*f + &(c * x);
        }
    }
    let mut bary = Vec::with_capacity(subset.len());
    let lead = coeffs.iter().fold(Rat::one(), |acc, c| acc - c);
    bary.push(lead);
    bary.extend(coeffs);
    Some((foot, bary))
}

pub(crate) struct ClosestPoint {
    pub point: Vec<Rat>,
    pub dist_sq: Rat,
}

/// Closest point of the convex hull of `points` to the origin.
///
/// The minimiser lies in the relative interior of a unique face, equals
/// the projection of the origin onto that face's affine span, and sits in
/// a simplex on affinely independent hull points spanning the same face.
/// Scanning every subset of size at most d + 1 and keeping the feasible
/// projections therefore finds it exactly.
pub(crate) fn closest_point(points: &[Vec<Rat>]) -> ClosestPoint {
    let d = points[0].len();
    let mut best = ClosestPoint {
        point: points[0].clone(),
        dist_sq: norm_sq(&points[0]),
    };
    for size in 1..=(d + 1).min(points.len()) {
        for subset in (0..points.len()).combinations(size) {
            let chosen: Vec<&Vec<Rat>> = subset.iter().map(|&i| &points[i]).collect();
            let Some((foot, bary)) = project_origin(&chosen) else {
                continue;
            };
            if bary.iter().any(|l| l.is_negative()) {
                continue;
            }
            let dist_sq = norm_sq(&foot);
            if dist_sq < best.dist_sq {
                best = ClosestPoint { point: foot, dist_sq };
            }
        }
    }
    best
}

/// Greedy maximal linearly independent subset of `rows`, in input order.
fn independent_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut reduced: Vec<Vec<Rat>> = Vec::new();
    let mut kept: Vec<Vec<Rat>> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for e in &reduced {
            let lead = e
                .iter()
                .position(|x| !x.is_zero())
                .expect("reduced rows are nonzero");
            if !r[lead].is_zero() {
                let f = &r[lead] / &e[lead];
                for (x, y) in r.iter_mut().zip(e) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        if r.iter().any(|x| !x.is_zero()) {
            reduced.push(r);
            kept.push(row.clone());
        }
    }
    kept
}

/// Affine dimension of the hull of `points`.
pub(crate) fn affine_dim(points: &[Vec<Rat>]) -> usize {
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    independent_rows(&diffs).len()
}

/// Basis of the linear span of the points themselves.
pub(crate) fn span_basis(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    independent_rows(points)
}

/// Orthogonal projection of the origin onto the affine hull of all points.
pub(crate) fn affine_hull_projection(points: &[Vec<Rat>]) -> Vec<Rat> {
    let v0 = &points[0];
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| sub(p, v0)).collect();
    let basis = independent_rows(&diffs);
    if basis.is_empty() {
        return v0.clone();
    }
    let gram: Vec<Vec<Rat>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rat> = basis.iter().map(|a| -dot(a, v0)).collect();
    let coeffs = solve_square(gram, rhs).expect("independent rows have invertible Gram matrix");
    let mut foot = v0.clone();
    for (c, b) in coeffs.iter().zip(&basis) {
        for (f, x) in foot.iter_mut().zip(b) {
            *f = &*f + &(c * x);
        }
    }
    foot
}

/// Largest t such that p = Σ λ_j·points_j with Σ λ_j = 1 and every
/// λ_j ≥ t, or None when p is outside the hull.  The relative interior
/// of a finite hull is exactly the set of strictly positive convex
/// combinations, so p is relatively interior when the margin is positive.
pub(crate) fn relint_margin(points: &[Vec<Rat>], p: &[Rat]) -> Result<Option<Rat>> {
    let m = points.len();
    let d = p.len();
    // Substituting λ_j = s_j + t gives a standard-form program over
    // (s, t) ≥ 0: maximise t subject to Σ_j s_j (α_j − p) + t·Σ_j (α_j − p)
    // = 0 and Σ_j s_j + m·t = 1.  t is bounded by 1/m, so no unbounded ray.
    let shifted: Vec<Vec<Rat>> = points.iter().map(|q| sub(q, p)).collect();
    let mut a = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row: Vec<Rat> = shifted.iter().map(|q| q[i].clone()).collect();
        let total = shifted.iter().fold(Rat::zero(), |acc, q| acc + &q[i]);
        row.push(total);
        a.push(row);
    }
    let mut last = vec![Rat::one(); m];
    last.push(rat_int(m as i64));
    a.push(last);
    let mut b = vec![Rat::zero(); d];
    b.push(Rat::one());
    let mut c = vec![Rat::zero(); m];
    c.push(-Rat::one());
    match solve_standard_form(&c, &a, &b)? {
        LpOutcome::Optimal { value, .. } => Ok(Some(-value)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(StabilityError::Malformed(
            "interior-margin program cannot be unbounded".into(),
        )),
    }
}

/// Squared distance from the origin to the boundary of the hull inside
/// its affine span.  Callers must place the origin in the relative
/// interior first.  Ok(None) when the hull is a single point, which has
/// no boundary.
pub(crate) fn boundary_distance_sq(points: &[Vec<Rat>]) -> Result<Option<Rat>> {
    let r = affine_dim(points);
    if r == 0 {
        return Ok(None);
    }
    let mut best: Option<Rat> = None;
    for subset in (0..points.len()).combinations(r) {
        let chosen: Vec<&Vec<Rat>> = subset.iter().map(|&i| &points[i]).collect();
        let Some((foot, _)) = project_origin(&chosen) else {
            continue;
        };
        if foot.iter().all(|x| x.is_zero()) {
            // A hyperplane through the origin cannot support a facet when
            // the origin is relatively interior.
            continue;
        }
        let h_sq = norm_sq(&foot);
        // The subset spans a facet hyperplane exactly when every point
        // lies weakly on the origin side of it.
        if points.iter().all(|w| dot(&foot, w) <= h_sq) {
            let better = match &best {
                None => true,
                Some(b) => h_sq < *b,
            };
            if better {
                best = Some(h_sq);
            }
        }
    }
    match best {
        Some(b) => Ok(Some(b)),
        None => Err(StabilityError::Malformed(
            "no supporting facet found for an interior origin".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_geometry::rat;

    fn pts(raw: &[&[i64]]) -> Vec<Vec<Rat>> {
        raw.iter()
            .map(|row| row.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn closest_point_lands_on_faces_of_every_dimension() {
        // Vertex: square [1,2]^2 has closest corner (1,1).
        let square = pts(&[&[1, 1], &[2, 1], &[1, 2], &[2, 2]]);
        let c = closest_point(&square);
        assert_eq!(c.point, pts(&[&[1, 1]])[0]);
        assert_eq!(c.dist_sq, rat_int(2));

        // Edge: segment x + y = 2 projects the origin onto (1, 1).
        let segment = pts(&[&[2, 0], &[0, 2]]);
        let c = closest_point(&segment);
        assert_eq!(c.point, pts(&[&[1, 1]])[0]);
        assert_eq!(c.dist_sq, rat_int(2));

        // Interior: hull containing the origin reports distance zero.
        let diamond = pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(closest_point(&diamond).dist_sq, rat_int(0));
    }

    #[test]
    fn interior_margin_separates_boundary_from_interior() {
        let segment = pts(&[&[-1], &[1]]);
        let origin = [rat_int(0)];
        assert_eq!(relint_margin(&segment, &origin).unwrap(), Some(rat(1, 2)));
        let boundary = pts(&[&[0], &[1]]);
        assert_eq!(relint_margin(&boundary, &origin).unwrap(), Some(rat_int(0)));
        let outside = pts(&[&[1], &[2]]);
        assert_eq!(relint_margin(&outside, &origin).unwrap(), None);
    }

    #[test]
    fn affine_data_matches_hand_computation() {
        let tilted = pts(&[&[1, 1], &[2, 1]]);
        assert_eq!(affine_dim(&tilted), 1);
        assert_eq!(affine_hull_projection(&tilted), pts(&[&[0, 1]])[0]);
        let point = pts(&[&[3, 4]]);
        assert_eq!(affine_dim(&point), 0);
        assert_eq!(affine_hull_projection(&point), pts(&[&[3, 4]])[0]);
    }

    #[test]
    fn facet_distances_respect_the_affine_hull() {
        let diamond = pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(boundary_distance_sq(&diamond).unwrap(), Some(rat(1, 2)));
        // Flat segment inside the plane: boundary within the hull's own
        // line, not within the ambient plane.
        let flat = pts(&[&[-1, 0], &[1, 0]]);
        assert_eq!(boundary_distance_sq(&flat).unwrap(), Some(rat_int(1)));
        let single = pts(&[&[0, 0]]);
        assert_eq!(boundary_distance_sq(&single).unwrap(), None);
    }
}
