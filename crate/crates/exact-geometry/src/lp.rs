//! Exact linear programming: a dense two-phase simplex over the rationals
//! with Bland's rule, for standard-form problems (minimise c·x subject to
//! A x = b and x ≥ 0). Every pivot is exact, so optimality certificates are
//! exact too.

use num::{One, Signed, Zero};

use crate::rational::Rat;
use crate::{GeometryError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

enum SimplexEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side.
    rows: Vec<Vec<Rat>>,
    /// Objective row: cols + 1 entries, last is −(objective value).
    obj: Vec<Rat>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        debug_assert!(!piv.is_zero());
        for x in self.rows[r].iter_mut() {
            *x = &*x / &piv;
        }
        let pivot_row = self.rows[r].clone();
        for (idx, row) in self.rows.iter_mut().enumerate() {
            if idx == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
        if !self.obj[c].is_zero() {
            let factor = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: entering column is the lowest index with a negative
    /// reduced cost; leaving row minimises the ratio, ties broken by the
    /// lowest basis index. `active` limits the candidate columns.
    fn run_simplex(&mut self, active: usize) -> SimplexEnd {
        loop {
            let entering = (0..active).find(|&j| self.obj[j].is_negative());
            let Some(c) = entering else {
                return SimplexEnd::Optimal;
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / &self.rows[r][c];
                let replace = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur
                            || (ratio == *cur
                                && self.basis[r] < self.basis[leave.unwrap()])
                    }
                };
                if replace {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
            let Some(r) = leave else {
                return SimplexEnd::Unbounded;
            };
            self.pivot(r, c);
        }
    }
}

/// Solve min c·x, A x = b, x ≥ 0 exactly. Dimensions must agree.
pub fn solve_standard_form(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(GeometryError::Malformed(
            "linear program dimensions disagree".into(),
        ));
    }

    // Phase 1 tableau: columns = n originals, m artificials, then RHS.
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut t = Vec::with_capacity(cols + 1);
        for x in row {
            t.push(if flip { -x } else { x.clone() });
        }
        for k in 0..m {
            t.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        t.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(t);
    }
    // Phase-1 objective: sum of artificials, reduced against the basis.
    let mut obj = vec![Rat::zero(); cols + 1];
    for j in 0..n {
        let mut s = Rat::zero();
        for row in &rows {
            s += &row[j];
        }
        obj[j] = -s;
    }
    let mut rhs_sum = Rat::zero();
    for row in &rows {
        rhs_sum += &row[cols];
    }
    obj[cols] = -rhs_sum;

    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        cols,
    };
    // Phase 1 minimises a sum of nonnegative variables: never unbounded.
    if matches!(t.run_simplex(n), SimplexEnd::Unbounded) {
        return Err(GeometryError::Malformed(
            "phase-1 simplex reported an unbounded auxiliary problem".into(),
        ));
    }
    // Phase-1 optimum is −obj[cols]; infeasible when positive.
    if t.obj[t.cols].is_negative() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive any artificial still in the basis out, or drop its row when the
    // constraint proved redundant.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2: replace the objective row with c reduced against the basis.
    let mut obj = vec![Rat::zero(); t.cols + 1];
    obj[..n].clone_from_slice(c);
    for (r, &bi) in t.basis.iter().enumerate() {
        if obj[bi].is_zero() {
            continue;
        }
        let factor = obj[bi].clone();
        let row = t.rows[r].clone();
        for (x, p) in obj.iter_mut().zip(&row) {
            *x = &*x - &(&factor * p);
        }
    }
    t.obj = obj;
    if matches!(t.run_simplex(n), SimplexEnd::Unbounded) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point = vec![Rat::zero(); n];
    for (r, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            point[bi] = t.rhs(r).clone();
        }
    }
    let value = -t.obj[t.cols].clone();
    Ok(LpOutcome::Optimal { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn solves_a_small_program() {
        // min −x − y  s.t.  x + y + s1 = 2, x + 2y + s2 = 3, all ≥ 0
        // optimum at (1, 1): value −2? check x+y=2, x+2y=3 → corner (1,1).
        let c = r(&[-1, -1, 0, 0]);
        let a = vec![r(&[1, 1, 1, 0]), r(&[1, 2, 0, 1])];
        let b = r(&[2, 3]);
        match solve_standard_form(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_int(-2));
                assert_eq!(&point[..2], &[rat_int(1), rat_int(1)][..]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn reports_infeasible() {
        // x + y = -1 with x, y ≥ 0
        let c = r(&[1, 1]);
        let a = vec![r(&[1, 1])];
        let b = r(&[-1]);
        assert_eq!(solve_standard_form(&c, &a, &b).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn reports_unbounded() {
        // min −x  s.t.  x − y = 0: x can grow without bound
        let c = r(&[-1, 0]);
        let a = vec![r(&[1, -1])];
        let b = r(&[0]);
        assert_eq!(
            solve_standard_form(&c, &a, &b).unwrap(),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn handles_redundant_constraints() {
        // Same constraint twice.
        let c = r(&[1, 1]);
        let a = vec![r(&[1, 1]), r(&[2, 2])];
        let b = r(&[2, 4]);
        match solve_standard_form(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(2)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_vertices_terminate() {
        // A degenerate LP that cycles under naive pivoting rules.
        let c = vec![rat(-3, 4), rat_int(150), rat(-1, 50), rat_int(6), rat_int(0), rat_int(0), rat_int(0)];
        let a = vec![
            vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9), rat_int(1), rat_int(0), rat_int(0)],
            vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3), rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(1)],
        ];
        let b = vec![rat_int(0), rat_int(0), rat_int(1)];
        match solve_standard_form(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(-1, 20)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let c = r(&[1]);
        let a = vec![r(&[1, 2])];
        let b = r(&[1]);
        assert!(solve_standard_form(&c, &a, &b).is_err());
    }

    #[test]
    fn matches_vertex_enumeration_on_random_instances() {
        // min c·x over {x ≥ 0, x1 + x2 + s = 1}: optimum is the best of the
        // three vertices (0,0), (1,0), (0,1).
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let c1 = rat_int(rng.gen_range(-5..=5));
            let c2 = rat_int(rng.gen_range(-5..=5));
            let c = vec![c1.clone(), c2.clone(), rat_int(0)];
            let a = vec![r(&[1, 1, 1])];
            let b = r(&[1]);
            let best = [rat_int(0), c1, c2].into_iter().min().unwrap();
            match solve_standard_form(&c, &a, &b).unwrap() {
                LpOutcome::Optimal { value, .. } => assert_eq!(value, best),
                other => panic!("expected optimum, got {other:?}"),
            }
        }
    }
}
