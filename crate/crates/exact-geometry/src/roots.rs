//! Real root isolation for rational polynomials: Sturm chains on the
//! squarefree part, bisection refinement, and exact recovery of rational
//! roots by a smallest-denominator search.

use num::{One, Signed, Zero};

use crate::poly::Poly;
use crate::rational::{simplest_in_open_interval, Int, Rat};
use crate::{GeometryError, Result};

/// lo == hi pins the root exactly; otherwise the open interval (lo, hi)
/// contains exactly one root and neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(Int::from(2))
    }
}

/// Every real root has absolute value strictly below this bound.
pub fn cauchy_root_bound(p: &Poly) -> Rat {
    let lead = p.leading_coeff();
    assert!(!lead.is_zero(), "zero polynomial has no root bound");
    let mut max = Rat::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = (c / &lead).abs();
        if r > max {
            max = r;
        }
    }
    Rat::one() + max
}

/// Disjoint intervals isolating every distinct real root, in increasing
/// order. Multiplicities are discarded.
pub fn isolate_real_roots(p: &Poly) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(GeometryError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(vec![]);
    }
    let q = p.squarefree_part();
    if q.degree() == Some(0) {
        return Ok(vec![]);
    }
    let chain = q.sturm_chain();
    let bound = cauchy_root_bound(&q);
    let mut out = Vec::new();
    let mut stack = vec![(-&bound, bound.clone())];
    // Work over half-open intervals (a, b]; the Cauchy endpoints are not
    // roots, so nothing is missed at -bound.
    while let Some((a, b)) = stack.pop() {
        let count = Poly::sturm_count(&chain, &a, &b);
        if count == 0 {
            continue;
        }
        if count == 1 {
            if q.eval(&b).is_zero() {
                out.push(RootInterval { lo: b.clone(), hi: b });
            } else {
                out.push(open_interval_with_clean_endpoints(&q, a, b));
            }
            continue;
        }
        let m = (&a + &b) / Rat::from_integer(Int::from(2));
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// (lo, hi) holds one root of q and q(hi) ≠ 0, but lo may itself be a root
/// left over from a neighbouring interval. Move lo inward until it is not.
fn open_interval_with_clean_endpoints(q: &Poly, mut lo: Rat, hi: Rat) -> RootInterval {
    let two = Rat::from_integer(Int::from(2));
    let mut hi = hi;
    while q.eval(&lo).is_zero() {
        let m = (&lo + &hi) / &two;
        let vm = q.eval(&m);
        if vm.is_zero() {
            // The single interior root itself.
            return RootInterval { lo: m.clone(), hi: m };
        }
        // Which side of m is the interior root on? It is the side whose
        // endpoints change sign (q(hi) ≠ 0 and the root is simple).
        if vm.is_positive() == q.eval(&hi).is_positive() {
            hi = m;
        } else {
            lo = m;
        }
    }
    RootInterval { lo, hi }
}

/// Shrink an isolating interval below the requested width by bisection on the
/// squarefree part (exact hits collapse the interval to a point).
pub fn refine_root(p: &Poly, interval: &RootInterval, width: &Rat) -> RootInterval {
    if interval.is_exact() {
        return interval.clone();
    }
    let q = p.squarefree_part();
    let two = Rat::from_integer(Int::from(2));
    let mut lo = interval.lo.clone();
    let mut hi = interval.hi.clone();
    let mut sign_lo = q.eval(&lo).is_positive();
    debug_assert!(
        q.eval(&lo).is_positive() != q.eval(&hi).is_positive(),
        "isolating interval must change sign for a simple root"
    );
    while &(&hi - &lo) >= width {
        let m = (&lo + &hi) / &two;
        let vm = q.eval(&m);
        if vm.is_zero() {
            return RootInterval { lo: m.clone(), hi: m };
        }
        if vm.is_positive() == sign_lo {
            lo = m;
            sign_lo = vm.is_positive();
        } else {
            hi = m;
        }
    }
    RootInterval { lo, hi }
}

/// Number of distinct roots in the open interval (a, b).
pub fn count_roots_open(p: &Poly, a: &Rat, b: &Rat) -> Result<usize> {
    if p.is_zero() {
        return Err(GeometryError::ZeroPolynomial);
    }
    if a >= b {
        return Err(GeometryError::BadInterval);
    }
    let q = p.squarefree_part();
    if q.degree() == Some(0) {
        return Ok(0);
    }
    let chain = q.sturm_chain();
    let mut n = Poly::sturm_count(&chain, a, b);
    if q.eval(b).is_zero() {
        n -= 1;
    }
    Ok(n)
}

/// The constant sign of p on (a, b) when p has no root there; None if a root
/// lies inside. Endpoint roots are allowed.
pub fn sign_on_open_interval(p: &Poly, a: &Rat, b: &Rat) -> Result<Option<i8>> {
    if count_roots_open(p, a, b)? > 0 {
        return Ok(None);
    }
    let m = (a + b) / Rat::from_integer(Int::from(2));
    let v = p.eval(&m);
    Ok(Some(if v.is_zero() {
        // Only possible for the zero polynomial, excluded above.
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }))
}

/// Largest denominator considered when hunting for exact rational roots.
/// Beyond this the search concludes the isolated root is irrational.
pub fn rational_root_denominator_bound() -> Int {
    Int::from(10u64).pow(12)
}

/// All rational roots, exactly, in increasing order. Roots of larger
/// denominator than the search bound are treated as irrational.
pub fn rational_roots(p: &Poly) -> Result<Vec<Rat>> {
    let intervals = isolate_real_roots(p)?;
    let q = p.squarefree_part();
    let bound = rational_root_denominator_bound();
    let mut out = Vec::new();
    for iv in intervals {
        if iv.is_exact() {
            out.push(iv.lo);
            continue;
        }
        let mut cur = iv;
        loop {
            if cur.is_exact() {
                // Bisection landed on the root itself.
                out.push(cur.lo);
                break;
            }
            let candidate = simplest_in_open_interval(&cur.lo, &cur.hi);
            if q.eval(&candidate).is_zero() {
                out.push(candidate);
                break;
            }
            if candidate.denom() > &bound {
                break;
            }
            // The simplest rational missed: the true root needs a larger
            // denominator than anything admissible at this width. Shrink
            // until the candidate changes.
            let target = cur.width() / Rat::from_integer(Int::from(4));
            cur = refine_root(&q, &cur, &target);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn isolates_simple_roots() {
        // (x − 1)(x − 2)(x + 3)
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[3, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 3);
        let expected = [rat_int(-3), rat_int(1), rat_int(2)];
        for (iv, want) in roots.iter().zip(expected) {
            if iv.is_exact() {
                assert_eq!(iv.lo, want);
            } else {
                assert!(iv.lo < want && want < iv.hi);
            }
        }
    }

    #[test]
    fn repeated_roots_reported_once() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[-5, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());
        assert!(isolate_real_roots(&p(&[7])).unwrap().is_empty());
        assert!(isolate_real_roots(&Poly::zero()).is_err());
    }

    #[test]
    fn refinement_narrows_sqrt_two() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        let pos = roots.into_iter().find(|iv| iv.hi.is_positive()).unwrap();
        let tight = refine_root(&f, &pos, &rat(1, 1_000_000));
        assert!(tight.width() < rat(1, 1_000_000));
        // 1.414213 < √2 < 1.414214
        assert!(tight.lo < rat(1_414_214, 1_000_000));
        assert!(tight.hi > rat(1_414_213, 1_000_000));
    }

    #[test]
    fn open_interval_counting_excludes_endpoints() {
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1]);
        assert_eq!(count_roots_open(&f, &rat_int(1), &rat_int(3)).unwrap(), 1);
        assert_eq!(count_roots_open(&f, &rat_int(0), &rat_int(4)).unwrap(), 3);
        assert_eq!(count_roots_open(&f, &rat(3, 2), &rat_int(2)).unwrap(), 0);
        assert!(count_roots_open(&f, &rat_int(2), &rat_int(2)).is_err());
    }

    #[test]
    fn sign_determination() {
        let f = p(&[-2, 0, 1]); // x² − 2
        assert_eq!(sign_on_open_interval(&f, &rat_int(2), &rat_int(3)).unwrap(), Some(1));
        assert_eq!(sign_on_open_interval(&f, &rat_int(-1), &rat_int(1)).unwrap(), Some(-1));
        assert_eq!(sign_on_open_interval(&f, &rat_int(0), &rat_int(2)).unwrap(), None);
    }

    #[test]
    fn rational_roots_found_exactly() {
        // roots 1/2, -7/3, and √2 (irrational, skipped)
        let f = &(&p(&[-1, 2]) * &p(&[7, 3])) * &p(&[-2, 0, 1]);
        let roots = rational_roots(&f).unwrap();
        assert_eq!(roots, vec![rat(-7, 3), rat(1, 2)]);
    }

    #[test]
    fn rational_roots_with_larger_denominators() {
        // root at 355/113 and at -1
        let f = &p(&[-355, 113]) * &p(&[1, 1]);
        let roots = rational_roots(&f).unwrap();
        assert_eq!(roots, vec![rat_int(-1), rat(355, 113)]);
    }

    #[test]
    fn cauchy_bound_dominates() {
        let f = p(&[-6, 11, -6, 1]);
        let b = cauchy_root_bound(&f);
        assert!(b > rat_int(3));
    }
}
