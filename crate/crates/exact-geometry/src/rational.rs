//! Arbitrary-precision rational scalars and a few numeric helpers.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::{GeometryError, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// n/d as a rational; panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse "p", "p/q" or a plain decimal like "-1.25" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || GeometryError::Malformed(format!("cannot parse rational from {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let n: Int = p.trim().parse().map_err(|_| bad())?;
        let d: Int = q.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(GeometryError::Malformed(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(n, d))
    } else if let Some((w, f)) = s.split_once('.') {
        let neg = w.starts_with('-');
        let w = if w.is_empty() || w == "-" { "0" } else { w };
        let whole: Int = w.parse().map_err(|_| bad())?;
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac: Int = f.parse().map_err(|_| bad())?;
        let scale = Int::from(10u32).pow(f.len() as u32);
        let mag = whole.abs() * &scale + frac;
        let sign = if neg { -Rat::one() } else { Rat::one() };
        Ok(sign * Rat::new(mag, scale))
    } else {
        let n: Int = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(n))
    }
}

/// "p/q" (or "p" when integral) — the canonical exact string form.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &Int) -> Int {
    assert!(n.sign() != Sign::Minus, "isqrt of negative integer");
    num::integer::Roots::sqrt(n)
}

/// Rational approximation of √x with absolute error below 10^-digits.
/// x must be nonnegative.
pub fn sqrt_approx(x: &Rat, digits: u32) -> Rat {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return Rat::zero();
    }
    // √(p/q) = √(p·q)/q; scale by 10^digits before the integer sqrt.
    let scale = Int::from(10u32).pow(digits);
    let scaled = x.numer() * x.denom() * &scale * &scale;
    Rat::new(isqrt(&scaled), x.denom() * scale)
}

/// The rational with smallest denominator strictly inside (lo, hi),
/// by the Stern–Brocot / continued-fraction walk.
pub fn simplest_in_open_interval(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "empty interval");
    fn go(lo: &Rat, hi: &Rat) -> Rat {
        if lo.is_negative() && hi.is_positive() {
            return Rat::zero();
        }
        if !hi.is_positive() {
            return -go(&-hi, &-lo);
        }
        if !lo.is_positive() {
            // (0, hi): the smallest k with 1/k < hi
            let inv = Rat::one() / hi;
            let k = if inv.is_integer() { inv.numer() + Int::one() } else { inv.ceil().numer().clone() };
            return Rat::new(Int::one(), k);
        }
        let fl = lo.floor();
        let next = &fl + Rat::one();
        if &next < hi {
            return next;
        }
        let lo_f = lo - &fl;
        let hi_f = hi - &fl;
        if lo_f.is_zero() {
            let inv = Rat::one() / hi_f;
            let k = if inv.is_integer() { inv.numer() + Int::one() } else { inv.ceil().numer().clone() };
            return fl + Rat::new(Int::one(), k);
        }
        // invert: x ∈ (lo, hi) with fractional parts ⇔ 1/(x−fl) ∈ (1/hi_f, 1/lo_f)
        fl + Rat::one() / go(&(Rat::one() / hi_f), &(Rat::one() / lo_f))
    }
    go(lo, hi)
}
