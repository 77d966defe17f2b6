//! Bivariate polynomials over the rationals, stored as y-power columns of
//! univariate polynomials in x.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::poly::Poly;
use crate::rational::{Int, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly2 {
    /// y_coeffs[j] is the coefficient of y^j, a polynomial in x.
    /// Never ends in a zero polynomial (canonical form).
    y_coeffs: Vec<Poly>,
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2{:?}", self.y_coeffs)
    }
}

impl Poly2 {
    pub fn new(mut y_coeffs: Vec<Poly>) -> Self {
        while y_coeffs.last().is_some_and(|p| p.is_zero()) {
            y_coeffs.pop();
        }
        Poly2 { y_coeffs }
    }

    pub fn zero() -> Self {
        Poly2 { y_coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Poly2::new(vec![Poly::constant(c)])
    }

    pub fn x() -> Self {
        Poly2::new(vec![Poly::x()])
    }

    pub fn y() -> Self {
        Poly2::new(vec![Poly::zero(), Poly::constant(Rat::one())])
    }

    /// x^a · y^b.
    pub fn monomial(a: usize, b: usize) -> Self {
        let mut cols = vec![Poly::zero(); b + 1];
        cols[b] = Poly::monomial(Rat::one(), a);
        Poly2::new(cols)
    }

    pub fn from_poly_in_x(p: Poly) -> Self {
        Poly2::new(vec![p])
    }

    pub fn from_poly_in_y(p: Poly) -> Self {
        Poly2::new(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.y_coeffs.is_empty()
    }

    /// Coefficients by y-power; each entry is a polynomial in x.
    pub fn y_coeffs(&self) -> &[Poly] {
        &self.y_coeffs
    }

    pub fn coeff(&self, a: usize, b: usize) -> Rat {
        self.y_coeffs.get(b).map_or_else(Rat::zero, |p| p.coeff(a))
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.y_coeffs.len().checked_sub(1)
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.y_coeffs.iter().filter_map(|p| p.degree()).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.y_coeffs
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.degree().map(|d| d + j))
            .max()
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for p in self.y_coeffs.iter().rev() {
            acc = acc * y + p.eval(x);
        }
        acc
    }

    /// Substitute univariate polynomials for x and y (both in the same
    /// variable), yielding a univariate polynomial.
    pub fn eval_polys(&self, x: &Poly, y: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for col in self.y_coeffs.iter().rev() {
            // col(x) by Horner over the x-coefficients
            let mut col_at = Poly::zero();
            for c in col.coeffs().iter().rev() {
                col_at = &(&col_at * x) + &Poly::constant(c.clone());
            }
            acc = &(&acc * y) + &col_at;
        }
        acc
    }

    /// Substitute bivariate expressions for x and y.
    pub fn substitute(&self, x_expr: &Poly2, y_expr: &Poly2) -> Poly2 {
        let mut acc = Poly2::zero();
        for col in self.y_coeffs.iter().rev() {
            let mut col_at = Poly2::zero();
            for c in col.coeffs().iter().rev() {
                col_at = &(&col_at * x_expr) + &Poly2::constant(c.clone());
            }
            acc = &(&acc * y_expr) + &col_at;
        }
        acc
    }

    pub fn partial_x(&self) -> Poly2 {
        Poly2::new(self.y_coeffs.iter().map(|p| p.derivative()).collect())
    }

    pub fn partial_y(&self) -> Poly2 {
        if self.y_coeffs.len() <= 1 {
            return Poly2::zero();
        }
        Poly2::new(
            self.y_coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, p)| p.scale(&Rat::from_integer(j.into())))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Poly2 {
        Poly2::new(self.y_coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly2 {
        let mut base = self.clone();
        let mut acc = Poly2::constant(Rat::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// ∫ over the reference simplex {x ≥ 0, y ≥ 0, x + y ≤ 1}, using
    /// ∫ x^a y^b = a! b! / (a + b + 2)!.
    pub fn integrate_ref_simplex(&self) -> Rat {
        let mut total = Rat::zero();
        for (b, col) in self.y_coeffs.iter().enumerate() {
            for (a, c) in col.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let num = factorial(a) * factorial(b);
                let den = factorial(a + b + 2);
                total += c * Rat::new(num, den);
            }
        }
        total
    }
}

fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let n = self.y_coeffs.len().max(rhs.y_coeffs.len());
        let zero = Poly::zero();
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.y_coeffs.get(i).unwrap_or(&zero);
            let b = rhs.y_coeffs.get(i).unwrap_or(&zero);
            v.push(a + b);
        }
        Poly2::new(v)
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let n = self.y_coeffs.len().max(rhs.y_coeffs.len());
        let zero = Poly::zero();
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.y_coeffs.get(i).unwrap_or(&zero);
            let b = rhs.y_coeffs.get(i).unwrap_or(&zero);
            v.push(a - b);
        }
        Poly2::new(v)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2::new(self.y_coeffs.iter().map(|p| -p).collect())
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        if self.is_zero() || rhs.is_zero() {
            return Poly2::zero();
        }
        let mut v = vec![Poly::zero(); self.y_coeffs.len() + rhs.y_coeffs.len() - 1];
        for (i, a) in self.y_coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.y_coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Poly2::new(v)
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion with
/// memoisation over row subsets. Intended for small matrices (n ≤ 16).
pub fn poly_matrix_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n <= 16, "determinant expansion limited to 16x16");
    for row in m {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    if n == 0 {
        return Poly::constant(Rat::one());
    }
    let mut memo: std::collections::HashMap<u32, Poly> = std::collections::HashMap::new();
    fn det_of(rows: u32, col: usize, m: &[Vec<Poly>], memo: &mut std::collections::HashMap<u32, Poly>) -> Poly {
        if rows == 0 {
            return Poly::constant(Rat::one());
        }
        if let Some(p) = memo.get(&rows) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut sign = true;
        let mut bits = rows;
        while bits != 0 {
            let r = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let entry = &m[r][col];
            if !entry.is_zero() {
                let sub = det_of(rows & !(1 << r), col + 1, m, memo);
                let term = entry * &sub;
                acc = if sign { &acc + &term } else { &acc - &term };
            }
            sign = !sign;
        }
        memo.insert(rows, acc.clone());
        acc
    }
    det_of((1u32 << n) - 1, 0, m, &mut memo)
}

/// Resultant of p and q with respect to y: a univariate polynomial in x that
/// vanishes exactly where the two share a common y-root (or both leading
/// y-coefficients vanish).
pub fn resultant_in_y(p: &Poly2, q: &Poly2) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero();
    }
    let pc = p.y_coeffs();
    let qc = q.y_coeffs();
    let dm = pc.len() - 1;
    let dn = qc.len() - 1;
    if dm == 0 && dn == 0 {
        return Poly::constant(Rat::one());
    }
    if dm == 0 {
        return pc[0].pow(dn as u32);
    }
    if dn == 0 {
        return qc[0].pow(dm as u32);
    }
    let size = dm + dn;
    let mut mat = vec![vec![Poly::zero(); size]; size];
    for r in 0..dn {
        for (k, c) in pc.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..dm {
        for (k, c) in qc.iter().rev().enumerate() {
            mat[dn + r][r + k] = c.clone();
        }
    }
    poly_matrix_det(&mat)
}
