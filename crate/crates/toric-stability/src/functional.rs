//! The stability functional L(f) = ∫_∂P f dσ − a ∫_P f dμ, the extremal
//! affine function that makes its relative version vanish on affines, and
//! the weighted (bundle) Futaki invariants over an interval or polygon base.
//!
//! Everything is exact: piecewise-linear integrands are integrated triangle
//! by triangle through an affine map onto the reference simplex, boundary
//! terms use the lattice measure dσ, and the small Gram systems are solved
//! by Cramer's rule over the rationals.

use exact_geometry::bivariate::Poly2;
use exact_geometry::grid::{CellHalf, Grid, PLFunction};
use exact_geometry::integrate::{integrate, Region};
use exact_geometry::poly::Poly;
use exact_geometry::polygon::{Point, RationalPolygon};
use exact_geometry::roots::count_roots_open;
use exact_geometry::{rat_int, GeometryError, Rat};
use num::{One, Signed, Zero};

use crate::{Result, StabilityError};

/// The affine function c0 + c1·x + c2·y as a bivariate polynomial.
pub(crate) fn affine_poly2(c0: &Rat, c1: &Rat, c2: &Rat) -> Poly2 {
    Poly2::new(vec![
        Poly::new(vec![c0.clone(), c1.clone()]),
        Poly::constant(c2.clone()),
    ])
}

/// ∫_T w dμ over the triangle (a, b, c), by pulling w back to the reference
/// simplex along the affine parametrisation.
pub(crate) fn triangle_integral(w: &Poly2, a: &Point, b: &Point, c: &Point) -> Rat {
    let det = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    if det.is_zero() {
        return Rat::zero();
    }
    let xe = affine_poly2(&a.0, &(&b.0 - &a.0), &(&c.0 - &a.0));
    let ye = affine_poly2(&a.1, &(&b.1 - &a.1), &(&c.1 - &a.1));
    w.substitute(&xe, &ye).integrate_ref_simplex() * det.abs()
}

/// Solve a 3×3 rational system by Cramer's rule. None when singular.
fn solve3(m: &[[Rat; 3]; 3], rhs: &[Rat; 3]) -> Option<[Rat; 3]> {
    fn det3(m: &[[Rat; 3]; 3]) -> Rat {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let mut out = [Rat::zero(), Rat::zero(), Rat::zero()];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut mk = m.clone();
        for i in 0..3 {
            mk[i][k] = rhs[i].clone();
        }
        *slot = det3(&mk) / &d;
    }
    Some(out)
}

/// The affine function A with ∫_∂P g dσ = ∫_P g·A dμ for every affine g.
/// Subtracting it from the functional's density kills the affine directions,
/// so L_A measures stability relative to the extremal vector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalAffine {
    coeffs: (Rat, Rat, Rat),
}

impl ExtremalAffine {
    pub fn from_coefficients(c0: Rat, c1: Rat, c2: Rat) -> ExtremalAffine {
        ExtremalAffine { coeffs: (c0, c1, c2) }
    }

    /// (constant, x-coefficient, y-coefficient).
    pub fn coefficients(&self) -> (&Rat, &Rat, &Rat) {
        (&self.coeffs.0, &self.coeffs.1, &self.coeffs.2)
    }

    pub fn poly(&self) -> Poly2 {
        affine_poly2(&self.coeffs.0, &self.coeffs.1, &self.coeffs.2)
    }

    pub fn eval(&self, p: &Point) -> Rat {
        &self.coeffs.0 + &self.coeffs.1 * &p.0 + &self.coeffs.2 * &p.1
    }
}

/// Solve the 3×3 Gram system ⟨A, m⟩_μ = ∫_∂P m dσ over the affine basis
/// m ∈ {1, x, y}. The Gram matrix of independent functions against an
/// interior-nonempty measure is positive definite, hence invertible.
pub fn extremal_affine(polygon: &RationalPolygon) -> Result<ExtremalAffine> {
    let basis = [Poly2::constant(Rat::one()), Poly2::x(), Poly2::y()];
    let mut gram = [
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
    ];
    let mut rhs = [Rat::zero(), Rat::zero(), Rat::zero()];
    for i in 0..3 {
        for j in 0..3 {
            gram[i][j] = polygon.integrate_poly_interior(&(&basis[i] * &basis[j]));
        }
        rhs[i] = polygon.integrate_poly_boundary(&basis[i]);
    }
    let c = solve3(&gram, &rhs)
        .ok_or_else(|| StabilityError::Internal("affine Gram matrix is singular".into()))?;
    let [c0, c1, c2] = c;
    Ok(ExtremalAffine::from_coefficients(c0, c1, c2))
}

/// L(f) = ∫_∂P f dσ − a ∫_P f dμ with a = σ(∂P)/μ(P), or the relative
/// version ∫_∂P f dσ − ∫_P f·A dμ when an affine weight A is supplied.
pub fn donaldson_functional(
    grid: &Grid,
    f: &PLFunction,
    weight: Option<&ExtremalAffine>,
) -> Result<Rat> {
    let one = Poly2::constant(Rat::one());
    let boundary = integrate(grid, f, Region::Boundary, &one).map_err(StabilityError::from)?;
    let interior = match weight {
        Some(a) => integrate(grid, f, Region::Interior, &a.poly())?,
        None => {
            let p = grid.polygon();
            let a = p.boundary_measure() / p.area();
            integrate(grid, f, Region::Interior, &one)? * a
        }
    };
    Ok(boundary - interior)
}

/// ∫_P f·g·w dμ for piecewise-linear f, g on the same grid and a polynomial
/// weight w, exactly: per grid triangle the integrand is a polynomial, and
/// partially covered triangles are clipped against the polygon first.
pub fn pl_product_integral(
    grid: &Grid,
    f: &PLFunction,
    g: &PLFunction,
    weight: &Poly2,
) -> Result<Rat> {
    let polygon = grid.polygon();
    let n = grid.resolution() as usize;
    let mut total = Rat::zero();
    for j in 0..n {
        for i in 0..n {
            for half in [CellHalf::Low, CellHalf::High] {
                let w = &(&f.affine_on(grid, i, j, half) * &g.affine_on(grid, i, j, half))
                    * weight;
                let corners = grid.triangle_points(i, j, half);
                if corners.iter().all(|p| polygon.contains(p)) {
                    total += triangle_integral(&w, &corners[0], &corners[1], &corners[2]);
                } else if let Some(clipped) = polygon.clip_convex_loop(&corners) {
                    for k in 1..clipped.len().saturating_sub(1) {
                        total += triangle_integral(&w, &clipped[0], &clipped[k], &clipped[k + 1]);
                    }
                }
            }
        }
    }
    Ok(total)
}

/// ‖π f‖²: the L²(dμ) norm squared of f minus its orthogonal projection
/// onto the affine functions. Vanishes exactly when f is affine.
pub fn projected_norm_sq(grid: &Grid, f: &PLFunction) -> Result<Rat> {
    let one = Poly2::constant(Rat::one());
    let norm_sq = pl_product_integral(grid, f, f, &one)?;
    let polygon = grid.polygon();
    let basis = [Poly2::constant(Rat::one()), Poly2::x(), Poly2::y()];
    let mut gram = [
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
    ];
    let mut rhs = [Rat::zero(), Rat::zero(), Rat::zero()];
    for i in 0..3 {
        for j in 0..3 {
            gram[i][j] = polygon.integrate_poly_interior(&(&basis[i] * &basis[j]));
        }
        rhs[i] = integrate(grid, f, Region::Interior, &basis[i])?;
    }
    let c = solve3(&gram, &rhs)
        .ok_or_else(|| StabilityError::Internal("affine Gram matrix is singular".into()))?;
    let projected = rhs
        .iter()
        .zip(c.iter())
        .fold(Rat::zero(), |acc, (b, x)| acc + b * x);
    Ok(norm_sq - projected)
}

/// A weighted Futaki invariant together with the squared norm of the test
/// function (mean-subtracted, in the weighted inner product). The ratio
/// futaki/√norm_sq is the quantity whose infimum controls stability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleInvariant {
    pub futaki: Rat,
    pub norm_sq: Rat,
}

/// The Futaki invariant of the fibration data (Q1, Q2) over the polygon:
///
///   F(f) = (1/2)∫_∂P f·Q1 dσ + ∫_P f·Q2 dμ − (a1/a0) ∫_P f·Q1 dμ,
///
/// where a0 = ∫_P Q1 dμ and a1 = (1/2)∫_∂P Q1 dσ + ∫_P Q2 dμ, so that
/// constants are annihilated. Q1 must be positive on P; positivity is only
/// certified exactly for affine Q1 (an affine function attains its minimum
/// at a vertex), higher degree is rejected.
pub fn toric_bundle_futaki(
    grid: &Grid,
    q1: &Poly2,
    q2: &Poly2,
    f: &PLFunction,
) -> Result<BundleInvariant> {
    if let Some(d) = q1.total_degree() {
        if d >= 2 {
            return Err(StabilityError::UnsupportedWeight { degree: d });
        }
    }
    let polygon = grid.polygon();
    for v in polygon.vertices() {
        if !q1.eval(&v.0, &v.1).is_positive() {
            return Err(StabilityError::NonPositiveWeight);
        }
    }
    let two = rat_int(2);
    let a0 = polygon.integrate_poly_interior(q1);
    let a1 = polygon.integrate_poly_boundary(q1) / &two + polygon.integrate_poly_interior(q2);
    let boundary = integrate(grid, f, Region::Boundary, q1)?;
    let mu1 = integrate(grid, f, Region::Interior, q1)?;
    let mu2 = integrate(grid, f, Region::Interior, q2)?;
    let futaki = boundary / &two + mu2 - &a1 / &a0 * &mu1;
    let mean = &mu1 / &a0;
    let norm_sq = pl_product_integral(grid, f, f, q1)? - &mean * &mean * &a0;
    Ok(BundleInvariant { futaki, norm_sq })
}

/// A continuous piecewise-linear function on an interval, stored as strictly
/// increasing breakpoints with one value each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pl1 {
    breaks: Vec<Rat>,
    values: Vec<Rat>,
}

impl Pl1 {
    pub fn new(breaks: Vec<Rat>, values: Vec<Rat>) -> Result<Pl1> {
        if breaks.len() < 2 {
            return Err(GeometryError::Malformed(
                "piecewise-linear function needs at least two breakpoints".into(),
            )
            .into());
        }
        if breaks.len() != values.len() {
            return Err(GeometryError::Malformed(format!(
                "breakpoint count {} does not match value count {}",
                breaks.len(),
                values.len()
            ))
            .into());
        }
        if !breaks.windows(2).all(|w| w[0] < w[1]) {
            return Err(GeometryError::Malformed(
                "breakpoints must be strictly increasing".into(),
            )
            .into());
        }
        Ok(Pl1 { breaks, values })
    }

    pub fn breaks(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.breaks[0], &self.breaks[self.breaks.len() - 1])
    }

    /// The affine interpolant on segment k, as a polynomial in the variable.
    fn segment(&self, k: usize) -> Poly {
        let slope = (&self.values[k + 1] - &self.values[k]) / (&self.breaks[k + 1] - &self.breaks[k]);
        Poly::new(vec![&self.values[k] - &slope * &self.breaks[k], slope])
    }

    /// Evaluate; outside the domain the closest end segment is extended.
    pub fn eval(&self, t: &Rat) -> Rat {
        let mut k = 0;
        while k + 2 < self.breaks.len() && *t >= self.breaks[k + 1] {
            k += 1;
        }
        self.segment(k).eval(t)
    }

    pub fn is_convex(&self) -> bool {
        let mut prev: Option<Rat> = None;
        for k in 0..self.breaks.len() - 1 {
            let slope =
                (&self.values[k + 1] - &self.values[k]) / (&self.breaks[k + 1] - &self.breaks[k]);
            if let Some(p) = &prev {
                if slope < *p {
                    return false;
                }
            }
            prev = Some(slope);
        }
        true
    }

    /// ∫ f·w over the domain, segment by segment.
    fn integral_against(&self, w: &Poly) -> Rat {
        let mut total = Rat::zero();
        for k in 0..self.breaks.len() - 1 {
            let seg = self.segment(k);
            total += (&seg * w).definite_integral(&self.breaks[k], &self.breaks[k + 1]);
        }
        total
    }

    /// ∫ f²·w over the domain.
    fn square_integral_against(&self, w: &Poly) -> Rat {
        let mut total = Rat::zero();
        for k in 0..self.breaks.len() - 1 {
            let seg = self.segment(k);
            total += (&(&seg * &seg) * w).definite_integral(&self.breaks[k], &self.breaks[k + 1]);
        }
        total
    }
}

/// Strict positivity of a polynomial on [a, b], decided by Sturm counting:
/// positive endpoint values and no interior root.
fn check_positive_on(q: &Poly, a: &Rat, b: &Rat) -> Result<()> {
    if !q.eval(a).is_positive() || !q.eval(b).is_positive() {
        return Err(StabilityError::NonPositiveWeight);
    }
    // q is nonzero here (its endpoint values are positive).
    if count_roots_open(q, a, b).map_err(StabilityError::from)? > 0 {
        return Err(StabilityError::NonPositiveWeight);
    }
    Ok(())
}

/// The normalising constants of the interval fibration data: a0 = ∫ Q1 dμ
/// and a1 = (1/2)(Q1(a) + Q1(b)) + ∫ Q2 dμ, where the boundary measure of
/// the interval is a unit atom at each endpoint.
pub fn bundle_coefficients(q1: &Poly, q2: &Poly, a: &Rat, b: &Rat) -> (Rat, Rat) {
    let a0 = q1.definite_integral(a, b);
    let a1 = (q1.eval(a) + q1.eval(b)) / rat_int(2) + q2.definite_integral(a, b);
    (a0, a1)
}

/// Interval Futaki invariant of (Q1, Q2): the one-dimensional analogue of
/// [`toric_bundle_futaki`], with endpoint atoms as the boundary measure.
pub fn interval_bundle_futaki(q1: &Poly, q2: &Poly, f: &Pl1) -> Result<BundleInvariant> {
    let (a, b) = f.domain();
    check_positive_on(q1, a, b)?;
    let (a0, a1) = bundle_coefficients(q1, q2, a, b);
    let two = rat_int(2);
    let boundary = f.eval(a) * q1.eval(a) + f.eval(b) * q1.eval(b);
    let mu1 = f.integral_against(q1);
    let mu2 = f.integral_against(q2);
    let futaki = boundary / &two + mu2 - &a1 / &a0 * &mu1;
    let mean = &mu1 / &a0;
    let norm_sq = f.square_integral_against(q1) - &mean * &mean * &a0;
    Ok(BundleInvariant { futaki, norm_sq })
}

/// Relative interval invariant: subtract ⟨f, χ⟩_{Q1} for the affine χ that
/// reproduces the invariant on affine functions, so that every affine test
/// function gives exactly zero. The norm is likewise taken after projecting
/// out the affine functions in the Q1-weighted inner product.
pub fn interval_bundle_futaki_relative(q1: &Poly, q2: &Poly, f: &Pl1) -> Result<BundleInvariant> {
    let (a, b) = f.domain();
    check_positive_on(q1, a, b)?;
    let (a0, a1) = bundle_coefficients(q1, q2, a, b);
    let two = rat_int(2);

    // Futaki of a polynomial test function, same formula as interval_bundle_futaki.
    let futaki_poly = |g: &Poly| -> Rat {
        let boundary = g.eval(a) * q1.eval(a) + g.eval(b) * q1.eval(b);
        let mu1 = (g * q1).definite_integral(a, b);
        let mu2 = (g * q2).definite_integral(a, b);
        boundary / &two + mu2 - &a1 / &a0 * &mu1
    };

    let basis = [Poly::constant(Rat::one()), Poly::x()];
    let mut gram = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            gram[i][j] = (&(&basis[i] * &basis[j]) * q1).definite_integral(a, b);
        }
    }
    let det = &gram[0][0] * &gram[1][1] - &gram[0][1] * &gram[1][0];
    if det.is_zero() {
        return Err(StabilityError::Internal("affine Gram matrix is singular".into()));
    }
    let solve2 = |r0: &Rat, r1: &Rat| -> (Rat, Rat) {
        (
            (r0 * &gram[1][1] - r1 * &gram[0][1]) / &det,
            (&gram[0][0] * r1 - &gram[1][0] * r0) / &det,
        )
    };

    // χ = c0 + c1·τ with ⟨m, χ⟩_{Q1} = F(m) for m ∈ {1, τ}.
    let (c0, c1) = solve2(&futaki_poly(&basis[0]), &futaki_poly(&basis[1]));
    let chi = Poly::new(vec![c0, c1]);
    let base = interval_bundle_futaki(q1, q2, f)?;
    let futaki = base.futaki - f.integral_against(&(&chi * q1));

    // Project f out of the affine functions in the Q1 inner product.
    let b0 = f.integral_against(q1);
    let b1 = f.integral_against(&(&basis[1] * q1));
    let (p0, p1) = solve2(&b0, &b1);
    let norm_sq = f.square_integral_against(q1) - (&b0 * &p0 + &b1 * &p1);
    Ok(BundleInvariant { futaki, norm_sq })
}
