//! Zero-crease search and the polystable decomposition of a weighted polygon.
//!
//! Throughout, `L(f) = ∫_{∂P} f dσ − a ∫_P f dμ` with `a = σ(∂P)/μ(P)`. On
//! the normalized convex cone the minimum of `L` is approached on simple
//! piecewise linear functions `max(ℓ, 0)` whose crease line cuts a chord
//! across the polygon, so the zero set of `L` on semistable data is found by
//! a finite search over chords. For each pair of boundary edges the value of
//! the simple function whose crease joins edge `i` at parameter `s` to edge
//! `j` at parameter `t` is a polynomial `g(s, t)`, and the search reduces to
//! exact real-algebraic zero finding on the closed parameter square:
//!
//! - antiparallel edge pairs carry translation families of chords along
//!   lines `s + κt = γ`, which are detected as line factors of `g` and
//!   deflated before the isolated analysis;
//! - isolated interior zeros of a nonnegative polynomial are double points,
//!   so they sit over roots of the discriminant `Res_t(g, ∂g/∂t)`; each
//!   critical abscissa is sliced and solved exactly;
//! - the square's boundary lines and corners are scanned separately, since
//!   zeros there are either degenerate chords along `∂P` or genuine creases
//!   ending in a vertex.
//!
//! Every reported crease is re-verified by evaluating the functional on the
//! clipped half piece with exact rational arithmetic. Negative values found
//! anywhere during the scan are returned as `NotSemistable` with the exact
//! witness value. The search certifies zeros only at rational parameters;
//! configurations whose zero chords sit at irrational parameters are refused
//! with `Internal` rather than silently dropped.

use std::cmp::{max, min};
use std::collections::BTreeSet;

use exact_geometry::bivariate::{resultant_in_y, Poly2};
use exact_geometry::poly::Poly;
use exact_geometry::polygon::{Point, RationalPolygon};
use exact_geometry::roots::{
    count_roots_open, isolate_real_roots, rational_roots, refine_root, RootInterval,
};
use exact_geometry::{rat, rat_int, GeometryError, Rat};
use num::{One, Signed, ToPrimitive, Zero};

use crate::cone::minimize_convex_cone;
use crate::functional::{affine_poly2, extremal_affine, ExtremalAffine};
use crate::{Result, StabilityError};

fn to_f64(value: &Rat) -> f64 {
    value.to_f64().expect("rational fits in f64")
}

/// A simple piecewise linear function `max(ℓ, 0)`: the affine part `ℓ`
/// vanishes on the line through the two stored points and is positive to the
/// left of the oriented segment start → end.
#[derive(Clone, Debug)]
pub struct SimplePL {
    start: Point,
    end: Point,
    gradient: (Rat, Rat),
}

impl SimplePL {
    pub fn new(start: Point, end: Point) -> Result<SimplePL> {
        if start == end {
            return Err(GeometryError::Malformed("crease endpoints coincide".to_string()).into());
        }
        let gradient = (&start.1 - &end.1, &end.0 - &start.0);
        Ok(SimplePL {
            start,
            end,
            gradient,
        })
    }

    pub fn endpoints(&self) -> (&Point, &Point) {
        (&self.start, &self.end)
    }

    /// Gradient of the affine part on the positive side.
    pub fn gradient(&self) -> (&Rat, &Rat) {
        (&self.gradient.0, &self.gradient.1)
    }

    pub fn gradient_norm_sq(&self) -> Rat {
        &self.gradient.0 * &self.gradient.0 + &self.gradient.1 * &self.gradient.1
    }

    /// Unit gradient in floating point, for reporting.
    pub fn unit_gradient(&self) -> (f64, f64) {
        let norm = to_f64(&self.gradient_norm_sq()).sqrt();
        (
            to_f64(&self.gradient.0) / norm,
            to_f64(&self.gradient.1) / norm,
        )
    }

    /// The affine part as a bivariate polynomial, without the clamp.
    pub fn affine_part(&self) -> Poly2 {
        let c0 = -(&self.gradient.0 * &self.start.0) - &self.gradient.1 * &self.start.1;
        affine_poly2(&c0, &self.gradient.0, &self.gradient.1)
    }

    pub fn eval(&self, p: &Point) -> Rat {
        let v = &self.gradient.0 * (&p.0 - &self.start.0)
            + &self.gradient.1 * (&p.1 - &self.start.1);
        if v.is_negative() {
            Rat::zero()
        } else {
            v
        }
    }
}

/// Classification of a piece produced by [`semistable_decomposition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// The pair functional is strictly stable on the piece.
    Polystable,
    /// A parallelogram swept by a translation family of zero creases; its
    /// two family edges carry no boundary measure.
    BoundaryParallelogram,
}

/// One piece of the decomposition, with inherited boundary measure.
#[derive(Clone, Debug)]
pub struct Piece {
    pub polygon: RationalPolygon,
    pub kind: PieceKind,
    /// Certified minimum of the pair functional over the discrete cone, when
    /// the piece was re-tested.
    pub pair_minimum: Option<Rat>,
}

/// A one-parameter translation family of zero creases between two
/// antiparallel edges.
#[derive(Clone, Debug)]
pub struct CreaseFamily {
    /// Indices of the boundary edges carrying the chord endpoints.
    pub edges: (usize, usize),
    /// The closed region swept by the family, listed as a convex loop; the
    /// first and last pairs of corners are the two extreme chords.
    pub region: [Point; 4],
    /// The middle chord of the family, re-verified to annihilate `L`.
    pub representative: SimplePL,
}

/// All zero creases of the functional, together with the discrete lower
/// bound that preconditions the search.
#[derive(Clone, Debug)]
pub struct CreaseReport {
    pub isolated: Vec<SimplePL>,
    pub families: Vec<CreaseFamily>,
    /// Certified minimum of `L` over the normalized discrete cone.
    pub lp_minimum: Rat,
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub pieces: Vec<Piece>,
    pub creases: CreaseReport,
}

// ---------------------------------------------------------------------------
// Exact loop geometry
// ---------------------------------------------------------------------------

fn loop_area(points: &[Point]) -> Rat {
    let n = points.len();
    let mut twice = Rat::zero();
    for k in 0..n {
        let a = &points[k];
        let b = &points[(k + 1) % n];
        twice += &a.0 * &b.1 - &b.0 * &a.1;
    }
    twice / rat_int(2)
}

/// Sutherland-Hodgman clip of a convex loop against `c0 + cx·x + cy·y ≥ 0`,
/// with duplicate corners removed.
fn clip_halfplane(points: &[Point], c0: &Rat, cx: &Rat, cy: &Rat) -> Vec<Point> {
    let value = |p: &Point| c0 + &(cx * &p.0) + &(cy * &p.1);
    let n = points.len();
    let mut out: Vec<Point> = Vec::new();
    for k in 0..n {
        let a = &points[k];
        let b = &points[(k + 1) % n];
        let va = value(a);
        let vb = value(b);
        if !va.is_negative() {
            out.push(a.clone());
        }
        if (va.is_negative() && vb.is_positive()) || (va.is_positive() && vb.is_negative()) {
            let t = &va / (&va - &vb);
            out.push((
                &a.0 + &(&t * &(&b.0 - &a.0)),
                &a.1 + &(&t * &(&b.1 - &a.1)),
            ));
        }
    }
    let mut dedup: Vec<Point> = Vec::new();
    for p in out {
        if dedup.last() != Some(&p) {
            dedup.push(p);
        }
    }
    if dedup.len() > 1 && dedup.first() == dedup.last() {
        dedup.pop();
    }
    dedup
}

fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    let ab = (&b.0 - &a.0, &b.1 - &a.1);
    let ap = (&p.0 - &a.0, &p.1 - &a.1);
    let cross = &ab.0 * &ap.1 - &ab.1 * &ap.0;
    if !cross.is_zero() {
        return false;
    }
    let dot = &ab.0 * &ap.0 + &ab.1 * &ap.1;
    let len_sq = &ab.0 * &ab.0 + &ab.1 * &ab.1;
    !dot.is_negative() && dot <= len_sq
}

fn midpoint(a: &Point, b: &Point) -> Point {
    let two = rat_int(2);
    ((&a.0 + &b.0) / &two, (&a.1 + &b.1) / &two)
}

/// σ scales for a sub-polygon: each edge inherits the scale of the parent
/// edge its midpoint lies on; cut edges carry no boundary measure.
fn inherited_scales(piece: &RationalPolygon, parent: &RationalPolygon) -> Vec<Rat> {
    let pv = piece.vertices();
    let n = pv.len();
    let outer = parent.vertices();
    let m = outer.len();
    (0..n)
        .map(|k| {
            let mid = midpoint(&pv[k], &pv[(k + 1) % n]);
            for e in 0..m {
                if point_on_segment(&mid, &outer[e], &outer[(e + 1) % m]) {
                    return parent.edges()[e].sigma_scale.clone();
                }
            }
            Rat::zero()
        })
        .collect()
}

fn subpolygon(parent: &RationalPolygon, loop_points: Vec<Point>) -> Result<RationalPolygon> {
    let piece = RationalPolygon::new_merging_collinear(loop_points)?;
    let scales = inherited_scales(&piece, parent);
    Ok(piece.with_sigma_scales(scales)?)
}

// ---------------------------------------------------------------------------
// The functional on a single simple function
// ---------------------------------------------------------------------------

/// `L(max(ℓ, 0))` evaluated exactly: the polygon is clipped to the positive
/// side of the crease and `ℓ` is integrated over the piece. With `weight`
/// the interior term uses `∫ ℓ·A dμ` instead of `a ∫ ℓ dμ`, which is the
/// relative (pair) version of the functional.
pub fn crease_functional(
    polygon: &RationalPolygon,
    crease: &SimplePL,
    weight: Option<&ExtremalAffine>,
) -> Result<Rat> {
    let ell = crease.affine_part();
    let c0 = ell.coeff(0, 0);
    let cx = ell.coeff(1, 0);
    let cy = ell.coeff(0, 1);
    let clipped = clip_halfplane(polygon.vertices(), &c0, &cx, &cy);
    if clipped.len() < 3 || loop_area(&clipped).is_zero() {
        return Ok(Rat::zero());
    }
    let piece = subpolygon(polygon, clipped)?;
    let boundary = piece.integrate_poly_boundary(&ell);
    let interior = match weight {
        Some(affine) => piece.integrate_poly_interior(&(&ell * &affine.poly())),
        None => {
            let a = polygon.boundary_measure() / polygon.area();
            piece.integrate_poly_interior(&ell) * a
        }
    };
    Ok(boundary - interior)
}

// ---------------------------------------------------------------------------
// Chord parametrization
// ---------------------------------------------------------------------------

struct Frame {
    vi: Point,
    ei: (Rat, Rat),
    vj: Point,
    ej: (Rat, Rat),
}

impl Frame {
    fn new(polygon: &RationalPolygon, i: usize, j: usize) -> Frame {
        let edges = polygon.edges();
        let span = |k: usize| {
            let e = &edges[k];
            (
                e.start.clone(),
                (&e.end.0 - &e.start.0, &e.end.1 - &e.start.1),
            )
        };
        let (vi, ei) = span(i);
        let (vj, ej) = span(j);
        Frame { vi, ei, vj, ej }
    }

    fn p_at(&self, s: &Rat) -> Point {
        (
            &self.vi.0 + &(s * &self.ei.0),
            &self.vi.1 + &(s * &self.ei.1),
        )
    }

    fn q_at(&self, t: &Rat) -> Point {
        (
            &self.vj.0 + &(t * &self.ej.0),
            &self.vj.1 + &(t * &self.ej.1),
        )
    }
}

/// Value of `L` on the simple function whose crease joins `p(s)` on edge `i`
/// to `q(t)` on edge `j`, as a polynomial with `s ↦ x` and `t ↦ y`. The
/// positive side is the vertex chain `V_{j+1}, …, V_i`, to the left of
/// `p → q`, so the boundary term is a trapezoid sum over that chain and the
/// interior term is a fan of triangles based at `p`; `ℓ(p) = ℓ(q) = 0` keeps
/// both sums short.
fn chord_value_poly(polygon: &RationalPolygon, a_const: &Rat, i: usize, j: usize) -> Poly2 {
    let verts = polygon.vertices();
    let edges = polygon.edges();
    let n = verts.len();
    let frame = Frame::new(polygon, i, j);
    let zero = Rat::zero();
    let one = Rat::one();

    let px = affine_poly2(&frame.vi.0, &frame.ei.0, &zero);
    let py = affine_poly2(&frame.vi.1, &frame.ei.1, &zero);
    let qx = affine_poly2(&frame.vj.0, &zero, &frame.ej.0);
    let qy = affine_poly2(&frame.vj.1, &zero, &frame.ej.1);
    let dx = &qx - &px;
    let dy = &qy - &py;
    let ell = |ax: &Poly2, ay: &Poly2| -> Poly2 { &(&dx * &(ay - &py)) - &(&dy * &(ax - &px)) };
    let lift = |v: &Point| {
        (
            Poly2::constant(v.0.clone()),
            Poly2::constant(v.1.clone()),
        )
    };

    let mut chain: Vec<usize> = Vec::new();
    let mut k = (j + 1) % n;
    loop {
        chain.push(k);
        if k == i {
            break;
        }
        k = (k + 1) % n;
    }

    let two = rat_int(2);
    let mut sigma = Poly2::zero();
    {
        // Partial piece of edge j, from q(t) to V_{j+1}.
        let (wx, wy) = lift(&verts[chain[0]]);
        let measure = &edges[j].sigma_scale * &edges[j].lattice_length / &two;
        let remaining = affine_poly2(&one, &zero, &(-one.clone()));
        sigma = &sigma + &(&remaining * &ell(&wx, &wy)).scale(&measure);
    }
    for w in chain.windows(2) {
        let (ax, ay) = lift(&verts[w[0]]);
        let (bx, by) = lift(&verts[w[1]]);
        let measure = &edges[w[0]].sigma_scale * &edges[w[0]].lattice_length / &two;
        sigma = &sigma + &(&ell(&ax, &ay) + &ell(&bx, &by)).scale(&measure);
    }
    {
        // Partial piece of edge i, from V_i to p(s).
        let (wx, wy) = lift(&verts[i]);
        let measure = &edges[i].sigma_scale * &edges[i].lattice_length / &two;
        sigma = &sigma + &(&Poly2::x() * &ell(&wx, &wy)).scale(&measure);
    }

    let mut fan: Vec<(Poly2, Poly2)> = vec![(qx.clone(), qy.clone())];
    for &k in &chain {
        fan.push(lift(&verts[k]));
    }
    let mut mu = Poly2::zero();
    for w in fan.windows(2) {
        let (ax, ay) = &w[0];
        let (bx, by) = &w[1];
        let cross = &(&(ax - &px) * &(by - &py)) - &(&(ay - &py) * &(bx - &px));
        let heights = &ell(ax, ay) + &ell(bx, by);
        mu = &mu + &(&cross * &heights);
    }
    let mu = mu.scale(&(Rat::one() / rat_int(6)));

    &sigma - &mu.scale(a_const)
}

// ---------------------------------------------------------------------------
// Exact root bookkeeping on the parameter square
// ---------------------------------------------------------------------------

/// Divide out one factor `(x − γ)` common to every y-coefficient, if exact.
fn divide_line_factor(p: &Poly2, gamma: &Rat) -> Option<Poly2> {
    let divisor = Poly::new(vec![-gamma.clone(), Rat::one()]);
    let mut out = Vec::new();
    for c in p.y_coeffs() {
        if c.is_zero() {
            out.push(Poly::zero());
            continue;
        }
        let (q, r) = c.div_rem(&divisor);
        if !r.is_zero() {
            return None;
        }
        out.push(q);
    }
    Some(Poly2::new(out))
}

/// Gcd over Q[x] of the nonzero y-coefficients.
fn content_in_x(p: &Poly2) -> Poly {
    let mut g = Poly::zero();
    for c in p.y_coeffs() {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.clone() } else { g.gcd(c) };
    }
    g
}

fn divide_content(p: &Poly2, content: &Poly) -> Poly2 {
    Poly2::new(
        p.y_coeffs()
            .iter()
            .map(|c| {
                if c.is_zero() {
                    return Poly::zero();
                }
                let (q, r) = c.div_rem(content);
                debug_assert!(r.is_zero(), "content must divide every coefficient");
                q
            })
            .collect(),
    )
}

fn slice_at_s(p: &Poly2, s0: &Rat) -> Poly {
    p.eval_polys(&Poly::constant(s0.clone()), &Poly::x())
}

fn slice_at_t(p: &Poly2, t0: &Rat) -> Poly {
    p.eval_polys(&Poly::x(), &Poly::constant(t0.clone()))
}

/// Real roots of `u` met by the closed interval [0, 1]: the rational ones
/// exactly, plus refined isolating intervals for the irrational ones.
fn unit_interval_roots(u: &Poly) -> Result<(Vec<Rat>, Vec<RootInterval>)> {
    let zero = Rat::zero();
    let one = Rat::one();
    let all_rational = rational_roots(u)?;
    let mut in_range: Vec<Rat> = all_rational
        .iter()
        .filter(|r| **r >= zero && **r <= one)
        .cloned()
        .collect();
    let mut irrational = Vec::new();
    for interval in isolate_real_roots(u)? {
        if interval.is_exact() {
            continue;
        }
        if all_rational
            .iter()
            .any(|r| *r > interval.lo && *r < interval.hi)
        {
            continue;
        }
        if interval.hi <= zero || interval.lo >= one {
            continue;
        }
        let refined = refine_root(u, &interval, &rat(1, 1 << 20));
        if refined.is_exact() {
            if refined.lo >= zero && refined.lo <= one && !in_range.contains(&refined.lo) {
                in_range.push(refined.lo);
            }
            continue;
        }
        if refined.hi <= zero || refined.lo >= one {
            continue;
        }
        irrational.push(refined);
    }
    in_range.sort();
    Ok((in_range, irrational))
}

/// Search for a strictly negative exact value of `g` near a parameter point,
/// scanning dyadic offsets in eight directions inside the closed square.
fn find_negative_probe(g: &Poly2, s0: &Rat, t0: &Rat) -> Option<Rat> {
    let zero = Rat::zero();
    let one = Rat::one();
    let dirs: [(i64, i64); 8] = [
        (1, 0),
        (-1, 0),
        (0, 1),
        (0, -1),
        (1, 1),
        (-1, -1),
        (1, -1),
        (-1, 1),
    ];
    for denom in [64i64, 256, 1024, 8192] {
        let delta = rat(1, denom);
        for (ds, dt) in dirs {
            let s = s0 + &(&delta * &rat_int(ds));
            let t = t0 + &(&delta * &rat_int(dt));
            if s < zero || s > one || t < zero || t > one {
                continue;
            }
            let v = g.eval(&s, &t);
            if v.is_negative() {
                return Some(v);
            }
        }
    }
    None
}

fn endpoint_key(a: &Point, b: &Point) -> [String; 4] {
    let pa = (a.0.to_string(), a.1.to_string());
    let pb = (b.0.to_string(), b.1.to_string());
    let (first, second) = if pa <= pb { (pa, pb) } else { (pb, pa) };
    [first.0, first.1, second.0, second.1]
}

// ---------------------------------------------------------------------------
// Per-pair scan
// ---------------------------------------------------------------------------

struct PairScan<'a> {
    polygon: &'a RationalPolygon,
    pair: (usize, usize),
    frame: Frame,
    g: Poly2,
    /// Translation-family lines `s + κt = γ` found on this pair.
    lines: Vec<(Rat, Rat)>,
    report: &'a mut CreaseReport,
    seen: &'a mut BTreeSet<[String; 4]>,
}

impl PairScan<'_> {
    fn run(mut self) -> Result<()> {
        if self.g.is_zero() {
            return Err(StabilityError::Internal(
                "chord value polynomial vanished on a whole edge pair".to_string(),
            ));
        }
        let ghat = self.extract_families()?;
        let Some(degree) = ghat.total_degree() else {
            // The zero set was exactly the family lines.
            return Ok(());
        };
        if degree == 0 {
            if ghat.coeff(0, 0).is_negative() {
                let value = self.probe_center()?;
                return Err(StabilityError::NotSemistable { value });
            }
            return Ok(());
        }

        // Vertical lines common to every horizontal slice.
        let content = content_in_x(&ghat);
        let half = rat(1, 2);
        let prim = if content.degree().unwrap_or(0) >= 1 {
            let (rational, irrational) = unit_interval_roots(&content)?;
            for s0 in &rational {
                self.handle_zero_line(s0, &half)?;
            }
            for interval in &irrational {
                self.handle_zero_line(&interval.midpoint(), &half)?;
            }
            divide_content(&ghat, &content)
        } else {
            ghat.clone()
        };

        // Horizontal lines, symmetrically.
        let transposed = prim.substitute(&Poly2::y(), &Poly2::x());
        let content_t = content_in_x(&transposed);
        let prim = if content_t.degree().unwrap_or(0) >= 1 {
            let (rational, irrational) = unit_interval_roots(&content_t)?;
            for t0 in &rational {
                self.handle_zero_line(&half, t0)?;
            }
            for interval in &irrational {
                self.handle_zero_line(&half, &interval.midpoint())?;
            }
            divide_content(&transposed, &content_t).substitute(&Poly2::y(), &Poly2::x())
        } else {
            prim
        };

        // Interior double points sit over roots of the t-discriminant.
        let prim_t = prim.partial_y();
        if !prim_t.is_zero() {
            let disc = resultant_in_y(&prim, &prim_t);
            if disc.is_zero() {
                return Err(StabilityError::Internal(
                    "degenerate chord discriminant".to_string(),
                ));
            }
            if disc.degree().unwrap_or(0) >= 1 {
                let (rational, irrational) = unit_interval_roots(&disc)?;
                for s0 in &rational {
                    self.rational_slice(&prim, s0)?;
                }
                for interval in &irrational {
                    self.irrational_slice(&prim, interval)?;
                }
            }
        }

        // Boundary lines of the parameter square.
        let zero = Rat::zero();
        let one = Rat::one();
        let boundary: [(bool, Rat); 4] = [
            (true, zero.clone()),
            (true, one.clone()),
            (false, zero.clone()),
            (false, one.clone()),
        ];
        for (s_fixed, level) in &boundary {
            let u = if *s_fixed {
                slice_at_s(&ghat, level)
            } else {
                slice_at_t(&ghat, level)
            };
            let at = |r: &Rat| -> (Rat, Rat) {
                if *s_fixed {
                    (level.clone(), r.clone())
                } else {
                    (r.clone(), level.clone())
                }
            };
            if u.is_zero() {
                let (s0, t0) = at(&half);
                self.handle_zero_line(&s0, &t0)?;
                continue;
            }
            if u.degree().unwrap_or(0) == 0 {
                continue;
            }
            let (rational, irrational) = unit_interval_roots(&u)?;
            for r in &rational {
                let (s0, t0) = at(r);
                self.consider_candidate(&s0, &t0)?;
            }
            if let Some(interval) = irrational.first() {
                let (s0, t0) = at(&interval.midpoint());
                return match find_negative_probe(&self.g, &s0, &t0) {
                    Some(value) => Err(StabilityError::NotSemistable { value }),
                    None => Err(StabilityError::Internal(
                        "irrational boundary chord parameter".to_string(),
                    )),
                };
            }
        }

        // Corner chords joining two vertices.
        for s0 in [&zero, &one] {
            for t0 in [&zero, &one] {
                if self.g.eval(s0, t0).is_zero() {
                    self.consider_candidate(s0, t0)?;
                }
            }
        }
        Ok(())
    }

    /// On antiparallel edge pairs, factor out the translation-family lines
    /// `s + κt = γ` and record each even-multiplicity line as a family;
    /// odd-multiplicity lines are sign walls and certify instability.
    fn extract_families(&mut self) -> Result<Poly2> {
        let cross_dir = &self.frame.ei.0 * &self.frame.ej.1 - &self.frame.ei.1 * &self.frame.ej.0;
        if !cross_dir.is_zero() {
            return Ok(self.g.clone());
        }
        let edges = self.polygon.edges();
        let kappa = &edges[self.pair.1].lattice_length / &edges[self.pair.0].lattice_length;
        let zero = Rat::zero();
        let one = Rat::one();
        let neg_kappa = -kappa.clone();
        let forward = affine_poly2(&zero, &one, &neg_kappa);
        let mut gu = self.g.substitute(&forward, &Poly2::y());
        let content = content_in_x(&gu);
        if content.degree().unwrap_or(0) >= 1 {
            let hi = &one + &kappa;
            let roots = rational_roots(&content)?;
            let in_range = |r: &Rat| r.is_positive() && *r < hi;
            let expected = count_roots_open(&content, &zero, &hi)?;
            if roots.iter().filter(|r| in_range(r)).count() != expected {
                return Err(StabilityError::Internal(
                    "irrational crease family parameter".to_string(),
                ));
            }
            for gamma in &roots {
                // Deflate the full line factor even out of range, so the
                // discriminant of the quotient stays meaningful.
                let mut multiplicity = 0usize;
                while let Some(quotient) = divide_line_factor(&gu, gamma) {
                    gu = quotient;
                    multiplicity += 1;
                    if gu.is_zero() {
                        break;
                    }
                }
                if !in_range(gamma) {
                    continue;
                }
                if multiplicity % 2 == 1 {
                    let (s_mid, t_mid) = self.family_midpoint(gamma, &kappa);
                    return match find_negative_probe(&self.g, &s_mid, &t_mid) {
                        Some(value) => Err(StabilityError::NotSemistable { value }),
                        None => Err(StabilityError::Internal(
                            "sign change across a crease family eluded sampling".to_string(),
                        )),
                    };
                }
                self.record_family(gamma, &kappa)?;
                self.lines.push((gamma.clone(), kappa.clone()));
            }
        }
        let back = affine_poly2(&zero, &one, &kappa);
        Ok(gu.substitute(&back, &Poly2::y()))
    }

    /// Parameter range of the line `s + κt = γ` inside the square, at its
    /// middle chord.
    fn family_midpoint(&self, gamma: &Rat, kappa: &Rat) -> (Rat, Rat) {
        let zero = Rat::zero();
        let one = Rat::one();
        let t_lo = max(zero, (gamma - &one) / kappa);
        let t_hi = min(one, gamma / kappa);
        let t_mid = (&t_lo + &t_hi) / rat_int(2);
        let s_mid = gamma - &(kappa * &t_mid);
        (s_mid, t_mid)
    }

    fn record_family(&mut self, gamma: &Rat, kappa: &Rat) -> Result<()> {
        let zero = Rat::zero();
        let one = Rat::one();
        let t_lo = max(zero, (gamma - &one) / kappa);
        let t_hi = min(one, gamma / kappa);
        let chord_at = |t: &Rat| -> (Point, Point) {
            let s = gamma - &(kappa * t);
            (self.frame.p_at(&s), self.frame.q_at(t))
        };
        let (a1, a2) = chord_at(&t_lo);
        let (b1, b2) = chord_at(&t_hi);
        let t_mid = (&t_lo + &t_hi) / rat_int(2);
        let (r1, r2) = chord_at(&t_mid);
        let representative = SimplePL::new(r1, r2)?;
        if !crease_functional(self.polygon, &representative, None)?.is_zero() {
            return Err(StabilityError::Internal(
                "family representative fails direct evaluation".to_string(),
            ));
        }
        let mut region = [a1, a2, b2, b1];
        if loop_area(&region).is_negative() {
            region.reverse();
        }
        self.report.families.push(CreaseFamily {
            edges: self.pair,
            region,
            representative,
        });
        Ok(())
    }

    /// A whole line of chord parameters is annihilated by `L`. Lines whose
    /// chords collapse onto the polygon boundary are benign; a pencil of
    /// interior zero chords cannot occur for semistable data and is refused
    /// after probing for nearby negativity.
    fn handle_zero_line(&mut self, s0: &Rat, t0: &Rat) -> Result<()> {
        if let Some(value) = find_negative_probe(&self.g, s0, t0) {
            return Err(StabilityError::NotSemistable { value });
        }
        let p = self.frame.p_at(s0);
        let q = self.frame.q_at(t0);
        if p == q {
            return Ok(());
        }
        let mid = midpoint(&p, &q);
        if self.polygon.strictly_contains(&mid) {
            return Err(StabilityError::Internal(
                "pencil of interior zero chords".to_string(),
            ));
        }
        Ok(())
    }

    fn rational_slice(&mut self, prim: &Poly2, s0: &Rat) -> Result<()> {
        let e = slice_at_s(prim, s0);
        if e.is_zero() {
            return Err(StabilityError::Internal(
                "vertical slice vanished after content removal".to_string(),
            ));
        }
        if e.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        let (rational, irrational) = unit_interval_roots(&e)?;
        for t0 in &rational {
            self.consider_candidate(s0, t0)?;
        }
        if let Some(interval) = irrational.first() {
            let t_mid = interval.midpoint();
            return match find_negative_probe(&self.g, s0, &t_mid) {
                Some(value) => Err(StabilityError::NotSemistable { value }),
                None => Err(StabilityError::Internal(
                    "irrational chord parameter on a critical slice".to_string(),
                )),
            };
        }
        Ok(())
    }

    /// Between consecutive discriminant roots the number of real slice roots
    /// is constant, so a root-free slice at the refined midpoint of an
    /// irrational discriminant root certifies the whole strip. Roots that do
    /// persist are transversal crossings, and the probe finds the negative
    /// side; anything else is refused.
    fn irrational_slice(&mut self, prim: &Poly2, interval: &RootInterval) -> Result<()> {
        let m = interval.midpoint();
        let e = slice_at_s(prim, &m);
        if e.is_zero() {
            return Err(StabilityError::Internal(
                "vertical slice vanished after content removal".to_string(),
            ));
        }
        let zero = Rat::zero();
        let one = Rat::one();
        let interior = count_roots_open(&e, &zero, &one)?;
        if interior == 0 && !e.eval(&zero).is_zero() && !e.eval(&one).is_zero() {
            return Ok(());
        }
        let (rational, irrational) = unit_interval_roots(&e)?;
        for t0 in &rational {
            if let Some(value) = find_negative_probe(&self.g, &m, t0) {
                return Err(StabilityError::NotSemistable { value });
            }
        }
        for jv in &irrational {
            if let Some(value) = find_negative_probe(&self.g, &m, &jv.midpoint()) {
                return Err(StabilityError::NotSemistable { value });
            }
        }
        Err(StabilityError::Internal(
            "unresolved zero chords near an irrational critical parameter".to_string(),
        ))
    }

    fn probe_center(&self) -> Result<Rat> {
        let half = rat(1, 2);
        let v = self.g.eval(&half, &half);
        if v.is_negative() {
            return Ok(v);
        }
        find_negative_probe(&self.g, &half, &half).ok_or_else(|| {
            StabilityError::Internal("negative chord values eluded sampling".to_string())
        })
    }

    /// A single zero of `g` at rational parameters: degenerate chords are
    /// skipped, a negative probe certifies instability, and surviving
    /// candidates are re-verified exactly before being reported.
    fn consider_candidate(&mut self, s0: &Rat, t0: &Rat) -> Result<()> {
        for (gamma, kappa) in &self.lines {
            if &(s0 + &(kappa * t0)) == gamma {
                // Part of a translation family reported separately.
                return Ok(());
            }
        }
        if !self.g.eval(s0, t0).is_zero() {
            return Err(StabilityError::Internal(
                "candidate chord does not annihilate the value polynomial".to_string(),
            ));
        }
        let p = self.frame.p_at(s0);
        let q = self.frame.q_at(t0);
        if p == q {
            return Ok(());
        }
        let mid = midpoint(&p, &q);
        if !self.polygon.strictly_contains(&mid) {
            // The chord lies along the boundary; it does not crease the
            // interior.
            return Ok(());
        }
        if let Some(value) = find_negative_probe(&self.g, s0, t0) {
            return Err(StabilityError::NotSemistable { value });
        }
        let crease = SimplePL::new(p, q)?;
        if !crease_functional(self.polygon, &crease, None)?.is_zero() {
            return Err(StabilityError::Internal(
                "zero-crease candidate fails direct evaluation".to_string(),
            ));
        }
        let (a, b) = crease.endpoints();
        let key = endpoint_key(a, b);
        if self.seen.insert(key) {
            self.report.isolated.push(crease);
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Public search
// ---------------------------------------------------------------------------

/// Find every crease annihilating `L`, after certifying semistability.
///
/// The search runs three exact gates in order: the affine part of `L` must
/// vanish (balanced data), the discrete cone minimum at the given resolution
/// must be nonnegative, and every chord zero found by the algebraic scan
/// must be a local minimum of the chord value polynomial. Any exact negative
/// value met along the way is returned as `NotSemistable`.
pub fn find_zero_creases(polygon: &RationalPolygon, resolution: u32) -> Result<CreaseReport> {
    let a = polygon.boundary_measure() / polygon.area();
    for axis in [Poly2::x(), Poly2::y()] {
        let balance =
            polygon.integrate_poly_boundary(&axis) - &a * &polygon.integrate_poly_interior(&axis);
        if !balance.is_zero() {
            // An affine function with the sign of the imbalance destabilizes;
            // its one-sided hinges approach twice the affine value, so the
            // imbalance itself is already a certified negative value.
            return Err(StabilityError::NotSemistable {
                value: -balance.abs(),
            });
        }
    }
    let lp = minimize_convex_cone(polygon, resolution, None)?;
    if lp.value.is_negative() {
        return Err(StabilityError::NotSemistable { value: lp.value });
    }
    let mut report = CreaseReport {
        isolated: Vec::new(),
        families: Vec::new(),
        lp_minimum: lp.value,
    };
    let mut seen: BTreeSet<[String; 4]> = BTreeSet::new();
    let n = polygon.vertices().len();
    for i in 0..n {
        for j in (i + 1)..n {
            let scan = PairScan {
                polygon,
                pair: (i, j),
                frame: Frame::new(polygon, i, j),
                g: chord_value_poly(polygon, &a, i, j),
                lines: Vec::new(),
                report: &mut report,
                seen: &mut seen,
            };
            scan.run().map_err(|e| match e {
                StabilityError::Internal(msg) => {
                    StabilityError::Internal(format!("{msg} (edge pair {i}, {j})"))
                }
                other => other,
            })?;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Decomposition along the zero creases
// ---------------------------------------------------------------------------

fn strictly_inside_loop(points: &[Point], p: &Point) -> bool {
    let n = points.len();
    (0..n).all(|k| {
        let u = &points[k];
        let v = &points[(k + 1) % n];
        let cross = (&v.0 - &u.0) * (&p.1 - &u.1) - (&v.1 - &u.1) * (&p.0 - &u.0);
        cross.is_positive()
    })
}

fn chord_splits_loop(points: &[Point], a: &Point, b: &Point) -> bool {
    let n = points.len();
    let on_boundary =
        |p: &Point| (0..n).any(|k| point_on_segment(p, &points[k], &points[(k + 1) % n]));
    if !on_boundary(a) || !on_boundary(b) {
        return false;
    }
    strictly_inside_loop(points, &midpoint(a, b))
}

/// Split a convex loop along the chord `a → b`, inserting the endpoints into
/// the boundary walk in edge order.
fn split_loop(points: &[Point], a: &Point, b: &Point) -> Option<(Vec<Point>, Vec<Point>)> {
    let n = points.len();
    let mut seq: Vec<Point> = Vec::new();
    for k in 0..n {
        let v = &points[k];
        let w = &points[(k + 1) % n];
        seq.push(v.clone());
        let mut inserts: Vec<(Rat, Point)> = Vec::new();
        for p in [a, b] {
            if p != v && p != w && point_on_segment(p, v, w) {
                let dx = &w.0 - &v.0;
                let dy = &w.1 - &v.1;
                let t = ((&p.0 - &v.0) * &dx + (&p.1 - &v.1) * &dy) / (&dx * &dx + &dy * &dy);
                inserts.push((t, p.clone()));
            }
        }
        inserts.sort_by(|x, y| x.0.cmp(&y.0));
        for (_, p) in inserts {
            seq.push(p);
        }
    }
    let ia = seq.iter().position(|p| p == a)?;
    let ib = seq.iter().position(|p| p == b)?;
    if ia == ib {
        return None;
    }
    let m = seq.len();
    let walk = |from: usize, to: usize| -> Vec<Point> {
        let mut out = Vec::new();
        let mut k = from;
        loop {
            out.push(seq[k].clone());
            if k == to {
                break;
            }
            k = (k + 1) % m;
        }
        out
    };
    let first = walk(ia, ib);
    let second = walk(ib, ia);
    if first.len() < 3 || second.len() < 3 {
        return None;
    }
    if !loop_area(&first).is_positive() || !loop_area(&second).is_positive() {
        return None;
    }
    Some((first, second))
}

fn point_set(points: &[Point]) -> BTreeSet<(String, String)> {
    points
        .iter()
        .map(|p| (p.0.to_string(), p.1.to_string()))
        .collect()
}

/// Cut the polygon along every zero crease and classify the closed pieces.
///
/// Isolated creases and the two extreme chords of each family are used as
/// cuts; chords lying inside the boundary are skipped. Pieces that coincide
/// with a family region are parallelograms bounded by zero creases and carry
/// no further test; every other piece is re-tested against its own extremal
/// affine function through the discrete cone minimum, which must come back
/// nonnegative.
pub fn semistable_decomposition(
    polygon: &RationalPolygon,
    resolution: u32,
) -> Result<DecompositionResult> {
    let creases = find_zero_creases(polygon, resolution)?;

    let mut cuts: Vec<(Point, Point)> = Vec::new();
    let mut cut_keys: BTreeSet<[String; 4]> = BTreeSet::new();
    {
        let mut add_cut = |a: &Point, b: &Point| {
            if a == b {
                return;
            }
            if !polygon.strictly_contains(&midpoint(a, b)) {
                return;
            }
            if cut_keys.insert(endpoint_key(a, b)) {
                cuts.push((a.clone(), b.clone()));
            }
        };
        for c in &creases.isolated {
            let (s, e) = c.endpoints();
            add_cut(s, e);
        }
        for family in &creases.families {
            let r = &family.region;
            add_cut(&r[0], &r[1]);
            add_cut(&r[3], &r[2]);
        }
    }

    let mut loops: Vec<Vec<Point>> = vec![polygon.vertices().to_vec()];
    for (a, b) in &cuts {
        let Some(idx) = loops.iter().position(|lp| chord_splits_loop(lp, a, b)) else {
            return Err(StabilityError::IntersectingCreases);
        };
        let target = loops.swap_remove(idx);
        let (first, second) = split_loop(&target, a, b).ok_or(StabilityError::IntersectingCreases)?;
        loops.push(first);
        loops.push(second);
    }

    let region_sets: Vec<BTreeSet<(String, String)>> = creases
        .families
        .iter()
        .map(|f| point_set(&f.region))
        .collect();
    let mut pieces = Vec::new();
    for lp in loops {
        let piece_polygon = subpolygon(polygon, lp)?;
        let vertex_ids = point_set(piece_polygon.vertices());
        if region_sets.contains(&vertex_ids) {
            pieces.push(Piece {
                polygon: piece_polygon,
                kind: PieceKind::BoundaryParallelogram,
                pair_minimum: None,
            });
            continue;
        }
        let affine = extremal_affine(&piece_polygon)?;
        let minimum = minimize_convex_cone(&piece_polygon, resolution, Some(&affine))?;
        if minimum.value.is_negative() {
            return Err(StabilityError::NotSemistable {
                value: minimum.value,
            });
        }
        pieces.push(Piece {
            polygon: piece_polygon,
            kind: PieceKind::Polystable,
            pair_minimum: Some(minimum.value),
        });
    }
    Ok(DecompositionResult { pieces, creases })
}
