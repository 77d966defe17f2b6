//! Strictly convex polygons with rational vertices, counter-clockwise.
//!
//! Each edge carries its primitive integer direction and the induced lattice
//! measure: the edge vector factors as (lattice length) · (primitive
//! direction), and boundary integrals weight each edge by that length times
//! an optional per-edge scale.

use num::{Integer, One, Signed, Zero};

use crate::bivariate::Poly2;
use crate::poly::Poly;
use crate::rational::{Int, Rat};
use crate::{GeometryError, Result};

pub type Point = (Rat, Rat);

fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub start: Point,
    pub end: Point,
    /// Shortest integer vector along the edge direction.
    pub primitive_dir: (Int, Int),
    /// Outward primitive normal (the direction rotated by -90°).
    pub outward_normal: (Int, Int),
    /// end - start = lattice_length · primitive_dir.
    pub lattice_length: Rat,
    /// Multiplier applied to this edge's boundary measure.
    pub sigma_scale: Rat,
}

impl Edge {
    /// Squared density of the induced boundary measure relative to euclidean
    /// arc length: 1 / |outward_normal|².
    pub fn density_squared(&self) -> Rat {
        let (nx, ny) = &self.outward_normal;
        Rat::new(Int::one(), nx * nx + ny * ny)
    }
}

#[derive(Clone, Debug)]
pub struct RationalPolygon {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
}

impl RationalPolygon {
    /// Vertices must be distinct, counter-clockwise, and strictly convex.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                if vertices[i] == vertices[j] {
                    return Err(GeometryError::DuplicateVertex(j));
                }
            }
        }
        let n = vertices.len();
        let mut signs = Vec::with_capacity(n);
        for i in 0..n {
            let c = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            signs.push(c);
        }
        if signs.iter().all(|c| c.is_negative()) {
            return Err(GeometryError::ClockwiseOrientation);
        }
        if let Some(i) = signs.iter().position(|c| !c.is_positive()) {
            return Err(GeometryError::NotStrictlyConvex((i + 1) % n));
        }
        let edges = (0..n)
            .map(|i| make_edge(vertices[i].clone(), vertices[(i + 1) % n].clone()))
            .collect();
        Ok(RationalPolygon { vertices, edges })
    }

    /// Like `new`, but first drops repeated points and vertices interior to a
    /// straight stretch of boundary. Convenient for polygons produced by
    /// cutting, where collinear corners can appear.
    pub fn new_merging_collinear(points: Vec<Point>) -> Result<Self> {
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        // Remove vertices where the boundary does not turn.
        loop {
            let n = pts.len();
            if n < 3 {
                break;
            }
            let mut removed = false;
            for i in 0..n {
                let c = cross(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
                if c.is_zero() {
                    pts.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        RationalPolygon::new(pts)
    }

    /// Replace per-edge boundary scales (one per edge, all nonnegative).
    pub fn with_sigma_scales(mut self, scales: Vec<Rat>) -> Result<Self> {
        if scales.len() != self.edges.len() {
            return Err(GeometryError::ScaleArity {
                got: scales.len(),
                want: self.edges.len(),
            });
        }
        if let Some(i) = scales.iter().position(|s| s.is_negative()) {
            return Err(GeometryError::NegativeScale(i));
        }
        for (e, s) in self.edges.iter_mut().zip(scales) {
            e.sigma_scale = s;
        }
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn area(&self) -> Rat {
        let n = self.vertices.len();
        let mut twice = Rat::zero();
        for i in 0..n {
            let (x0, y0) = &self.vertices[i];
            let (x1, y1) = &self.vertices[(i + 1) % n];
            twice += x0 * y1 - x1 * y0;
        }
        twice / Rat::from_integer(2.into())
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let mut cx = Rat::zero();
        let mut cy = Rat::zero();
        let mut twice_area = Rat::zero();
        for i in 0..n {
            let (x0, y0) = &self.vertices[i];
            let (x1, y1) = &self.vertices[(i + 1) % n];
            let w = x0 * y1 - x1 * y0;
            cx += (x0 + x1) * &w;
            cy += (y0 + y1) * &w;
            twice_area += w;
        }
        let scale = Rat::from_integer(3.into()) * twice_area;
        (cx / &scale, cy / scale)
    }

    /// Total boundary measure: Σ scale · lattice length over the edges.
    pub fn boundary_measure(&self) -> Rat {
        self.edges
            .iter()
            .map(|e| &e.sigma_scale * &e.lattice_length)
            .sum()
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| !cross(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_negative())
    }

    /// Open containment.
    pub fn strictly_contains(&self, p: &Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_positive())
    }

    /// Axis-aligned bounding box: (xmin, xmax, ymin, ymax).
    pub fn bounding_box(&self) -> (Rat, Rat, Rat, Rat) {
        let mut xs: Vec<&Rat> = self.vertices.iter().map(|v| &v.0).collect();
        let mut ys: Vec<&Rat> = self.vertices.iter().map(|v| &v.1).collect();
        xs.sort();
        ys.sort();
        (
            xs[0].clone(),
            xs[xs.len() - 1].clone(),
            ys[0].clone(),
            ys[ys.len() - 1].clone(),
        )
    }

    /// Intersection of a convex loop with this polygon (Sutherland–Hodgman).
    /// Returns the clipped loop, or None when the intersection has no area.
    pub fn clip_convex_loop(&self, subject: &[Point]) -> Option<Vec<Point>> {
        let mut current: Vec<Point> = subject.to_vec();
        let n = self.vertices.len();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let mut next: Vec<Point> = Vec::with_capacity(current.len() + 1);
            let m = current.len();
            if m == 0 {
                return None;
            }
            for j in 0..m {
                let p = &current[j];
                let q = &current[(j + 1) % m];
                let fp = cross(a, b, p);
                let fq = cross(a, b, q);
                if !fp.is_negative() {
                    next.push(p.clone());
                }
                if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative())
                {
                    let t = &fp / (&fp - &fq);
                    next.push((
                        &p.0 + &(&t * &(&q.0 - &p.0)),
                        &p.1 + &(&t * &(&q.1 - &p.1)),
                    ));
                }
            }
            current = dedupe_loop(next);
        }
        if current.len() < 3 || loop_area_twice(&current).is_zero() {
            None
        } else {
            Some(current)
        }
    }

    /// Fan triangulation (valid because the polygon is convex).
    pub fn fan_triangles(&self) -> Vec<[Point; 3]> {
        fan_triangles_of(&self.vertices)
    }

    /// ∫_P w dμ for a polynomial weight, by pulling each fan triangle back to
    /// the reference simplex.
    pub fn integrate_poly_interior(&self, w: &Poly2) -> Rat {
        integrate_poly_over_loop(&self.vertices, w)
    }

    /// ∫_∂P w dσ with the lattice measure and per-edge scales.
    pub fn integrate_poly_boundary(&self, w: &Poly2) -> Rat {
        let mut total = Rat::zero();
        for e in &self.edges {
            if e.sigma_scale.is_zero() {
                continue;
            }
            // x(t) = start + t (end - start), t in [0, 1]; dσ = ℓ dt.
            let xt = Poly::new(vec![e.start.0.clone(), &e.end.0 - &e.start.0]);
            let yt = Poly::new(vec![e.start.1.clone(), &e.end.1 - &e.start.1]);
            let restricted = w.eval_polys(&xt, &yt);
            let val = restricted.definite_integral(&Rat::zero(), &Rat::one());
            total += &e.sigma_scale * &e.lattice_length * val;
        }
        total
    }

    pub fn to_json(&self) -> serde_json::Value {
        let verts: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|(x, y)| {
                serde_json::json!([
                    x.numer().to_string(),
                    x.denom().to_string(),
                    y.numer().to_string(),
                    y.denom().to_string()
                ])
            })
            .collect();
        let scales: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!([
                    e.sigma_scale.numer().to_string(),
                    e.sigma_scale.denom().to_string()
                ])
            })
            .collect();
        serde_json::json!({ "vertices": verts, "sigma_scales": scales })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| GeometryError::Malformed(msg.to_string());
        let verts = v
            .get("vertices")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing \"vertices\" array"))?;
        let mut pts = Vec::with_capacity(verts.len());
        for entry in verts {
            let quad = entry
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| bad("vertex must be [xn, xd, yn, yd]"))?;
            let mut nums = Vec::with_capacity(4);
            for q in quad {
                let n: Int = match q {
                    serde_json::Value::String(s) => s
                        .parse()
                        .map_err(|_| bad("vertex entries must be integers"))?,
                    serde_json::Value::Number(n) => {
                        let i = n.as_i64().ok_or_else(|| bad("vertex entries must be integers"))?;
                        Int::from(i)
                    }
                    _ => return Err(bad("vertex entries must be integers")),
                };
                nums.push(n);
            }
            if nums[1].is_zero() || nums[3].is_zero() {
                return Err(bad("vertex denominator is zero"));
            }
            pts.push((
                Rat::new(nums[0].clone(), nums[1].clone()),
                Rat::new(nums[2].clone(), nums[3].clone()),
            ));
        }
        let poly = RationalPolygon::new(pts)?;
        if let Some(raw) = v.get("sigma_scales") {
            let arr = raw
                .as_array()
                .ok_or_else(|| bad("\"sigma_scales\" must be an array"))?;
            let mut scales = Vec::with_capacity(arr.len());
            for entry in arr {
                let pair = entry
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("scale must be [num, den]"))?;
                let mut nums = Vec::with_capacity(2);
                for q in pair {
                    let n: Int = match q {
                        serde_json::Value::String(s) => s
                            .parse()
                            .map_err(|_| bad("scale entries must be integers"))?,
                        serde_json::Value::Number(n) => Int::from(
                            n.as_i64().ok_or_else(|| bad("scale entries must be integers"))?,
                        ),
                        _ => return Err(bad("scale entries must be integers")),
                    };
                    nums.push(n);
                }
                if nums[1].is_zero() {
                    return Err(bad("scale denominator is zero"));
                }
                scales.push(Rat::new(nums[0].clone(), nums[1].clone()));
            }
            return poly.with_sigma_scales(scales);
        }
        Ok(poly)
    }
}

fn make_edge(start: Point, end: Point) -> Edge {
    let dx = &end.0 - &start.0;
    let dy = &end.1 - &start.1;
    let common: Int = dx.denom().lcm(dy.denom());
    let ix = dx.numer() * (&common / dx.denom());
    let iy = dy.numer() * (&common / dy.denom());
    let g = ix.gcd(&iy);
    debug_assert!(!g.is_zero(), "degenerate edge");
    let primitive = (&ix / &g, &iy / &g);
    let outward = (primitive.1.clone(), -primitive.0.clone());
    Edge {
        start,
        end,
        primitive_dir: primitive,
        outward_normal: outward,
        lattice_length: Rat::new(g, common),
        sigma_scale: Rat::one(),
    }
}

fn dedupe_loop(pts: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn loop_area_twice(pts: &[Point]) -> Rat {
    let n = pts.len();
    let mut twice = Rat::zero();
    for i in 0..n {
        let (x0, y0) = &pts[i];
        let (x1, y1) = &pts[(i + 1) % n];
        twice += x0 * y1 - x1 * y0;
    }
    twice
}

pub(crate) fn fan_triangles_of(pts: &[Point]) -> Vec<[Point; 3]> {
    (1..pts.len().saturating_sub(1))
        .map(|i| [pts[0].clone(), pts[i].clone(), pts[i + 1].clone()])
        .collect()
}

/// ∫ w over a convex counter-clockwise loop.
pub(crate) fn integrate_poly_over_loop(pts: &[Point], w: &Poly2) -> Rat {
    let mut total = Rat::zero();
    for tri in fan_triangles_of(pts) {
        total += integrate_poly_over_triangle(&tri, w);
    }
    total
}

/// ∫ w over one triangle via the affine map from the reference simplex.
pub(crate) fn integrate_poly_over_triangle(tri: &[Point; 3], w: &Poly2) -> Rat {
    let [a, b, c] = tri;
    let bu = (&b.0 - &a.0, &b.1 - &a.1);
    let cv = (&c.0 - &a.0, &c.1 - &a.1);
    let det = &bu.0 * &cv.1 - &bu.1 * &cv.0;
    if det.is_zero() {
        return Rat::zero();
    }
    // x = a.x + bu.x u + cv.x v, y likewise.
    let xe = &(&Poly2::constant(a.0.clone()) + &Poly2::x().scale(&bu.0)) + &Poly2::y().scale(&cv.0);
    let ye = &(&Poly2::constant(a.1.clone()) + &Poly2::x().scale(&bu.1)) + &Poly2::y().scale(&cv.1);
    let pulled = w.substitute(&xe, &ye);
    pulled.integrate_ref_simplex() * det.abs()
}
