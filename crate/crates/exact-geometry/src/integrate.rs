//! Exact integration of PL functions against polynomial weights, over the
//! polygon interior (Lebesgue measure) or its boundary (lattice measure with
//! per-edge scales).

use num::{One, Signed, Zero};

use crate::bivariate::Poly2;
use crate::grid::{covered_triangles, CoveredPart, Grid, PLFunction};
use crate::poly::Poly;
use crate::polygon::integrate_poly_over_triangle;
use crate::rational::{Int, Rat};
use crate::{GeometryError, Result};

/// Largest admitted total degree for the polynomial weight.
pub const MAX_WEIGHT_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
}

/// ∫ f · w over the chosen region. The PL function must live on `grid`.
pub fn integrate(grid: &Grid, f: &PLFunction, region: Region, weight: &Poly2) -> Result<Rat> {
    if let Some(d) = weight.total_degree() {
        if d > MAX_WEIGHT_DEGREE {
            return Err(GeometryError::UnsupportedDegree {
                got: d,
                bound: MAX_WEIGHT_DEGREE,
            });
        }
    }
    if f.resolution() != grid.resolution() || f.values().len() != grid.node_count() {
        return Err(GeometryError::ValueArity {
            got: f.values().len(),
            want: grid.node_count(),
        });
    }
    Ok(match region {
        Region::Interior => integrate_interior(grid, f, weight),
        Region::Boundary => integrate_boundary(grid, f, weight),
    })
}

/// ∫_P w dμ and ∫_∂P w dσ without a PL factor.
pub fn integrate_weight(grid: &Grid, region: Region, weight: &Poly2) -> Result<Rat> {
    let one = PLFunction::from_fn(grid, |_, _| Rat::one());
    integrate(grid, &one, region, weight)
}

fn integrate_interior(grid: &Grid, f: &PLFunction, weight: &Poly2) -> Rat {
    let mut total = Rat::zero();
    for (i, j, half, part) in covered_triangles(grid) {
        let affine = f.affine_on(grid, i, j, half);
        let fw = &affine * weight;
        match part {
            CoveredPart::Whole => {
                let tri = grid.triangle_points(i, j, half);
                total += integrate_poly_over_triangle(&tri, &fw);
            }
            CoveredPart::Pieces(tris) => {
                for t in tris {
                    total += integrate_poly_over_triangle(t, &fw);
                }
            }
        }
    }
    total
}

fn integrate_boundary(grid: &Grid, f: &PLFunction, weight: &Poly2) -> Rat {
    let mut total = Rat::zero();
    let (x0, y0) = {
        let o = grid.origin();
        (o.0.clone(), o.1.clone())
    };
    let (hx, hy) = {
        let h = grid.cell_sizes();
        (h.0.clone(), h.1.clone())
    };
    for e in grid.polygon().edges() {
        if e.sigma_scale.is_zero() {
            continue;
        }
        let dx = &e.end.0 - &e.start.0;
        let dy = &e.end.1 - &e.start.1;
        // Grid coordinates along the edge, affine in t ∈ [0, 1]. The PL
        // function changes its affine piece only where u, v or u − v crosses
        // an integer.
        let us = (&e.start.0 - &x0) / &hx;
        let du = &dx / &hx;
        let vs = (&e.start.1 - &y0) / &hy;
        let dv = &dy / &hy;
        let mut cuts = vec![Rat::zero(), Rat::one()];
        push_integer_crossings(&mut cuts, &us, &du);
        push_integer_crossings(&mut cuts, &vs, &dv);
        push_integer_crossings(&mut cuts, &(&us - &vs), &(&du - &dv));
        cuts.sort();
        cuts.dedup();
        let xt = Poly::new(vec![e.start.0.clone(), dx.clone()]);
        let yt = Poly::new(vec![e.start.1.clone(), dy.clone()]);
        let w_t = weight.eval_polys(&xt, &yt);
        let mut edge_total = Rat::zero();
        let two = Rat::from_integer(Int::from(2));
        for win in cuts.windows(2) {
            let (t0, t1) = (&win[0], &win[1]);
            let tm = (t0 + t1) / &two;
            let pm = (xt.eval(&tm), yt.eval(&tm));
            let (i, j, half) = grid
                .locate(&pm)
                .expect("polygon boundary lies inside its bounding box");
            let f_t = f.affine_on(grid, i, j, half).eval_polys(&xt, &yt);
            edge_total += (&f_t * &w_t).definite_integral(t0, t1);
        }
        total += &e.sigma_scale * &e.lattice_length * edge_total;
    }
    total
}

/// Parameters t ∈ (0, 1) where start + t·slope is an integer.
fn push_integer_crossings(cuts: &mut Vec<Rat>, start: &Rat, slope: &Rat) {
    if slope.is_zero() {
        return;
    }
    let end = start + slope;
    let (lo, hi) = if start < &end {
        (start.clone(), end)
    } else {
        (end, start.clone())
    };
    let mut k = lo.ceil().to_integer();
    let k1 = hi.floor().to_integer();
    while k <= k1 {
        let t = (Rat::from_integer(k.clone()) - start) / slope;
        if t.is_positive() && t < Rat::one() {
            cuts.push(t);
        }
        k += 1;
    }
}
