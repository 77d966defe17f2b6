//! Exact minimisation of the stability functional over the discretised
//! convex cone, and floating-point sampling estimates derived from it.
//!
//! The cone of convex piecewise-linear functions on the grid is cut out by
//! one second-difference inequality per interior grid edge (including the
//! cell diagonals). Scale invariance is broken by three normalisations:
//! f ≥ 0, f = 0 at the grid node nearest the barycentre, and ∫_∂P f dσ = 1.
//! With node values and per-inequality slacks as variables this is a
//! standard-form linear program, solved exactly; a negative optimum is a
//! certified destabilising test function.

use exact_geometry::bivariate::Poly2;
use exact_geometry::grid::{Grid, PLFunction};
use exact_geometry::integrate::{integrate, Region};
use exact_geometry::lp::{solve_standard_form, LpOutcome};
use exact_geometry::polygon::RationalPolygon;
use exact_geometry::{rat_int, Rat};
use num::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functional::{donaldson_functional, pl_product_integral, projected_norm_sq, ExtremalAffine};
use crate::{Result, StabilityError};

/// A certified minimum of L (or L_A) over the normalised convex cone.
#[derive(Clone, Debug)]
pub struct ConeMinimum {
    /// Exact optimal value; negative means a destabilising witness exists.
    pub value: Rat,
    /// The optimal test function.
    pub witness: PLFunction,
    pub resolution: u32,
    /// Grid coordinates (i, j) of the node where the witness is pinned to 0.
    pub pinned_node: (usize, usize),
}

impl ConeMinimum {
    pub fn certifies_nonnegative(&self) -> bool {
        !self.value.is_negative()
    }
}

/// Minimise the stability functional over convex nonnegative grid functions
/// with ∫_∂P f dσ = 1 and f pinned to zero near the barycentre. `weight`
/// switches the interior term from a·dμ to A·dμ (the relative functional).
pub fn minimize_convex_cone(
    polygon: &RationalPolygon,
    resolution: u32,
    weight: Option<&ExtremalAffine>,
) -> Result<ConeMinimum> {
    if polygon.boundary_measure().is_zero() {
        return Err(StabilityError::InfeasibleNormalization { resolution });
    }
    let grid = Grid::try_new(polygon.clone(), resolution).map_err(StabilityError::from)?;
    let nodes = grid.node_count();
    let side = grid.side();
    let one = Poly2::constant(Rat::one());
    let interior_weight = match weight {
        Some(a) => a.poly(),
        None => Poly2::constant(polygon.boundary_measure() / polygon.area()),
    };

    // L is linear, so the objective is determined by its values on the nodal
    // hat functions; the boundary integrals double as the normalisation row.
    let mut boundary_weights = vec![Rat::zero(); nodes];
    let mut objective = vec![Rat::zero(); nodes];
    for j in 0..side {
        for i in 0..side {
            let k = grid.node_index(i, j);
            let mut values = vec![Rat::zero(); nodes];
            values[k] = Rat::one();
            let hat = PLFunction::from_values(&grid, values)?;
            let b = integrate(&grid, &hat, Region::Boundary, &one)?;
            let m = integrate(&grid, &hat, Region::Interior, &interior_weight)?;
            objective[k] = &b - &m;
            boundary_weights[k] = b;
        }
    }

    let constraints = PLFunction::convexity_constraints(&grid);
    let vars = nodes + constraints.len();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(constraints.len() + 2);
    let mut rhs: Vec<Rat> = Vec::with_capacity(constraints.len() + 2);
    for (r, con) in constraints.iter().enumerate() {
        let mut row = vec![Rat::zero(); vars];
        row[con.plus[0]] += Rat::one();
        row[con.plus[1]] += Rat::one();
        row[con.minus[0]] -= Rat::one();
        row[con.minus[1]] -= Rat::one();
        row[nodes + r] = -Rat::one();
        rows.push(row);
        rhs.push(Rat::zero());
    }

    let pinned = grid
        .nearest_contained_node(&polygon.centroid())
        .ok_or_else(|| StabilityError::Internal("no grid node inside the polygon".into()))?;
    let mut pin_row = vec![Rat::zero(); vars];
    pin_row[grid.node_index(pinned.0, pinned.1)] = Rat::one();
    rows.push(pin_row);
    rhs.push(Rat::zero());

    let mut norm_row = vec![Rat::zero(); vars];
    norm_row[..nodes].clone_from_slice(&boundary_weights);
    rows.push(norm_row);
    rhs.push(Rat::one());

    let mut costs = vec![Rat::zero(); vars];
    costs[..nodes].clone_from_slice(&objective);

    match solve_standard_form(&costs, &rows, &rhs)? {
        LpOutcome::Optimal { value, point } => {
            let witness = PLFunction::from_values(&grid, point[..nodes].to_vec())?;
            Ok(ConeMinimum { value, witness, resolution, pinned_node: pinned })
        }
        LpOutcome::Infeasible => Err(StabilityError::InfeasibleNormalization { resolution }),
        LpOutcome::Unbounded => {
            Err(StabilityError::Internal("cone minimisation is unbounded".into()))
        }
    }
}

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational magnitude exceeds f64 range")
}

/// Hinge functions max(±(d·x − c), 0) for lattice directions d aligned with
/// the grid (x, y, and the cell diagonal x+y), with thresholds on the grid
/// lines. These are exactly representable and convex on the triangulation.
fn curated_hinges(grid: &Grid) -> Vec<PLFunction> {
    let (ox, oy) = grid.origin();
    let (hx, hy) = grid.cell_sizes();
    let n = grid.resolution() as i64;
    let mut out = Vec::new();
    let mut push = |f: PLFunction| {
        if f.is_convex(grid) {
            out.push(f);
        }
    };
    for k in 1..n {
        let cx = ox + hx * rat_int(k);
        let cy = oy + hy * rat_int(k);
        for sign in [1i64, -1] {
            let s = rat_int(sign);
            let c = cx.clone();
            push(PLFunction::from_fn(grid, |x, _| {
                let d = &s * (x - &c);
                if d.is_negative() {
                    Rat::zero()
                } else {
                    d
                }
            }));
            let c = cy.clone();
            push(PLFunction::from_fn(grid, |_, y| {
                let d = &s * (y - &c);
                if d.is_negative() {
                    Rat::zero()
                } else {
                    d
                }
            }));
        }
    }
    // Diagonal hinges max(±(x + y − c), 0) at the grid's diagonal levels.
    for k in 1..2 * n {
        let c = ox + oy + (hx + hy) * rat_int(k) / rat_int(2);
        for sign in [1i64, -1] {
            let s = rat_int(sign);
            let c = c.clone();
            push(PLFunction::from_fn(grid, |x, y| {
                let d = &s * (x + y - &c);
                if d.is_negative() {
                    Rat::zero()
                } else {
                    d
                }
            }));
        }
    }
    out
}

/// One random nonnegative convex sample: the interpolant of the maximum of
/// zero and up to four random affine functions anchored in the bounding box.
/// Interpolation does not preserve convexity across the fixed triangulation,
/// so samples failing the exact convexity test are discarded.
fn random_convex_sample(grid: &Grid, rng: &mut ChaCha8Rng) -> Option<PLFunction> {
    let (x0, x1, y0, y1) = grid.polygon().bounding_box();
    let planes: Vec<(Rat, Rat, Rat, Rat)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let gx = rat_int(rng.gen_range(-3..=3)) / rat_int(rng.gen_range(1..=2));
            let gy = rat_int(rng.gen_range(-3..=3)) / rat_int(rng.gen_range(1..=2));
            let ax = &x0 + (&x1 - &x0) * rat_int(rng.gen_range(0..=8)) / rat_int(8);
            let ay = &y0 + (&y1 - &y0) * rat_int(rng.gen_range(0..=8)) / rat_int(8);
            (gx, gy, ax, ay)
        })
        .collect();
    let f = PLFunction::from_fn(grid, |x, y| {
        let mut best = Rat::zero();
        for (gx, gy, ax, ay) in &planes {
            let v = gx * (x - ax) + gy * (y - ay);
            if v > best {
                best = v;
            }
        }
        best
    });
    f.is_convex(grid).then_some(f)
}

/// A sampled upper bound for the normalised stability ratio.
#[derive(Clone, Debug)]
pub struct RatioEstimate {
    /// min over the sampled candidates of L(f) / ‖π f‖.
    pub lambda_hat: f64,
    /// Number of candidates with a nonzero projected norm.
    pub samples_used: usize,
}

/// Estimate inf L(f)/‖π f‖ over the convex cone at the given resolution by
/// evaluating the ratio on the exact LP witness, a curated family of hinge
/// functions, and random convex samples. The estimate is an upper bound for
/// the discretised infimum; it certifies nothing by itself.
pub fn uniform_ratio_estimate(
    polygon: &RationalPolygon,
    resolution: u32,
    samples: usize,
    seed: u64,
) -> Result<RatioEstimate> {
    let grid = Grid::try_new(polygon.clone(), resolution).map_err(StabilityError::from)?;
    let mut candidates = vec![minimize_convex_cone(polygon, resolution, None)?.witness];
    candidates.extend(curated_hinges(&grid));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        if let Some(f) = random_convex_sample(&grid, &mut rng) {
            candidates.push(f);
        }
    }

    let mut best: Option<f64> = None;
    let mut used = 0usize;
    for f in &candidates {
        let norm_sq = projected_norm_sq(&grid, f)?;
        if !norm_sq.is_positive() {
            continue;
        }
        used += 1;
        let value = donaldson_functional(&grid, f, None)?;
        let ratio = to_f64(&value) / to_f64(&norm_sq).sqrt();
        best = Some(match best {
            None => ratio,
            Some(b) => b.min(ratio),
        });
    }
    match best {
        Some(lambda_hat) => Ok(RatioEstimate { lambda_hat, samples_used: used }),
        None => Err(StabilityError::DegenerateSample),
    }
}

/// Running maxima of ‖f‖_{L²(dμ)} / ∫_∂P f dσ over sampled nonnegative
/// convex functions, per resolution, and the final estimate.
#[derive(Clone, Debug)]
pub struct BoundaryConstantReport {
    pub per_resolution: Vec<(u32, f64)>,
    pub constant: f64,
}

/// Estimate the constant in ‖f‖_{L²(dμ)} ≤ C ∫_∂P f dσ for nonnegative
/// convex f, by sampling at resolutions 2, 4, 8 and keeping a running
/// maximum. The constant function is always included, so the estimate is
/// at least √μ(P)/σ(∂P).
pub fn boundary_l2_constant_check(
    polygon: &RationalPolygon,
    samples: usize,
    seed: u64,
) -> Result<BoundaryConstantReport> {
    let one = Poly2::constant(Rat::one());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut running = 0.0_f64;
    let mut per_resolution = Vec::new();
    for n in [2u32, 4, 8] {
        let grid = Grid::try_new(polygon.clone(), n).map_err(StabilityError::from)?;
        let mut candidates = vec![PLFunction::from_fn(&grid, |_, _| Rat::one())];
        for _ in 0..samples {
            if let Some(f) = random_convex_sample(&grid, &mut rng) {
                candidates.push(f);
            }
        }
        for f in &candidates {
            let boundary = integrate(&grid, f, Region::Boundary, &one)?;
            if !boundary.is_positive() {
                continue;
            }
            let l2_sq = pl_product_integral(&grid, f, f, &one)?;
            let ratio = to_f64(&l2_sq).sqrt() / to_f64(&boundary);
            if ratio > running {
                running = ratio;
            }
        }
        per_resolution.push((n, running));
    }
    Ok(BoundaryConstantReport { per_resolution, constant: running })
}
