//! Uniform triangulated grids over a polygon's bounding box, and piecewise
//! linear functions on them.
//!
//! The bounding box is divided into N×N cells; each cell is split by its
//! lower-left to upper-right diagonal into two triangles. A `PLFunction`
//! stores one value per grid node and is affine on every triangle. Cells
//! straddling the polygon boundary are clipped once at construction, so
//! integration against polynomial weights stays exact.

use num::{One, Signed, Zero};

use crate::polygon::{fan_triangles_of, Point, RationalPolygon};
use crate::rational::{Int, Rat};
use crate::{GeometryError, Result};

/// Which of the two triangles of a cell, relative to the diagonal from the
/// lower-left corner to the upper-right corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellHalf {
    /// Below the diagonal: corners (i,j), (i+1,j), (i+1,j+1).
    Low,
    /// Above the diagonal: corners (i,j), (i+1,j+1), (i,j+1).
    High,
}

#[derive(Clone, Debug)]
enum Coverage {
    Full,
    Partial(Vec<[Point; 3]>),
    Empty,
}

#[derive(Clone, Debug)]
pub struct Grid {
    polygon: RationalPolygon,
    resolution: u32,
    x0: Rat,
    y0: Rat,
    hx: Rat,
    hy: Rat,
    /// Two entries per cell: index 2(jN + i) for the low half, +1 for high.
    coverage: Vec<Coverage>,
}

impl Grid {
    pub fn try_new(polygon: RationalPolygon, resolution: u32) -> Result<Grid> {
        if resolution == 0 {
            return Err(GeometryError::ZeroResolution);
        }
        let (xmin, xmax, ymin, ymax) = polygon.bounding_box();
        let nr = Rat::from_integer(Int::from(resolution));
        let hx = (&xmax - &xmin) / &nr;
        let hy = (&ymax - &ymin) / &nr;
        let mut grid = Grid {
            polygon,
            resolution,
            x0: xmin,
            y0: ymin,
            hx,
            hy,
            coverage: Vec::new(),
        };
        let n = resolution as usize;
        let mut coverage = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                for half in [CellHalf::Low, CellHalf::High] {
                    let tri = grid.triangle_points(i, j, half);
                    let fully_inside = tri.iter().all(|p| grid.polygon.contains(p));
                    if fully_inside {
                        coverage.push(Coverage::Full);
                    } else {
                        match grid.polygon.clip_convex_loop(&tri) {
                            Some(clipped) => {
                                coverage.push(Coverage::Partial(fan_triangles_of(&clipped)))
                            }
                            None => coverage.push(Coverage::Empty),
                        }
                    }
                }
            }
        }
        grid.coverage = coverage;
        Ok(grid)
    }

    pub fn new(polygon: RationalPolygon, resolution: u32) -> Grid {
        Grid::try_new(polygon, resolution).expect("valid grid")
    }

    pub fn polygon(&self) -> &RationalPolygon {
        &self.polygon
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Nodes per side (resolution + 1).
    pub fn side(&self) -> usize {
        self.resolution as usize + 1
    }

    pub fn node_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.side() && j < self.side());
        j * self.side() + i
    }

    pub fn node_point(&self, i: usize, j: usize) -> Point {
        (
            &self.x0 + &self.hx * Rat::from_integer(Int::from(i)),
            &self.y0 + &self.hy * Rat::from_integer(Int::from(j)),
        )
    }

    pub fn cell_sizes(&self) -> (&Rat, &Rat) {
        (&self.hx, &self.hy)
    }

    pub fn origin(&self) -> (&Rat, &Rat) {
        (&self.x0, &self.y0)
    }

    /// Corner node indices (i, j) of a cell triangle, in CCW order.
    pub fn triangle_nodes(&self, i: usize, j: usize, half: CellHalf) -> [(usize, usize); 3] {
        match half {
            CellHalf::Low => [(i, j), (i + 1, j), (i + 1, j + 1)],
            CellHalf::High => [(i, j), (i + 1, j + 1), (i, j + 1)],
        }
    }

    pub fn triangle_points(&self, i: usize, j: usize, half: CellHalf) -> [Point; 3] {
        let nodes = self.triangle_nodes(i, j, half);
        [
            self.node_point(nodes[0].0, nodes[0].1),
            self.node_point(nodes[1].0, nodes[1].1),
            self.node_point(nodes[2].0, nodes[2].1),
        ]
    }

    fn coverage_of(&self, i: usize, j: usize, half: CellHalf) -> &Coverage {
        let base = 2 * (j * self.resolution as usize + i);
        match half {
            CellHalf::Low => &self.coverage[base],
            CellHalf::High => &self.coverage[base + 1],
        }
    }

    /// The cell and half containing a point of the bounding box. Points on
    /// shared edges resolve to a triangle whose closed hull contains them.
    /// None for points outside the box.
    pub fn locate(&self, p: &Point) -> Option<(usize, usize, CellHalf)> {
        let u = (&p.0 - &self.x0) / &self.hx;
        let v = (&p.1 - &self.y0) / &self.hy;
        let nr = Rat::from_integer(Int::from(self.resolution));
        if u.is_negative() || v.is_negative() || u > nr || v > nr {
            return None;
        }
        let max_cell = self.resolution as usize - 1;
        let i = cell_floor(&u).min(max_cell);
        let j = cell_floor(&v).min(max_cell);
        let ul = &u - Rat::from_integer(Int::from(i));
        let vl = &v - Rat::from_integer(Int::from(j));
        let half = if vl <= ul { CellHalf::Low } else { CellHalf::High };
        Some((i, j, half))
    }

    /// The grid node inside the closed polygon nearest to `target`
    /// (lexicographic (i, j) tie-break). None when no node lies inside.
    pub fn nearest_contained_node(&self, target: &Point) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), Rat)> = None;
        for i in 0..self.side() {
            for j in 0..self.side() {
                let p = self.node_point(i, j);
                if !self.polygon.contains(&p) {
                    continue;
                }
                let dx = &p.0 - &target.0;
                let dy = &p.1 - &target.1;
                let d2 = &dx * &dx + &dy * &dy;
                let better = match &best {
                    None => true,
                    Some((_, cur)) => d2 < *cur,
                };
                if better {
                    best = Some(((i, j), d2));
                }
            }
        }
        best.map(|(ij, _)| ij)
    }

    /// Same subdivision with doubled resolution.
    pub fn refined(&self) -> Grid {
        Grid::new(self.polygon.clone(), self.resolution * 2)
    }
}

fn cell_floor(u: &Rat) -> usize {
    use num::ToPrimitive;
    u.floor()
        .to_integer()
        .to_usize()
        .expect("cell index out of range")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    resolution: u32,
    /// Row-major by j: values[j * (N+1) + i].
    values: Vec<Rat>,
}

/// One convexity constraint: values[plus[0]] + values[plus[1]]
/// − values[minus[0]] − values[minus[1]] ≥ 0.
#[derive(Clone, Debug)]
pub struct ConvexityConstraint {
    pub plus: [usize; 2],
    pub minus: [usize; 2],
}

impl PLFunction {
    pub fn from_fn(grid: &Grid, f: impl Fn(&Rat, &Rat) -> Rat) -> PLFunction {
        let side = grid.side();
        let mut values = Vec::with_capacity(side * side);
        for j in 0..side {
            for i in 0..side {
                let (x, y) = grid.node_point(i, j);
                values.push(f(&x, &y));
            }
        }
        PLFunction {
            resolution: grid.resolution(),
            values,
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<Rat>) -> Result<PLFunction> {
        if values.len() != grid.node_count() {
            return Err(GeometryError::ValueArity {
                got: values.len(),
                want: grid.node_count(),
            });
        }
        Ok(PLFunction {
            resolution: grid.resolution(),
            values,
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, grid: &Grid, i: usize, j: usize) -> &Rat {
        &self.values[grid.node_index(i, j)]
    }

    /// The affine function agreeing with this one on the given cell triangle,
    /// as a polynomial c0 + c1 x + c2 y.
    pub fn affine_on(&self, grid: &Grid, i: usize, j: usize, half: CellHalf) -> crate::bivariate::Poly2 {
        use crate::bivariate::Poly2;
        let fa = self.value(grid, i, j).clone();
        let (px, qy) = match half {
            CellHalf::Low => {
                let fb = self.value(grid, i + 1, j);
                let fc = self.value(grid, i + 1, j + 1);
                (( fb - &fa) / &grid.hx, (fc - fb) / &grid.hy)
            }
            CellHalf::High => {
                let fc = self.value(grid, i + 1, j + 1);
                let fd = self.value(grid, i, j + 1);
                ((fc - fd) / &grid.hx, (fd - &fa) / &grid.hy)
            }
        };
        let (xa, ya) = grid.node_point(i, j);
        let c0 = fa - &px * xa - &qy * ya;
        &(&Poly2::constant(c0) + &Poly2::x().scale(&px)) + &Poly2::y().scale(&qy)
    }

    /// Evaluate at a point of the bounding box (None outside).
    pub fn eval(&self, grid: &Grid, p: &Point) -> Option<Rat> {
        let (i, j, half) = grid.locate(p)?;
        let aff = self.affine_on(grid, i, j, half);
        Some(aff.eval(&p.0, &p.1))
    }

    /// All interior-edge constraints whose joint nonnegativity certifies the
    /// function convex on the whole bounding box.
    pub fn convexity_constraints(grid: &Grid) -> Vec<ConvexityConstraint> {
        let n = grid.resolution() as usize;
        let idx = |i: usize, j: usize| j * (n + 1) + i;
        let mut out = Vec::new();
        // Across each cell diagonal.
        for j in 0..n {
            for i in 0..n {
                out.push(ConvexityConstraint {
                    plus: [idx(i + 1, j), idx(i, j + 1)],
                    minus: [idx(i, j), idx(i + 1, j + 1)],
                });
            }
        }
        // Across interior vertical edges.
        for j in 0..n {
            for i in 0..n.saturating_sub(1) {
                out.push(ConvexityConstraint {
                    plus: [idx(i, j), idx(i + 2, j + 1)],
                    minus: [idx(i + 1, j), idx(i + 1, j + 1)],
                });
            }
        }
        // Across interior horizontal edges.
        for j in 0..n.saturating_sub(1) {
            for i in 0..n {
                out.push(ConvexityConstraint {
                    plus: [idx(i, j), idx(i + 1, j + 2)],
                    minus: [idx(i, j + 1), idx(i + 1, j + 1)],
                });
            }
        }
        out
    }

    /// Convexity over the full bounding-box triangulation.
    pub fn is_convex(&self, grid: &Grid) -> bool {
        self.convexity_slacks(grid).iter().all(|s| !s.is_negative())
    }

    /// Slack of each constraint from `convexity_constraints`, same order.
    pub fn convexity_slacks(&self, grid: &Grid) -> Vec<Rat> {
        PLFunction::convexity_constraints(grid)
            .iter()
            .map(|c| {
                &self.values[c.plus[0]] + &self.values[c.plus[1]]
                    - &self.values[c.minus[0]]
                    - &self.values[c.minus[1]]
            })
            .collect()
    }

    /// Express this function on the doubled grid. The result represents the
    /// same function: fine nodes sit on coarse edges, where interpolation is
    /// exact.
    pub fn refine(&self, grid: &Grid) -> PLFunction {
        let n = grid.resolution() as usize;
        let side = 2 * n + 1;
        let half = Rat::new(Int::one(), Int::from(2));
        let coarse = |i: usize, j: usize| &self.values[j * (n + 1) + i];
        let mut values = vec![Rat::zero(); side * side];
        for j in 0..side {
            for i in 0..side {
                let v = match (i % 2, j % 2) {
                    (0, 0) => coarse(i / 2, j / 2).clone(),
                    (1, 0) => (coarse(i / 2, j / 2) + coarse(i / 2 + 1, j / 2)) * &half,
                    (0, 1) => (coarse(i / 2, j / 2) + coarse(i / 2, j / 2 + 1)) * &half,
                    // Cell centre: lies on the coarse diagonal.
                    _ => (coarse(i / 2, j / 2) + coarse(i / 2 + 1, j / 2 + 1)) * &half,
                };
                values[j * side + i] = v;
            }
        }
        PLFunction {
            resolution: grid.resolution() * 2,
            values,
        }
    }
}

/// Iterate the covered parts of every cell triangle: the affine pieces of a
/// PL function and the triangles over which each piece must be integrated.
pub(crate) fn covered_triangles<'a>(
    grid: &'a Grid,
) -> impl Iterator<Item = (usize, usize, CellHalf, CoveredPart<'a>)> + 'a {
    let n = grid.resolution() as usize;
    (0..n).flat_map(move |j| {
        (0..n).flat_map(move |i| {
            [CellHalf::Low, CellHalf::High].into_iter().filter_map(move |half| {
                match grid.coverage_of(i, j, half) {
                    Coverage::Full => Some((i, j, half, CoveredPart::Whole)),
                    Coverage::Partial(tris) => Some((i, j, half, CoveredPart::Pieces(tris))),
                    Coverage::Empty => None,
                }
            })
        })
    })
}

pub(crate) enum CoveredPart<'a> {
    Whole,
    Pieces(&'a [[Point; 3]]),
}
