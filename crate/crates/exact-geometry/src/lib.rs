//! Exact rational plane geometry.
//!
//! Everything here is computed in arbitrary-precision rational arithmetic:
//! convex polygons carrying the lattice boundary measure dσ (density 1/‖ν‖
//! against Euclidean length, ν the primitive integer outward normal),
//! piecewise-linear functions on regular right-triangle grids, exact
//! integration of polynomial-weighted integrands, lattice-point sums with
//! two-term expansions, Sturm-sequence root isolation, and a small exact
//! simplex solver. Floating point appears only in display helpers.

pub mod bivariate;
pub mod grid;
pub mod integrate;
pub mod lattice;
pub mod lp;
pub mod poly;
pub mod polygon;
pub mod rational;
pub mod roots;

pub use rational::{rat, rat_int, Int, Rat};

use thiserror::Error;

/// Error type shared by all operations in this crate.
#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices are oriented clockwise; expected counter-clockwise")]
    ClockwiseOrientation,
    #[error("polygon is not strictly convex at vertex {0} (collinear or reflex)")]
    NotStrictlyConvex(usize),
    #[error("duplicate consecutive vertex at index {0}")]
    DuplicateVertex(usize),
    #[error("edge measure scale at index {0} is negative")]
    NegativeScale(usize),
    #[error("scale list length {got} does not match edge count {want}")]
    ScaleArity { got: usize, want: usize },
    #[error("weight degree {got} exceeds the exact-formula bound {bound}")]
    UnsupportedDegree { got: usize, bound: usize },
    #[error("grid resolution must be positive")]
    ZeroResolution,
    #[error("value vector length {got} does not match grid node count {want}")]
    ValueArity { got: usize, want: usize },
    #[error("polygon has non-integral vertices; lattice expansion requires a lattice polygon")]
    NotLatticePolygon,
    #[error("need at least {want} sample points for a degree-{degree} fit, got {got}")]
    InsufficientSamples { got: usize, want: usize, degree: usize },
    #[error("exact fit has nonzero residual at k = {0}; counting function is not polynomial of the expected degree")]
    FitResidual(u32),
    #[error("cannot isolate roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid interval: left endpoint must be below right")]
    BadInterval,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("linear program is unbounded")]
    LpUnbounded,
}

pub type Result<T> = std::result::Result<T, GeometryError>;
