//! Stability analysis for convex polygons carrying a lattice boundary
//! measure, in exact rational arithmetic.
//!
//! The central object is the linear functional
//!
//!   L(f) = ∫_∂P f dσ − a ∫_P f dμ,       a = σ(∂P) / μ(P),
//!
//! on convex piecewise-linear functions f, together with its weighted
//! relatives. The polygon is stable when L is nonnegative on the convex
//! cone and vanishes only on affine functions; the modules here certify
//! or refute that, locate the zero set of L among simple crease
//! functions, and split the polygon into polystable pieces along it.
//!
//! - [`functional`]: the functional itself, its weighted bundle variants
//!   over an interval or a polygon base, and L² projections.
//! - [`cone`]: exact linear programming over the discretised convex cone,
//!   plus sampling estimates for the stability ratio.
//! - [`crease`]: the zero set of L among creases (maxima of an affine
//!   function with zero) and the induced semistable decomposition.

use exact_geometry::{GeometryError, Rat};
use thiserror::Error;

pub mod cone;
pub mod crease;
pub mod functional;

pub use cone::{
    boundary_l2_constant_check, minimize_convex_cone, uniform_ratio_estimate,
    BoundaryConstantReport, ConeMinimum, RatioEstimate,
};
pub use crease::{
    crease_functional, find_zero_creases, semistable_decomposition, CreaseFamily, CreaseReport,
    DecompositionResult, Piece, PieceKind, SimplePL,
};
pub use functional::{
    bundle_coefficients, donaldson_functional, extremal_affine, interval_bundle_futaki,
    interval_bundle_futaki_relative, pl_product_integral, projected_norm_sq, toric_bundle_futaki,
    BundleInvariant, ExtremalAffine, Pl1,
};

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// The normalisation ∫_∂P f dσ = 1 cannot be met on the grid, e.g.
    /// because every edge scale vanishes.
    #[error("cone normalisation is infeasible at resolution {resolution}")]
    InfeasibleNormalization { resolution: u32 },
    /// A weight that must be positive on the domain is not.
    #[error("weight function is not strictly positive on the domain")]
    NonPositiveWeight,
    /// Positivity of a weight is only decided exactly for affine weights.
    #[error("cannot certify positivity of a degree-{degree} weight")]
    UnsupportedWeight { degree: usize },
    /// Every sampled test function was affine, so no ratio exists.
    #[error("all sampled functions were affine; ratio is undefined")]
    DegenerateSample,
    /// A destabilising test function was found; `value` is its
    /// (negative) functional value under the active normalisation.
    #[error("polygon is not semistable: witness value {value}")]
    NotSemistable { value: Rat },
    /// Two creases that should be disjoint cross inside the polygon.
    #[error("zero creases intersect; decomposition is not defined")]
    IntersectingCreases,
    /// An internal invariant failed; indicates a bug or an input outside
    /// the supported class (e.g. an irrational zero-set parameter).
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, StabilityError>;
