//! Algebraic Futaki invariants from weight asymptotics.
//!
//! A one-parameter degeneration acts on the section spaces H^0(L^k) through
//! matrices A_k whose trace grows like a polynomial in k; the leading data
//! of that growth (together with the dimension growth d_k) determines the
//! Futaki invariant, and pairwise trace products determine an inner product
//! on commuting actions.  This crate computes those invariants exactly:
//! from caller-supplied asymptotic coefficients, from brute-force weight
//! sums on a family of geometrically ruled surfaces over a genus-2 curve,
//! from closed forms with certified sign-change thresholds, and from
//! intersection numbers via degeneration to the normal cone.  It also
//! evaluates the resulting lower bounds for the Calabi functional.
//!
//! Everything except the float preview fields is exact rational arithmetic
//! on top of the `exact-geometry` kernel.

pub mod asymptotics;
pub mod calabi;
pub mod normal_cone;
pub mod ruled;

pub use asymptotics::{futaki_and_products, CrossLeading, FutakiProducts, WeightAsymptotics};
pub use calabi::{calabi_lower_bound, CalabiBound};
pub use normal_cone::{normal_cone_futaki, ruled_surface_divisor_data, SurfaceDivisorData};
pub use ruled::{
    instability_thresholds, ruled_bruteforce_tables, ruled_futaki_report, ruled_relative_futaki,
    ruled_symbolic_asymptotics, tables_to_asymptotics, NondegeneracyReport, RuledAsymptotics,
    RuledFutakiReport, RuledMode, RuledTableRow, RuledWeightTables, ThresholdReport,
};

use exact_geometry::GeometryError;
use thiserror::Error;

/// Error type shared by all operations in this crate.
#[derive(Debug, Error)]
pub enum FutakiError {
    #[error("dimension growth must have positive leading coefficient, got {0}")]
    NonPositiveDimensionLead(String),
    #[error("actions live on different spaces: dimension data {0} vs {1} disagree")]
    InconsistentActions(String, String),
    #[error("inner products requested but cross trace leading terms are missing")]
    MissingCrossTerms,
    #[error("torus generator has zero norm; relative invariant undefined")]
    DegenerateTorus,
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("k = {k} does not make mk and ck integral; no weight table at this level")]
    NonIntegralBlockCount { k: u64 },
    #[error("need at least {want} table rows to determine the growth polynomials, got {got}")]
    InsufficientSamples { got: usize, want: usize },
    #[error("{series} table deviates from polynomial growth at k = {k}")]
    FitResidual { series: &'static str, k: u64 },
    #[error("polarization self-intersection must be positive")]
    NonPositivePolarization,
    #[error("lower bound is vacuous: invariant is nonnegative")]
    VacuousBound,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, FutakiError>;
