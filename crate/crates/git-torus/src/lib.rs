//! Torus actions on projective space, classified through their weight
//! polytopes.
//!
//! A diagonalised torus action on P(V) is described by the list of weight
//! vectors on a basis of V together with a support mask recording which
//! coordinates of a chosen point are nonzero.  The convex hull of the
//! supported weights decides everything: the point is semistable when the
//! hull contains the origin, polystable when the origin is in the relative
//! interior, and stable when the hull additionally spans the whole weight
//! space.  This crate keeps that hull geometry in exact rational
//! arithmetic (closest points, facet distances, interior margins), and
//! pairs it with floating-point machinery for the transcendental side:
//! moment-map evaluation, Kempf-Ness minimisation of the norm functional,
//! the eigenvalue bound for the moment-map derivative at a zero, and the
//! lower bound for inf ||mu||^2 on unstable orbits.

pub mod action;
pub mod classify;
pub mod hull;
pub mod moment;

pub use action::{binary_form_action, WeightedAction};
pub use classify::{
    classify_stability, extremal_direction, hm_weight, modulus_and_worst_direction,
    moment_lower_bound_check, MomentLowerBound, StabilityClass, StabilityReport,
};
pub use moment::{
    eigenvalue_bound_check, minimize_norm_functional, minimize_norm_functional_with_radius,
    moment_map, EigenvalueBound, KempfNessOutcome, DEFAULT_DIVERGENCE_RADIUS,
};

use exact_geometry::GeometryError;
use thiserror::Error;

/// Error type shared by all operations in this crate.
#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("weight space dimension must be positive")]
    ZeroDimension,
    #[error("action has no supported weight")]
    EmptySupport,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("operation requires a polystable action")]
    NotPolystable,
    #[error("every supported weight vanishes; the torus acts trivially")]
    TrivialAction,
    #[error("minimisation ran {iterations} iterations without a convergence or divergence certificate")]
    NonConvergence { iterations: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T> = std::result::Result<T, StabilityError>;
