//! Momentum profiles for extremal Kähler metrics on ruled surfaces.
//!
//! A metric on the projectivised bundle over a genus-two curve that is
//! invariant under the fibrewise circle action is encoded by a single
//! profile function φ(τ) on the momentum interval [0, m]: the metric is
//! smooth where φ > 0, and the boundary behaviour of φ decides whether the
//! corresponding end carries a divisor (φ' = ±2) or an infinitely distant
//! complete end (φ' = 0). Extremal metrics — critical points of the Calabi
//! energy — have affine scalar curvature, which turns the fourth-order
//! equation into an exactly solvable quartic problem for (1+τ)φ.
//!
//! The crate computes these profiles in rational arithmetic: the closed
//! forms for every boundary class, Sturm positivity certificates with the
//! two threshold parameters where positivity fails, the glued degenerate
//! minimizers that realise the Calabi infimum beyond the threshold, and
//! the exact pairing identity connecting the curvature integral with the
//! interval Futaki invariant of the fibration weights.

mod algebraic;
mod glue;
mod profile;

use exact_geometry::GeometryError;
use thiserror::Error;
use toric_stability::StabilityError;

pub use algebraic::{complete_threshold_poly, precision_digits, smooth_threshold_poly};
pub use glue::{
    calabi_norm, glue_calabi_minimizer, infimum_report, optimal_test_function,
    ruled_fibration_weights, sample_profile, verify_futaki_identity, CalabiNorm,
    FutakiIdentityReport, GluedProfile, GluedSegment, InfimumReport, JunctionReport,
    ProfileSample, SegmentKind, NORM_SCALE_SQ,
};
pub use profile::{
    closed_form_profile, positivity_certificate, scalar_curvature, solve_extremal, BoundaryClass,
    MomentumProfile, PositivityCertificate, ProfileMode, ScalarCurve, ScalarSegment,
};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("the polarization m = {m} is below the instability threshold {threshold}: the extremal metric exists and no glued minimizer is needed")]
    StablePolarization { m: f64, threshold: f64 },
    #[error("test function creases at τ = {at} where the profile is positive")]
    CreaseOnPositiveProfile { at: f64 },
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("stability error: {0}")]
    Stability(#[from] StabilityError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;
