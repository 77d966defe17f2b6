//! Weighted torus actions and their serialised form.

use exact_geometry::rational::{rat_int, Rat};
use num::Zero;

use crate::{Result, StabilityError};

/// A diagonalised torus action on projective space: integer weight
/// vectors for each coordinate, and a mask saying which coordinates of
/// the point under study are nonzero.  Weights need not be distinct; at
/// least one must be supported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAction {
    dimension: usize,
    weights: Vec<Vec<i64>>,
    support: Vec<bool>,
}

impl WeightedAction {
    pub fn new(dimension: usize, weights: Vec<Vec<i64>>, support: Vec<bool>) -> Result<Self> {
        if dimension == 0 {
            return Err(StabilityError::ZeroDimension);
        }
        if support.len() != weights.len() {
            return Err(StabilityError::Malformed(format!(
                "{} weights but {} support flags",
                weights.len(),
                support.len()
            )));
        }
        for w in &weights {
            if w.len() != dimension {
                return Err(StabilityError::DimensionMismatch {
                    expected: dimension,
                    got: w.len(),
                });
            }
        }
        if !support.iter().any(|&s| s) {
            return Err(StabilityError::EmptySupport);
        }
        Ok(Self { dimension, weights, support })
    }

    /// Action in which every coordinate is supported.
    pub fn all_supported(dimension: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        let support = vec![true; weights.len()];
        Self::new(dimension, weights, support)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn supported_count(&self) -> usize {
        self.support.iter().filter(|&&s| s).count()
    }

    /// Supported weights as exact rational vectors.
    pub(crate) fn supported_points(&self) -> Vec<Vec<Rat>> {
        self.weights
            .iter()
            .zip(&self.support)
            .filter(|(_, &s)| s)
            .map(|(w, _)| w.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    /// Supported weights as float vectors, for the moment-map side.
    pub(crate) fn supported_points_f64(&self) -> Vec<Vec<f64>> {
        self.weights
            .iter()
            .zip(&self.support)
            .filter(|(_, &s)| s)
            .map(|(w, _)| w.iter().map(|&x| x as f64).collect())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dimension": self.dimension,
            "weights": self.weights,
            "support": self.support,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| StabilityError::Malformed(msg.to_string());
        let dimension = v
            .get("dimension")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| bad("missing positive \"dimension\""))? as usize;
        let rows = v
            .get("weights")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing \"weights\" array"))?;
        let mut weights = Vec::with_capacity(rows.len());
        for row in rows {
            let entries = row
                .as_array()
                .ok_or_else(|| bad("each weight must be an array of integers"))?;
            let mut w = Vec::with_capacity(entries.len());
            for e in entries {
                w.push(
                    e.as_i64()
                        .ok_or_else(|| bad("weight entries must be integers"))?,
                );
            }
            weights.push(w);
        }
        let support = match v.get("support") {
            // Omitted support means every coordinate is supported.
            None => vec![true; weights.len()],
            Some(arr) => arr
                .as_array()
                .ok_or_else(|| bad("\"support\" must be an array of booleans"))?
                .iter()
                .map(|b| b.as_bool().ok_or_else(|| bad("support entries must be booleans")))
                .collect::<std::result::Result<Vec<bool>, StabilityError>>()?,
        };
        Self::new(dimension, weights, support)
    }
}

/// Diagonal-torus action on the coefficient space of a binary form.
///
/// For a form of degree n = coeffs.len() − 1 written on the monomials
/// x^{n-j} y^j, the subgroup diag(t, t^{-1}) scales the j-th coefficient
/// by t^{n-2j}; a coefficient is supported exactly when it is nonzero.
/// Classifying the resulting one-dimensional action reproduces the root
/// multiplicity dictionary for forms whose worst root sits at a
/// coordinate point: a root of multiplicity above n/2 leaves the weight
/// interval on one side of zero.
pub fn binary_form_action(coeffs: &[Rat]) -> Result<WeightedAction> {
    if coeffs.len() < 2 {
        return Err(StabilityError::Malformed(
            "binary form must have positive degree".into(),
        ));
    }
    let n = (coeffs.len() - 1) as i64;
    let weights = (0..coeffs.len()).map(|j| vec![n - 2 * j as i64]).collect();
    let support = coeffs.iter().map(|c| !c.is_zero()).collect();
    WeightedAction::new(1, weights, support)
}
