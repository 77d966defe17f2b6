//! Futaki invariants and inner products from trace asymptotics.
//!
//! For a C*-action lifted to the section spaces H^0(L^k) with weight
//! matrices A_k, write
//!
//! ```text
//! d_k        = c0 k^n     + c1 k^{n-1} + O(k^{n-2})
//! Tr(A_k)    = a0 k^{n+1} + a1 k^n     + O(k^{n-1})
//! ```
//!
//! The Futaki invariant of the action is F = (c1 a0)/c0 - a1.  Given a
//! second commuting action with matrices B_k, the products
//! Tr(A_kB_k), Tr(A_k^2), Tr(B_k^2) grow at order k^{n+2} and their
//! leading coefficients induce the inner product
//!
//! ```text
//! <A, B> = lead Tr(A_kB_k) - a0 b0 / c0
//! ```
//!
//! which is the leading covariance of the weights and is independent of
//! how either action is lifted (a lift shifts A_k by k lambda I).

use crate::{FutakiError, Result};
use exact_geometry::poly::Poly;
use exact_geometry::rational::{format_rat, rat_int};
use exact_geometry::Rat;

/// Leading coefficients, at order k^{n+2}, of the pairwise trace products
/// of the action (A) with a distinguished commuting action (B).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossLeading {
    pub tr_ab: Rat,
    pub tr_aa: Rat,
    pub tr_bb: Rat,
}

/// Two-term asymptotics of dimension and weight growth for one action.
///
/// `cross` is present when the trace products against a companion action
/// are known; it is required for inner products and relative invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAsymptotics {
    /// Complex dimension of the variety: d_k grows like k^n.
    pub n: usize,
    pub c0: Rat,
    pub c1: Rat,
    pub a0: Rat,
    pub a1: Rat,
    pub cross: Option<CrossLeading>,
}

impl WeightAsymptotics {
    /// Extracts the two leading coefficients of each series from exact
    /// growth polynomials.  `dimension` must have degree exactly `n` with
    /// positive leading coefficient; `weight` must have degree at most n+1.
    pub fn from_polynomials(n: usize, dimension: &Poly, weight: &Poly) -> Result<Self> {
        if n == 0 {
            return Err(FutakiError::ParameterRange(
                "variety dimension must be at least 1".into(),
            ));
        }
        let c0 = dimension.coeff(n);
        if c0 <= rat_int(0) {
            return Err(FutakiError::NonPositiveDimensionLead(format_rat(&c0)));
        }
        if dimension.degree() != Some(n) {
            return Err(FutakiError::ParameterRange(format!(
                "dimension polynomial has degree {:?}, expected {n}",
                dimension.degree()
            )));
        }
        if weight.degree().is_some_and(|d| d > n + 1) {
            return Err(FutakiError::ParameterRange(format!(
                "weight polynomial has degree {:?}, expected at most {}",
                weight.degree(),
                n + 1
            )));
        }
        Ok(WeightAsymptotics {
            n,
            c0,
            c1: dimension.coeff(n - 1),
            a0: weight.coeff(n + 1),
            a1: weight.coeff(n),
            cross: None,
        })
    }

    /// The Futaki invariant (c1 a0)/c0 - a1 of this action.
    pub fn futaki(&self) -> Rat {
        &(&self.c1 * &self.a0) / &self.c0 - &self.a1
    }

    /// Replaces the lift of the action by A_k + lambda k I.
    ///
    /// The weight series shifts by lambda times the dimension series and
    /// the trace products shift accordingly; every invariant computed from
    /// the result is unchanged.  `companion` supplies b0 for the cross
    /// term; without it only the pure square is adjusted, so the stored
    /// `tr_ab` is then only meaningful relative to the old lift.
    pub fn lift(&self, lambda: &Rat, companion: Option<&WeightAsymptotics>) -> WeightAsymptotics {
        let cross = self.cross.as_ref().map(|c| CrossLeading {
            tr_ab: match companion {
                Some(b) => &c.tr_ab + lambda * &b.a0,
                None => c.tr_ab.clone(),
            },
            tr_aa: &c.tr_aa + rat_int(2) * lambda * &self.a0 + lambda * lambda * &self.c0,
            tr_bb: c.tr_bb.clone(),
        });
        WeightAsymptotics {
            n: self.n,
            c0: self.c0.clone(),
            c1: self.c1.clone(),
            a0: &self.a0 + lambda * &self.c0,
            a1: &self.a1 + lambda * &self.c1,
            cross,
        }
    }
}

/// Invariants and products of one action, optionally against a companion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FutakiProducts {
    pub futaki_alpha: Rat,
    pub futaki_beta: Option<Rat>,
    pub inner_alpha_beta: Option<Rat>,
    pub norm_alpha_sq: Option<Rat>,
    pub norm_beta_sq: Option<Rat>,
    /// F(alpha) - <alpha,beta>/<beta,beta> * F(beta): the invariant of
    /// alpha relative to the extremal direction generated by beta.
    pub relative_futaki: Option<Rat>,
}

impl FutakiProducts {
    /// Squared norm of the extremal generator chi = F(beta)/<beta,beta> beta,
    /// namely F(beta)^2 / <beta,beta>.
    pub fn extremal_norm_sq(&self) -> Option<Rat> {
        let fb = self.futaki_beta.as_ref()?;
        let nb = self.norm_beta_sq.as_ref()?;
        if *nb == rat_int(0) {
            return None;
        }
        Some(&(fb * fb) / nb)
    }
}

/// Computes F(alpha) and, when a companion action beta is supplied, the
/// inner products and the relative invariant F_chi(alpha).
///
/// The companion must share the dimension series (same n, c0, c1): both
/// actions act on the same section spaces.  Products require `alpha.cross`;
/// its `tr_ab`/`tr_bb` entries must refer to this companion.
pub fn futaki_and_products(
    alpha: &WeightAsymptotics,
    beta: Option<&WeightAsymptotics>,
) -> Result<FutakiProducts> {
    if alpha.c0 <= rat_int(0) {
        return Err(FutakiError::NonPositiveDimensionLead(format_rat(&alpha.c0)));
    }
    let norm_alpha_sq = alpha
        .cross
        .as_ref()
        .map(|c| &c.tr_aa - &(&alpha.a0 * &alpha.a0) / &alpha.c0);
    let mut products = FutakiProducts {
        futaki_alpha: alpha.futaki(),
        futaki_beta: None,
        inner_alpha_beta: None,
        norm_alpha_sq,
        norm_beta_sq: None,
        relative_futaki: None,
    };
    let Some(beta) = beta else {
        return Ok(products);
    };
    if beta.n != alpha.n || beta.c0 != alpha.c0 || beta.c1 != alpha.c1 {
        return Err(FutakiError::InconsistentActions(
            format!("(n={}, c0={}, c1={})", alpha.n, format_rat(&alpha.c0), format_rat(&alpha.c1)),
            format!("(n={}, c0={}, c1={})", beta.n, format_rat(&beta.c0), format_rat(&beta.c1)),
        ));
    }
    let cross = alpha.cross.as_ref().ok_or(FutakiError::MissingCrossTerms)?;
    let inner = &cross.tr_ab - &(&alpha.a0 * &beta.a0) / &alpha.c0;
    let norm_beta_sq = &cross.tr_bb - &(&beta.a0 * &beta.a0) / &alpha.c0;
    if norm_beta_sq == rat_int(0) {
        return Err(FutakiError::DegenerateTorus);
    }
    let futaki_beta = beta.futaki();
    products.relative_futaki =
        Some(&products.futaki_alpha - &(&(&inner / &norm_beta_sq) * &futaki_beta));
    products.futaki_beta = Some(futaki_beta);
    products.inner_alpha_beta = Some(inner);
    products.norm_beta_sq = Some(norm_beta_sq);
    Ok(products)
}
