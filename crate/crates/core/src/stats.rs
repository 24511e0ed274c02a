//! Finite-statistics layer: Hoeffding one-sided confidence intervals on the
//! round-averaged single-photon weight `P̄₁`, the p-value of the
//! Wigner-positivity hypothesis, and confidence bounds on the averaged Wigner
//! negativity.
//!
//! Each benchmark is the expectation of a bounded per-round variable
//! ([`RoundVariable`]). Rounds may come from different states; Hoeffding's
//! inequality only needs independence given the sequence of states.

use crate::benchmark::ApparatusBounds;
use crate::detection::{ClickCounts, ClickProbabilities};
use crate::error::{Error, Result};
use crate::fmath::{ln, sqrt};
use crate::wigner::negativity_lower_bound_clamped;

/// Value taken by a per-round variable for each of the four outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundVariable {
    pub oo: f64,
    pub bo: f64,
    pub ob: f64,
    pub bb: f64,
}

impl RoundVariable {
    /// `X_T ∈ {3 (∘•), 0 (∘∘), −1 (•∘, ••)}`, `E(X_T) = P̂₁ᵀ`.
    pub const X_T: Self = Self {
        oo: 0.0,
        bo: -1.0,
        ob: 3.0,
        bb: -1.0,
    };

    /// `Y_T ∈ {4 (∘•), −½ (∘∘), −2 (•∘, ••)}`, `E(Y_T) = P̃₁ᵀ`.
    pub const Y_T: Self = Self {
        oo: -0.5,
        bo: -2.0,
        ob: 4.0,
        bb: -2.0,
    };

    /// `Z_T ∈ {C₁ (∘•), 0 (∘∘, •∘), −C₂ (••)}`, `E(Z_T) = P̂₁ᵀ*`.
    pub fn z_t(c1: f64, c2: f64) -> Self {
        Self {
            oo: 0.0,
            bo: 0.0,
            ob: c1,
            bb: -c2,
        }
    }

    /// The same variable with the detectors' roles exchanged.
    pub fn swap_arms(&self) -> Self {
        Self {
            bo: self.ob,
            ob: self.bo,
            ..*self
        }
    }

    /// `max − min` over the four outcomes.
    pub fn range(&self) -> f64 {
        let values = [self.oo, self.bo, self.ob, self.bb];
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    pub fn expectation(&self, p: &ClickProbabilities) -> f64 {
        self.oo * p.p_oo + self.bo * p.p_bo + self.ob * p.p_ob + self.bb * p.p_bb
    }

    /// Empirical mean over the recorded rounds.
    pub fn mean(&self, counts: &ClickCounts) -> Result<f64> {
        let n = nonzero(counts)?;
        Ok((self.oo * counts.n_oo as f64
            + self.bo * counts.n_bo as f64
            + self.ob * counts.n_ob as f64
            + self.bb * counts.n_bb as f64)
            / n)
    }
}

fn nonzero(counts: &ClickCounts) -> Result<f64> {
    match counts.n() {
        0 => Err(Error::EmptySample),
        n => Ok(n as f64),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "(0, 1)"))
    }
}

/// Hoeffding deviation `range·√(ln(1/α)/(2n))`.
pub fn hoeffding_penalty(range: f64, n: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(range * sqrt(ln(1.0 / alpha) / (2.0 * n as f64)))
}

/// `X̄_T = (3n_∘• − n_•∘ − n_••)/n`.
pub fn xbar_t(counts: &ClickCounts) -> Result<f64> {
    RoundVariable::X_T.mean(counts)
}

/// `X̄_R = (3n_•∘ − n_∘• − n_••)/n`.
pub fn xbar_r(counts: &ClickCounts) -> Result<f64> {
    RoundVariable::X_T.swap_arms().mean(counts)
}

/// `min(X̄_T, X̄_R) = (4·min(n_∘•, n_•∘) − n_∘• − n_•∘ − n_••)/n`.
pub fn min_xbar(counts: &ClickCounts) -> Result<f64> {
    let n = nonzero(counts)?;
    let single = counts.n_ob.min(counts.n_bo) as f64;
    Ok((4.0 * single - counts.n_ob as f64 - counts.n_bo as f64 - counts.n_bb as f64) / n)
}

/// `q̂_α = min(X̄_T, X̄_R) − √(16 ln(1/α)/(2n))`: with probability at least
/// `1 − α`, `q̂_α < P̄₁`.
pub fn q_alpha(counts: &ClickCounts, alpha: f64) -> Result<f64> {
    let penalty = hoeffding_penalty(RoundVariable::X_T.range(), counts.n(), alpha)?;
    Ok(min_xbar(counts)? - penalty)
}

/// `log₁₀` of the Wigner-positivity p-value; `0` when `min X̄ ≤ ½`.
pub fn log10_p_value_wigner(counts: &ClickCounts) -> Result<f64> {
    let q = min_xbar(counts)?;
    if q <= 0.5 {
        return Ok(0.0);
    }
    let excess = q - 0.5;
    let exponent = -2.0 * counts.n() as f64 * excess * excess / 16.0;
    Ok(exponent / core::f64::consts::LN_10)
}

/// `exp(−2n(min X̄ − ½)²/16)` for `min X̄ > ½`, otherwise `1`.
///
/// Underflows to `0.0` below about `1e-308`; see [`log10_p_value_wigner`].
pub fn p_value_wigner(counts: &ClickCounts) -> Result<f64> {
    let q = min_xbar(counts)?;
    if q <= 0.5 {
        return Ok(1.0);
    }
    let excess = q - 0.5;
    Ok(crate::fmath::exp(
        -2.0 * counts.n() as f64 * excess * excess / 16.0,
    ))
}

/// `n̂w_α = F(q̂_α)`, a one-sided bound on the averaged Wigner negativity
/// (`F` is convex and non-decreasing).
pub fn nw_alpha(counts: &ClickCounts, alpha: f64) -> Result<f64> {
    Ok(negativity_lower_bound_clamped(q_alpha(counts, alpha)?))
}

/// One arm of the apparatus-dependent interval:
/// `Z̄ − (C₁ + C₂)√(ln(1/α)/(2n))`.
fn q_alpha_star_arm(counts: &ClickCounts, alpha: f64, variable: RoundVariable) -> Result<f64> {
    let penalty = hoeffding_penalty(variable.range(), counts.n(), alpha)?;
    Ok(variable.mean(counts)? - penalty)
}

/// `q̂*_α = max(q̂^(1)*, q̂^(2)*)`.
pub fn q_alpha_star(counts: &ClickCounts, alpha: f64, bounds: &ApparatusBounds) -> Result<f64> {
    let (c1_t, c2_t) = bounds.coefficients_t()?;
    let (c1_r, c2_r) = bounds.coefficients_r()?;
    let t = q_alpha_star_arm(counts, alpha, RoundVariable::z_t(c1_t, c2_t))?;
    let r = q_alpha_star_arm(counts, alpha, RoundVariable::z_t(c1_r, c2_r).swap_arms())?;
    Ok(t.max(r))
}

pub fn nw_alpha_star(counts: &ClickCounts, alpha: f64, bounds: &ApparatusBounds) -> Result<f64> {
    Ok(negativity_lower_bound_clamped(q_alpha_star(
        counts, alpha, bounds,
    )?))
}

/// `min(Ȳ_T, Ȳ_R)`.
pub fn min_ybar(counts: &ClickCounts) -> Result<f64> {
    let t = RoundVariable::Y_T.mean(counts)?;
    let r = RoundVariable::Y_T.swap_arms().mean(counts)?;
    Ok(t.min(r))
}

/// `q̃_α = min(Ȳ_T, Ȳ_R) − √(36 ln(1/α)/(2n))`, a one-sided bound on the
/// round-averaged `max_k P₁^[k]` of multimode product states.
pub fn q_alpha_tilde(counts: &ClickCounts, alpha: f64) -> Result<f64> {
    let penalty = hoeffding_penalty(RoundVariable::Y_T.range(), counts.n(), alpha)?;
    Ok(min_ybar(counts)? - penalty)
}

/// Inputs of a finite-statistics analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceQuery {
    pub counts: ClickCounts,
    pub alpha: f64,
    pub bounds: Option<ApparatusBounds>,
}

impl ConfidenceQuery {
    pub fn new(counts: ClickCounts, alpha: f64, bounds: Option<ApparatusBounds>) -> Result<Self> {
        if counts.n() == 0 {
            return Err(Error::EmptySample);
        }
        check_alpha(alpha)?;
        if let Some(b) = &bounds {
            b.validate()?;
        }
        Ok(Self {
            counts,
            alpha,
            bounds,
        })
    }

    pub fn run(&self) -> Result<StatReport> {
        let counts = &self.counts;
        let (q_alpha_star, nw_alpha_star) = match &self.bounds {
            Some(bounds) => {
                let q = q_alpha_star(counts, self.alpha, bounds)?;
                (Some(q), Some(negativity_lower_bound_clamped(q)))
            }
            None => (None, None),
        };
        let q = q_alpha(counts, self.alpha)?;
        Ok(StatReport {
            min_xbar: min_xbar(counts)?,
            q_alpha: q,
            q_alpha_star,
            q_alpha_tilde: q_alpha_tilde(counts, self.alpha)?,
            p_value: p_value_wigner(counts)?,
            log10_p_value: log10_p_value_wigner(counts)?,
            nw_alpha: negativity_lower_bound_clamped(q),
            nw_alpha_star,
        })
    }
}

/// Confidence bounds and p-value for one dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatReport {
    pub min_xbar: f64,
    pub q_alpha: f64,
    pub q_alpha_star: Option<f64>,
    pub q_alpha_tilde: f64,
    pub p_value: f64,
    pub log10_p_value: f64,
    pub nw_alpha: f64,
    pub nw_alpha_star: Option<f64>,
}
