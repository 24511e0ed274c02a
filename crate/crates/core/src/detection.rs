//! Forward model of the auto-correlation apparatus: a beamsplitter with
//! transmittance `t` and reflectance `r` followed by two click/no-click
//! detectors of efficiency `η_T` (transmitted arm) and `η_R` (reflected arm).
//!
//! Outcome labels follow the convention *reflected detector first*: `•∘`
//! means the reflected detector clicked and the transmitted one did not.

use alloc::format;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::fmath::powi;
use crate::state::{MultimodeProductState, PhotonNumberDistribution};

const PARAM_TOL: f64 = 1e-12;
const CLAMP_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApparatusParams {
    pub t: f64,
    pub r: f64,
    pub eta_t: f64,
    pub eta_r: f64,
}

impl ApparatusParams {
    /// Builds parameters with `r = 1 − t`.
    pub fn new(t: f64, eta_t: f64, eta_r: f64) -> Result<Self> {
        Self::with_reflectance(t, 1.0 - t, eta_t, eta_r)
    }

    pub fn with_reflectance(t: f64, r: f64, eta_t: f64, eta_r: f64) -> Result<Self> {
        for (name, value) in [("t", t), ("r", r), ("eta_T", eta_t), ("eta_R", eta_r)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidApparatus(format!(
                    "{name} = {value} is not in [0, 1]"
                )));
            }
        }
        if (t + r - 1.0).abs() > PARAM_TOL {
            return Err(Error::InvalidApparatus(format!("t + r = {} != 1", t + r)));
        }
        Ok(Self { t, r, eta_t, eta_r })
    }

    /// Balanced beamsplitter, unit efficiencies.
    pub fn ideal() -> Self {
        Self::balanced(1.0)
    }

    /// Balanced beamsplitter, both detectors with efficiency `eta`.
    ///
    /// # Panics
    ///
    /// If `eta` is outside `[0, 1]`.
    pub fn balanced(eta: f64) -> Self {
        Self::new(0.5, eta, eta).expect("efficiency outside [0, 1]")
    }

    /// The same apparatus with the roles of the two arms exchanged.
    pub fn swap_arms(&self) -> Self {
        Self {
            t: self.r,
            r: self.t,
            eta_t: self.eta_r,
            eta_r: self.eta_t,
        }
    }

    /// Probability that a photon reaches and triggers the transmitted detector.
    fn transmitted_gain(&self) -> f64 {
        self.t * self.eta_t
    }

    fn reflected_gain(&self) -> f64 {
        self.r * self.eta_r
    }
}

/// Common efficiency `η` plus an unbalanced beamsplitter `(t′, r′)` in front of
/// ideal detectors, producing the same statistics as the original apparatus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub eta: f64,
    pub t_eff: f64,
    pub r_eff: f64,
}

/// `η = tη_T + rη_R`, `t′ = tη_T/η`, `r′ = rη_R/η`.
pub fn effective_params(params: &ApparatusParams) -> Result<EffectiveParams> {
    let eta = params.transmitted_gain() + params.reflected_gain();
    if eta <= 0.0 {
        return Err(Error::DegenerateApparatus);
    }
    let t_eff = params.transmitted_gain() / eta;
    Ok(EffectiveParams {
        eta,
        t_eff,
        r_eff: 1.0 - t_eff,
    })
}

/// Outcome probabilities `(p_∘∘, p_•∘, p_∘•, p_••)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickProbabilities {
    pub p_oo: f64,
    pub p_bo: f64,
    pub p_ob: f64,
    pub p_bb: f64,
}

impl ClickProbabilities {
    pub fn new(p_oo: f64, p_bo: f64, p_ob: f64, p_bb: f64) -> Result<Self> {
        let p = Self {
            p_oo,
            p_bo,
            p_ob,
            p_bb,
        };
        if p.as_array().iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidProbabilities(format!(
                "{p:?} has an entry outside [0, 1]"
            )));
        }
        let total: f64 = p.as_array().iter().sum();
        if (total - 1.0).abs() > PARAM_TOL {
            return Err(Error::InvalidProbabilities(format!(
                "entries sum to {total}"
            )));
        }
        Ok(p)
    }

    /// Empirical frequencies.
    pub fn from_counts(counts: &ClickCounts) -> Result<Self> {
        let n = counts.n();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let n = n as f64;
        Ok(Self {
            p_oo: counts.n_oo as f64 / n,
            p_bo: counts.n_bo as f64 / n,
            p_ob: counts.n_ob as f64 / n,
            p_bb: counts.n_bb as f64 / n,
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p_oo, self.p_bo, self.p_ob, self.p_bb]
    }

    /// `p_∘_ = p_∘∘ + p_∘•`: the reflected detector stays silent.
    pub fn no_click_reflected(&self) -> f64 {
        self.p_oo + self.p_ob
    }

    /// `p__∘ = p_∘∘ + p_•∘`: the transmitted detector stays silent.
    pub fn no_click_transmitted(&self) -> f64 {
        self.p_oo + self.p_bo
    }

    /// Probabilities seen with the two arms exchanged.
    pub fn swap_arms(&self) -> Self {
        Self {
            p_oo: self.p_oo,
            p_bo: self.p_ob,
            p_ob: self.p_bo,
            p_bb: self.p_bb,
        }
    }
}

/// Outcome tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ClickCounts {
    pub n_oo: u64,
    pub n_bo: u64,
    pub n_ob: u64,
    pub n_bb: u64,
}

impl ClickCounts {
    pub fn new(n_oo: u64, n_bo: u64, n_ob: u64, n_bb: u64) -> Self {
        Self {
            n_oo,
            n_bo,
            n_ob,
            n_bb,
        }
    }

    /// Total number of rounds.
    pub fn n(&self) -> u64 {
        self.n_oo + self.n_bo + self.n_ob + self.n_bb
    }

    /// Tallies one round given which detectors clicked.
    pub fn record(&mut self, reflected_click: bool, transmitted_click: bool) {
        match (reflected_click, transmitted_click) {
            (false, false) => self.n_oo += 1,
            (true, false) => self.n_bo += 1,
            (false, true) => self.n_ob += 1,
            (true, true) => self.n_bb += 1,
        }
    }
}

fn clamp_round_off(value: f64, what: &str) -> f64 {
    if value >= 0.0 {
        value
    } else if value >= -CLAMP_TOL {
        0.0
    } else {
        panic!("internal error: {what} evaluated to {value}");
    }
}

/// Exact click statistics of a single-mode state.
///
/// The apparatus is first reduced to its effective form (loss `η`, then a
/// `t′/r′` splitter with ideal detectors) and the outcome POVM is evaluated
/// layer by layer:
///
/// ```text
/// p_∘∘ = Σ P_n (1−η)ⁿ
/// p_•∘ = Σ P_n [(1−ηt′)ⁿ − (1−η)ⁿ]
/// p_∘• = Σ P_n [(1−ηr′)ⁿ − (1−η)ⁿ]
/// p_•• = Σ P_n [1 − (1−ηt′)ⁿ − (1−ηr′)ⁿ + (1−η)ⁿ]
/// ```
pub fn click_probabilities(
    state: &PhotonNumberDistribution,
    params: &ApparatusParams,
) -> ClickProbabilities {
    // η = 0 never clicks; t′ is then irrelevant.
    let eff = effective_params(params).unwrap_or(EffectiveParams {
        eta: 0.0,
        t_eff: 0.5,
        r_eff: 0.5,
    });
    let silent_both = 1.0 - eff.eta;
    let silent_transmitted = 1.0 - eff.eta * eff.t_eff;
    let silent_reflected = 1.0 - eff.eta * eff.r_eff;

    let mut p = ClickProbabilities {
        p_oo: 0.0,
        p_bo: 0.0,
        p_ob: 0.0,
        p_bb: 0.0,
    };
    for (n, &weight) in state.probs().iter().enumerate() {
        if weight == 0.0 {
            continue;
        }
        let oo = powi(silent_both, n);
        let t_silent = powi(silent_transmitted, n);
        let r_silent = powi(silent_reflected, n);
        // both = P(T clicks) − P(T clicks, R silent)
        let both = clamp_round_off(
            (1.0 - t_silent) - (r_silent - oo),
            "double-click layer term",
        );
        p.p_oo += weight * oo;
        p.p_bo += weight * (t_silent - oo);
        p.p_ob += weight * (r_silent - oo);
        p.p_bb += weight * both;
    }
    p
}

/// Click statistics of a product of modes. A detector stays silent only if
/// no mode triggers it, so the three no-click marginals multiply.
pub fn click_probabilities_multimode(
    state: &MultimodeProductState,
    params: &ApparatusParams,
) -> ClickProbabilities {
    let (mut oo, mut r_silent, mut t_silent) = (1.0, 1.0, 1.0);
    for mode in state.modes() {
        let p = click_probabilities(mode, params);
        oo *= p.p_oo;
        r_silent *= p.no_click_reflected();
        t_silent *= p.no_click_transmitted();
    }
    ClickProbabilities {
        p_oo: oo,
        p_bo: clamp_round_off(t_silent - oo, "multimode p_bo"),
        p_ob: clamp_round_off(r_silent - oo, "multimode p_ob"),
        p_bb: clamp_round_off(1.0 - r_silent - t_silent + oo, "multimode p_bb"),
    }
}

/// Multinomial draw of `n` rounds from `p`, seeded with `seed`.
///
/// The generator is ChaCha8 seeded through `seed_from_u64`; outcomes are
/// drawn as successive conditional binomials in the order `∘∘, •∘, ∘•`.
pub fn sample_counts(p: &ClickProbabilities, n: u64, seed: u64) -> Result<ClickCounts> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_counts_with(p, n, &mut rng)
}

/// [`sample_counts`] with a caller-provided generator.
pub fn sample_counts_with<R: Rng + ?Sized>(
    p: &ClickProbabilities,
    n: u64,
    rng: &mut R,
) -> Result<ClickCounts> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut remaining = n;
    let mut mass_left = 1.0;
    let mut draws = [0_u64; 3];
    for (slot, &prob) in draws.iter_mut().zip(&[p.p_oo, p.p_bo, p.p_ob]) {
        if remaining == 0 {
            break;
        }
        let conditional = if mass_left > 0.0 {
            (prob / mass_left).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = Binomial::new(remaining, conditional)
            .map_err(|e| Error::Numeric(format!("binomial({remaining}, {conditional}): {e}")))?
            .sample(rng);
        *slot = k;
        remaining -= k;
        mass_left -= prob;
    }
    Ok(ClickCounts {
        n_oo: draws[0],
        n_bo: draws[1],
        n_ob: draws[2],
        n_bb: remaining,
    })
}
