//! Photon-number distributions and the pure-loss channel.
//!
//! States are diagonal in the Fock basis: every bound in this crate depends on
//! the populations `P_n = ⟨n|ρ|n⟩` only, so coherences are never represented.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default Fock-space truncation.
pub const DEFAULT_N_MAX: usize = 64;

/// Tolerance on `Σ P_n = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Probability vector `probs[n] = P_n` over Fock layers `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonNumberDistribution {
    probs: Vec<f64>,
    truncation_tail: f64,
}

impl PhotonNumberDistribution {
    /// Validates and wraps a probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty probability vector".into()));
        }
        if let Some((n, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::InvalidState(format!("P_{n} = {p} is not in [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            probs,
            truncation_tail: 0.0,
        })
    }

    /// Like [`new`](Self::new), but drops layers above `n_max` and records
    /// their mass in [`truncation_tail`](Self::truncation_tail). The kept
    /// layers must still be normalized within tolerance.
    pub fn with_truncation(mut probs: Vec<f64>, n_max: usize) -> Result<Self> {
        let mut tail = 0.0;
        if probs.len() > n_max + 1 {
            tail = probs[n_max + 1..].iter().sum();
            probs.truncate(n_max + 1);
        }
        let mut state = Self::new(probs)?;
        state.truncation_tail = tail;
        Ok(state)
    }

    /// The Fock state `|n⟩`.
    pub fn fock(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Self {
            probs,
            truncation_tail: 0.0,
        }
    }

    pub fn vacuum() -> Self {
        Self::fock(0)
    }

    /// `|1⟩` sent through a loss channel of transmission `eta`.
    pub fn lossy_single_photon(eta: f64) -> Result<Self> {
        Self::fock(1).apply_loss(eta)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P_n`, zero above the truncation.
    pub fn p(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Highest populated Fock layer.
    pub fn top_layer(&self) -> usize {
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }

    /// Mass that was cut off above `n_max` when the state was built.
    pub fn truncation_tail(&self) -> f64 {
        self.truncation_tail
    }

    /// `P₁`.
    pub fn single_photon_weight(&self) -> f64 {
        self.p(1)
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain("lambda", lambda, "[0, 1]"));
        }
        let len = self.probs.len().max(other.probs.len());
        let probs = (0..len)
            .map(|n| lambda * self.p(n) + (1.0 - lambda) * other.p(n))
            .collect();
        Ok(Self {
            probs,
            truncation_tail: lambda * self.truncation_tail + (1.0 - lambda) * other.truncation_tail,
        })
    }

    /// Pure loss with transmission `eta`:
    /// `P_n(η) = Σ_{m≥n} C(m,n) ηⁿ (1−η)^{m−n} P_m`.
    ///
    /// Evaluated as the generating-function substitution `G(z) ↦ G(1−η+ηz)`
    /// with Horner's scheme; every step is a convex combination of
    /// non-negative numbers, so no cancellation occurs.
    pub fn apply_loss(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain("eta", eta, "[0, 1]"));
        }
        let lost = 1.0 - eta;
        let len = self.probs.len();
        let mut acc = vec![0.0; len];
        let mut degree = 0;
        acc[0] = self.probs[len - 1];
        for &p_m in self.probs[..len - 1].iter().rev() {
            // acc ← acc·(lost + eta·z) + p_m
            degree += 1;
            for k in (1..=degree).rev() {
                acc[k] = lost * acc[k] + eta * acc[k - 1];
            }
            acc[0] = lost * acc[0] + p_m;
        }
        Ok(Self {
            probs: acc,
            truncation_tail: self.truncation_tail,
        })
    }
}

/// Largest single-photon weight reachable by pure loss from
/// `P₁|1⟩⟨1| + (1−P₁)|2⟩⟨2|`:
/// `(2−P₁)²/(8(1−P₁))` for `P₁ ≤ 2/3`, otherwise `P₁` (no boost).
pub fn max_loss_boosted_p1(p1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::domain("p1", p1, "[0, 1]"));
    }
    if p1 <= 2.0 / 3.0 {
        let a = 2.0 - p1;
        Ok(a * a / (8.0 * (1.0 - p1)))
    } else {
        Ok(p1)
    }
}

/// Random distribution on `0..=n_max`, normalized i.i.d. exponential weights
/// (a flat Dirichlet draw). Deterministic in `seed`.
pub fn random_state(seed: u64, n_max: usize) -> PhotonNumberDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(&mut rng, n_max)
}

pub(crate) fn random_state_with<R: Rng>(rng: &mut R, n_max: usize) -> PhotonNumberDistribution {
    let mut probs: Vec<f64> = (0..=n_max)
        .map(|_| {
            let u: f64 = rng.random();
            -crate::fmath::ln_1p(-u)
        })
        .collect();
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return PhotonNumberDistribution::vacuum();
    }
    probs.iter_mut().for_each(|p| *p /= total);
    PhotonNumberDistribution {
        probs,
        truncation_tail: 0.0,
    }
}

/// Tensor product of independent single-mode distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeProductState {
    modes: Vec<PhotonNumberDistribution>,
}

impl MultimodeProductState {
    pub fn new(modes: Vec<PhotonNumberDistribution>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidState("multimode state without modes".into()));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[PhotonNumberDistribution] {
        &self.modes
    }

    /// `max_k P₁^[k]`.
    pub fn max_single_photon_weight(&self) -> f64 {
        self.modes
            .iter()
            .map(PhotonNumberDistribution::single_photon_weight)
            .fold(0.0, f64::max)
    }
}

impl From<PhotonNumberDistribution> for MultimodeProductState {
    fn from(mode: PhotonNumberDistribution) -> Self {
        Self { modes: vec![mode] }
    }
}
