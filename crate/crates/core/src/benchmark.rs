//! Lower bounds on the single-photon weight `P₁` from click probabilities.
//!
//! * [`p1_hat`]: no assumption on the apparatus; certifies the loss-degraded
//!   state actually hitting the beamsplitter.
//! * [`p1_hat_star`]: uses declared bounds on the splitting ratio and the
//!   detector efficiencies to certify the state before detection losses.
//! * [`multimode_p1_tilde`]: for product states over several modes; certifies
//!   the best mode.

use crate::detection::{ApparatusParams, ClickProbabilities};
use crate::error::{Error, Result};
use crate::fmath::{floor, ln, powf, powi};

/// Per-inequality tolerance of [`polytope_contains`].
pub const POLYTOPE_TOL: f64 = 1e-12;

/// `P̂₁ᵀ = 4p_∘• + p_∘∘ − 1` (equivalently `4p_∘_ − 3p_∘∘ − 1`).
pub fn p1_hat_t(p: &ClickProbabilities) -> f64 {
    4.0 * p.p_ob + p.p_oo - 1.0
}

/// `P̂₁ᴿ = 4p_•∘ + p_∘∘ − 1`.
pub fn p1_hat_r(p: &ClickProbabilities) -> f64 {
    4.0 * p.p_bo + p.p_oo - 1.0
}

/// `P̂₁ = min(P̂₁ᵀ, P̂₁ᴿ)`, valid whatever the splitting ratio and detector
/// efficiencies.
pub fn p1_hat(p: &ClickProbabilities) -> f64 {
    p1_hat_t(p).min(p1_hat_r(p))
}

/// Point `(min(p_∘_, p__∘), p_∘∘)` of the benchmark plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytopePoint {
    pub x: f64,
    pub y: f64,
}

impl PolytopePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_probabilities(p: &ClickProbabilities) -> Self {
        Self {
            x: p.no_click_reflected().min(p.no_click_transmitted()),
            y: p.p_oo,
        }
    }
}

/// Vertices of the region reachable by states with `P₁ ≤ P`:
/// `(0,0)`, `((1+P)/4, 0)`, `((2−P)/2, 1−P)`, `(1,1)`.
pub fn polytope_vertices(p_max: f64) -> Result<[PolytopePoint; 4]> {
    check_unit("P", p_max)?;
    Ok([
        PolytopePoint::new(0.0, 0.0),
        PolytopePoint::new((1.0 + p_max) / 4.0, 0.0),
        PolytopePoint::new((2.0 - p_max) / 2.0, 1.0 - p_max),
        PolytopePoint::new(1.0, 1.0),
    ])
}

/// Half-space membership test for the polytope of [`polytope_vertices`];
/// the boundary counts as inside.
pub fn polytope_contains(p_max: f64, pt: PolytopePoint) -> Result<bool> {
    check_unit("P", p_max)?;
    let PolytopePoint { x, y } = pt;
    Ok(y >= -POLYTOPE_TOL
        && y - x <= POLYTOPE_TOL
        && x - (1.0 + y) / 2.0 <= POLYTOPE_TOL
        && 4.0 * x - 3.0 * y - 1.0 - p_max <= POLYTOPE_TOL)
}

/// Declared apparatus knowledge: `η_T ≤ η̂_T`, `η_R ≤ η̂_R`, `r ∈ [1−t̂, r̂]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApparatusBounds {
    pub t_hat: f64,
    pub r_hat: f64,
    pub eta_t_hat: f64,
    pub eta_r_hat: f64,
}

impl ApparatusBounds {
    pub fn new(t_hat: f64, r_hat: f64, eta_t_hat: f64, eta_r_hat: f64) -> Result<Self> {
        let bounds = Self {
            t_hat,
            r_hat,
            eta_t_hat,
            eta_r_hat,
        };
        bounds.validate()?;
        Ok(bounds)
    }

    /// Bounds that pin the apparatus exactly.
    pub fn exact(params: &ApparatusParams) -> Result<Self> {
        Self::new(params.t, params.r, params.eta_t, params.eta_r)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("t_hat", self.t_hat),
            ("r_hat", self.r_hat),
            ("eta_T_hat", self.eta_t_hat),
            ("eta_R_hat", self.eta_r_hat),
        ];
        for (name, value) in fields {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::domain(name, value, "(0, 1]"));
            }
            if value == 0.0 {
                return Err(Error::DegenerateBounds(name));
            }
        }
        if 1.0 - self.t_hat > self.r_hat + 1e-12 {
            return Err(Error::domain("r_hat", self.r_hat, "[1 - t_hat, 1]"));
        }
        if self.t_hat >= 1.0 || self.r_hat >= 1.0 {
            return Err(Error::DegenerateBounds("t_hat and r_hat must be below 1"));
        }
        Ok(())
    }

    /// The bounds seen with the two arms exchanged.
    pub fn swap_arms(&self) -> Self {
        Self {
            t_hat: self.r_hat,
            r_hat: self.t_hat,
            eta_t_hat: self.eta_r_hat,
            eta_r_hat: self.eta_t_hat,
        }
    }

    /// `(C₁, C₂)` of the transmitted-arm bound.
    pub fn coefficients_t(&self) -> Result<(f64, f64)> {
        self.validate()?;
        Ok((
            c1(self.t_hat, self.eta_t_hat)?,
            c2(self.t_hat, self.eta_t_hat, self.eta_r_hat)?,
        ))
    }

    /// `(C₁, C₂)` of the reflected-arm bound.
    pub fn coefficients_r(&self) -> Result<(f64, f64)> {
        self.swap_arms().coefficients_t()
    }
}

/// `C₁(x, η) = 1/(ηx)`.
pub fn c1(x: f64, eta: f64) -> Result<f64> {
    let gain = x * eta;
    if gain.is_nan() || gain <= 0.0 {
        return Err(Error::DegenerateBounds("C1 needs x·eta > 0"));
    }
    Ok(1.0 / gain)
}

/// `C₂(x, η₁, η₂) = (1/(xη₁))·((2 − xη₁)/(2(1−x)η₂) − 1)`.
pub fn c2(x: f64, eta1: f64, eta2: f64) -> Result<f64> {
    let gain = x * eta1;
    let other = (1.0 - x) * eta2;
    if gain.is_nan() || other.is_nan() || gain <= 0.0 || other <= 0.0 {
        return Err(Error::DegenerateBounds(
            "C2 needs x·eta1 > 0 and (1-x)·eta2 > 0",
        ));
    }
    Ok(((2.0 - gain) / (2.0 * other) - 1.0) / gain)
}

/// Apparatus-dependent bound from the transmitted arm:
/// `P̂₁ᵀ* = C₁(t̂, η̂_T)·p_∘• − C₂(t̂, η̂_T, η̂_R)·p_••`.
///
/// Sound when the detector efficiencies equal their declared values and
/// `r ∈ [1−t̂, r̂]`. An efficiency *below* its declared value is not covered:
/// for `|2⟩` with `t = r = ½`, `η_T = 0.88`, `η_R = 0.5` and bounds
/// `(0.51, 0.50, 0.88, 0.95)` the statistic evaluates to about `0.71`.
pub fn p1_hat_star_t(p: &ClickProbabilities, bounds: &ApparatusBounds) -> Result<f64> {
    let (c1, c2) = bounds.coefficients_t()?;
    Ok(c1 * p.p_ob - c2 * p.p_bb)
}

/// `P̂₁ᴿ* = C₁(r̂, η̂_R)·p_•∘ − C₂(r̂, η̂_R, η̂_T)·p_••`.
pub fn p1_hat_star_r(p: &ClickProbabilities, bounds: &ApparatusBounds) -> Result<f64> {
    p1_hat_star_t(&p.swap_arms(), &bounds.swap_arms())
}

/// `P̂₁* = max(P̂₁ᵀ*, P̂₁ᴿ*)`, unclamped. See [`StarBenchmark`] for the
/// clamped value.
pub fn p1_hat_star(p: &ClickProbabilities, bounds: &ApparatusBounds) -> Result<f64> {
    Ok(p1_hat_star_t(p, bounds)?.max(p1_hat_star_r(p, bounds)?))
}

/// Both arms of the apparatus-dependent bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarBenchmark {
    pub t: f64,
    pub r: f64,
    /// `max(t, r)`, may exceed 1 for statistically fluctuating data.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub clamped: f64,
}

pub fn star_benchmark(p: &ClickProbabilities, bounds: &ApparatusBounds) -> Result<StarBenchmark> {
    let t = p1_hat_star_t(p, bounds)?;
    let r = p1_hat_star_r(p, bounds)?;
    let raw = t.max(r);
    Ok(StarBenchmark {
        t,
        r,
        raw,
        clamped: raw.min(1.0),
    })
}

/// Click probabilities of `|n⟩`: `(f_n, h_n, g_n) = (p_∘•, p_•∘, p_••)`.
pub fn fn_hn_gn(n: usize, params: &ApparatusParams) -> Result<(f64, f64, f64)> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "n >= 1"));
    }
    let x = params.t * params.eta_t;
    let y = params.r * params.eta_r;
    let neither = powi(1.0 - x - y, n);
    let r_silent = powi(1.0 - y, n);
    let t_silent = powi(1.0 - x, n);
    Ok((
        r_silent - neither,
        t_silent - neither,
        1.0 + neither - r_silent - t_silent,
    ))
}

/// Multimode bound from the transmitted arm: `P̃₁ᵀ = (12p_∘_ − 9p_∘∘ − 4)/2`.
pub fn multimode_p1_tilde_t(p: &ClickProbabilities) -> f64 {
    (12.0 * p.no_click_reflected() - 9.0 * p.p_oo - 4.0) / 2.0
}

pub fn multimode_p1_tilde_r(p: &ClickProbabilities) -> f64 {
    (12.0 * p.no_click_transmitted() - 9.0 * p.p_oo - 4.0) / 2.0
}

/// `P̃₁ = min(P̃₁ᵀ, P̃₁ᴿ)`, a lower bound on `max_k P₁^[k]` for product
/// states. For correlated multimode states it only bounds the branch-averaged
/// best mode, which need not be one filterable mode.
pub fn multimode_p1_tilde(p: &ClickProbabilities) -> f64 {
    multimode_p1_tilde_t(p).min(multimode_p1_tilde_r(p))
}

/// `P̂₁ᵀ(n) = 4((2−P)/2)ⁿ − 3(1−P)ⁿ − 1`, the transmitted-arm benchmark at the
/// `n`-fold product of the vertex `((2−P)/2, 1−P)`. `n` may be fractional.
pub fn envelope_vertex_value(p_max: f64, n: f64) -> f64 {
    4.0 * powf((2.0 - p_max) / 2.0, n) - 3.0 * powf(1.0 - p_max, n) - 1.0
}

/// Stationary point `n* = ln(3 ln Y / (4 ln X)) / (ln X − ln Y)` of
/// [`envelope_vertex_value`], with `X = (2−P)/2`, `Y = 1−P`.
pub fn envelope_stationary_point(p_max: f64) -> Result<f64> {
    if !(p_max > 0.0 && p_max < 1.0) {
        return Err(Error::domain("P", p_max, "(0, 1)"));
    }
    let ln_x = ln((2.0 - p_max) / 2.0);
    let ln_y = ln(1.0 - p_max);
    Ok(ln(3.0 * ln_y / (4.0 * ln_x)) / (ln_x - ln_y))
}

/// `P̂₁^{T↑}(P)`: the largest value `P̂₁ᵀ` takes over all products of modes
/// with `P₁ ≤ P` each. Evaluated at the integers around `n*` and at `n = 1`.
/// The endpoints use their limits, `1/3` at `P = 0` and `1` at `P = 1`.
pub fn multimode_envelope(p_max: f64) -> Result<f64> {
    check_unit("P", p_max)?;
    if p_max == 0.0 {
        return Ok(1.0 / 3.0);
    }
    if p_max == 1.0 {
        return Ok(1.0);
    }
    let n_star = envelope_stationary_point(p_max)?;
    let lower = floor(n_star).max(1.0);
    let upper = floor(n_star + 1.0).max(1.0);
    Ok([1.0, lower, upper]
        .iter()
        .map(|&n| envelope_vertex_value(p_max, n))
        .fold(f64::NEG_INFINITY, f64::max))
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(name, value, "[0, 1]"))
    }
}
