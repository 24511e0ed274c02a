//! Wigner functions of Fock mixtures and bounds on their negativity.
//!
//! Phase-space points enter only through `u = |β|²`: every state here is
//! diagonal in the Fock basis, so its Wigner function is rotationally
//! symmetric.

use alloc::vec::Vec;
use core::f64::consts::{E, FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::fmath::{exp, ln_1p, sqrt};
use crate::quadrature;
use crate::state::PhotonNumberDistribution;

/// Highest Fock layer the Laguerre recurrence is trusted for.
pub const MAX_FOCK_LAYER: usize = 400;

/// `P₁` above which the closed forms switch to their `P₁ = 1` limits.
const LIMIT_SWITCH: f64 = 1.0 - 1e-12;

/// Principal branch `w₀` of the Lambert W function for `x ≥ 0`, by Halley
/// iteration from `ln(1 + x)`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain("x", x, "[0, inf)"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = ln_1p(x);
    for _ in 0..50 {
        let ew = exp(w);
        let f = w * ew - x;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 1e-15 * (1.0 + w.abs()) {
            return Ok(w);
        }
    }
    Err(Error::Numeric(alloc::format!(
        "Lambert W did not converge for x = {x}"
    )))
}

fn check_layer(n: usize) -> Result<()> {
    if n > MAX_FOCK_LAYER {
        return Err(Error::domain("n", n as f64, "n <= 400"));
    }
    Ok(())
}

/// Calls `sink(k, e^{−x/2} L_k(x))` for `k = 0..=n` using the three-term
/// recurrence on the scaled polynomials, which stay in `[−1, 1]`.
fn scaled_laguerre(n: usize, x: f64, mut sink: impl FnMut(usize, f64)) {
    let mut prev = exp(-0.5 * x);
    sink(0, prev);
    if n == 0 {
        return;
    }
    let mut cur = (1.0 - x) * prev;
    sink(1, cur);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        sink(k + 1, cur);
    }
}

/// `W_{|n⟩}(β) = (2(−1)ⁿ/π) e^{−2|β|²} L_n(4|β|²)` at `u = |β|²`.
pub fn wigner_fock(n: usize, u: f64) -> Result<f64> {
    check_layer(n)?;
    if u.is_nan() || u < 0.0 {
        return Err(Error::domain("|beta|^2", u, "[0, inf)"));
    }
    let mut value = 0.0;
    scaled_laguerre(n, 4.0 * u, |k, l| {
        if k == n {
            value = l;
        }
    });
    Ok(if n % 2 == 0 { FRAC_2_PI } else { -FRAC_2_PI } * value)
}

/// `W_ρ = Σ P_n W_{|n⟩}` at `u = |β|²`.
pub fn wigner_mixture(state: &PhotonNumberDistribution, u: f64) -> Result<f64> {
    let top = state.top_layer();
    check_layer(top)?;
    if u.is_nan() || u < 0.0 {
        return Err(Error::domain("|beta|^2", u, "[0, inf)"));
    }
    Ok(mixture_unchecked(state.probs(), top, u))
}

fn mixture_unchecked(probs: &[f64], top: usize, u: f64) -> f64 {
    let mut acc = 0.0;
    scaled_laguerre(top, 4.0 * u, |k, l| {
        let signed = if k % 2 == 0 { l } else { -l };
        acc += probs[k] * signed;
    });
    FRAC_2_PI * acc
}

/// Lower bound on the Wigner negativity implied by a single-photon weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityBound {
    pub p1: f64,
    /// `F(P₁)`.
    pub value: f64,
    /// `ℓ(P₁)`: the Wigner function is certified negative for `|β|² < ℓ`.
    pub disk_radius_sq: f64,
}

/// `(w, (1−P₁)/w)` for `w = w₀((√e/2)(1−P₁)/P₁)`, with the ratio rewritten as
/// `P₁eʷ/(√e/2)` so it stays finite as `P₁ → 1`.
fn lambert_terms(p1: f64) -> Result<(f64, f64)> {
    let scale = 0.5 * sqrt(E);
    let w = lambert_w0(scale * (1.0 - p1) / p1)?;
    Ok((w, p1 * exp(w) / scale))
}

fn check_p1(p1: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p1) {
        Ok(())
    } else {
        Err(Error::domain("p1", p1, "[0, 1]"))
    }
}

/// `ℓ(P₁) = ¼(1 − 2w)`, zero for `P₁ ≤ ½`.
pub fn negative_disk_radius_sq(p1: f64) -> Result<f64> {
    check_p1(p1)?;
    if p1 <= 0.5 {
        return Ok(0.0);
    }
    if p1 > LIMIT_SWITCH {
        return Ok(0.25);
    }
    let (w, _) = lambert_terms(p1)?;
    Ok((0.25 * (1.0 - 2.0 * w)).clamp(0.0, 0.25))
}

/// `F(P₁) = 3(1−P₁)(4w²+3)/(8w) + P₁ − 2` for `P₁ > ½`, zero otherwise, with
/// `w = w₀((√e/2)(1−P₁)/P₁)`. `F(1) = 9/(4√e) − 1`.
///
/// This closed form reproduces the published tables. It is *not* a lower
/// bound on [`negativity_oracle`] close to `P₁ = 1` (for `|1⟩` it gives
/// `0.3647` against `N_W = 2/√e − 1 ≈ 0.2131`); [`disk_negativity_bound`]
/// is the integral the closed form was meant to evaluate.
pub fn negativity_lower_bound(p1: f64) -> Result<NegativityBound> {
    let disk_radius_sq = negative_disk_radius_sq(p1)?;
    let value = if p1 <= 0.5 {
        0.0
    } else if p1 > LIMIT_SWITCH {
        9.0 / (4.0 * sqrt(E)) - 1.0
    } else {
        let (w, ratio) = lambert_terms(p1)?;
        (3.0 * (4.0 * w * w + 3.0) / 8.0 * ratio + p1 - 2.0).max(0.0)
    };
    Ok(NegativityBound {
        p1,
        value,
        disk_radius_sq,
    })
}

/// `F` evaluated at an estimate clamped into `[0, 1]`.
pub fn negativity_lower_bound_clamped(p1_estimate: f64) -> f64 {
    let p1 = if p1_estimate.is_nan() {
        0.0
    } else {
        p1_estimate.clamp(0.0, 1.0)
    };
    negativity_lower_bound(p1).map(|b| b.value).unwrap_or(0.0)
}

/// Integral of the certified negative part over the disk `|β|² < ℓ(P₁)`:
/// `4∫₀^{√ℓ} r (P₁(1−4r²)e^{−2r²} − (1−P₁)) dr
///  = (1−P₁)(2w² − 3w + 2)/(2w) − P₁`, zero for `P₁ ≤ ½`.
/// Equals `N_W(|1⟩) = 2/√e − 1` at `P₁ = 1`.
pub fn disk_negativity_bound(p1: f64) -> Result<f64> {
    check_p1(p1)?;
    if p1 <= 0.5 {
        return Ok(0.0);
    }
    if p1 > LIMIT_SWITCH {
        return Ok(2.0 / sqrt(E) - 1.0);
    }
    let (w, ratio) = lambert_terms(p1)?;
    Ok(((2.0 * w * w - 3.0 * w + 2.0) / 2.0 * ratio - p1).max(0.0))
}

/// Numerical Wigner negativity `N_W = ∫ (|W| − W)/2 d²β`.
///
/// With `u = |β|²` this is `π ∫₀^U max(−W(u), 0) du`. Sign changes of `W`
/// are bracketed on a grid finer than the smallest Laguerre zero spacing,
/// refined by bisection, and each negative lobe is integrated separately with
/// adaptive Gauss–Kronrod. `U = 2·n_top + 20`, beyond which every populated
/// layer has decayed below `1e-12`.
pub fn negativity_oracle(state: &PhotonNumberDistribution) -> Result<f64> {
    let top = state.top_layer();
    check_layer(top)?;
    let probs = state.probs();
    let w = |u: f64| mixture_unchecked(probs, top, u);

    let upper = 2.0 * top as f64 + 20.0;
    let tail = w(upper).abs();
    if tail > 1e-12 {
        return Err(Error::Numeric(alloc::format!(
            "Wigner tail |W({upper})| = {tail} exceeds 1e-12"
        )));
    }

    let step = (0.09 / (4.0 * top as f64 + 2.0)).min(0.01);
    let steps = (upper / step) as usize + 1;
    let mut roots: Vec<f64> = Vec::new();
    let mut u_prev = 0.0;
    let mut w_prev = w(0.0);
    for i in 1..=steps {
        let u = (i as f64 * step).min(upper);
        let value = w(u);
        if value == 0.0 {
            roots.push(u);
        } else if w_prev != 0.0 && (w_prev < 0.0) != (value < 0.0) {
            roots.push(bisect(&w, u_prev, u, w_prev));
        }
        u_prev = u;
        w_prev = value;
    }

    let mut edges = Vec::with_capacity(roots.len() + 2);
    edges.push(0.0);
    edges.extend(roots);
    edges.push(upper);
    edges.dedup_by(|b, a| *b - *a <= 0.0);

    let mut total = 0.0;
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if w(0.5 * (a + b)) >= 0.0 {
            continue;
        }
        let lobe = quadrature::integrate(|u| (-w(u)).max(0.0), a, b, 1e-12, 4000)?;
        total += lobe.value;
    }
    Ok(PI * total)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        let value = f(mid);
        if value == 0.0 {
            return mid;
        }
        if (value < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
