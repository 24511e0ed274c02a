#![allow(dead_code)]

use photon_certify_core::detection::ApparatusParams;
use photon_certify_core::PhotonNumberDistribution;
use proptest::prelude::*;

/// Normalizes non-negative weights; all-zero input becomes vacuum.
pub fn normalized(weights: Vec<f64>) -> PhotonNumberDistribution {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return PhotonNumberDistribution::vacuum();
    }
    PhotonNumberDistribution::new(weights.iter().map(|w| w / total).collect()).unwrap()
}

/// Arbitrary distribution over `0..=max_n`, sparse supports included.
pub fn state(max_n: usize) -> impl Strategy<Value = PhotonNumberDistribution> {
    prop::collection::vec(prop_oneof![2 => 0.0..1.0, 1 => Just(0.0)], 1..=max_n + 1)
        .prop_map(normalized)
}

/// Distribution with `P₁` drawn from `p1`, rest spread over the other layers.
pub fn state_with_p1(
    p1: std::ops::RangeInclusive<f64>,
    max_n: usize,
) -> impl Strategy<Value = PhotonNumberDistribution> {
    (p1, prop::collection::vec(0.0..1.0, max_n)).prop_map(|(p1, rest)| {
        let total: f64 = rest.iter().sum();
        let mut probs = Vec::with_capacity(rest.len() + 1);
        for (k, w) in rest.iter().enumerate() {
            let share = if total > 0.0 {
                (1.0 - p1) * w / total
            } else {
                0.0
            };
            if k == 1 {
                probs.push(p1);
            }
            probs.push(share);
        }
        if total <= 0.0 {
            probs[0] += 1.0 - p1;
        }
        PhotonNumberDistribution::new(probs).unwrap()
    })
}

/// Any apparatus with a nonzero overall efficiency.
pub fn apparatus() -> impl Strategy<Value = ApparatusParams> {
    (0.0..=1.0, 0.01..=1.0, 0.01..=1.0)
        .prop_map(|(t, eta_t, eta_r)| ApparatusParams::new(t, eta_t, eta_r).unwrap())
}
