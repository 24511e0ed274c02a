//! Certification report: point estimates from count frequencies plus the
//! finite-statistics bounds, with the inputs embedded for reproduction.

use std::fmt::Write as _;

use photon_certify_core::benchmark::{
    multimode_p1_tilde, multimode_p1_tilde_r, multimode_p1_tilde_t, p1_hat, p1_hat_r, p1_hat_t,
    star_benchmark, ApparatusBounds,
};
use photon_certify_core::detection::{ClickCounts, ClickProbabilities};
use photon_certify_core::stats::ConfidenceQuery;
use serde::Serialize;

use crate::error::CliResult;
use crate::formats::{BoundsFile, CountsFile};
use crate::json::{round_opt, round_sig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEstimates {
    #[serde(rename = "p1_hat_T")]
    pub p1_hat_t: f64,
    #[serde(rename = "p1_hat_R")]
    pub p1_hat_r: f64,
    pub p1_hat: f64,
    #[serde(rename = "p1_hat_star_T", skip_serializing_if = "Option::is_none")]
    pub p1_hat_star_t: Option<f64>,
    #[serde(rename = "p1_hat_star_R", skip_serializing_if = "Option::is_none")]
    pub p1_hat_star_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1_hat_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1_hat_star_clamped: Option<f64>,
    #[serde(rename = "p1_tilde_T")]
    pub p1_tilde_t: f64,
    #[serde(rename = "p1_tilde_R")]
    pub p1_tilde_r: f64,
    pub p1_tilde: f64,
    /// The multimode bound holds for the best mode of a product state; it
    /// does not identify a fixed mode across rounds.
    pub p1_tilde_mode_identity_certified: bool,
}

impl PointEstimates {
    pub fn from_counts(counts: &ClickCounts, bounds: Option<&ApparatusBounds>) -> CliResult<Self> {
        Self::from_probabilities(&ClickProbabilities::from_counts(counts)?, bounds)
    }

    pub fn from_probabilities(
        p: &ClickProbabilities,
        bounds: Option<&ApparatusBounds>,
    ) -> CliResult<Self> {
        let star = bounds.map(|b| star_benchmark(p, b)).transpose()?;
        Ok(Self {
            p1_hat_t: round_sig(p1_hat_t(p)),
            p1_hat_r: round_sig(p1_hat_r(p)),
            p1_hat: round_sig(p1_hat(p)),
            p1_hat_star_t: round_opt(star.map(|s| s.t)),
            p1_hat_star_r: round_opt(star.map(|s| s.r)),
            p1_hat_star: round_opt(star.map(|s| s.raw)),
            p1_hat_star_clamped: round_opt(star.map(|s| s.clamped)),
            p1_tilde_t: round_sig(multimode_p1_tilde_t(p)),
            p1_tilde_r: round_sig(multimode_p1_tilde_r(p)),
            p1_tilde: round_sig(multimode_p1_tilde(p)),
            p1_tilde_mode_identity_certified: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub n: u64,
    pub alpha: f64,
    pub min_xbar: f64,
    pub q_alpha: f64,
    pub nw_alpha: f64,
    /// May underflow to 0; see `log10_p_value`.
    pub p_value: f64,
    pub log10_p_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_alpha_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nw_alpha_star: Option<f64>,
    pub q_alpha_tilde: f64,
    pub point_estimates: PointEstimates,
    pub counts: CountsFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl CertificationReport {
    pub fn build(
        counts: ClickCounts,
        alpha: f64,
        bounds: Option<ApparatusBounds>,
        source: Option<String>,
    ) -> CliResult<Self> {
        let stats = ConfidenceQuery::new(counts, alpha, bounds)?.run()?;
        Ok(Self {
            n: counts.n(),
            alpha,
            min_xbar: round_sig(stats.min_xbar),
            q_alpha: round_sig(stats.q_alpha),
            nw_alpha: round_sig(stats.nw_alpha),
            p_value: round_sig(stats.p_value),
            log10_p_value: round_sig(stats.log10_p_value),
            q_alpha_star: round_opt(stats.q_alpha_star),
            nw_alpha_star: round_opt(stats.nw_alpha_star),
            q_alpha_tilde: round_sig(stats.q_alpha_tilde),
            point_estimates: PointEstimates::from_counts(&counts, bounds.as_ref())?,
            counts: counts.into(),
            bounds: bounds.map(Into::into),
            source,
        })
    }
}

/// `1.23e-45` style; falls back to the logarithm once `p_value` underflows.
fn format_p_value(r: &CertificationReport) -> String {
    if r.p_value > 0.0 {
        return format!("{:.3e}", r.p_value);
    }
    let exponent = r.log10_p_value.floor();
    let mantissa = 10f64.powf(r.log10_p_value - exponent);
    format!("{mantissa:.3}e{exponent}")
}

/// Aligned text table, one row per report, values to 3 decimals.
pub fn render_table(rows: &[(String, CertificationReport)]) -> String {
    let starred = rows.iter().any(|(_, r)| r.q_alpha_star.is_some());
    let mut header = vec![
        "dataset", "n", "P1_T", "P1_R", "q_alpha", "nw_alpha", "p-value",
    ];
    if starred {
        header.extend(["P1*", "q*_alpha", "nw*_alpha"]);
    }
    header.extend(["P1~", "q~_alpha"]);

    let dash = || "-".to_owned();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|(name, r)| {
            let pe = &r.point_estimates;
            let mut row = vec![
                name.clone(),
                r.n.to_string(),
                format!("{:.3}", pe.p1_hat_t),
                format!("{:.3}", pe.p1_hat_r),
                format!("{:.3}", r.q_alpha),
                format!("{:.3}", r.nw_alpha),
                format_p_value(r),
            ];
            if starred {
                row.push(pe.p1_hat_star.map_or_else(dash, |v| format!("{v:.3}")));
                row.push(r.q_alpha_star.map_or_else(dash, |v| format!("{v:.3}")));
                row.push(r.nw_alpha_star.map_or_else(dash, |v| format!("{v:.3}")));
            }
            row.push(format!("{:.3}", pe.p1_tilde));
            row.push(format!("{:.3}", r.q_alpha_tilde));
            row
        })
        .collect();

    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let mut emit = |fields: &[&str]| {
        let line: Vec<String> = fields
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (f, &w))| {
                if c == 0 {
                    format!("{f:<w$}")
                } else {
                    format!("{f:>w$}")
                }
            })
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end()).expect("write to String");
    };
    emit(&header);
    for row in &cells {
        emit(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}
