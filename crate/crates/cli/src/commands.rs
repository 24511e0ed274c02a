//! Subcommand implementations. Each returns the text written to the output.

use std::path::{Path, PathBuf};

use photon_certify_core::benchmark::{p1_hat, polytope_vertices, PolytopePoint};
use photon_certify_core::detection::{
    effective_params, sample_counts, ApparatusParams, ClickCounts, ClickProbabilities,
};
use photon_certify_core::timetag::bin_trials;
use photon_certify_core::wigner::{
    disk_negativity_bound, negativity_lower_bound, negativity_oracle,
};
use photon_certify_core::IngestConfig;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::formats::{
    load_json, n_max_from_env, parse_json, parse_state_spec, read_input, ApparatusFile, BoundsFile,
    CountsFile, ProbabilitiesFile,
};
use crate::json::{round_opt, round_sig, to_json};
use crate::report::{render_table, CertificationReport, PointEstimates};
use crate::tsv::parse_timetags_str;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

fn load_counts(path: &Path) -> CliResult<ClickCounts> {
    let counts: ClickCounts = load_json::<CountsFile>(path, "counts")?.into();
    if counts.n() == 0 {
        return Err(CliError::Data(format!(
            "{}: no trials recorded",
            path.display()
        )));
    }
    Ok(counts)
}

fn load_bounds(path: Option<&Path>) -> CliResult<Option<photon_certify_core::ApparatusBounds>> {
    path.map(|p| load_json::<BoundsFile>(p, "bounds")?.to_bounds())
        .transpose()
}

pub fn analyze(
    counts: &Path,
    alpha: f64,
    bounds: Option<&Path>,
    format: OutputFormat,
) -> CliResult<String> {
    let bounds = load_bounds(bounds)?;
    let source = counts.display().to_string();
    let report =
        CertificationReport::build(load_counts(counts)?, alpha, bounds, Some(source.clone()))?;
    match format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Table => Ok(render_table(&[(source, report)])),
    }
}

#[derive(Serialize)]
struct BatchEntry {
    file: String,
    report: CertificationReport,
}

/// Every `*.json` counts file in `dir`, in file-name order.
pub fn analyze_batch(
    dir: &Path,
    alpha: f64,
    bounds: Option<&Path>,
    format: OutputFormat,
) -> CliResult<String> {
    let bounds = load_bounds(bounds)?;
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Usage(format!("cannot list {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!(
            "no .json files in {}",
            dir.display()
        )));
    }
    let rows = files
        .iter()
        .map(|path| {
            let name = path
                .file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let report =
                CertificationReport::build(load_counts(path)?, alpha, bounds, Some(name.clone()))?;
            Ok((name, report))
        })
        .collect::<CliResult<Vec<_>>>()?;
    match format {
        OutputFormat::Json => to_json(
            &rows
                .into_iter()
                .map(|(file, report)| BatchEntry { file, report })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Table => Ok(render_table(&rows)),
    }
}

/// Apparatus from inline JSON, a file, or the ideal balanced default.
pub fn load_apparatus(spec: Option<&str>) -> CliResult<ApparatusParams> {
    match spec {
        None => Ok(ApparatusParams::ideal()),
        Some(s) if s.trim_start().starts_with('{') => {
            parse_json::<ApparatusFile>(s, "apparatus")?.to_params()
        }
        Some(path) => load_json::<ApparatusFile>(Path::new(path), "apparatus")?.to_params(),
    }
}

#[derive(Debug, Serialize)]
pub struct ExactSimulation {
    pub probabilities: ProbabilitiesFile,
    pub eta: f64,
    pub t_eff: f64,
    /// `P₁` of the source; `max_k P₁^[k]` for products.
    pub p1: f64,
    /// `P₁` after the common loss `η`, single-mode sources only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1_degraded: Option<f64>,
    pub point_estimates: PointEstimates,
}

pub fn simulate_exact(state: &str, apparatus: Option<&str>) -> CliResult<ExactSimulation> {
    let source = parse_state_spec(state, n_max_from_env()?)?;
    let params = load_apparatus(apparatus)?;
    let eff = effective_params(&params)?;
    let p = source.click_probabilities(&params);
    let degraded = source
        .single_mode()
        .map(|s| s.apply_loss(eff.eta).map(|d| d.single_photon_weight()))
        .transpose()?;
    Ok(ExactSimulation {
        probabilities: ProbabilitiesFile {
            p_oo: round_sig(p.p_oo),
            p_bo: round_sig(p.p_bo),
            p_ob: round_sig(p.p_ob),
            p_bb: round_sig(p.p_bb),
        },
        eta: round_sig(eff.eta),
        t_eff: round_sig(eff.t_eff),
        p1: round_sig(source.single_photon_weight()),
        p1_degraded: round_opt(degraded),
        point_estimates: PointEstimates::from_probabilities(&p, None)?,
    })
}

pub fn simulate(
    state: &str,
    apparatus: Option<&str>,
    n: u64,
    seed: u64,
    exact: bool,
) -> CliResult<String> {
    if exact {
        return to_json(&simulate_exact(state, apparatus)?);
    }
    let source = parse_state_spec(state, n_max_from_env()?)?;
    let p = source.click_probabilities(&load_apparatus(apparatus)?);
    to_json(&CountsFile::from(sample_counts(&p, n, seed)?))
}

pub fn ingest(input: &Path, config: &IngestConfig) -> CliResult<String> {
    let text = read_input(input)?;
    let events = parse_timetags_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    to_json(&CountsFile::from(bin_trials(&events, config)?))
}

#[derive(Serialize)]
struct PolytopeEntry {
    #[serde(rename = "P")]
    p: f64,
    vertices: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct DataPoint {
    source: String,
    x: f64,
    y: f64,
    p1_hat: f64,
}

#[derive(Serialize)]
struct PolytopeExport {
    polytopes: Vec<PolytopeEntry>,
    points: Vec<DataPoint>,
}

pub fn polytope(levels: &[f64], counts: &[PathBuf]) -> CliResult<String> {
    let polytopes = levels
        .iter()
        .map(|&p| {
            let vertices = polytope_vertices(p)?
                .iter()
                .map(|v| [round_sig(v.x), round_sig(v.y)])
                .collect();
            Ok(PolytopeEntry { p, vertices })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let points = counts
        .iter()
        .map(|path| {
            let p = ClickProbabilities::from_counts(&load_counts(path)?)?;
            let pt = PolytopePoint::from_probabilities(&p);
            Ok(DataPoint {
                source: path.display().to_string(),
                x: round_sig(pt.x),
                y: round_sig(pt.y),
                p1_hat: round_sig(p1_hat(&p)),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    to_json(&PolytopeExport { polytopes, points })
}

#[derive(Debug, Serialize)]
pub struct BoundReport {
    pub p1: f64,
    /// Closed-form `F(P₁)`.
    #[serde(rename = "F")]
    pub f: f64,
    /// `ℓ(P₁)`: negativity is certified for `|β|² < ℓ`.
    pub ell: f64,
    pub disk_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
}

pub fn bound(p1: Option<f64>, state: Option<&str>) -> CliResult<String> {
    let state = state
        .map(|s| {
            let source = parse_state_spec(s, n_max_from_env()?)?;
            source.single_mode().cloned().ok_or_else(|| {
                CliError::Usage("the negativity oracle needs a single-mode state".into())
            })
        })
        .transpose()?;
    let p1 = match (p1, &state) {
        (Some(p), _) => p,
        (None, Some(s)) => s.single_photon_weight(),
        (None, None) => return Err(CliError::Usage("give --p1 or --state".into())),
    };
    let f = negativity_lower_bound(p1)?;
    let oracle = state.as_ref().map(negativity_oracle).transpose()?;
    to_json(&BoundReport {
        p1: round_sig(p1),
        f: round_sig(f.value),
        ell: round_sig(f.disk_radius_sq),
        disk_bound: round_sig(disk_negativity_bound(p1)?),
        oracle: round_opt(oracle),
    })
}
