//! JSON input and output schemas.

use std::io::Read;
use std::path::Path;

use photon_certify_core::benchmark::ApparatusBounds;
use photon_certify_core::detection::{
    click_probabilities, click_probabilities_multimode, ApparatusParams, ClickCounts,
    ClickProbabilities,
};
use photon_certify_core::{MultimodeProductState, PhotonNumberDistribution, DEFAULT_N_MAX};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const NMAX_ENV: &str = "PHOTON_CERTIFY_NMAX";

/// Reads a file, or standard input for `-`. A missing file is a usage error.
pub fn read_input(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Data(format!("invalid {what} JSON: {e}")))
}

pub fn load_json<T: DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    parse_json(&read_input(path)?, what)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsFile {
    pub n_oo: u64,
    pub n_bo: u64,
    pub n_ob: u64,
    pub n_bb: u64,
}

impl From<ClickCounts> for CountsFile {
    fn from(c: ClickCounts) -> Self {
        Self {
            n_oo: c.n_oo,
            n_bo: c.n_bo,
            n_ob: c.n_ob,
            n_bb: c.n_bb,
        }
    }
}

impl From<CountsFile> for ClickCounts {
    fn from(c: CountsFile) -> Self {
        ClickCounts::new(c.n_oo, c.n_bo, c.n_ob, c.n_bb)
    }
}

/// Apparatus with `r = 1 − t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApparatusFile {
    pub t: f64,
    #[serde(rename = "eta_T")]
    pub eta_t: f64,
    #[serde(rename = "eta_R")]
    pub eta_r: f64,
}

impl ApparatusFile {
    pub fn to_params(self) -> CliResult<ApparatusParams> {
        Ok(ApparatusParams::new(self.t, self.eta_t, self.eta_r)?)
    }
}

impl From<ApparatusParams> for ApparatusFile {
    fn from(a: ApparatusParams) -> Self {
        Self {
            t: a.t,
            eta_t: a.eta_t,
            eta_r: a.eta_r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    pub t_hat: f64,
    pub r_hat: f64,
    #[serde(rename = "eta_T_hat")]
    pub eta_t_hat: f64,
    #[serde(rename = "eta_R_hat")]
    pub eta_r_hat: f64,
}

impl BoundsFile {
    pub fn to_bounds(self) -> CliResult<ApparatusBounds> {
        Ok(ApparatusBounds::new(
            self.t_hat,
            self.r_hat,
            self.eta_t_hat,
            self.eta_r_hat,
        )?)
    }
}

impl From<ApparatusBounds> for BoundsFile {
    fn from(b: ApparatusBounds) -> Self {
        Self {
            t_hat: b.t_hat,
            r_hat: b.r_hat,
            eta_t_hat: b.eta_t_hat,
            eta_r_hat: b.eta_r_hat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilitiesFile {
    pub p_oo: f64,
    pub p_bo: f64,
    pub p_ob: f64,
    pub p_bb: f64,
}

#[derive(Deserialize)]
struct ModeFile {
    probs: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Multi { modes: Vec<ModeFile> },
    Single(ModeFile),
}

/// A single-mode or product multimode source.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceState {
    Single(PhotonNumberDistribution),
    Multi(MultimodeProductState),
}

impl SourceState {
    pub fn click_probabilities(&self, params: &ApparatusParams) -> ClickProbabilities {
        match self {
            SourceState::Single(s) => click_probabilities(s, params),
            SourceState::Multi(m) => click_probabilities_multimode(m, params),
        }
    }

    /// `P₁` of a single mode, `max_k P₁^[k]` of a product.
    pub fn single_photon_weight(&self) -> f64 {
        match self {
            SourceState::Single(s) => s.single_photon_weight(),
            SourceState::Multi(m) => m.max_single_photon_weight(),
        }
    }

    pub fn single_mode(&self) -> Option<&PhotonNumberDistribution> {
        match self {
            SourceState::Single(s) => Some(s),
            SourceState::Multi(m) if m.modes().len() == 1 => m.modes().first(),
            SourceState::Multi(_) => None,
        }
    }
}

/// Truncation layer from the environment, [`DEFAULT_N_MAX`] when unset.
pub fn n_max_from_env() -> CliResult<usize> {
    match std::env::var(NMAX_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("{NMAX_ENV}={v:?} is not a non-negative integer"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_N_MAX),
        Err(e) => Err(CliError::Usage(format!("{NMAX_ENV}: {e}"))),
    }
}

/// Parses `fock:n`, `lossy_single_photon:eta`, `vacuum`, inline JSON or a
/// path to a JSON state file.
pub fn parse_state_spec(spec: &str, n_max: usize) -> CliResult<SourceState> {
    let spec = spec.trim();
    if let Some(n) = spec.strip_prefix("fock:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad Fock layer in {spec:?}")))?;
        if n > n_max {
            return Err(CliError::Data(format!(
                "Fock layer {n} exceeds the truncation {n_max}"
            )));
        }
        return Ok(SourceState::Single(PhotonNumberDistribution::fock(n)));
    }
    if let Some(eta) = spec.strip_prefix("lossy_single_photon:") {
        let eta: f64 = eta
            .parse()
            .map_err(|_| CliError::Usage(format!("bad efficiency in {spec:?}")))?;
        return Ok(SourceState::Single(
            PhotonNumberDistribution::lossy_single_photon(eta)?,
        ));
    }
    if spec == "vacuum" {
        return Ok(SourceState::Single(PhotonNumberDistribution::vacuum()));
    }
    let text = if spec.starts_with('{') {
        spec.to_owned()
    } else {
        read_input(Path::new(spec))?
    };
    let mode = |m: ModeFile| PhotonNumberDistribution::with_truncation(m.probs, n_max);
    match parse_json::<StateFile>(&text, "state")? {
        StateFile::Single(m) => Ok(SourceState::Single(mode(m)?)),
        StateFile::Multi { modes } => {
            let modes = modes.into_iter().map(mode).collect::<Result<Vec<_>, _>>()?;
            Ok(SourceState::Multi(MultimodeProductState::new(modes)?))
        }
    }
}

/// Accepts plain decimals and `1e-10` style strings in `(0, 1)`.
pub fn parse_alpha(text: &str) -> Result<f64, String> {
    let alpha: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("{text:?} is not a number"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(format!("alpha = {alpha} is not in (0, 1)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        let s = parse_state_spec("fock:2", 64).unwrap();
        assert_eq!(s.single_mode().unwrap().p(2), 1.0);
        let s = parse_state_spec("lossy_single_photon:0.25", 64).unwrap();
        assert_eq!(s.single_photon_weight(), 0.25);
        assert!(matches!(
            parse_state_spec("fock:9", 8),
            Err(CliError::Data(_))
        ));
        assert!(matches!(
            parse_state_spec("fock:x", 8),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_state_spec("/no/such/file.json", 8),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn json_states() {
        let s = parse_state_spec(r#"{"probs":[0.25,0.75]}"#, 64).unwrap();
        assert_eq!(s.single_photon_weight(), 0.75);
        let m =
            parse_state_spec(r#"{"modes":[{"probs":[0.5,0.5]},{"probs":[0.1,0.9]}]}"#, 64).unwrap();
        assert!(matches!(m, SourceState::Multi(_)));
        assert_eq!(m.single_photon_weight(), 0.9);
        let truncated = parse_state_spec(r#"{"probs":[0.5,0.5,0.0,1e-14]}"#, 1).unwrap();
        assert_eq!(truncated.single_mode().unwrap().truncation_tail(), 1e-14);
        assert!(matches!(
            parse_state_spec(r#"{"probs":[0.5,0.6]}"#, 64),
            Err(CliError::Data(_))
        ));
        assert!(matches!(
            parse_state_spec(r#"{"prob":[1.0]}"#, 64),
            Err(CliError::Data(_))
        ));
    }

    #[test]
    fn file_schemas() {
        let c: CountsFile =
            parse_json(r#"{"n_oo":1,"n_bo":2,"n_ob":3,"n_bb":4}"#, "counts").unwrap();
        assert_eq!(ClickCounts::from(c), ClickCounts::new(1, 2, 3, 4));
        assert!(parse_json::<CountsFile>(r#"{"n_oo":1,"n_bo":2,"n_ob":3}"#, "counts").is_err());
        assert!(
            parse_json::<CountsFile>(r#"{"n_oo":-1,"n_bo":2,"n_ob":3,"n_bb":0}"#, "counts")
                .is_err()
        );
        let a: ApparatusFile =
            parse_json(r#"{"t":0.4,"eta_T":0.9,"eta_R":0.8}"#, "apparatus").unwrap();
        assert!((a.to_params().unwrap().r - 0.6).abs() < 1e-15);
        let b: BoundsFile = parse_json(
            r#"{"t_hat":0.5,"r_hat":0.5,"eta_T_hat":1,"eta_R_hat":1}"#,
            "bounds",
        )
        .unwrap();
        assert!(b.to_bounds().is_ok());
        let zero = BoundsFile {
            eta_t_hat: 0.0,
            ..b
        };
        assert!(matches!(zero.to_bounds(), Err(CliError::Data(_))));
    }

    #[test]
    fn alpha_strings() {
        assert_eq!(parse_alpha("1e-10").unwrap(), 1e-10);
        assert_eq!(parse_alpha("0.05").unwrap(), 0.05);
        assert!(parse_alpha("1").is_err());
        assert!(parse_alpha("0").is_err());
        assert!(parse_alpha("abc").is_err());
    }
}
