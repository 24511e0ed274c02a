//! Deterministic JSON output: struct field order, floats capped at 12
//! significant digits and then printed shortest-round-trip.

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

pub fn round_opt(x: Option<f64>) -> Option<f64> {
    x.map(round_sig)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut out = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numeric(format!("cannot serialize output: {e}")))?;
    out.push('\n');
    Ok(out)
}
