use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid photon-number distribution: {0}")]
    InvalidState(String),

    #[error("invalid click probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("invalid apparatus parameters: {0}")]
    InvalidApparatus(String),

    /// `t·η_T + r·η_R = 0`: no photon can ever be detected.
    #[error("degenerate apparatus: overall detection efficiency is zero")]
    DegenerateApparatus,

    /// A bound of zero makes the coefficients `C₁`, `C₂` infinite.
    #[error("degenerate apparatus bounds: {0}")]
    DegenerateBounds(&'static str),

    #[error("sample size must be at least 1")]
    EmptySample,

    #[error("no herald was accepted")]
    NoHeralds,

    #[error(
        "quadrature failed on [{lower}, {upper}]: estimate {estimate}, error {error_estimate} after {evaluations} evaluations"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
