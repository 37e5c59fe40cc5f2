use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is out of range; valid range is {range}")]
    Domain {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("sector mismatch: N = {left} vs N = {right}")]
    SectorMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {key}: {reason}")]
    Config { key: String, reason: String },

    #[error("unknown preset '{name}'; available presets: {catalog}")]
    UnknownPreset { name: String, catalog: String },

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.1e} at t = {t}")]
    NormDrift { t: f64, drift: f64, tolerance: f64 },

    #[error("synaptic variable {var} = {value} left [0, 1] at t = {t}; reduce the time step")]
    SynapseBounds { t: f64, var: &'static str, value: f64 },

    #[error("state left the symmetric sector (leak {leak:.3e}) at t = {t}")]
    SectorLeak { t: f64, leak: f64 },

    #[error("full-space simulation limited to N <= {max}, got N = {n}")]
    SystemTooLarge { n: usize, max: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty spectrum")]
    EmptySpectrum,
}

impl Error {
    /// True for failures of the numerical integration itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NormDrift { .. } | Error::SynapseBounds { .. } | Error::SectorLeak { .. }
        )
    }

    pub(crate) fn domain(what: &'static str, value: impl ToString, range: impl ToString) -> Self {
        Error::Domain {
            what,
            value: value.to_string(),
            range: range.to_string(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
