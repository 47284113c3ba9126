use thiserror::Error;

/// Errors raised by the toolkit. Each variant names the precondition that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rate `{name}` must be strictly positive, got {value}")]
    NonPositiveRate { name: &'static str, value: f64 },

    #[error("input `{name}` must be finite, got {value}")]
    NonFiniteInput { name: &'static str, value: f64 },

    #[error("input `{name}` out of range: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("the ideal scattering matrix requires gamma_at = gamma_cav = gamma_star = 0")]
    LeakyNotSupported,

    #[error("the leaky closed form requires gamma_star = 0 (got {gamma_star})")]
    DephasingUnsupported { gamma_star: f64 },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("closed-form nonlinear scattering requires a resonant drive (delta_omega = 0, got {delta_omega})")]
    OffResonanceUnsupported { delta_omega: f64 },

    #[error("could not bracket the half-maximum crossing near {guess}")]
    ScanFailed { guess: f64 },

    #[error("step size collapsed to {step:e} at t = {time:e}")]
    StepCollapse { time: f64, step: f64 },

    #[error("initial Bloch state violates |s|^2 <= 1/4, -1/2 <= s_z <= 1/2")]
    InvalidInitial,

    #[error("no steady state reached within {horizon:e}")]
    NoConvergence { horizon: f64 },

    #[error("objective is monotone over [{lo}, {hi}]; no interior maximum")]
    NoInteriorMax { lo: f64, hi: f64 },

    #[error(transparent)]
    Csv(#[from] CsvError),
}

/// Wrapper so that `Error` stays `Clone + PartialEq`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("csv output failed: {0}")]
pub struct CsvError(pub String);

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(CsvError(e.to_string()))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(CsvError(e.to_string()))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteInput { name, value })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveRate { name, value })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidArgument {
            name,
            reason: format!("must be >= 0, got {value}"),
        })
    }
}
