use thiserror::Error;

/// Errors raised by the synthesis and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("boundary case undefined: {0}")]
    Boundary(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("aliasing: frequency window {lambda_max} does not match the grid limit pi/dx = {required}")]
    Alias { lambda_max: f64, required: f64 },

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("coupling row is not symmetric at index {index} (|{left} - {right}| > tolerance)")]
    Symmetry { index: usize, left: f64, right: f64 },

    #[error("mode {mode} is unstabilizable: a*T = {product} >= 1")]
    Unstabilizable { mode: usize, product: f64 },

    #[error("closed loop is unstable: {0}")]
    Instability(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Boundary(_) => "boundary",
            Error::NoSolution(_) => "no_solution",
            Error::Divergence(_) => "divergence",
            Error::Alias { .. } => "alias",
            Error::Resolution(_) => "resolution",
            Error::Symmetry { .. } => "symmetry",
            Error::Unstabilizable { .. } => "unstabilizable",
            Error::Instability(_) => "instability",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }

    /// True for failures caused by the numbers themselves rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence(_) | Error::Instability(_) | Error::NoSolution(_) | Error::Unstabilizable { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
