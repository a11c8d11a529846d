use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("argument {value} outside the supported domain: {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("root not bracketed in [{lo}, {hi}] ({context})")]
    Bracket { lo: f64, hi: f64, context: String },

    #[error("no convergence between {lo:e} and {hi:e}: {context}")]
    NoConvergence { lo: f64, hi: f64, context: String },

    #[error("grid does not resolve the problem: {0}")]
    Grid(String),

    #[error("dimensionless scattering length {xi} outside |xi| < 0.5")]
    Regime { xi: f64 },

    #[error("{path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable category used by the command-line front end.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) | Error::LengthMismatch { .. } => "invalid-input",
            Error::Pole(_) | Error::Domain { .. } | Error::Regime { .. } => "domain",
            Error::Bracket { .. } | Error::NoConvergence { .. } => "convergence",
            Error::Grid(_) => "grid",
            Error::Config { .. } => "config",
            Error::Io(_) | Error::Csv(_) => "io",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
