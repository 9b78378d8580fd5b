use thiserror::Error;

/// Errors raised by the enclosure library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem parameters: {0}")]
    InvalidParams(String),

    #[error("invalid Omega box: {0}")]
    InvalidBox(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("evaluation at a pole of the rational coefficient (omega = {re} + {im}i)")]
    PoleEvaluation { re: f64, im: f64 },

    #[error("quartic root polishing did not converge (residual {residual:e}, bound {bound:e})")]
    ConvergenceFailure { residual: f64, bound: f64 },

    #[error("point lies on the boundary of the disk |w + ic/d| = c/d")]
    OnDiskBoundary,

    #[error("odd number ({0}) of segment endpoints on the imaginary axis")]
    OddPairing(usize),

    #[error("strip verification failed: {0}")]
    VerificationFailure(String),

    #[error("configuration inside the threshold guard band: {0}")]
    Degenerate(String),
}

impl Error {
    /// Stable variant name, used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::InvalidBox(_) => "InvalidBox",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::PoleEvaluation { .. } => "PoleEvaluation",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::OnDiskBoundary => "OnDiskBoundary",
            Error::OddPairing(_) => "OddPairing",
            Error::VerificationFailure(_) => "VerificationFailure",
            Error::Degenerate(_) => "Degenerate",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
