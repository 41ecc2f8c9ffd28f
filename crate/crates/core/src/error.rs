use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenspace |k|^2 = {0} is empty ({0} is not a sum of two squares)")]
    EmptyEigenspace(u64),

    #[error("field cutoffs differ: {left} vs {right}")]
    CutoffMismatch { left: u32, right: u32 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("ill-conditioned matrix: {0}")]
    Conditioning(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Checks that `x` is finite and strictly positive.
pub(crate) fn require_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {x}")))
    }
}

/// Checks that a ball radius lies in the open interval (0, 1/2).
pub(crate) fn require_ball_radius(name: &str, eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in (0, 1/2), got {eps}")))
    }
}
