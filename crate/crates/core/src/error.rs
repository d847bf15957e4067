use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid algebra parameters: {0}")]
    InvalidParams(String),

    #[error("non-positive ladder coefficient at m = {0}")]
    NonPositiveLadder(u32),

    #[error("coherent-state series did not reach tail tolerance {tail_tol:e} within cutoff {max_cutoff}")]
    NotConverged { tail_tol: f64, max_cutoff: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("detection efficiency must lie in (0, 1], got {0}")]
    InvalidEfficiency(f64),

    #[error("oracle cutoff {cutoff} too small for state cutoff {needed}")]
    CutoffTooSmall { cutoff: usize, needed: usize },

    #[error("variance requires a hermitian operator")]
    NonHermitian,

    #[error("performance ratio undefined: {0}")]
    Undefined(String),

    #[error("no finite value on the optimization grid")]
    NoFiniteValue,
}

pub type Result<T> = std::result::Result<T, Error>;
