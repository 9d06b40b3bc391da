use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("non-integrable piece |x|^{exponent} touches 0 inside [{lo}, {hi}]")]
    NonIntegrable { exponent: f64, lo: f64, hi: f64 },
    #[error("negative power of an identically zero piece")]
    UndefinedPower,
    #[error("weight vanishes identically on a probed window")]
    DegenerateWeight,
    #[error("weight vanishes at x = {0}")]
    ZeroWeightAtPoint(f64),
    #[error("c * ainfty = {0} must exceed 1")]
    DegenerateExponent(f64),
    #[error("exponent order violated: need 1 < r < p, got r = {r}, p = {p}")]
    ExponentOrder { r: f64, p: f64 },
    #[error("divergent quantity at the {0} end")]
    Divergent(&'static str),
    #[error("need at least two points to fit a power law")]
    InsufficientPoints,
    #[error("power-law fit requires strictly positive values")]
    NonPositiveValue,
    #[error("norm bracket gap {got:.3e} exceeds {max:.1e} relative after max refinement")]
    BracketTooWide { got: f64, max: f64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("bad function descriptor: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
