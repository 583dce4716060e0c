use thiserror::Error;

/// Errors raised by the analytic, caching and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrsError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("coded caching needs t = M*K/N to be an integer in 1..K-1 (K={k}, M={m}, N={n})")]
    CodedCachingConfig { k: u32, m: u32, n: u32 },

    #[error("demand for file rank {rank} exceeds the coded-caching depth N={n}; XOR delivery is infeasible")]
    DemandOutsideCatalog { rank: u32, n: u32 },

    #[error("t={t} lies outside the support (0, {theta}) of the distribution")]
    OutOfSupport { t: f64, theta: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: estimated error {error:e}")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("subcase {subcase} is not a row of mode {mode}")]
    InconsistentSubcase { mode: String, subcase: String },

    #[error("{0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CrsError {
    /// Whether the error comes from a numerical routine rather than from
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, CrsError::OutOfSupport { .. } | CrsError::Quadrature { .. })
    }
}

impl From<std::io::Error> for CrsError {
    fn from(e: std::io::Error) -> Self {
        CrsError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CrsError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> CrsError {
    CrsError::InvalidParameter { name, reason: reason.into() }
}
