use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("resonance width must be strictly positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("resonance energy must be finite, got {0}")]
    NonFiniteEnergy(f64),

    #[error("regime index must be 0 or 1, got {0}")]
    InvalidRegime(i64),

    #[error("inconsistent {0}")]
    Inconsistent(String),

    #[error("t = {t} lies outside the {domain} half-domain of branch {branch}")]
    DomainViolation {
        t: f64,
        domain: &'static str,
        branch: &'static str,
    },

    #[error("survival probability is defined for decaying states only")]
    NotDecaying,

    #[error("hamiltonian is not hermitian (max |H - H^dagger| entry = {0:e})")]
    NonHermitian(f64),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("representation row must be in 1..=4, got {0}")]
    InvalidRow(i64),

    #[error("row-1 representation has no doubled space to hold r=1 content")]
    NotDoubled,

    #[error("operator is not invertible")]
    Singular,

    #[error("branch {0} is not an excitation/de-excitation branch (expected 5a or 5b)")]
    InvalidBranch(String),

    #[error("unknown branch label {0:?}")]
    UnknownBranch(String),

    #[error("time grid needs at least 2 steps, got {0}")]
    TooFewSteps(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid point t = {t} lies outside the {domain} half-domain of branch {branch}")]
    GridOutsideDomain {
        t: f64,
        domain: &'static str,
        branch: &'static str,
    },

    #[error("energy grid is empty")]
    EmptyGrid,

    #[error("malformed table: {0}")]
    MalformedTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
