use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report. Each variant maps to a stable
/// machine-readable code via [`Error::code`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("input {index} is not a valid projector (defect {defect:.3e}): {reason}")]
    InvalidPower {
        index: usize,
        defect: f64,
        reason: String,
    },

    #[error("basis {index} is not orthonormal (defect {defect:.3e})")]
    InvalidBasis { index: usize, defect: f64 },

    #[error("clique enumeration exceeded the cap of {cap} contexts")]
    CombinatorialBlowup { cap: usize },

    #[error("graph is not tomographically complete: rank {rank}, need {needed}")]
    NotTomographicallyComplete { rank: usize, needed: usize },

    #[error("inconsistent PSA: {0}")]
    InconsistentPsa(String),

    #[error("search budget of {budget} branches exhausted")]
    SearchBudget { budget: u64 },

    #[error("context {0:?} does not resolve the identity")]
    NonExhaustiveContext(Vec<usize>),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("schema error at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable error code string used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "E_DIMENSION",
            Error::Numerical(_) => "E_NUMERICAL",
            Error::InvalidPower { .. } => "E_INVALID_POWER",
            Error::InvalidBasis { .. } => "E_INVALID_BASIS",
            Error::CombinatorialBlowup { .. } => "E_COMBINATORIAL_BLOWUP",
            Error::NotTomographicallyComplete { .. } => "E_NOT_TOMOGRAPHICALLY_COMPLETE",
            Error::InconsistentPsa(_) => "E_INCONSISTENT_PSA",
            Error::SearchBudget { .. } => "E_SEARCH_BUDGET",
            Error::NonExhaustiveContext(_) => "E_NON_EXHAUSTIVE_CONTEXT",
            Error::InvalidState(_) => "E_INVALID_STATE",
            Error::Schema { .. } => "E_SCHEMA",
            Error::Validation(_) => "E_VALIDATION",
            Error::Io(_) => "E_IO",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
