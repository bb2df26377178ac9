use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("adjacency is not primitive (no positive power up to {checked_up_to})")]
    NotPrimitive { checked_up_to: usize },

    #[error("no magic word found after exploring {explored} subset states")]
    NoMagicWord { explored: usize },

    #[error("period {period} over {words} index words exceeds enumeration budget {budget}")]
    PeriodTooLarge {
        period: usize,
        words: usize,
        budget: usize,
    },

    #[error("{what}: size {size} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        budget: usize,
    },

    #[error("word not admissible: {0}")]
    WordNotAdmissible(String),

    #[error("insufficient context: need {needed} coordinates, have {available}")]
    InsufficientContext { needed: usize, available: usize },

    #[error("vector entry {index} is not strictly positive")]
    NonPositiveEntry { index: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no convergence after {iterations} iterations (certified bound {bound:e})")]
    NoConvergence { iterations: usize, bound: f64 },

    #[error("measure covers depth {available}, need {required}")]
    DepthMismatch { required: usize, available: usize },

    #[error("gap {gap} is smaller than the first word length {word_len}")]
    GapTooSmall { gap: usize, word_len: usize },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PeriodTooLarge { .. } | Error::BudgetExceeded { .. } => 3,
            Error::NoConvergence { .. } => 4,
            _ => 2,
        }
    }

    /// Short machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::InvalidPresentation(_) => "InvalidPresentation",
            Error::InvalidPotential(_) => "InvalidPotential",
            Error::Config(_) => "ConfigError",
            Error::NotPrimitive { .. } => "NotPrimitive",
            Error::NoMagicWord { .. } => "NoMagicWord",
            Error::PeriodTooLarge { .. } => "PeriodTooLarge",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::WordNotAdmissible(_) => "WordNotAdmissible",
            Error::InsufficientContext { .. } => "InsufficientContext",
            Error::NonPositiveEntry { .. } => "NonPositiveEntry",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DepthMismatch { .. } => "DepthMismatch",
            Error::GapTooSmall { .. } => "GapTooSmall",
            Error::SupportViolation(_) => "SupportViolation",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        }
    }
}
