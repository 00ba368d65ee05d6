use thiserror::Error;

/// Everything that can go wrong between reading points and emitting a report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("input contains no points")]
    EmptyInput,

    #[error("too few points: need {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("all points coincide; no plane or line is determined")]
    DegenerateCloud,

    #[error("linear system is degenerate (|det| = {det:e} below threshold {threshold:e})")]
    DegenerateSystem { det: f64, threshold: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at row {row}, column {column}: {reason}")]
    Parse { row: usize, column: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("eigen-solver did not converge (off-diagonal norm {off_norm:e})")]
    EigenNotConverged { off_norm: f64 },
}

impl FitError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            FitError::EmptyInput => "empty_input",
            FitError::TooFewPoints { .. } => "too_few_points",
            FitError::NonFinite { .. } => "non_finite",
            FitError::DegenerateCloud => "degenerate_cloud",
            FitError::DegenerateSystem { .. } => "degenerate_system",
            FitError::DegenerateInput(_) => "degenerate_input",
            FitError::InvalidOptions(_) => "invalid_options",
            FitError::InvalidSpec(_) => "invalid_spec",
            FitError::Parse { .. } => "parse_error",
            FitError::Io(_) => "io_error",
            FitError::EigenNotConverged { .. } => "internal_error",
        }
    }

    /// Process exit code used by the CLI: 2 for bad input, 3 for degenerate
    /// geometry, 1 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            FitError::DegenerateCloud
            | FitError::DegenerateSystem { .. }
            | FitError::DegenerateInput(_) => 3,
            FitError::EigenNotConverged { .. } => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for FitError {
    fn from(e: std::io::Error) -> Self {
        FitError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FitError>;
