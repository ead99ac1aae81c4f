use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Parse diagnostics. Every variant carries the 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: reference to undeclared variable `{name}`")]
    UndeclaredVariable { line: usize, name: String },
    #[error("line {line}: unsupported index `[{index}]` on `{name}` (expected `{expected}`)")]
    BadIndex {
        line: usize,
        name: String,
        index: String,
        expected: &'static str,
    },
    #[error("line {line}: duplicate equation for `{name}`")]
    DuplicateEquation { line: usize, name: String },
    #[error("line {line}: missing init value for `{name}`")]
    MissingInit { line: usize, name: String },
    #[error("line {line}: duplicate init value for `{name}`")]
    DuplicateInit { line: usize, name: String },
    #[error("line {line}: malformed rational `{text}`")]
    MalformedRational { line: usize, text: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::UndeclaredVariable { line, .. }
            | ParseError::BadIndex { line, .. }
            | ParseError::DuplicateEquation { line, .. }
            | ParseError::MissingInit { line, .. }
            | ParseError::DuplicateInit { line, .. }
            | ParseError::MalformedRational { line, .. }
            | ParseError::Syntax { line, .. } => *line,
        }
    }
}

/// Failures of the decoupling and closed-form machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// The input lacks a structural property the requested formula needs.
    #[error("structural condition not met: {0}")]
    Structural(String),
    /// The inputs satisfy the preconditions but fall outside the supported cases.
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("unsupported order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: &'static str },
    #[error("trajectory too short: {rows} rows, need at least {needed}")]
    TrajectoryTooShort { rows: usize, needed: usize },
    #[error("step count {requested} exceeds the limit of {limit}")]
    StepLimit { requested: u64, limit: u64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T, E = SolveError> = std::result::Result<T, E>;
