use thiserror::Error;

/// Errors raised while loading tables, granulating them or evaluating runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(String),
    #[error("decision column `{0}` not found in header")]
    MissingDecision(String),
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column `{column}`: decision value is missing")]
    MissingDecisionValue { line: u64, column: String },
    #[error("line {line}, column `{column}`: cannot parse `{value}` as a number")]
    Unparsable {
        line: u64,
        column: String,
        value: String,
    },
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("attribute `{0}` is categorical; bits apply to numeric attributes only")]
    NotNumeric(String),
    #[error("the decision attribute `{0}` cannot be used as a condition attribute")]
    DecisionAsCondition(String),
    #[error("universe mismatch: expected {expected} objects, got {found}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    RunFile { line: u64, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
