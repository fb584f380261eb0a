use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the crate. Variant names double as the error codes
/// surfaced by the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("MissingColumn: column `{0}` not found")]
    MissingColumn(String),
    #[error("NonBinaryCell: row {row}, column `{column}` holds `{value}`")]
    NonBinaryCell { row: usize, column: String, value: String },
    #[error("EmptyFile: {0}")]
    EmptyFile(String),
    #[error("MissingCell: row {row}, column `{column}` is empty")]
    MissingCell { row: usize, column: String },
    #[error("TooManyCategories: column `{column}` has {count} categories (cap {cap})")]
    TooManyCategories { column: String, count: usize, cap: usize },
    #[error("SingleCategory: column `{0}` holds a single value")]
    SingleCategory(String),
    #[error("NoAntecedents: every candidate was filtered out")]
    NoAntecedents,
    #[error("InvalidSupport: min_support {0} outside [0, 0.5]")]
    InvalidSupport(f64),
    #[error("InvalidSplit: {0}")]
    InvalidSplit(String),
    #[error("EmptyPart: split part `{0}` would be empty")]
    EmptyPart(&'static str),
    #[error("UnknownAntecedent: id {0}")]
    UnknownAntecedent(usize),
    #[error("DuplicateAntecedent: id {0} appears twice in a rule list")]
    DuplicateAntecedent(usize),
    #[error("LengthMismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("EmptyGroup: sensitive group {0} has no rows")]
    EmptyGroup(u8),
    #[error("LabelsRequired: metric {0} needs labels")]
    LabelsRequired(&'static str),
    #[error("UndefinedRate: {rate} undefined for group {group} (zero denominator)")]
    UndefinedRate { rate: &'static str, group: u8 },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("NoAntecedentsAllowed: the allowed antecedent set is empty")]
    NoAntecedentsAllowed,
    #[error("BudgetZero: node budget must be positive")]
    BudgetZero,
    #[error("KOutOfRange: k={k} with {n} rows")]
    KOutOfRange { k: usize, n: usize },
    #[error("EmptyCohort: no subject passes the cohort filter")]
    EmptyCohort,
    #[error("OracleMissingRow: no queried row was present in the lookup table")]
    OracleMissingRow,
    #[error("Parse: {0}")]
    Parse(String),
    #[error("Recipe: line {line}: {message}")]
    Recipe { line: usize, message: String },
    #[error("Io: {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
