use thiserror::Error;

use crate::model::BatteryState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid station config: {0}")]
    InvalidConfig(String),
    #[error("invalid initial conditions: {0}")]
    InvalidInitial(String),
    #[error("invalid event profile: {0}")]
    InvalidProfile(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("illegal transition {from}->{to} for B{battery} at hour {hour}")]
    Transition {
        battery: usize,
        hour: usize,
        from: BatteryState,
        to: BatteryState,
    },
}

/// Failure while reading the grid text format. Line and column are 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected `B{expected}:` row label")]
    BadLabel { expected: usize },
    #[error("unknown state letter `{0}`")]
    UnknownLetter(String),
    #[error("row has {found} hours, expected {expected}")]
    WrongHours { found: usize, expected: usize },
    #[error("found {found} battery rows, expected {expected}")]
    WrongBatteries { found: usize, expected: usize },
    #[error("illegal transition {from}->{to} at (B{battery}, hour {hour})")]
    Adjacency {
        battery: usize,
        hour: usize,
        from: BatteryState,
        to: BatteryState,
    },
    #[error("empty schedule")]
    Empty,
}

/// Failure while ingesting profiles, configs or instance bundles.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("missing hour {0}")]
    MissingHour(usize),
    #[error("bad header: expected `hour,demand,arrivals,price`, found `{0}`")]
    Header(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json in {file}: {source}")]
    Json {
        file: String,
        source: serde_json::Error,
    },
    #[error("io on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    /// No schedule can serve the instance; `hour` is the first hour at
    /// which the requirement cannot be met.
    #[error("infeasible at hour {hour}: {reason}")]
    Infeasible { hour: usize, reason: String },
    #[error("oracle refused: {size} start vectors exceed budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error(transparent)]
    Model(#[from] ModelError),
}
