use std::path::PathBuf;

use thiserror::Error;

use crate::domain::{BuildingType, EconomyId, ScenarioId, Year};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("unknown building type {0:?} (expected \"residential\" or \"non_residential\")")]
    UnknownBuildingType(String),
    #[error("invalid economy code {0:?}: must be non-empty ASCII without whitespace")]
    InvalidEconomyCode(String),
    #[error("invalid scenario name {0:?}")]
    InvalidScenarioName(String),
    #[error("floor area must be finite and non-negative, got {0}")]
    InvalidFloorArea(f64),
    #[error("horizon end {end_year} precedes start {start_year}")]
    InvalidHorizon { start_year: i32, end_year: i32 },
}

/// Location of an input problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub file: PathBuf,
    /// 1-based line number; the header is line 1.
    pub line: Option<u64>,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}", self.file.display(), line),
            None => write!(f, "{}", self.file.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("{location}: schema error: {message}")]
    Schema { location: Location, message: String },
    #[error("{location}: range error: {field}={value} violates {constraint}")]
    Range {
        location: Location,
        field: String,
        value: String,
        constraint: String,
    },
    #[error("{location}: coverage error: {message}")]
    Coverage { location: Location, message: String },
    #[error("{location}: config error: {message}")]
    Config { location: Location, message: String },
}

/// Every problem found while loading a dataset.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} input problem(s); first: {}", .0.len(), .0.first().map(|e| e.to_string()).unwrap_or_default())]
pub struct IngestErrors(pub Vec<IngestError>);

impl IngestErrors {
    pub fn iter(&self) -> impl Iterator<Item = &IngestError> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("{scenario}/{economy}/{btype} {year}: ledger corrupt: {detail}")]
    LedgerCorrupt {
        scenario: ScenarioId,
        economy: EconomyId,
        btype: BuildingType,
        year: Year,
        detail: String,
    },
    #[error("{scenario}/{economy}/{btype} {year}: stock underflow: {detail}")]
    StockUnderflow {
        scenario: ScenarioId,
        economy: EconomyId,
        btype: BuildingType,
        year: Year,
        detail: String,
    },
    #[error("year {year} outside {start}..={end}")]
    YearOutOfRange { year: Year, start: Year, end: Year },
    #[error("scenario {0} is not part of the dataset")]
    UnknownScenario(ScenarioId),
    #[error("invalid scenario setup: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("population must be positive, got {0}")]
    ZeroPopulation(f64),
    #[error("stock must be positive, got {0}")]
    ZeroStock(f64),
    #[error("growth rate needs a positive start value and at least one year (start={start}, years={years})")]
    NonPositiveStart { start: f64, years: i64 },
    #[error("year {0} has no records in the selection")]
    YearOutOfRange(Year),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
