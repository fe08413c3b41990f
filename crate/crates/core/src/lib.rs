//! Cohort-based building stock turnover.
//!
//! Projects floorspace stocks from per-capita floorspace and population, runs
//! renovation scenarios through an annual cohort simulation, and derives
//! per-capita, carbon-intensity and growth indicators.

pub mod domain;
pub mod error;
pub mod ingest;
pub mod metrics;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod projection;
pub mod turnover;

pub use domain::{
    validate_record, BuildingType, EconomyId, FlowRecord, FloorArea, Horizon, ScenarioId, Year,
};
pub use error::{EngineError, IngestError, IngestErrors, MetricError};
pub use ingest::{load_dataset, Dataset};
pub use turnover::{run_named, run_scenario, Scenario, ScenarioSpec};

/// Version of the engine, recorded in run manifests.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
