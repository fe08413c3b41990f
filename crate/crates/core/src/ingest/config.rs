//! Run configuration (`config.json`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::Horizon;
use crate::ingest::series::Easing;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub horizon: Horizon,
    pub economies: Vec<EconomyEntry>,
    pub files: InputFiles,
    #[serde(default = "default_scenarios")]
    pub scenarios: Vec<String>,
    #[serde(default)]
    pub options: EngineOptions,
    /// Named economy groups used by aggregate metrics.
    #[serde(default)]
    pub groups: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub metrics: MetricsOptions,
    #[serde(default)]
    pub sweep: SweepOptions,
}

fn default_scenarios() -> Vec<String> {
    vec!["NR".into(), "BAU".into(), "TEP".into()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyEntry {
    pub code: String,
    #[serde(default)]
    pub name: String,
}

/// Paths are relative to the directory holding the config file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFiles {
    pub population: String,
    pub per_capita_floorspace: String,
    pub lifetime_params: String,
    pub renovation_schedule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emissions: Option<String>,
}

impl InputFiles {
    /// (role, path) pairs in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, &str)> {
        let mut out = vec![
            ("population", self.population.as_str()),
            ("per_capita_floorspace", self.per_capita_floorspace.as_str()),
            ("lifetime_params", self.lifetime_params.as_str()),
            ("renovation_schedule", self.renovation_schedule.as_str()),
        ];
        if let Some(e) = &self.emissions {
            out.push(("emissions", e.as_str()));
        }
        out
    }
}

/// What happens when the flow balance asks for negative new construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClampMode {
    /// New construction is floored at zero and the surplus is demolished,
    /// oldest original cohorts first.
    #[default]
    RetireOldest,
    /// As above, but the surplus is taken pro rata from all original cohorts.
    Proportional,
}

/// Age structure of the stock standing at the start of the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedMode {
    /// Equal construction over the mean lifetime preceding the horizon,
    /// thinned by survival up to the year before the start.
    #[default]
    UniformPrehistory,
    /// Everything in one cohort built the year before the start.
    SingleCohort,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineOptions {
    #[serde(default)]
    pub clamp_mode: ClampMode,
    #[serde(default)]
    pub pf_easing: Easing,
    #[serde(default)]
    pub seed_mode: SeedMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsOptions {
    /// Reference year for stock multiples.
    #[serde(default = "default_base_year")]
    pub base_year: i32,
}

fn default_base_year() -> i32 {
    2020
}

impl Default for MetricsOptions {
    fn default() -> Self {
        Self {
            base_year: default_base_year(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    #[serde(default = "default_base_scenario")]
    pub base_scenario: String,
    /// First year that receives the raised rate; defaults to the horizon start.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_year: Option<i32>,
}

fn default_base_scenario() -> String {
    "BAU".into()
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            base_scenario: default_base_scenario(),
            start_year: None,
        }
    }
}
