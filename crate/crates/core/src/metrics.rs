//! Indicators derived from flow records: per-capita floorspace, carbon
//! intensities, growth rates, stock multiples and renovation sensitivity.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::{BuildingType, EconomyId, FlowRecord, ScenarioId, Year, M2_PER_MM2};
use crate::error::MetricError;
use crate::ingest::Dataset;
use crate::turnover::{run_scenario, Scenario};

/// kg per Mt.
const KG_PER_MT: f64 = 1.0e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    M2PerCapita,
    CarbonPerM2,
    CarbonPerCapita,
    Cagr,
    MultipleVsBase,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::M2PerCapita => "m2_per_capita",
            Metric::CarbonPerM2 => "carbon_per_m2",
            Metric::CarbonPerCapita => "carbon_per_capita",
            Metric::Cagr => "cagr",
            Metric::MultipleVsBase => "multiple_vs_base",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Metric::M2PerCapita => "m2/person",
            Metric::CarbonPerM2 => "kgCO2/m2",
            Metric::CarbonPerCapita => "kgCO2/person",
            Metric::Cagr => "fraction/yr",
            Metric::MultipleVsBase => "dimensionless",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Building-type axis of a metric row; `Total` sums both types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeScope {
    Type(BuildingType),
    Total,
}

impl TypeScope {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeScope::Type(b) => b.as_str(),
            TypeScope::Total => "total",
        }
    }

    fn types(self) -> &'static [BuildingType] {
        match self {
            TypeScope::Type(BuildingType::Residential) => &[BuildingType::Residential],
            TypeScope::Type(BuildingType::NonResidential) => &[BuildingType::NonResidential],
            TypeScope::Total => &BuildingType::ALL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub scenario: ScenarioId,
    /// Economy code, or `group:<name>` for aggregates.
    pub economy: String,
    pub scope: TypeScope,
    pub year: Year,
    pub metric: Metric,
    pub value: f64,
}

impl MetricRow {
    pub fn unit(&self) -> &'static str {
        self.metric.unit()
    }
}

/// m²/person from a stock in Mm².
pub fn per_capita_floorspace(bs_mm2: f64, population: f64) -> Result<f64, MetricError> {
    if !(population > 0.0) {
        return Err(MetricError::ZeroPopulation(population));
    }
    Ok(bs_mm2 * M2_PER_MM2 / population)
}

/// kgCO₂/m² from MtCO₂ and Mm².
pub fn carbon_intensity(emissions_mt: f64, bs_mm2: f64) -> Result<f64, MetricError> {
    if !(bs_mm2 > 0.0) {
        return Err(MetricError::ZeroStock(bs_mm2));
    }
    Ok(emissions_mt * KG_PER_MT / (bs_mm2 * M2_PER_MM2))
}

/// kgCO₂/person from MtCO₂.
pub fn carbon_per_capita(emissions_mt: f64, population: f64) -> Result<f64, MetricError> {
    if !(population > 0.0) {
        return Err(MetricError::ZeroPopulation(population));
    }
    Ok(emissions_mt * KG_PER_MT / population)
}

/// Compound annual growth rate `(end/start)^(1/years) - 1`.
pub fn cagr(start_value: f64, end_value: f64, years: i64) -> Result<f64, MetricError> {
    if !(start_value > 0.0) || years <= 0 {
        return Err(MetricError::NonPositiveStart {
            start: start_value,
            years,
        });
    }
    Ok((end_value / start_value).powf(1.0 / years as f64) - 1.0)
}

/// Selection of cells to aggregate over.
#[derive(Debug, Clone, PartialEq)]
pub struct Grouping {
    /// `None` selects every economy.
    pub economies: Option<Vec<EconomyId>>,
    pub btypes: Vec<BuildingType>,
}

impl Grouping {
    pub fn all() -> Self {
        Self {
            economies: None,
            btypes: BuildingType::ALL.to_vec(),
        }
    }

    pub fn economies(economies: Vec<EconomyId>) -> Self {
        Self {
            economies: Some(economies),
            btypes: BuildingType::ALL.to_vec(),
        }
    }

    pub fn contains(&self, r: &FlowRecord) -> bool {
        self.btypes.contains(&r.btype)
            && self
                .economies
                .as_ref()
                .is_none_or(|e| e.contains(&r.economy))
    }
}

/// Summed scenario stock of the selected cells in `year`.
pub fn grouped_stock(records: &[FlowRecord], year: Year, grouping: &Grouping) -> Result<f64, MetricError> {
    let mut found = false;
    let mut total = 0.0;
    for r in records.iter().filter(|r| r.year == year && grouping.contains(r)) {
        found = true;
        total += r.bs.0;
    }
    if !found {
        return Err(MetricError::YearOutOfRange(year));
    }
    Ok(total)
}

/// Ratio of summed stocks, `ΣBS(target) / ΣBS(base)`, over the grouping.
pub fn stock_multiple(
    records: &[FlowRecord],
    base_year: Year,
    target_year: Year,
    grouping: &Grouping,
) -> Result<f64, MetricError> {
    let base = grouped_stock(records, base_year, grouping)?;
    let target = grouped_stock(records, target_year, grouping)?;
    if !(base > 0.0) {
        return Err(MetricError::ZeroStock(base));
    }
    Ok(target / base)
}

/// Global new construction summed over every cell and year.
pub fn cumulative_nb(records: &[FlowRecord]) -> f64 {
    records.iter().map(|r| r.nb.0).sum()
}

/// Average annual reduction in global new construction (Mm²/yr) when every
/// renovation rate from `from` onwards is raised by `delta_rate`.
pub fn renovation_sensitivity(
    dataset: &Dataset,
    base: &Scenario,
    delta_rate: f64,
    from: Year,
) -> Result<f64, MetricError> {
    let base_nb = cumulative_nb(&run_scenario(dataset, base)?);
    sensitivity_against(dataset, base, base_nb, delta_rate, from)
}

/// As [`renovation_sensitivity`], reusing an already computed baseline total.
pub fn sensitivity_against(
    dataset: &Dataset,
    base: &Scenario,
    base_cumulative_nb: f64,
    delta_rate: f64,
    from: Year,
) -> Result<f64, MetricError> {
    if delta_rate == 0.0 {
        return Ok(0.0);
    }
    let raised = base.raised(delta_rate, from, dataset.horizon)?;
    let raised_nb = cumulative_nb(&run_scenario(dataset, &raised)?);
    Ok((base_cumulative_nb - raised_nb) / dataset.horizon.len() as f64)
}

/// Every metric row derivable from `records` (one scenario or several).
///
/// Rows: per-capita floorspace for each cell, economy total and year;
/// carbon intensities where emissions exist (omitted otherwise); growth
/// rate over the horizon; multiple of the end-year stock over the
/// configured base year, for economies and configured groups.
pub fn derive_metrics(dataset: &Dataset, records: &[FlowRecord]) -> Result<Vec<MetricRow>, MetricError> {
    let horizon = dataset.horizon;
    let base_year = Year(dataset.config.metrics.base_year);
    let scopes = [
        TypeScope::Type(BuildingType::Residential),
        TypeScope::Type(BuildingType::NonResidential),
        TypeScope::Total,
    ];

    // (scenario, economy, btype) -> stocks by horizon index
    let mut stocks: BTreeMap<(ScenarioId, EconomyId, BuildingType), Vec<f64>> = BTreeMap::new();
    for r in records {
        let Some(idx) = horizon.index(r.year) else {
            return Err(MetricError::YearOutOfRange(r.year));
        };
        stocks
            .entry((r.scenario.clone(), r.economy.clone(), r.btype))
            .or_insert_with(|| vec![f64::NAN; horizon.len()])[idx] = r.bs.0;
    }
    let scenarios: Vec<ScenarioId> = {
        let mut s: Vec<_> = stocks.keys().map(|k| k.0.clone()).collect();
        s.dedup();
        s
    };

    let mut rows = Vec::new();
    let mut push = |scenario: &ScenarioId, economy: &str, scope, year, metric, value| {
        rows.push(MetricRow {
            scenario: scenario.clone(),
            economy: economy.to_string(),
            scope,
            year,
            metric,
            value,
        })
    };

    for scenario in &scenarios {
        for economy in &dataset.economies {
            let scoped = |scope: TypeScope, idx: usize| -> Option<f64> {
                scope
                    .types()
                    .iter()
                    .map(|bt| stocks.get(&(scenario.clone(), economy.clone(), *bt)).map(|v| v[idx]))
                    .sum::<Option<f64>>()
            };
            for scope in scopes {
                if scoped(scope, 0).is_none() {
                    continue;
                }
                for (idx, year) in horizon.years().enumerate() {
                    let bs = scoped(scope, idx).unwrap_or(f64::NAN);
                    let pop = dataset
                        .population_at(economy, year)
                        .ok_or(MetricError::YearOutOfRange(year))?;
                    push(scenario, economy.code(), scope, year, Metric::M2PerCapita, per_capita_floorspace(bs, pop)?);
                    let emissions: Option<f64> = scope
                        .types()
                        .iter()
                        .map(|bt| dataset.emissions_at(economy, *bt, year))
                        .sum();
                    if let Some(e) = emissions {
                        push(scenario, economy.code(), scope, year, Metric::CarbonPerM2, carbon_intensity(e, bs)?);
                        push(scenario, economy.code(), scope, year, Metric::CarbonPerCapita, carbon_per_capita(e, pop)?);
                    }
                }
                let first = scoped(scope, 0).unwrap_or(f64::NAN);
                let last = scoped(scope, horizon.len() - 1).unwrap_or(f64::NAN);
                let years = i64::from(horizon.end_year - horizon.start_year);
                if years > 0 {
                    push(scenario, economy.code(), scope, horizon.end(), Metric::Cagr, cagr(first, last, years)?);
                }
                let base_idx = horizon.index(base_year).ok_or(MetricError::YearOutOfRange(base_year))?;
                let base = scoped(scope, base_idx).unwrap_or(f64::NAN);
                if !(base > 0.0) {
                    return Err(MetricError::ZeroStock(base));
                }
                push(scenario, economy.code(), scope, horizon.end(), Metric::MultipleVsBase, last / base);
            }
        }

        let scenario_records: Vec<FlowRecord> =
            records.iter().filter(|r| &r.scenario == scenario).cloned().collect();
        let mut groups: Vec<(String, Grouping)> = vec![("group:global".into(), Grouping::all())];
        for (name, members) in &dataset.groups {
            groups.push((format!("group:{name}"), Grouping::economies(members.clone())));
        }
        for (label, grouping) in groups {
            for scope in scopes {
                let grouping = Grouping {
                    btypes: scope.types().to_vec(),
                    ..grouping.clone()
                };
                let start = grouped_stock(&scenario_records, horizon.start(), &grouping);
                let end = grouped_stock(&scenario_records, horizon.end(), &grouping);
                let (Ok(start), Ok(end)) = (start, end) else { continue };
                let years = i64::from(horizon.end_year - horizon.start_year);
                if years > 0 {
                    push(scenario, &label, scope, horizon.end(), Metric::Cagr, cagr(start, end, years)?);
                }
                push(
                    scenario,
                    &label,
                    scope,
                    horizon.end(),
                    Metric::MultipleVsBase,
                    stock_multiple(&scenario_records, base_year, horizon.end(), &grouping)?,
                );
            }
        }
    }
    Ok(rows)
}
