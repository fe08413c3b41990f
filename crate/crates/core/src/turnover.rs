//! Cohort-tracked annual turnover: demolition, renovation, demolition of
//! renovated floorspace and the new construction that balances them.
//!
//! Within a year the flows are evaluated in a fixed order: original
//! demolitions (DB), renovation (RB), renovated demolitions (DRB), then new
//! construction (NB) from the balance
//!
//! ```text
//! NB(t) = BS_nr(t) - BS_nr(t-1) + DB(t) - RB(t) + DRB(t)
//! BS(t) = BS_nr(t) - sum_{tau <= t} (RB(tau) - DRB(tau))
//! ```
//!
//! A negative balance is floored at zero and the surplus is demolished from
//! original cohorts and booked as DB, which keeps the first identity exact.

use std::collections::BTreeMap;

use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::domain::{
    BuildingType, EconomyId, FlowRecord, FloorArea, Horizon, ScenarioId, Year,
};
use crate::error::EngineError;
use crate::ingest::{
    ClampMode, Dataset, EngineOptions, LifetimeParams, RenovationSchedule, SeedMode,
};
use crate::projection::{project_cell, NrTrajectory};

/// Cohorts smaller than this (Mm²) are dropped from the ledger.
pub const PURGE_THRESHOLD: f64 = 1e-12;

/// Weibull survival parameterised by its mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalCurve {
    pub mean_lifetime: f64,
    pub shape: f64,
    scale: f64,
}

impl SurvivalCurve {
    pub fn new(mean_lifetime: f64, shape: f64) -> Result<Self, EngineError> {
        if !(mean_lifetime.is_finite() && mean_lifetime > 0.0 && shape.is_finite() && shape > 0.0) {
            return Err(EngineError::InvalidSpec(format!(
                "survival curve needs positive mean and shape (mean={mean_lifetime}, shape={shape})"
            )));
        }
        Ok(Self {
            mean_lifetime,
            shape,
            scale: mean_lifetime / gamma(1.0 + 1.0 / shape),
        })
    }

    /// Weibull scale λ such that the distribution mean equals `mean_lifetime`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn cumulative_hazard(&self, age: f64) -> f64 {
        if age <= 0.0 {
            0.0
        } else {
            (age / self.scale).powf(self.shape)
        }
    }

    /// Share of floorspace standing at age `age - 1` that is demolished
    /// before reaching `age`.
    pub fn annual_hazard(&self, age: f64) -> f64 {
        let dh = self.cumulative_hazard(age) - self.cumulative_hazard(age - 1.0);
        -(-dh).exp_m1()
    }
}

/// `S(age) = exp(-(age/λ)^k)`.
pub fn survival_fraction(curve: &SurvivalCurve, age: f64) -> f64 {
    (-curve.cumulative_hazard(age)).exp()
}

/// Age-structured standing floorspace (Mm²).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CohortLedger {
    /// Construction year → surviving never-renovated floorspace.
    pub original: BTreeMap<Year, f64>,
    /// Renovation year → surviving renovated floorspace.
    pub renovated: BTreeMap<Year, f64>,
}

impl CohortLedger {
    pub fn total(&self) -> f64 {
        self.original_total() + self.renovated.values().sum::<f64>()
    }

    pub fn original_total(&self) -> f64 {
        self.original.values().sum()
    }

    fn purge(&mut self) {
        self.original.retain(|_, v| *v >= PURGE_THRESHOLD);
        self.renovated.retain(|_, v| *v >= PURGE_THRESHOLD);
    }

    fn first_corrupt(&self) -> Option<String> {
        self.original
            .iter()
            .map(|(y, v)| ("original", y, v))
            .chain(self.renovated.iter().map(|(y, v)| ("renovated", y, v)))
            .find(|(_, _, v)| !v.is_finite() || **v < 0.0)
            .map(|(kind, y, v)| format!("{kind} cohort {y} holds {v}"))
    }
}

/// Lifetime and renovation settings for one cell under one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: ScenarioId,
    pub schedule: RenovationSchedule,
    pub lifetime: LifetimeParams,
}

impl ScenarioSpec {
    pub fn new(
        id: ScenarioId,
        schedule: RenovationSchedule,
        lifetime: LifetimeParams,
    ) -> Result<Self, EngineError> {
        if id.is_nr() && schedule.rates.values().any(|r| *r != 0.0) {
            return Err(EngineError::InvalidSpec(
                "the NR scenario cannot carry renovation".into(),
            ));
        }
        if let Some((y, r)) = schedule.rates.iter().find(|(_, r)| !(0.0..=1.0).contains(*r)) {
            return Err(EngineError::InvalidSpec(format!(
                "renovation rate {r} in {y} outside [0, 1]"
            )));
        }
        Ok(Self {
            id,
            schedule,
            lifetime,
        })
    }

    /// Zero-renovation spec for a cell.
    pub fn non_renovation(lifetime: LifetimeParams) -> Self {
        Self {
            id: ScenarioId::nr(),
            schedule: RenovationSchedule {
                scenario: ScenarioId::nr(),
                economy: lifetime.economy.clone(),
                btype: lifetime.btype,
                rates: BTreeMap::new(),
            },
            lifetime,
        }
    }

    pub fn original_curve(&self) -> Result<SurvivalCurve, EngineError> {
        SurvivalCurve::new(self.lifetime.mean_lifetime, self.lifetime.shape)
    }

    /// Renovated floorspace restarts its clock with a longer mean lifetime.
    pub fn renovated_curve(&self) -> Result<SurvivalCurve, EngineError> {
        SurvivalCurve::new(
            self.lifetime.mean_lifetime + self.lifetime.renovation_extension,
            self.lifetime.shape,
        )
    }
}

/// A scenario expanded to every cell of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: ScenarioId,
    /// One spec per dataset cell, in dataset cell order.
    pub specs: Vec<ScenarioSpec>,
}

impl Scenario {
    pub fn from_dataset(dataset: &Dataset, id: &ScenarioId) -> Result<Self, EngineError> {
        if !id.is_nr() && !dataset.scenarios.contains(id) {
            return Err(EngineError::UnknownScenario(id.clone()));
        }
        let specs = dataset
            .cells()
            .iter()
            .map(|cell| {
                if id.is_nr() {
                    return Ok(ScenarioSpec::non_renovation(cell.lifetime.clone()));
                }
                let schedule = dataset
                    .schedule(id, &cell.economy, cell.btype)
                    .cloned()
                    .ok_or_else(|| {
                        EngineError::InvalidSpec(format!(
                            "no schedule for {id}/{}/{}",
                            cell.economy, cell.btype
                        ))
                    })?;
                ScenarioSpec::new(id.clone(), schedule, cell.lifetime.clone())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            id: id.clone(),
            specs,
        })
    }

    /// Copy with every rate from `from` onwards raised by `delta` (capped at 1).
    pub fn raised(&self, delta: f64, from: Year, horizon: Horizon) -> Result<Self, EngineError> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(EngineError::InvalidSpec(format!("rate delta must be >= 0, got {delta}")));
        }
        let id = ScenarioId::new(format!("{}+{}", self.id, delta))
            .map_err(|e| EngineError::InvalidSpec(e.to_string()))?;
        let specs = self
            .specs
            .iter()
            .map(|spec| {
                let rates = horizon
                    .years()
                    .map(|y| {
                        let bump = if y >= from { delta } else { 0.0 };
                        (y, (spec.schedule.rate_at(y) + bump).min(1.0))
                    })
                    .collect();
                ScenarioSpec::new(
                    id.clone(),
                    RenovationSchedule {
                        scenario: id.clone(),
                        rates,
                        ..spec.schedule.clone()
                    },
                    spec.lifetime.clone(),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { id, specs })
    }
}

/// Running state of one cell simulation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CellState {
    pub ledger: CohortLedger,
    pub cumulative_rb: f64,
    pub cumulative_drb: f64,
}

impl CellState {
    /// Standing floorspace plus everything renovated and later demolished;
    /// equals the scenario stock after every step.
    pub fn accounted_stock(&self) -> f64 {
        self.ledger.total() + self.cumulative_drb
    }
}

/// Raised when renovation removes more than the non-renovation stock.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("non-renovation stock {nr_stock} Mm2 minus net renovation {net_renovated} Mm2 is negative")]
pub struct StockUnderflow {
    pub nr_stock: f64,
    pub net_renovated: f64,
}

/// `BS(t) = BS_nr(t) - (ΣRB - ΣDRB)`, sums taken from the horizon start.
pub fn scenario_stock(nr_stock: f64, cumulative_rb: f64, cumulative_drb: f64) -> Result<f64, StockUnderflow> {
    let net_renovated = cumulative_rb - cumulative_drb;
    let bs = nr_stock - net_renovated;
    if bs < 0.0 {
        return Err(StockUnderflow {
            nr_stock,
            net_renovated,
        });
    }
    Ok(bs)
}

/// Ledger standing at the end of the year before the horizon start.
pub fn seed_ledger(
    initial_stock: f64,
    start: Year,
    curve: &SurvivalCurve,
    mode: SeedMode,
) -> CohortLedger {
    let mut ledger = CohortLedger::default();
    let last = start.prev();
    match mode {
        SeedMode::SingleCohort => {
            ledger.original.insert(last, initial_stock);
        }
        SeedMode::UniformPrehistory => {
            let span = curve.mean_lifetime.round().max(1.0) as i32;
            let weights: Vec<(Year, f64)> = (0..span)
                .map(|age| (Year(last.0 - age), survival_fraction(curve, f64::from(age))))
                .collect();
            let norm: f64 = weights.iter().map(|(_, w)| w).sum();
            for (year, w) in weights {
                ledger.original.insert(year, initial_stock * w / norm);
            }
        }
    }
    ledger.purge();
    ledger
}

/// Applies the annual hazard to every cohort older than `t`; returns the
/// demolished total.
fn demolish(cohorts: &mut BTreeMap<Year, f64>, t: Year, curve: &SurvivalCurve) -> f64 {
    let mut demolished = 0.0;
    for (&since, area) in cohorts.range_mut(..t) {
        let d = *area * curve.annual_hazard(f64::from(t.0 - since.0));
        *area -= d;
        demolished += d;
    }
    demolished
}

/// Removes `amount` from original cohorts; returns what could not be removed.
fn retire(original: &mut BTreeMap<Year, f64>, amount: f64, mode: ClampMode) -> f64 {
    match mode {
        ClampMode::RetireOldest => {
            let mut left = amount;
            for area in original.values_mut() {
                if left <= 0.0 {
                    break;
                }
                let take = area.min(left);
                *area -= take;
                left -= take;
            }
            left.max(0.0)
        }
        ClampMode::Proportional => {
            let total: f64 = original.values().sum();
            if total <= 0.0 {
                return amount;
            }
            let share = (amount / total).min(1.0);
            for area in original.values_mut() {
                *area -= *area * share;
            }
            (amount - total).max(0.0)
        }
    }
}

/// Slack allowed when the clamp surplus exceeds the remaining original
/// stock by rounding only.
const RETIRE_SLACK: f64 = 1e-9;

/// Simulates year `t` for one cell, given the state at the end of `t - 1`.
pub fn step_year(
    state: &CellState,
    spec: &ScenarioSpec,
    nr: &NrTrajectory,
    t: Year,
    clamp: ClampMode,
) -> Result<(FlowRecord, CellState), EngineError> {
    let original_curve = spec.original_curve()?;
    let renovated_curve = spec.renovated_curve()?;
    step_with_curves(state, spec, nr, t, clamp, &original_curve, &renovated_curve)
}

#[allow(clippy::too_many_arguments)]
fn step_with_curves(
    state: &CellState,
    spec: &ScenarioSpec,
    nr: &NrTrajectory,
    t: Year,
    clamp: ClampMode,
    original_curve: &SurvivalCurve,
    renovated_curve: &SurvivalCurve,
) -> Result<(FlowRecord, CellState), EngineError> {
    let cell_error = |underflow: bool, detail: String| {
        let (scenario, economy, btype, year) = (spec.id.clone(), nr.economy.clone(), nr.btype, t);
        if underflow {
            EngineError::StockUnderflow { scenario, economy, btype, year, detail }
        } else {
            EngineError::LedgerCorrupt { scenario, economy, btype, year, detail }
        }
    };
    if !nr.horizon.contains(t) {
        return Err(EngineError::YearOutOfRange {
            year: t,
            start: nr.horizon.start(),
            end: nr.horizon.end(),
        });
    }
    let mut next = state.clone();
    let ledger = &mut next.ledger;

    let mut db = demolish(&mut ledger.original, t, original_curve);

    let rate = spec.schedule.rate_at(t);
    let mut rb = 0.0;
    if rate > 0.0 {
        let eligibility = spec.lifetime.eligibility_age;
        for (&built, area) in ledger.original.iter_mut() {
            if f64::from(t.0 - built.0) >= eligibility {
                let moved = *area * rate;
                *area -= moved;
                rb += moved;
            }
        }
        if rb > 0.0 {
            *ledger.renovated.entry(t).or_insert(0.0) += rb;
        }
    }

    let drb = demolish(&mut ledger.renovated, t, renovated_curve);

    let bs_nr = nr.at_or_start(t).0;
    let bs_nr_prev = nr.at_or_start(t.prev()).0;
    let nb_unclamped = (bs_nr - bs_nr_prev) + db - rb + drb;
    let nb = if nb_unclamped < 0.0 {
        let surplus = -nb_unclamped;
        let unmet = retire(&mut ledger.original, surplus, clamp);
        if unmet > RETIRE_SLACK * surplus.max(1.0) {
            return Err(cell_error(
                true,
                format!(
                    "clamping new construction needs {surplus} Mm2 of demolition but only {} Mm2 of original stock remains",
                    surplus - unmet
                ),
            ));
        }
        db += surplus;
        0.0
    } else {
        nb_unclamped
    };
    if nb > 0.0 {
        *ledger.original.entry(t).or_insert(0.0) += nb;
    }

    next.cumulative_rb += rb;
    next.cumulative_drb += drb;
    let bs = scenario_stock(bs_nr, next.cumulative_rb, next.cumulative_drb)
        .map_err(|e| cell_error(true, e.to_string()))?;

    next.ledger.purge();
    if let Some(detail) = next.ledger.first_corrupt() {
        return Err(cell_error(false, detail));
    }

    let record = FlowRecord {
        scenario: spec.id.clone(),
        economy: nr.economy.clone(),
        btype: nr.btype,
        year: t,
        bs: FloorArea(bs),
        nb: FloorArea(nb),
        db: FloorArea(db),
        rb: FloorArea(rb),
        drb: FloorArea(drb),
        bs_nr: FloorArea(bs_nr),
        bs_nr_prev: FloorArea(bs_nr_prev),
        nb_unclamped,
    };
    Ok((record, next))
}

/// Runs one cell over the whole horizon of its trajectory.
pub fn run_cell(
    spec: &ScenarioSpec,
    nr: &NrTrajectory,
    options: &EngineOptions,
) -> Result<Vec<FlowRecord>, EngineError> {
    if spec.lifetime.economy != nr.economy || spec.lifetime.btype != nr.btype {
        return Err(EngineError::InvalidSpec(format!(
            "spec for {}/{} applied to trajectory of {}/{}",
            spec.lifetime.economy, spec.lifetime.btype, nr.economy, nr.btype
        )));
    }
    let original_curve = spec.original_curve()?;
    let renovated_curve = spec.renovated_curve()?;
    let mut state = CellState {
        ledger: seed_ledger(
            nr.at_or_start(nr.horizon.start()).0,
            nr.horizon.start(),
            &original_curve,
            options.seed_mode,
        ),
        ..CellState::default()
    };
    let mut records = Vec::with_capacity(nr.horizon.len());
    for t in nr.horizon.years() {
        let (record, next) = step_with_curves(
            &state,
            spec,
            nr,
            t,
            options.clamp_mode,
            &original_curve,
            &renovated_curve,
        )?;
        records.push(record);
        state = next;
    }
    Ok(records)
}

/// Runs every cell of a dataset under `scenario`. Records come back grouped
/// by cell in dataset order, years ascending, independent of thread count.
pub fn run_scenario(dataset: &Dataset, scenario: &Scenario) -> Result<Vec<FlowRecord>, EngineError> {
    let cells = dataset.cells();
    if scenario.specs.len() != cells.len() {
        return Err(EngineError::InvalidSpec(format!(
            "scenario {} has {} cell specs, dataset has {} cells",
            scenario.id,
            scenario.specs.len(),
            cells.len()
        )));
    }
    let per_cell: Vec<Vec<FlowRecord>> = cells
        .par_iter()
        .zip(scenario.specs.par_iter())
        .map(|(cell, spec)| run_cell(spec, &project_cell(cell, dataset.horizon), &dataset.options))
        .collect::<Result<_, _>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

/// Convenience: expand `id` from the dataset and run it.
pub fn run_named(dataset: &Dataset, id: &ScenarioId) -> Result<Vec<FlowRecord>, EngineError> {
    run_scenario(dataset, &Scenario::from_dataset(dataset, id)?)
}

/// Cell lookup helper shared by callers that index records.
pub fn cell_records<'a>(
    records: &'a [FlowRecord],
    economy: &'a EconomyId,
    btype: BuildingType,
) -> impl Iterator<Item = &'a FlowRecord> + 'a {
    records
        .iter()
        .filter(move |r| &r.economy == economy && r.btype == btype)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_record;

    fn lifetime(mean: f64, shape: f64) -> LifetimeParams {
        LifetimeParams {
            economy: EconomyId::new("X", "").unwrap(),
            btype: BuildingType::Residential,
            mean_lifetime: mean,
            shape,
            renovation_extension: 25.0,
            eligibility_age: 20.0,
        }
    }

    fn flat_nr(value: f64, start: i32, end: i32) -> NrTrajectory {
        let horizon = Horizon::new(start, end).unwrap();
        NrTrajectory {
            economy: EconomyId::new("X", "").unwrap(),
            btype: BuildingType::Residential,
            horizon,
            stock: vec![FloorArea(value); horizon.len()],
        }
    }

    fn with_rates(lt: LifetimeParams, rates: &[(i32, f64)]) -> ScenarioSpec {
        ScenarioSpec::new(
            ScenarioId::new("BAU").unwrap(),
            RenovationSchedule {
                scenario: ScenarioId::new("BAU").unwrap(),
                economy: lt.economy.clone(),
                btype: lt.btype,
                rates: rates.iter().map(|&(y, r)| (Year(y), r)).collect(),
            },
            lt,
        )
        .unwrap()
    }

    #[test]
    fn survival_at_zero_is_one() {
        for (mean, k) in [(50.0, 1.0), (30.0, 4.0), (80.0, 2.5)] {
            let c = SurvivalCurve::new(mean, k).unwrap();
            assert_eq!(survival_fraction(&c, 0.0), 1.0);
        }
    }

    #[test]
    fn exponential_case_closed_form() {
        let c = SurvivalCurve::new(50.0, 1.0).unwrap();
        assert!((c.scale() - 50.0).abs() < 1e-12);
        assert!((survival_fraction(&c, 50.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((survival_fraction(&c, 50.0) - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn single_old_cohort_hand_example() {
        // 100 Mm² built 50 years before t, exponential lifetime with mean 50:
        // one-year hazard increment 1.0 - 0.98 = 0.02.
        let spec = ScenarioSpec::non_renovation(lifetime(50.0, 1.0));
        let nr = flat_nr(100.0, 2000, 2070);
        let mut state = CellState::default();
        state.ledger.original.insert(Year(2020 - 50), 100.0);
        let (r, next) = step_year(&state, &spec, &nr, Year(2020), ClampMode::RetireOldest).unwrap();
        let expected = 100.0 * (1.0 - (-0.02f64).exp());
        assert!((r.db.0 - expected).abs() < 1e-12);
        assert!((r.db.0 - 1.9801).abs() < 1e-4);
        assert_eq!(r.nb.0, r.db.0);
        assert_eq!(r.rb.0, 0.0);
        assert!((next.ledger.total() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn renovation_moves_eligible_stock() {
        let spec = with_rates(lifetime(1e6, 1.0), &[(2000, 0.05)]);
        let mut nr = flat_nr(300.0, 2000, 2070);
        nr.stock[20] = FloorArea(320.0);
        let mut state = CellState::default();
        state.ledger.original.insert(Year(1990), 200.0); // age 30 in 2020: eligible
        state.ledger.original.insert(Year(2015), 100.0); // age 5: not eligible
        let (r, next) = step_year(&state, &spec, &nr, Year(2020), ClampMode::RetireOldest).unwrap();
        // Demolition is negligible with a mean lifetime of a million years.
        assert!(r.db.0 < 1e-3);
        assert!((r.rb.0 - 10.0).abs() < 1e-3);
        assert!((r.nb.0 - (20.0 + r.db.0 - r.rb.0)).abs() < 1e-12);
        assert_eq!(next.ledger.renovated[&Year(2020)], r.rb.0);
        assert!(validate_record(&r).is_empty());
    }

    #[test]
    fn negative_balance_is_clamped_and_booked_as_demolition() {
        let spec = ScenarioSpec::non_renovation(lifetime(50.0, 4.0));
        let horizon = Horizon::new(2020, 2021).unwrap();
        let nr = NrTrajectory {
            economy: EconomyId::new("X", "").unwrap(),
            btype: BuildingType::Residential,
            horizon,
            stock: vec![FloorArea(100.0), FloorArea(90.0)],
        };
        let mut state = CellState::default();
        state.ledger.original.insert(Year(2000), 40.0);
        state.ledger.original.insert(Year(2019), 60.0);
        let (r, next) = step_year(&state, &spec, &nr, Year(2021), ClampMode::RetireOldest).unwrap();
        assert_eq!(r.nb.0, 0.0);
        assert!(r.nb_unclamped < 0.0);
        assert!(validate_record(&r).is_empty(), "{:?}", validate_record(&r));
        assert!((next.ledger.total() - 90.0).abs() < 1e-9);
        // Oldest cohort absorbed the surplus; the young one only saw its hazard.
        assert!(next.ledger.original[&Year(2000)] < 31.0);
        assert!(next.ledger.original[&Year(2019)] > 59.9);
    }

    #[test]
    fn scenario_stock_cases() {
        assert_eq!(scenario_stock(1000.0, 100.0, 20.0).unwrap(), 920.0);
        assert_eq!(scenario_stock(1000.0, 0.0, 0.0).unwrap(), 1000.0);
        assert!(scenario_stock(100.0, 150.0, 10.0).is_err());
    }

    #[test]
    fn nr_spec_rejects_rates() {
        let lt = lifetime(50.0, 4.0);
        let err = ScenarioSpec::new(
            ScenarioId::nr(),
            RenovationSchedule {
                scenario: ScenarioId::nr(),
                economy: lt.economy.clone(),
                btype: lt.btype,
                rates: [(Year(2000), 0.01)].into_iter().collect(),
            },
            lt,
        );
        assert!(err.is_err());
    }

    #[test]
    fn nr_run_matches_projection_and_conserves() {
        let spec = ScenarioSpec::non_renovation(lifetime(40.0, 4.0));
        let horizon = Horizon::new(2000, 2030).unwrap();
        let nr = NrTrajectory {
            economy: EconomyId::new("X", "").unwrap(),
            btype: BuildingType::Residential,
            horizon,
            stock: (0..horizon.len()).map(|i| FloorArea(100.0 + 3.0 * i as f64)).collect(),
        };
        let recs = run_cell(&spec, &nr, &EngineOptions::default()).unwrap();
        assert_eq!(recs.len(), 31);
        for (r, (_, s)) in recs.iter().zip(nr.iter()) {
            assert_eq!(r.bs, s);
            assert!(validate_record(r).is_empty());
        }
    }

    #[test]
    fn seeding_preserves_total() {
        let c = SurvivalCurve::new(50.0, 4.0).unwrap();
        let l = seed_ledger(1234.5, Year(2000), &c, SeedMode::UniformPrehistory);
        assert_eq!(l.original.len(), 50);
        assert!((l.total() - 1234.5).abs() < 1e-9);
        assert_eq!(*l.original.keys().next_back().unwrap(), Year(1999));
        let s = seed_ledger(10.0, Year(2000), &c, SeedMode::SingleCohort);
        assert_eq!(s.original.get(&Year(1999)), Some(&10.0));
    }

    #[test]
    fn proportional_retirement() {
        let mut m: BTreeMap<Year, f64> = [(Year(1), 30.0), (Year(2), 10.0)].into_iter().collect();
        assert_eq!(retire(&mut m, 20.0, ClampMode::Proportional), 0.0);
        assert!((m[&Year(1)] - 15.0).abs() < 1e-12);
        assert!((m[&Year(2)] - 5.0).abs() < 1e-12);
        let mut m: BTreeMap<Year, f64> = [(Year(1), 3.0)].into_iter().collect();
        assert_eq!(retire(&mut m, 5.0, ClampMode::RetireOldest), 2.0);
    }
}
