//! Randomized small datasets for property and equivalence tests.
//!
//! Shared by the core integration tests and the CLI acceptance suite (which
//! pulls this file in with `#[path]`).
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use globus_core::error::Location;
use globus_core::ingest::{
    ClampMode, Easing, EconomyEntry, EngineOptions, InputFiles, LifetimeRow, MetricsOptions,
    PfRow, PopulationRow, RawInputs, RenovationRow, RunConfig, SeedMode, SweepOptions,
};
use globus_core::domain::{close_rel, IDENTITY_RTOL};
use globus_core::{BuildingType, Dataset, FlowRecord, Horizon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOY_SCENARIOS: [&str; 3] = ["NR", "LOW", "HIGH"];

/// Path to the bundled 14-economy fixture config.
pub fn global_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/global/config.json")
        .canonicalize()
        .expect("bundled fixture present")
}

fn at(file: &str) -> Location {
    Location {
        file: PathBuf::from(file),
        line: None,
    }
}

#[derive(Debug, Clone)]
pub struct ToyFixture {
    pub seed: u64,
    pub config: RunConfig,
    pub raw: RawInputs,
}

impl ToyFixture {
    pub fn dataset(&self) -> Dataset {
        Dataset::from_raw(self.config.clone(), self.raw.clone())
            .unwrap_or_else(|e| panic!("toy fixture {} invalid: {e:?}", self.seed))
    }
}

/// A small random dataset: 1 to 5 economies, 5 to 50 years, population and
/// per-capita paths that may fall, and step renovation schedules for the
/// two renovating scenarios (LOW strictly below HIGH at every point).
pub fn toy_fixture(seed: u64) -> ToyFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = 1990 + rng.random_range(0..20);
    let len = rng.random_range(5..=50);
    let horizon = Horizon {
        start_year: start,
        end_year: start + len - 1,
    };
    let end = horizon.end_year;
    let n_econ = rng.random_range(1..=5);
    let codes: Vec<String> = (0..n_econ).map(|i| format!("E{i}")).collect();

    let mut raw = RawInputs::default();
    for code in &codes {
        let mut years = vec![start - rng.random_range(0..3), end + rng.random_range(0..3)];
        for _ in 0..rng.random_range(0..3) {
            years.push(rng.random_range(start..=end));
        }
        years.sort();
        years.dedup();
        let mut persons = rng.random_range(1e5..1e8);
        for y in years {
            raw.population.push(PopulationRow {
                at: at("population.csv"),
                economy: code.clone(),
                year: y,
                persons,
            });
            persons *= rng.random_range(0.9..1.3);
        }

        for btype in BuildingType::ALL {
            let want = rng.random_range(2..=4);
            let mut years: Vec<i32> = Vec::new();
            while years.len() < want {
                let y = rng.random_range(start - 5..=end + 5);
                if !years.contains(&y) {
                    years.push(y);
                }
            }
            years.sort();
            let mut pf = rng.random_range(1.0..80.0);
            for y in years {
                raw.per_capita_floorspace.push(PfRow {
                    at: at("per_capita_floorspace.csv"),
                    economy: code.clone(),
                    btype,
                    year: y,
                    m2_per_capita: pf,
                });
                pf *= rng.random_range(0.8..1.6);
            }

            let mean = rng.random_range(5.0..80.0);
            raw.lifetime_params.push(LifetimeRow {
                at: at("lifetime_params.csv"),
                economy: code.clone(),
                btype,
                mean_lifetime: mean,
                shape: rng.random_range(1.0..6.0),
                renovation_extension: rng.random_range(1.0..40.0),
                eligibility_age: rng.random_range(0.0..0.95) * mean,
            });

            let mut years = vec![start - rng.random_range(0..4)];
            for _ in 0..rng.random_range(0..4) {
                years.push(rng.random_range(start..=end));
            }
            years.sort();
            years.dedup();
            for y in years {
                let low = rng.random_range(0.0..0.08);
                let high = low + rng.random_range(0.0..0.1);
                for (scenario, rate) in [("LOW", low), ("HIGH", high)] {
                    raw.renovation_schedule.push(RenovationRow {
                        at: at("renovation_schedule.csv"),
                        scenario: scenario.into(),
                        economy: code.clone(),
                        btype,
                        year: y,
                        rate,
                    });
                }
            }
        }
    }

    let options = EngineOptions {
        clamp_mode: if rng.random_bool(0.5) {
            ClampMode::RetireOldest
        } else {
            ClampMode::Proportional
        },
        pf_easing: if rng.random_bool(0.7) {
            Easing::Linear
        } else {
            Easing::Logistic
        },
        seed_mode: if rng.random_bool(0.5) {
            SeedMode::UniformPrehistory
        } else {
            SeedMode::SingleCohort
        },
        output_dir: None,
    };
    let config = RunConfig {
        horizon,
        economies: codes
            .iter()
            .map(|c| EconomyEntry {
                code: c.clone(),
                name: format!("Economy {c}"),
            })
            .collect(),
        files: InputFiles {
            population: "population.csv".into(),
            per_capita_floorspace: "per_capita_floorspace.csv".into(),
            lifetime_params: "lifetime_params.csv".into(),
            renovation_schedule: "renovation_schedule.csv".into(),
            emissions: None,
        },
        scenarios: TOY_SCENARIOS.iter().map(|s| s.to_string()).collect(),
        options,
        groups: BTreeMap::from([("all".to_string(), codes.clone())]),
        metrics: MetricsOptions { base_year: start },
        sweep: SweepOptions {
            base_scenario: "LOW".into(),
            start_year: None,
        },
    };
    ToyFixture { seed, config, raw }
}

/// Every numeric field of a record, named.
pub fn values(r: &FlowRecord) -> [(&'static str, f64); 8] {
    [
        ("bs", r.bs.0),
        ("nb", r.nb.0),
        ("db", r.db.0),
        ("rb", r.rb.0),
        ("drb", r.drb.0),
        ("bs_nr", r.bs_nr.0),
        ("bs_nr_prev", r.bs_nr_prev.0),
        ("nb_unclamped", r.nb_unclamped),
    ]
}

/// Largest relative difference between matching values, after checking
/// both runs cover the same cells and years.
pub fn max_rel_diff(a: &[FlowRecord], b: &[FlowRecord]) -> Result<f64, String> {
    if a.len() != b.len() {
        return Err(format!("{} records vs {}", a.len(), b.len()));
    }
    let key = |r: &FlowRecord| (r.scenario.clone(), r.economy.code.clone(), r.btype, r.year);
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        if key(x) != key(y) {
            return Err(format!("record order differs: {:?} vs {:?}", key(x), key(y)));
        }
        for ((name, u), (_, v)) in values(x).into_iter().zip(values(y)) {
            let d = (u - v).abs() / u.abs().max(v.abs()).max(1.0);
            if !d.is_finite() {
                return Err(format!("{name} not finite at {:?}", key(x)));
            }
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Flow identity (new construction balance) and stock identity
/// (bs = bs_nr - cumulative(rb - drb)) over records of one run. Returns the
/// first violation.
pub fn check_identities(records: &[FlowRecord]) -> Result<(), String> {
    let mut cum: BTreeMap<(String, String, BuildingType), f64> = BTreeMap::new();
    for r in records {
        let flow = r.nb.0 - r.db.0 + r.rb.0 - r.drb.0;
        let delta = r.bs_nr.0 - r.bs_nr_prev.0;
        let scale = [r.nb.0, r.db.0, r.rb.0, r.drb.0, r.bs_nr.0].into_iter().fold(0.0, f64::max);
        if !close_rel(flow, delta, scale, IDENTITY_RTOL) {
            return Err(format!(
                "flow identity at {} {} {} {}: nb-db+rb-drb={flow} vs dBS_NR={delta}",
                r.scenario, r.economy, r.btype, r.year
            ));
        }
        let c = cum
            .entry((r.scenario.to_string(), r.economy.code.clone(), r.btype))
            .or_default();
        *c += r.rb.0 - r.drb.0;
        let expect = r.bs_nr.0 - *c;
        if !close_rel(r.bs.0, expect, r.bs_nr.0, IDENTITY_RTOL) {
            return Err(format!(
                "stock identity at {} {} {} {}: bs={} vs bs_nr-cum={expect}",
                r.scenario, r.economy, r.btype, r.year, r.bs.0
            ));
        }
        if let Some(v) = values(r).into_iter().find(|(n, v)| *n != "nb_unclamped" && !(*v >= 0.0)) {
            return Err(format!("negative {} at {} {} {} {}", v.0, r.scenario, r.economy, r.btype, r.year));
        }
    }
    Ok(())
}
