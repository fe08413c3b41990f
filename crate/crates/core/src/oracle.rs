//! Brute-force reference simulator for small instances.
//!
//! Every parcel of floorspace is an explicit [`MicroCohort`] entry aged one
//! year at a time with its own survival ratio. Nothing here calls into the
//! turnover engine; the Weibull parameterisation (including the gamma
//! function) is re-derived locally so that equivalence tests compare two
//! independent computations.

use crate::domain::{FlowRecord, FloorArea, ScenarioId, Year};
use crate::error::EngineError;
use crate::ingest::{ClampMode, Dataset, SeedMode};
use crate::turnover::{Scenario, ScenarioSpec};

/// Largest instance the oracle accepts.
pub const MAX_ECONOMIES: usize = 5;
pub const MAX_YEARS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct MicroCohort {
    pub built_year: Year,
    pub renovated_year: Option<Year>,
    pub area: f64,
}

/// Lanczos approximation (g = 7, 9 terms).
fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[derive(Debug, Clone, Copy)]
struct Weibull {
    lambda: f64,
    k: f64,
}

impl Weibull {
    fn with_mean(mean: f64, k: f64) -> Self {
        Self {
            lambda: mean / lanczos_gamma(1.0 + 1.0 / k),
            k,
        }
    }

    fn survival(&self, age: f64) -> f64 {
        if age <= 0.0 {
            1.0
        } else {
            (-(age / self.lambda).powf(self.k)).exp()
        }
    }

    /// Fraction surviving from age `a - 1` to age `a`.
    fn year_survival(&self, a: i32) -> f64 {
        let before = self.survival(f64::from(a - 1));
        if before == 0.0 {
            0.0
        } else {
            self.survival(f64::from(a)) / before
        }
    }
}

fn seed(spec: &ScenarioSpec, start: Year, initial: f64, mode: SeedMode) -> Vec<MicroCohort> {
    match mode {
        SeedMode::SingleCohort => vec![MicroCohort {
            built_year: Year(start.0 - 1),
            renovated_year: None,
            area: initial,
        }],
        SeedMode::UniformPrehistory => {
            let w = Weibull::with_mean(spec.lifetime.mean_lifetime, spec.lifetime.shape);
            let span = (spec.lifetime.mean_lifetime.round() as i32).max(1);
            let weights: Vec<f64> = (0..span).map(|age| w.survival(f64::from(age))).collect();
            let total: f64 = weights.iter().sum();
            (0..span)
                .map(|age| MicroCohort {
                    built_year: Year(start.0 - 1 - age),
                    renovated_year: None,
                    area: initial * weights[age as usize] / total,
                })
                .collect()
        }
    }
}

/// Reference run of `scenario` over every cell of a small dataset.
pub fn oracle_run(dataset: &Dataset, scenario: &Scenario) -> Result<Vec<FlowRecord>, EngineError> {
    if dataset.economies.len() > MAX_ECONOMIES || dataset.horizon.len() > MAX_YEARS {
        return Err(EngineError::InvalidSpec(format!(
            "oracle handles at most {MAX_ECONOMIES} economies and {MAX_YEARS} years"
        )));
    }
    let mut out = Vec::new();
    for (cell, spec) in dataset.cells().iter().zip(&scenario.specs) {
        let nr: Vec<f64> = cell
            .per_capita
            .iter()
            .zip(&cell.population)
            .map(|(pf, pop)| pf * pop / 1.0e6)
            .collect();
        let original = Weibull::with_mean(spec.lifetime.mean_lifetime, spec.lifetime.shape);
        let renovated = Weibull::with_mean(
            spec.lifetime.mean_lifetime + spec.lifetime.renovation_extension,
            spec.lifetime.shape,
        );
        let start = dataset.horizon.start();
        let mut parcels = seed(spec, start, nr[0], dataset.options.seed_mode);
        let (mut sum_rb, mut sum_drb) = (0.0, 0.0);

        for (i, t) in dataset.horizon.years().enumerate() {
            let mut db = 0.0;
            for p in parcels.iter_mut().filter(|p| p.renovated_year.is_none()) {
                let age = t.0 - p.built_year.0;
                if age >= 1 {
                    let keep = p.area * original.year_survival(age);
                    db += p.area - keep;
                    p.area = keep;
                }
            }

            let rate = spec.schedule.rate_at(t);
            let mut rb = 0.0;
            let mut fresh = Vec::new();
            for p in parcels.iter_mut().filter(|p| p.renovated_year.is_none()) {
                if rate > 0.0 && f64::from(t.0 - p.built_year.0) >= spec.lifetime.eligibility_age {
                    let moved = p.area * rate;
                    p.area -= moved;
                    rb += moved;
                    fresh.push(MicroCohort {
                        built_year: p.built_year,
                        renovated_year: Some(t),
                        area: moved,
                    });
                }
            }

            let mut drb = 0.0;
            for p in parcels.iter_mut() {
                if let Some(r) = p.renovated_year {
                    let age = t.0 - r.0;
                    if age >= 1 {
                        let keep = p.area * renovated.year_survival(age);
                        drb += p.area - keep;
                        p.area = keep;
                    }
                }
            }
            parcels.extend(fresh);

            let now = nr[i];
            let before = if i == 0 { nr[0] } else { nr[i - 1] };
            let balance = now - before + db - rb + drb;
            let mut nb = balance;
            if balance < 0.0 {
                let surplus = -balance;
                let mut originals: Vec<&mut MicroCohort> =
                    parcels.iter_mut().filter(|p| p.renovated_year.is_none()).collect();
                let available: f64 = originals.iter().map(|p| p.area).sum();
                if available + 1e-9 * surplus.max(1.0) < surplus {
                    return Err(EngineError::StockUnderflow {
                        scenario: spec.id.clone(),
                        economy: cell.economy.clone(),
                        btype: cell.btype,
                        year: t,
                        detail: format!("surplus {surplus} exceeds original stock {available}"),
                    });
                }
                match dataset.options.clamp_mode {
                    ClampMode::RetireOldest => {
                        originals.sort_by_key(|p| p.built_year);
                        let mut left = surplus;
                        for p in originals {
                            let take = p.area.min(left);
                            p.area -= take;
                            left -= take;
                        }
                    }
                    ClampMode::Proportional => {
                        let share = (surplus / available).min(1.0);
                        for p in originals {
                            p.area *= 1.0 - share;
                        }
                    }
                }
                db += surplus;
                nb = 0.0;
            }
            if nb > 0.0 {
                parcels.push(MicroCohort {
                    built_year: t,
                    renovated_year: None,
                    area: nb,
                });
            }
            parcels.retain(|p| p.area > 0.0);

            sum_rb += rb;
            sum_drb += drb;
            let bs = now - (sum_rb - sum_drb);
            if bs < 0.0 {
                return Err(EngineError::StockUnderflow {
                    scenario: spec.id.clone(),
                    economy: cell.economy.clone(),
                    btype: cell.btype,
                    year: t,
                    detail: format!("scenario stock {bs} is negative"),
                });
            }
            out.push(FlowRecord {
                scenario: scenario.id.clone(),
                economy: cell.economy.clone(),
                btype: cell.btype,
                year: t,
                bs: FloorArea(bs),
                nb: FloorArea(nb),
                db: FloorArea(db),
                rb: FloorArea(rb),
                drb: FloorArea(drb),
                bs_nr: FloorArea(now),
                bs_nr_prev: FloorArea(before),
                nb_unclamped: balance,
            });
        }
    }
    Ok(out)
}

/// Reference run of a named dataset scenario.
pub fn oracle_run_named(dataset: &Dataset, id: &ScenarioId) -> Result<Vec<FlowRecord>, EngineError> {
    oracle_run(dataset, &Scenario::from_dataset(dataset, id)?)
}
