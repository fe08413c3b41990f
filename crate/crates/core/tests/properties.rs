mod common;

use std::collections::BTreeMap;

use common::{check_identities, toy_fixture, ToyFixture};
use globus_core::domain::{close_rel, IDENTITY_RTOL};
use globus_core::ingest::{interpolate_pf_with, Easing, PerCapitaAnchors, RunConfig};
use globus_core::metrics::{
    cagr, carbon_intensity, carbon_per_capita, grouped_stock, per_capita_floorspace, stock_multiple,
    Grouping,
};
use globus_core::projection::{project_cell, project_nr};
use globus_core::turnover::{seed_ledger, step_year, CellState};
use globus_core::{
    run_named, run_scenario, BuildingType, Dataset, EconomyId, FlowRecord, FloorArea, Scenario,
    ScenarioId, Year,
};
use proptest::prelude::*;

fn cell_nb(records: &[FlowRecord]) -> BTreeMap<(String, BuildingType), f64> {
    let mut out = BTreeMap::new();
    for r in records {
        *out.entry((r.economy.code.clone(), r.btype)).or_default() += r.nb.0;
    }
    out
}

/// Cells with a clamped year in either run.
fn clamped_cells(a: &[FlowRecord], b: &[FlowRecord]) -> std::collections::BTreeSet<(String, BuildingType)> {
    a.iter()
        .chain(b)
        .filter(|r| r.nb_unclamped < 0.0)
        .map(|r| (r.economy.code.clone(), r.btype))
        .collect()
}

fn scaled_population(toy: &ToyFixture, k: f64) -> Dataset {
    let mut toy = toy.clone();
    for row in &mut toy.raw.population {
        row.persons *= k;
    }
    toy.dataset()
}

fn arb_record() -> impl Strategy<Value = FlowRecord> {
    (
        "[A-Z]{1,4}",
        prop_oneof![Just(BuildingType::Residential), Just(BuildingType::NonResidential)],
        1900i32..2200,
        prop::array::uniform8(0.0f64..1e7),
        -1e6f64..1e6,
    )
        .prop_map(|(code, btype, year, v, nbu)| FlowRecord {
            scenario: ScenarioId::new("BAU").unwrap(),
            economy: EconomyId::new(code.clone(), format!("{code} name")).unwrap(),
            btype,
            year: Year(year),
            bs: FloorArea(v[0]),
            nb: FloorArea(v[1]),
            db: FloorArea(v[2]),
            rb: FloorArea(v[3]),
            drb: FloorArea(v[4]),
            bs_nr: FloorArea(v[5]),
            bs_nr_prev: FloorArea(v[6]),
            nb_unclamped: nbu,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flow_record_serde_round_trip(r in arb_record()) {
        let json = serde_json::to_string(&r).unwrap();
        let back: FlowRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn run_config_serde_round_trip(seed in 0u64..10_000) {
        let config = toy_fixture(seed).config;
        let json = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, config);
    }

    #[test]
    fn monotone_anchors_interpolate_monotone(
        start in 1950i32..2050,
        steps in prop::collection::vec((1i32..30, 0.0f64..20.0), 1..6),
        first in 0.1f64..50.0,
        logistic in any::<bool>(),
    ) {
        let mut anchors = vec![(Year(start), first)];
        for (dy, dv) in steps {
            let (y, v) = *anchors.last().unwrap();
            anchors.push((Year(y.0 + dy), v + dv));
        }
        let end = anchors.last().unwrap().0 .0;
        let a = PerCapitaAnchors {
            economy: EconomyId::new("X", "X").unwrap(),
            btype: BuildingType::Residential,
            anchors,
        };
        let easing = if logistic { Easing::Logistic } else { Easing::Linear };
        let series: Vec<f64> = (start - 5..=end + 5).map(|y| interpolate_pf_with(&a, Year(y), easing)).collect();
        for w in series.windows(2) {
            prop_assert!(w[1] >= w[0], "{} then {}", w[0], w[1]);
        }
    }

    #[test]
    fn scaling_population_scales_nr_stock(seed in 0u64..10_000, exp in -6i32..7, k in 0.01f64..100.0) {
        let toy = toy_fixture(seed);
        let ds = toy.dataset();
        let pow2 = scaled_population(&toy, 2f64.powi(exp));
        let general = scaled_population(&toy, k);
        for cell in ds.cells() {
            let base = project_nr(&ds, &cell.economy, cell.btype).unwrap();
            let exact = project_nr(&pow2, &cell.economy, cell.btype).unwrap();
            let approx = project_nr(&general, &cell.economy, cell.btype).unwrap();
            for ((y, b), ((_, e), (_, a))) in base.iter().zip(exact.iter().zip(approx.iter())) {
                prop_assert_eq!(e.0, b.0 * 2f64.powi(exp), "{} {} {}", cell.economy, cell.btype, y);
                prop_assert!((a.0 - b.0 * k).abs() <= 4.0 * f64::EPSILON * a.0, "{} {} {}", cell.economy, cell.btype, y);
            }
        }
    }

    #[test]
    fn identities_hold_on_random_toys(seed in 0u64..100_000) {
        let ds = toy_fixture(seed).dataset();
        for id in &ds.scenarios {
            if let Ok(records) = run_named(&ds, id) {
                prop_assert_eq!(records.len(), ds.cells().len() * ds.horizon.len());
                if let Err(m) = check_identities(&records) {
                    prop_assert!(false, "seed {}: {}", seed, m);
                }
            }
        }
    }

    #[test]
    fn ledger_accounts_for_scenario_stock(seed in 0u64..100_000) {
        let ds = toy_fixture(seed).dataset();
        let scenario = Scenario::from_dataset(&ds, &ScenarioId::new("HIGH").unwrap()).unwrap();
        'cells: for (cell, spec) in ds.cells().iter().zip(&scenario.specs) {
            let nr = project_cell(cell, ds.horizon);
            let curve = spec.original_curve().unwrap();
            let start = ds.horizon.start();
            let mut state = CellState {
                ledger: seed_ledger(nr.at(start).unwrap().0, start, &curve, ds.options.seed_mode),
                ..CellState::default()
            };
            for t in ds.horizon.years() {
                let Ok((record, next)) = step_year(&state, spec, &nr, t, ds.options.clamp_mode) else {
                    continue 'cells;
                };
                prop_assert!(
                    close_rel(next.accounted_stock(), record.bs.0, record.bs.0, IDENTITY_RTOL),
                    "seed {} {} {} {}: ledger {} + drb {} vs bs {}",
                    seed, cell.economy, cell.btype, t,
                    next.ledger.total(), next.cumulative_drb, record.bs.0
                );
                let entries = next.ledger.original.values().chain(next.ledger.renovated.values());
                for v in entries {
                    prop_assert!(*v >= globus_core::turnover::PURGE_THRESHOLD);
                }
                state = next;
            }
        }
    }

    #[test]
    fn more_renovation_never_raises_cumulative_nb(seed in 0u64..100_000, delta in 0.001f64..0.2) {
        let ds = toy_fixture(seed).dataset();
        let low_id = ScenarioId::new("LOW").unwrap();
        let low = Scenario::from_dataset(&ds, &low_id).unwrap();
        let pairs = [
            (low.clone(), Scenario::from_dataset(&ds, &ScenarioId::new("HIGH").unwrap()).unwrap()),
            (low.clone(), low.raised(delta, ds.horizon.start(), ds.horizon).unwrap()),
        ];
        for (base, more) in pairs {
            let (Ok(a), Ok(b)) = (run_scenario(&ds, &base), run_scenario(&ds, &more)) else {
                continue;
            };
            let (na, nb) = (cell_nb(&a), cell_nb(&b));
            let clamped = clamped_cells(&a, &b);
            for (key, base_nb) in &na {
                if clamped.contains(key) {
                    continue;
                }
                let scale = a.iter().map(|r| r.bs_nr.0).fold(0.0, f64::max);
                prop_assert!(
                    nb[key] <= base_nb + IDENTITY_RTOL * scale.max(1.0) * ds.horizon.len() as f64,
                    "seed {} {:?}: {} -> {}", seed, key, base_nb, nb[key]
                );
            }
        }
    }

    #[test]
    fn nr_equals_projection_bitwise(seed in 0u64..100_000) {
        let ds = toy_fixture(seed).dataset();
        let records = run_named(&ds, &ScenarioId::nr()).unwrap();
        for r in &records {
            let nr = project_nr(&ds, &r.economy, r.btype).unwrap();
            prop_assert_eq!(r.bs.0.to_bits(), nr.at(r.year).unwrap().0.to_bits());
            prop_assert_eq!(r.bs_nr.0.to_bits(), r.bs.0.to_bits());
            prop_assert_eq!(r.rb.0, 0.0);
            prop_assert_eq!(r.drb.0, 0.0);
        }
    }

    #[test]
    fn carbon_metrics_are_dimensionally_consistent(e in 1e-6f64..1e4, bs in 1e-3f64..1e6, p in 1.0f64..2e9) {
        let lhs = carbon_per_capita(e, p).unwrap();
        let rhs = carbon_intensity(e, bs).unwrap() * per_capita_floorspace(bs, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs());
    }

    #[test]
    fn cagr_inverts(start in 1e-3f64..1e6, ratio in 0.01f64..100.0, years in 1i64..200) {
        let end = start * ratio;
        let g = cagr(start, end, years).unwrap();
        let back = start * (1.0 + g).powi(years as i32);
        prop_assert!((back - end).abs() <= 1e-9 * end);
    }
}

#[test]
fn renovation_strictly_cuts_nb_where_eligible_stock_exists() {
    let mut checked = 0;
    for seed in 0..200 {
        let ds = toy_fixture(seed).dataset();
        let low = Scenario::from_dataset(&ds, &ScenarioId::new("LOW").unwrap()).unwrap();
        let raised = low.raised(0.05, ds.horizon.start(), ds.horizon).unwrap();
        let (Ok(a), Ok(b)) = (run_scenario(&ds, &low), run_scenario(&ds, &raised)) else {
            continue;
        };
        let (na, nb) = (cell_nb(&a), cell_nb(&b));
        for (key, base_nb) in &na {
            let extra_rb: f64 = b
                .iter()
                .zip(&a)
                .filter(|(x, _)| (x.economy.code.clone(), x.btype) == *key)
                .map(|(x, y)| x.rb.0 - y.rb.0)
                .sum();
            let clamped = b
                .iter()
                .any(|r| (r.economy.code.clone(), r.btype) == *key && r.nb_unclamped <= 0.0);
            if extra_rb > 1e-6 && !clamped {
                assert!(nb[key] < *base_nb, "seed {seed} {key:?}: {base_nb} -> {}", nb[key]);
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "only {checked} cells exercised");
}

// Pins a case where extra renovation lands in years whose new construction
// is already clamped to zero. The eligible pool it consumes early is missing
// later, so later renovation is lower and cumulative new construction rises.
// Monotonicity is therefore asserted for unclamped cells only.
#[test]
fn clamped_cell_can_gain_new_construction_from_renovation() {
    let ds = toy_fixture(24097).dataset();
    let low = Scenario::from_dataset(&ds, &ScenarioId::new("LOW").unwrap()).unwrap();
    let raised = low.raised(0.001, ds.horizon.start(), ds.horizon).unwrap();
    let a = run_scenario(&ds, &low).unwrap();
    let b = run_scenario(&ds, &raised).unwrap();
    let key = ("E0".to_string(), BuildingType::NonResidential);
    assert!(clamped_cells(&a, &b).contains(&key));
    assert!(cell_nb(&b)[&key] > cell_nb(&a)[&key]);
}

#[test]
fn stock_multiple_is_ratio_of_sums() {
    let ds = toy_fixture(7).dataset();
    let records = run_named(&ds, &ScenarioId::nr()).unwrap();
    let (base, end) = (ds.horizon.start(), Year(ds.horizon.end_year));
    let all = Grouping::all();
    let m = stock_multiple(&records, base, end, &all).unwrap();
    let ratio = grouped_stock(&records, end, &all).unwrap() / grouped_stock(&records, base, &all).unwrap();
    assert_eq!(m, ratio);
}

#[test]
fn loading_twice_is_identical() {
    let a = globus_core::load_dataset(common::global_config()).unwrap();
    let b = globus_core::load_dataset(common::global_config()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn parallel_runs_are_deterministic() {
    let ds = globus_core::load_dataset(common::global_config()).unwrap();
    for id in &ds.scenarios {
        let a = run_named(&ds, id).unwrap();
        let b = run_named(&ds, id).unwrap();
        assert_eq!(a, b);
    }
}
