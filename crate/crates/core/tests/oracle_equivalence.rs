mod common;

use common::{max_rel_diff, toy_fixture};
use globus_core::ingest::{ClampMode, SeedMode};
use globus_core::oracle::oracle_run_named;
use globus_core::run_named;

const TOYS: u64 = 40;

#[test]
fn engine_matches_oracle_on_random_toys() {
    let mut modes = std::collections::BTreeSet::new();
    let mut compared = 0;
    let mut both_failed = 0;
    let mut overall = 0.0f64;
    let mut clamped = 0;
    for seed in 0..TOYS {
        let toy = toy_fixture(seed);
        let ds = toy.dataset();
        modes.insert((
            ds.options.clamp_mode == ClampMode::Proportional,
            ds.options.seed_mode == SeedMode::SingleCohort,
        ));
        for id in &ds.scenarios {
            let engine = run_named(&ds, id);
            let oracle = oracle_run_named(&ds, id);
            match (engine, oracle) {
                (Ok(e), Ok(o)) => {
                    let worst = max_rel_diff(&e, &o).unwrap_or_else(|m| panic!("seed {seed} {id}: {m}"));
                    assert!(worst <= 1e-9, "seed {seed} {id}: max relative difference {worst:e}");
                    compared += 1;
                    clamped += e.iter().filter(|r| r.nb_unclamped < 0.0).count();
                    overall = overall.max(worst);
                }
                (Err(e), Err(o)) => {
                    assert_eq!(
                        std::mem::discriminant(&e),
                        std::mem::discriminant(&o),
                        "seed {seed} {id}: {e} vs {o}"
                    );
                    both_failed += 1;
                }
                (e, o) => panic!("seed {seed} {id}: engine {:?} oracle {:?}", e.err(), o.err()),
            }
        }
    }
    eprintln!("{compared} runs matched (max relative difference {overall:e}), {both_failed} failed in both, {clamped} clamped years");
    assert_eq!(modes.len(), 4, "every clamp/seed mode combination drawn");
    assert!(clamped > 0, "no clamped year exercised");
    assert!(compared as u64 >= TOYS * 2, "too few successful comparisons: {compared}");
}

#[test]
fn oracle_rejects_oversized_inputs() {
    let ds = globus_core::load_dataset(common::global_config()).unwrap();
    assert!(oracle_run_named(&ds, &globus_core::ScenarioId::nr()).is_err());
}
