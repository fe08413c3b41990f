//! Batch runner: validate inputs, run scenarios, sweep renovation rates.
//!
//! Every command returns a process exit code: [`EXIT_OK`], [`EXIT_INVALID`]
//! for input or argument problems, [`EXIT_ENGINE`] when the simulation or
//! output writing fails. Diagnostics go to the supplied writer.

pub mod format;
pub mod manifest;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use globus_core::metrics::{cumulative_nb, derive_metrics, sensitivity_against, MetricRow};
use globus_core::{
    load_dataset, run_named, run_scenario, Dataset, EngineError, FlowRecord, IngestErrors,
    MetricError, Scenario, ScenarioId, Year,
};
use thiserror::Error;

pub use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

pub const THREADS_ENV: &str = "GLOBUS_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{} input problem(s)", .0.0.len())]
    Ingest(IngestErrors),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ingest(_) | CliError::Usage(_) => EXIT_INVALID,
            CliError::Engine(_) | CliError::Metric(_) | CliError::Io { .. } => EXIT_ENGINE,
        }
    }

    /// One line per problem.
    pub fn report(&self, diag: &mut dyn Write) {
        match self {
            CliError::Ingest(errs) => {
                for e in &errs.0 {
                    let _ = writeln!(diag, "error: {e}");
                }
            }
            other => {
                let _ = writeln!(diag, "error: {other}");
            }
        }
    }
}

fn finish(result: Result<(), CliError>, diag: &mut dyn Write) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            e.report(diag);
            e.exit_code()
        }
    }
}

/// Checks that the configuration and every input table load cleanly.
pub fn cmd_validate(config: &Path, diag: &mut dyn Write) -> i32 {
    let result = load(config).map(|ds| {
        let _ = writeln!(
            diag,
            "ok: {} economies, {} scenarios, {}..={}",
            ds.economies.len(),
            ds.scenarios.len(),
            ds.horizon.start_year,
            ds.horizon.end_year
        );
    });
    finish(result, diag)
}

/// Runs every configured scenario and writes `stocks.csv`, `metrics.csv`
/// and `manifest.json` into `out_dir`.
pub fn cmd_run(config: &Path, out_dir: &Path, diag: &mut dyn Write) -> i32 {
    let result = (|| {
        let ds = load(config)?;
        let (records, metrics) = with_pool(|| simulate(&ds))??;
        let manifest = RunManifest::new(config, &ds).map_err(|source| CliError::Io {
            path: config.to_path_buf(),
            source,
        })?;
        let manifest = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        output::write_all(
            out_dir,
            &[
                (output::STOCKS_FILE, output::stocks_csv(&records)),
                (output::METRICS_FILE, output::metrics_csv(&metrics)),
                (output::MANIFEST_FILE, manifest.into_bytes()),
            ],
        )?;
        let _ = writeln!(
            diag,
            "wrote {} stock rows, {} metric rows to {}",
            records.len(),
            metrics.len(),
            out_dir.display()
        );
        Ok(())
    })();
    finish(result, diag)
}

/// Raises the sweep base scenario's rates by each delta and writes the
/// average annual reduction in global new construction to `sensitivity.csv`.
pub fn cmd_sweep(config: &Path, out_dir: &Path, deltas: &[f64], diag: &mut dyn Write) -> i32 {
    let result = (|| {
        if let Some(bad) = deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(CliError::Usage(format!("delta {bad} must be a finite rate >= 0")));
        }
        let ds = load(config)?;
        let rows = with_pool(|| sweep(&ds, deltas))??;
        for (delta, reduction) in &rows {
            let _ = writeln!(diag, "delta {delta}: {reduction:.3} Mm2/yr average reduction in new construction");
        }
        output::write_all(out_dir, &[(output::SENSITIVITY_FILE, output::sensitivity_csv(&rows))])
    })();
    finish(result, diag)
}

fn load(config: &Path) -> Result<Dataset, CliError> {
    load_dataset(config).map_err(CliError::Ingest)
}

/// All scenario records plus derived metrics, each sorted for output.
pub fn simulate(ds: &Dataset) -> Result<(Vec<FlowRecord>, Vec<MetricRow>), CliError> {
    let mut records = Vec::new();
    for id in &ds.scenarios {
        records.extend(run_named(ds, id)?);
    }
    output::sort_records(&mut records);
    let mut metrics = derive_metrics(ds, &records)?;
    output::sort_metrics(&mut metrics);
    Ok((records, metrics))
}

/// (delta, average annual reduction) per requested delta, in input order.
pub fn sweep(ds: &Dataset, deltas: &[f64]) -> Result<Vec<(f64, f64)>, CliError> {
    let base_id = ScenarioId::new(ds.config.sweep.base_scenario.clone())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let base = Scenario::from_dataset(ds, &base_id)?;
    let from = Year(ds.config.sweep.start_year.unwrap_or(ds.horizon.start_year));
    let base_nb = cumulative_nb(&run_scenario(ds, &base)?);
    deltas
        .iter()
        .map(|&d| Ok((d, sensitivity_against(ds, &base, base_nb, d, from)?)))
        .collect()
}

/// Number of worker threads requested through `GLOBUS_THREADS`, if any.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match thread_cap()? {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
