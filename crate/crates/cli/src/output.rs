//! CSV serialization and all-or-nothing file writing.

use std::fs;
use std::path::{Path, PathBuf};

use globus_core::metrics::MetricRow;
use globus_core::FlowRecord;

use crate::format::sig6;
use crate::CliError;

pub const STOCKS_FILE: &str = "stocks.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const SENSITIVITY_FILE: &str = "sensitivity.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

pub const STOCKS_HEADER: [&str; 11] = [
    "scenario",
    "economy",
    "building_type",
    "year",
    "bs_mm2",
    "bs_nr_mm2",
    "nb_mm2",
    "db_mm2",
    "rb_mm2",
    "drb_mm2",
    "nb_unclamped_mm2",
];
pub const METRICS_HEADER: [&str; 7] =
    ["scenario", "economy", "building_type", "year", "metric", "value", "unit"];
pub const SENSITIVITY_HEADER: [&str; 2] = ["delta_rate", "avg_annual_nb_reduction_mm2"];

/// Sorts by (scenario, economy, building type name, year).
pub fn sort_records(records: &mut [FlowRecord]) {
    records.sort_by(|a, b| {
        (a.scenario.as_str(), a.economy.code.as_str(), a.btype.as_str(), a.year).cmp(&(
            b.scenario.as_str(),
            b.economy.code.as_str(),
            b.btype.as_str(),
            b.year,
        ))
    });
}

/// Sorts by (scenario, economy, building type, year, metric).
pub fn sort_metrics(rows: &mut [MetricRow]) {
    rows.sort_by(|a, b| {
        (a.scenario.as_str(), a.economy.as_str(), a.scope.as_str(), a.year, a.metric.name()).cmp(&(
            b.scenario.as_str(),
            b.economy.as_str(),
            b.scope.as_str(),
            b.year,
            b.metric.name(),
        ))
    });
}

fn table<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn stocks_csv(records: &[FlowRecord]) -> Vec<u8> {
    table(
        &STOCKS_HEADER,
        records.iter().map(|r| {
            [
                r.scenario.to_string(),
                r.economy.code.clone(),
                r.btype.as_str().to_string(),
                r.year.0.to_string(),
                sig6(r.bs.0),
                sig6(r.bs_nr.0),
                sig6(r.nb.0),
                sig6(r.db.0),
                sig6(r.rb.0),
                sig6(r.drb.0),
                sig6(r.nb_unclamped),
            ]
        }),
    )
}

pub fn metrics_csv(rows: &[MetricRow]) -> Vec<u8> {
    table(
        &METRICS_HEADER,
        rows.iter().map(|m| {
            [
                m.scenario.to_string(),
                m.economy.clone(),
                m.scope.as_str().to_string(),
                m.year.0.to_string(),
                m.metric.name().to_string(),
                sig6(m.value),
                m.unit().to_string(),
            ]
        }),
    )
}

pub fn sensitivity_csv(rows: &[(f64, f64)]) -> Vec<u8> {
    table(
        &SENSITIVITY_HEADER,
        rows.iter().map(|(d, r)| [sig6(*d), sig6(*r)]),
    )
}

/// Writes every file or none: contents go to temporaries first, and on any
/// failure both temporaries and already renamed outputs are removed.
pub fn write_all(out_dir: &Path, files: &[(&str, Vec<u8>)]) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;

    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let result = (|| {
        for (name, bytes) in files {
            let tmp = out_dir.join(format!(".{name}.partial"));
            fs::write(&tmp, bytes).map_err(io(&tmp))?;
            staged.push((tmp, out_dir.join(name)));
        }
        let mut done = 0;
        for (tmp, dest) in &staged {
            if let Err(e) = fs::rename(tmp, dest) {
                for (_, d) in &staged[..done] {
                    let _ = fs::remove_file(d);
                }
                return Err(io(dest)(e));
            }
            done += 1;
        }
        Ok(())
    })();
    if result.is_err() {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
    }
    result
}
