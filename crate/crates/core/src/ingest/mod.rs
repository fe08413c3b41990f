//! Input loading: `config.json` plus the CSV tables it references.
//!
//! Loading collects every problem it can find before failing, so a single
//! `validate` pass reports all of them. A returned [`Dataset`] has every
//! (economy, building type, year) lookup defined for the whole horizon.

mod config;
mod series;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

pub use config::{
    ClampMode, EconomyEntry, EngineOptions, InputFiles, MetricsOptions, RunConfig, SeedMode,
    SweepOptions,
};
pub use series::{
    interpolate_pf, interpolate_pf_with, interpolate_population, EmissionSeries, Easing,
    LifetimeParams, PerCapitaAnchors, PopulationSeries, RenovationSchedule,
};

use crate::domain::{BuildingType, EconomyId, Horizon, ScenarioId, Year};
use crate::error::{IngestError, IngestErrors, Location};

pub const POPULATION_COLUMNS: &[&str] = &["economy", "year", "population_persons"];
pub const PF_COLUMNS: &[&str] = &["economy", "building_type", "year", "m2_per_capita"];
pub const LIFETIME_COLUMNS: &[&str] = &[
    "economy",
    "building_type",
    "mean_lifetime_years",
    "weibull_shape",
    "renovation_extension_years",
    "eligibility_age_years",
];
pub const RENOVATION_COLUMNS: &[&str] =
    &["scenario", "economy", "building_type", "year", "renovation_rate"];
pub const EMISSION_COLUMNS: &[&str] = &["economy", "building_type", "year", "mtco2"];

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationRow {
    pub at: Location,
    pub economy: String,
    pub year: i32,
    pub persons: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfRow {
    pub at: Location,
    pub economy: String,
    pub btype: BuildingType,
    pub year: i32,
    pub m2_per_capita: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeRow {
    pub at: Location,
    pub economy: String,
    pub btype: BuildingType,
    pub mean_lifetime: f64,
    pub shape: f64,
    pub renovation_extension: f64,
    pub eligibility_age: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenovationRow {
    pub at: Location,
    pub scenario: String,
    pub economy: String,
    pub btype: BuildingType,
    pub year: i32,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionRow {
    pub at: Location,
    pub economy: String,
    pub btype: BuildingType,
    pub year: i32,
    pub mtco2: f64,
}

/// Parsed but not yet validated table contents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawInputs {
    pub population: Vec<PopulationRow>,
    pub per_capita_floorspace: Vec<PfRow>,
    pub lifetime_params: Vec<LifetimeRow>,
    pub renovation_schedule: Vec<RenovationRow>,
    pub emissions: Vec<EmissionRow>,
}

/// Dense inputs for one (economy, building type) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellInputs {
    pub economy: EconomyId,
    pub btype: BuildingType,
    /// Persons, one entry per horizon year.
    pub population: Vec<f64>,
    /// m²/person, one entry per horizon year.
    pub per_capita: Vec<f64>,
    pub lifetime: LifetimeParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub config: RunConfig,
    pub horizon: Horizon,
    pub options: EngineOptions,
    pub economies: Vec<EconomyId>,
    pub scenarios: Vec<ScenarioId>,
    pub population: BTreeMap<EconomyId, PopulationSeries>,
    pub per_capita_anchors: BTreeMap<(EconomyId, BuildingType), PerCapitaAnchors>,
    pub lifetimes: BTreeMap<(EconomyId, BuildingType), LifetimeParams>,
    pub schedules: BTreeMap<(ScenarioId, EconomyId, BuildingType), RenovationSchedule>,
    pub emissions: BTreeMap<(EconomyId, BuildingType), EmissionSeries>,
    pub groups: BTreeMap<String, Vec<EconomyId>>,
    cells: Vec<CellInputs>,
}

impl Dataset {
    /// Cells ordered by economy code, then building type.
    pub fn cells(&self) -> &[CellInputs] {
        &self.cells
    }

    pub fn cell(&self, economy: &str, btype: BuildingType) -> Option<&CellInputs> {
        self.cells
            .iter()
            .find(|c| c.economy.code == economy && c.btype == btype)
    }

    pub fn economy(&self, code: &str) -> Option<&EconomyId> {
        self.economies.iter().find(|e| e.code == code)
    }

    /// Population of an economy in a horizon year.
    pub fn population_at(&self, economy: &EconomyId, year: Year) -> Option<f64> {
        let idx = self.horizon.index(year)?;
        self.cells
            .iter()
            .find(|c| &c.economy == economy)
            .map(|c| c.population[idx])
    }

    /// Renovation schedule for a scenario and cell; `None` for the NR scenario.
    pub fn schedule(
        &self,
        scenario: &ScenarioId,
        economy: &EconomyId,
        btype: BuildingType,
    ) -> Option<&RenovationSchedule> {
        self.schedules
            .get(&(scenario.clone(), economy.clone(), btype))
    }

    pub fn emissions_at(&self, economy: &EconomyId, btype: BuildingType, year: Year) -> Option<f64> {
        self.emissions
            .get(&(economy.clone(), btype))
            .and_then(|s| s.values.get(&year).copied())
    }

    /// Validates raw table contents against the configuration.
    pub fn from_raw(config: RunConfig, raw: RawInputs) -> Result<Self, IngestErrors> {
        Builder::new(config).build(raw)
    }
}

/// Loads and validates a full dataset from a `config.json` path.
pub fn load_dataset(config_path: impl AsRef<Path>) -> Result<Dataset, IngestErrors> {
    let config_path = config_path.as_ref();
    let config = read_config(config_path).map_err(|e| IngestErrors(vec![e]))?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let (raw, mut errors) = read_inputs(base, &config.files);
    match Dataset::from_raw(config, raw) {
        Ok(ds) if errors.is_empty() => Ok(ds),
        Ok(_) => Err(IngestErrors(errors)),
        Err(IngestErrors(more)) => {
            errors.extend(more);
            Err(IngestErrors(errors))
        }
    }
}

pub fn read_config(path: &Path) -> Result<RunConfig, IngestError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IngestError::MissingFile(path.to_path_buf()),
        _ => IngestError::Config {
            location: Location {
                file: path.to_path_buf(),
                line: None,
            },
            message: e.to_string(),
        },
    })?;
    serde_json::from_str(&text).map_err(|e| IngestError::Config {
        location: Location {
            file: path.to_path_buf(),
            line: Some(e.line() as u64),
        },
        message: e.to_string(),
    })
}

/// Resolves an input path relative to the config directory.
pub fn resolve_input(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Reads every table named in `files`. Missing or malformed files are
/// reported and leave their table empty.
pub fn read_inputs(base: &Path, files: &InputFiles) -> (RawInputs, Vec<IngestError>) {
    let mut raw = RawInputs::default();
    let mut errors = Vec::new();

    let path = resolve_input(base, &files.population);
    for (at, rec) in read_table(&path, POPULATION_COLUMNS, &mut errors) {
        let row = (|| {
            Ok(PopulationRow {
                economy: rec[0].to_string(),
                year: parse_int(&at, "year", &rec[1])?,
                persons: parse_num(&at, "population_persons", &rec[2])?,
                at: at.clone(),
            })
        })();
        push_row(row, &mut raw.population, &mut errors);
    }

    let path = resolve_input(base, &files.per_capita_floorspace);
    for (at, rec) in read_table(&path, PF_COLUMNS, &mut errors) {
        let row = (|| {
            Ok(PfRow {
                economy: rec[0].to_string(),
                btype: parse_btype(&at, &rec[1])?,
                year: parse_int(&at, "year", &rec[2])?,
                m2_per_capita: parse_num(&at, "m2_per_capita", &rec[3])?,
                at: at.clone(),
            })
        })();
        push_row(row, &mut raw.per_capita_floorspace, &mut errors);
    }

    let path = resolve_input(base, &files.lifetime_params);
    for (at, rec) in read_table(&path, LIFETIME_COLUMNS, &mut errors) {
        let row = (|| {
            Ok(LifetimeRow {
                economy: rec[0].to_string(),
                btype: parse_btype(&at, &rec[1])?,
                mean_lifetime: parse_num(&at, "mean_lifetime_years", &rec[2])?,
                shape: parse_num(&at, "weibull_shape", &rec[3])?,
                renovation_extension: parse_num(&at, "renovation_extension_years", &rec[4])?,
                eligibility_age: parse_num(&at, "eligibility_age_years", &rec[5])?,
                at: at.clone(),
            })
        })();
        push_row(row, &mut raw.lifetime_params, &mut errors);
    }

    let path = resolve_input(base, &files.renovation_schedule);
    for (at, rec) in read_table(&path, RENOVATION_COLUMNS, &mut errors) {
        let row = (|| {
            Ok(RenovationRow {
                scenario: rec[0].to_string(),
                economy: rec[1].to_string(),
                btype: parse_btype(&at, &rec[2])?,
                year: parse_int(&at, "year", &rec[3])?,
                rate: parse_num(&at, "renovation_rate", &rec[4])?,
                at: at.clone(),
            })
        })();
        push_row(row, &mut raw.renovation_schedule, &mut errors);
    }

    if let Some(rel) = &files.emissions {
        let path = resolve_input(base, rel);
        for (at, rec) in read_table(&path, EMISSION_COLUMNS, &mut errors) {
            let row = (|| {
                Ok(EmissionRow {
                    economy: rec[0].to_string(),
                    btype: parse_btype(&at, &rec[1])?,
                    year: parse_int(&at, "year", &rec[2])?,
                    mtco2: parse_num(&at, "mtco2", &rec[3])?,
                    at: at.clone(),
                })
            })();
            push_row(row, &mut raw.emissions, &mut errors);
        }
    }

    (raw, errors)
}

fn push_row<T>(row: Result<T, IngestError>, rows: &mut Vec<T>, errors: &mut Vec<IngestError>) {
    match row {
        Ok(r) => rows.push(r),
        Err(e) => errors.push(e),
    }
}

fn schema(at: &Location, message: impl Into<String>) -> IngestError {
    IngestError::Schema {
        location: at.clone(),
        message: message.into(),
    }
}

fn range(at: &Location, field: &str, value: impl ToString, constraint: impl Into<String>) -> IngestError {
    IngestError::Range {
        location: at.clone(),
        field: field.to_string(),
        value: value.to_string(),
        constraint: constraint.into(),
    }
}

fn coverage(file: &Path, message: impl Into<String>) -> IngestError {
    IngestError::Coverage {
        location: Location {
            file: file.to_path_buf(),
            line: None,
        },
        message: message.into(),
    }
}

fn parse_int(at: &Location, column: &str, s: &str) -> Result<i32, IngestError> {
    s.parse::<i32>()
        .map_err(|_| schema(at, format!("column {column}: {s:?} is not an integer")))
}

fn parse_num(at: &Location, column: &str, s: &str) -> Result<f64, IngestError> {
    let v = s
        .parse::<f64>()
        .map_err(|_| schema(at, format!("column {column}: {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(schema(at, format!("column {column}: {s:?} is not finite")));
    }
    Ok(v)
}

fn parse_btype(at: &Location, s: &str) -> Result<BuildingType, IngestError> {
    s.parse().map_err(|e: crate::error::DomainError| schema(at, format!("column building_type: {e}")))
}

/// Reads a CSV table whose header must equal `columns` exactly.
fn read_table(
    path: &Path,
    columns: &[&str],
    errors: &mut Vec<IngestError>,
) -> Vec<(Location, csv::StringRecord)> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            errors.push(IngestError::MissingFile(path.to_path_buf()));
            return Vec::new();
        }
        Err(e) => {
            errors.push(schema(
                &Location {
                    file: path.to_path_buf(),
                    line: None,
                },
                e.to_string(),
            ));
            return Vec::new();
        }
    };
    let header_at = Location {
        file: path.to_path_buf(),
        line: Some(1),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(bytes.as_slice());
    let header = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            errors.push(schema(&header_at, format!("unreadable header: {e}")));
            return Vec::new();
        }
    };
    let found: Vec<&str> = header.iter().collect();
    if found.len() == 1 && found[0].is_empty() || found.is_empty() {
        errors.push(schema(&header_at, "missing header row"));
        return Vec::new();
    }
    if found != columns {
        let unknown: Vec<_> = found.iter().filter(|c| !columns.contains(c)).collect();
        let missing: Vec<_> = columns.iter().filter(|c| !found.contains(c)).collect();
        let message = if !unknown.is_empty() {
            format!("unknown column(s) {unknown:?}; expected {columns:?}")
        } else if !missing.is_empty() {
            format!("missing column(s) {missing:?}; expected {columns:?}")
        } else {
            format!("columns {found:?} out of order; expected {columns:?}")
        };
        errors.push(schema(&header_at, message));
        return Vec::new();
    }

    let mut rows = Vec::new();
    for result in reader.records() {
        match result {
            Ok(rec) => {
                let line = rec.position().map(|p| p.line());
                rows.push((
                    Location {
                        file: path.to_path_buf(),
                        line,
                    },
                    rec,
                ));
            }
            Err(e) => {
                let line = e.position().map(|p| p.line());
                errors.push(schema(
                    &Location {
                        file: path.to_path_buf(),
                        line,
                    },
                    e.to_string(),
                ));
            }
        }
    }
    rows
}

struct Builder {
    config: RunConfig,
    errors: Vec<IngestError>,
    economies: BTreeMap<String, EconomyId>,
}

impl Builder {
    fn new(config: RunConfig) -> Self {
        Self {
            config,
            errors: Vec::new(),
            economies: BTreeMap::new(),
        }
    }

    fn config_error(&mut self, message: impl Into<String>) {
        self.errors.push(IngestError::Config {
            location: Location {
                file: PathBuf::from("config.json"),
                line: None,
            },
            message: message.into(),
        });
    }

    fn known_economy(&mut self, at: &Location, code: &str) -> Option<EconomyId> {
        match self.economies.get(code) {
            Some(e) => Some(e.clone()),
            None => {
                self.errors
                    .push(schema(at, format!("unknown economy code {code:?} (not listed in config)")));
                None
            }
        }
    }

    fn build(mut self, raw: RawInputs) -> Result<Dataset, IngestErrors> {
        let horizon = match Horizon::new(self.config.horizon.start_year, self.config.horizon.end_year) {
            Ok(h) => h,
            Err(e) => {
                self.config_error(e.to_string());
                return Err(IngestErrors(self.errors));
            }
        };

        for entry in self.config.economies.clone() {
            match EconomyId::new(entry.code.clone(), entry.name.clone()) {
                Ok(id) => {
                    if self.economies.insert(entry.code.clone(), id).is_some() {
                        self.config_error(format!("economy code {:?} listed twice", entry.code));
                    }
                }
                Err(e) => self.config_error(e.to_string()),
            }
        }
        if self.economies.is_empty() {
            self.config_error("no economies configured");
        }

        let mut scenarios = Vec::new();
        for name in self.config.scenarios.clone() {
            match ScenarioId::new(name.clone()) {
                Ok(id) if scenarios.contains(&id) => {
                    self.config_error(format!("scenario {name:?} listed twice"))
                }
                Ok(id) => scenarios.push(id),
                Err(e) => self.config_error(e.to_string()),
            }
        }
        if scenarios.is_empty() {
            self.config_error("no scenarios configured");
        }
        let sweep_base = &self.config.sweep.base_scenario;
        if sweep_base != ScenarioId::NR && !scenarios.iter().any(|s| s.as_str() == sweep_base) {
            self.config_error(format!("sweep.base_scenario {sweep_base:?} is not a configured scenario"));
        }

        let mut groups = BTreeMap::new();
        for (name, members) in self.config.groups.clone() {
            let mut ids = Vec::new();
            for code in members {
                match self.economies.get(&code) {
                    Some(id) => ids.push(id.clone()),
                    None => self.config_error(format!("group {name:?} names unknown economy {code:?}")),
                }
            }
            groups.insert(name, ids);
        }
        if !horizon.contains(Year(self.config.metrics.base_year)) {
            self.config_error(format!(
                "metrics.base_year {} outside horizon {}..={}",
                self.config.metrics.base_year, horizon.start_year, horizon.end_year
            ));
        }
        if let Some(y) = self.config.sweep.start_year {
            if !horizon.contains(Year(y)) {
                self.config_error(format!(
                    "sweep.start_year {y} outside horizon {}..={}",
                    horizon.start_year, horizon.end_year
                ));
            }
        }
        if !self.errors.is_empty() {
            return Err(IngestErrors(self.errors));
        }

        let population = self.build_population(&raw.population, horizon);
        let per_capita_anchors = self.build_pf(&raw.per_capita_floorspace);
        let lifetimes = self.build_lifetimes(&raw.lifetime_params);
        let schedules = self.build_schedules(&raw.renovation_schedule, &scenarios, horizon);
        let emissions = self.build_emissions(&raw.emissions);

        if !self.errors.is_empty() {
            return Err(IngestErrors(self.errors));
        }

        let easing = self.config.options.pf_easing;
        let mut cells = Vec::new();
        for economy in self.economies.values() {
            let pop = &population[economy];
            let pop_dense: Vec<f64> = horizon.years().map(|y| interpolate_population(pop, y)).collect();
            for btype in BuildingType::ALL {
                let key = (economy.clone(), btype);
                let anchors = &per_capita_anchors[&key];
                cells.push(CellInputs {
                    economy: economy.clone(),
                    btype,
                    population: pop_dense.clone(),
                    per_capita: horizon
                        .years()
                        .map(|y| interpolate_pf_with(anchors, y, easing))
                        .collect(),
                    lifetime: lifetimes[&key].clone(),
                });
            }
        }

        Ok(Dataset {
            options: self.config.options.clone(),
            horizon,
            economies: self.economies.values().cloned().collect(),
            scenarios,
            population,
            per_capita_anchors,
            lifetimes,
            schedules,
            emissions,
            groups,
            cells,
            config: self.config,
        })
    }

    fn build_population(
        &mut self,
        rows: &[PopulationRow],
        horizon: Horizon,
    ) -> BTreeMap<EconomyId, PopulationSeries> {
        let mut out: BTreeMap<EconomyId, PopulationSeries> = BTreeMap::new();
        let mut file = None;
        for row in rows {
            file.get_or_insert_with(|| row.at.file.clone());
            let Some(economy) = self.known_economy(&row.at, &row.economy) else {
                continue;
            };
            if row.persons <= 0.0 {
                self.errors
                    .push(range(&row.at, "population_persons", row.persons, "population_persons > 0"));
                continue;
            }
            let series = out.entry(economy.clone()).or_insert_with(|| PopulationSeries {
                economy,
                values: BTreeMap::new(),
            });
            if series.values.insert(Year(row.year), row.persons).is_some() {
                self.errors.push(schema(
                    &row.at,
                    format!("duplicate population row for {} {}", row.economy, row.year),
                ));
            }
        }
        let file = file.unwrap_or_else(|| PathBuf::from(&self.config.files.population));
        for economy in self.economies.values() {
            match out.get(economy) {
                None => self.errors.push(coverage(
                    &file,
                    format!(
                        "population for {} has no rows; horizon requires {}..={}",
                        economy, horizon.start_year, horizon.end_year
                    ),
                )),
                Some(series) => {
                    let first = *series.values.keys().next().unwrap();
                    let last = *series.values.keys().next_back().unwrap();
                    if first.0 > horizon.start_year || last.0 < horizon.end_year {
                        let mut gaps = Vec::new();
                        if first.0 > horizon.start_year {
                            gaps.push(format!("{}..={}", horizon.start_year, first.0 - 1));
                        }
                        if last.0 < horizon.end_year {
                            gaps.push(format!("{}..={}", last.0 + 1, horizon.end_year));
                        }
                        self.errors.push(coverage(
                            &file,
                            format!(
                                "population for {} covers {}..={} but horizon requires {}..={}; missing years {}",
                                economy,
                                first,
                                last,
                                horizon.start_year,
                                horizon.end_year,
                                gaps.join(", ")
                            ),
                        ));
                    }
                }
            }
        }
        out
    }

    fn build_pf(&mut self, rows: &[PfRow]) -> BTreeMap<(EconomyId, BuildingType), PerCapitaAnchors> {
        let mut points: BTreeMap<(EconomyId, BuildingType), BTreeMap<Year, f64>> = BTreeMap::new();
        let mut file = None;
        for row in rows {
            file.get_or_insert_with(|| row.at.file.clone());
            let Some(economy) = self.known_economy(&row.at, &row.economy) else {
                continue;
            };
            if row.m2_per_capita <= 0.0 {
                self.errors
                    .push(range(&row.at, "m2_per_capita", row.m2_per_capita, "m2_per_capita > 0"));
                continue;
            }
            if points
                .entry((economy, row.btype))
                .or_default()
                .insert(Year(row.year), row.m2_per_capita)
                .is_some()
            {
                self.errors.push(schema(
                    &row.at,
                    format!("duplicate anchor for {}/{} {}", row.economy, row.btype, row.year),
                ));
            }
        }
        let file = file.unwrap_or_else(|| PathBuf::from(&self.config.files.per_capita_floorspace));
        let mut out = BTreeMap::new();
        for economy in self.economies.values() {
            for btype in BuildingType::ALL {
                let key = (economy.clone(), btype);
                let anchors: Vec<(Year, f64)> = points
                    .get(&key)
                    .map(|m| m.iter().map(|(y, v)| (*y, *v)).collect())
                    .unwrap_or_default();
                if anchors.len() < 2 {
                    self.errors.push(coverage(
                        &file,
                        format!(
                            "per-capita floorspace for {economy}/{btype} needs at least 2 anchors, found {}",
                            anchors.len()
                        ),
                    ));
                    continue;
                }
                out.insert(
                    key,
                    PerCapitaAnchors {
                        economy: economy.clone(),
                        btype,
                        anchors,
                    },
                );
            }
        }
        out
    }

    fn build_lifetimes(
        &mut self,
        rows: &[LifetimeRow],
    ) -> BTreeMap<(EconomyId, BuildingType), LifetimeParams> {
        let mut out = BTreeMap::new();
        let mut file = None;
        for row in rows {
            file.get_or_insert_with(|| row.at.file.clone());
            let Some(economy) = self.known_economy(&row.at, &row.economy) else {
                continue;
            };
            let params = LifetimeParams {
                economy: economy.clone(),
                btype: row.btype,
                mean_lifetime: row.mean_lifetime,
                shape: row.shape,
                renovation_extension: row.renovation_extension,
                eligibility_age: row.eligibility_age,
            };
            let violations = params.violations();
            if !violations.is_empty() {
                for (field, value, constraint) in violations {
                    self.errors.push(range(&row.at, field, value, constraint));
                }
                continue;
            }
            if out.insert((economy, row.btype), params).is_some() {
                self.errors.push(schema(
                    &row.at,
                    format!("duplicate lifetime row for {}/{}", row.economy, row.btype),
                ));
            }
        }
        let file = file.unwrap_or_else(|| PathBuf::from(&self.config.files.lifetime_params));
        for economy in self.economies.values() {
            for btype in BuildingType::ALL {
                if !out.contains_key(&(economy.clone(), btype)) {
                    self.errors.push(coverage(
                        &file,
                        format!("no lifetime parameters for {economy}/{btype}"),
                    ));
                }
            }
        }
        out
    }

    fn build_schedules(
        &mut self,
        rows: &[RenovationRow],
        scenarios: &[ScenarioId],
        horizon: Horizon,
    ) -> BTreeMap<(ScenarioId, EconomyId, BuildingType), RenovationSchedule> {
        let mut out: BTreeMap<(ScenarioId, EconomyId, BuildingType), RenovationSchedule> =
            BTreeMap::new();
        let mut file = None;
        for row in rows {
            file.get_or_insert_with(|| row.at.file.clone());
            if let Err(e) = ScenarioId::new(row.scenario.clone()) {
                self.errors.push(schema(&row.at, e.to_string()));
                continue;
            }
            let Some(economy) = self.known_economy(&row.at, &row.economy) else {
                continue;
            };
            if !(0.0..=1.0).contains(&row.rate) {
                self.errors.push(range(
                    &row.at,
                    "renovation_rate",
                    row.rate,
                    "0 <= renovation_rate <= 1",
                ));
                continue;
            }
            // Rows for scenarios outside this run are checked but unused.
            let Some(scenario) = scenarios.iter().find(|s| s.as_str() == row.scenario).cloned() else {
                continue;
            };
            if scenario.is_nr() {
                if row.rate != 0.0 {
                    self.errors.push(range(
                        &row.at,
                        "renovation_rate",
                        row.rate,
                        "renovation_rate = 0 for the reserved NR scenario",
                    ));
                }
                continue;
            }
            let sched = out
                .entry((scenario.clone(), economy.clone(), row.btype))
                .or_insert_with(|| RenovationSchedule {
                    scenario,
                    economy,
                    btype: row.btype,
                    rates: BTreeMap::new(),
                });
            if sched.rates.insert(Year(row.year), row.rate).is_some() {
                self.errors.push(schema(
                    &row.at,
                    format!(
                        "duplicate renovation rate for {}/{}/{} {}",
                        row.scenario, row.economy, row.btype, row.year
                    ),
                ));
            }
        }
        let file = file.unwrap_or_else(|| PathBuf::from(&self.config.files.renovation_schedule));
        for scenario in scenarios.iter().filter(|s| !s.is_nr()) {
            for economy in self.economies.values() {
                for btype in BuildingType::ALL {
                    match out.get(&(scenario.clone(), economy.clone(), btype)) {
                        None => self.errors.push(coverage(
                            &file,
                            format!("no renovation schedule for {scenario}/{economy}/{btype}"),
                        )),
                        Some(s) => {
                            let first = *s.rates.keys().next().unwrap();
                            if first.0 > horizon.start_year {
                                self.errors.push(coverage(
                                    &file,
                                    format!(
                                        "renovation schedule for {scenario}/{economy}/{btype} starts in {first}; years {}..={} undefined",
                                        horizon.start_year,
                                        first.0 - 1
                                    ),
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn build_emissions(
        &mut self,
        rows: &[EmissionRow],
    ) -> BTreeMap<(EconomyId, BuildingType), EmissionSeries> {
        let mut out: BTreeMap<(EconomyId, BuildingType), EmissionSeries> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for row in rows {
            let Some(economy) = self.known_economy(&row.at, &row.economy) else {
                continue;
            };
            if row.mtco2 < 0.0 {
                self.errors.push(range(&row.at, "mtco2", row.mtco2, "mtco2 >= 0"));
                continue;
            }
            if !seen.insert((economy.clone(), row.btype, row.year)) {
                self.errors.push(schema(
                    &row.at,
                    format!("duplicate emissions row for {}/{} {}", row.economy, row.btype, row.year),
                ));
                continue;
            }
            out.entry((economy.clone(), row.btype))
                .or_insert_with(|| EmissionSeries {
                    economy,
                    btype: row.btype,
                    values: BTreeMap::new(),
                })
                .values
                .insert(Year(row.year), row.mtco2);
        }
        out
    }
}
