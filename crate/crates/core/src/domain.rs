//! Shared value types: identifiers, units and the per-year flow record.
//!
//! Units are fixed across the engine: stocks and flows in million m² (Mm²),
//! per-capita values in m²/person, population in persons. Stocks are
//! end-of-year snapshots; flows are totals within a year.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DomainError;

/// Square metres in one Mm².
pub const M2_PER_MM2: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildingType {
    Residential,
    NonResidential,
}

impl BuildingType {
    pub const ALL: [BuildingType; 2] = [BuildingType::Residential, BuildingType::NonResidential];

    pub fn as_str(self) -> &'static str {
        match self {
            BuildingType::Residential => "residential",
            BuildingType::NonResidential => "non_residential",
        }
    }
}

impl fmt::Display for BuildingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuildingType {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "residential" => Ok(BuildingType::Residential),
            "non_residential" => Ok(BuildingType::NonResidential),
            other => Err(DomainError::UnknownBuildingType(other.to_string())),
        }
    }
}

/// Economy identifier. Ordering and equality use the code only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EconomyId {
    pub code: String,
    #[serde(default)]
    pub display_name: String,
}

impl EconomyId {
    pub fn new(code: impl Into<String>, display_name: impl Into<String>) -> Result<Self, DomainError> {
        let code = code.into();
        validate_code(&code)?;
        Ok(Self {
            code,
            display_name: display_name.into(),
        })
    }

    pub fn code(&self) -> &str {
        &self.code
    }
}

pub(crate) fn validate_code(code: &str) -> Result<(), DomainError> {
    if code.is_empty() || !code.is_ascii() || code.chars().any(|c| c.is_whitespace()) {
        return Err(DomainError::InvalidEconomyCode(code.to_string()));
    }
    Ok(())
}

impl PartialEq for EconomyId {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for EconomyId {}

impl PartialOrd for EconomyId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EconomyId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

impl std::hash::Hash for EconomyId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl fmt::Display for EconomyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Year(pub i32);

impl Year {
    pub fn get(self) -> i32 {
        self.0
    }

    pub fn prev(self) -> Year {
        Year(self.0 - 1)
    }

    pub fn next(self) -> Year {
        Year(self.0 + 1)
    }
}

impl fmt::Display for Year {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Inclusive simulation horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizon {
    pub start_year: i32,
    pub end_year: i32,
}

impl Default for Horizon {
    fn default() -> Self {
        Self {
            start_year: 2000,
            end_year: 2070,
        }
    }
}

impl Horizon {
    pub fn new(start_year: i32, end_year: i32) -> Result<Self, DomainError> {
        if end_year < start_year {
            return Err(DomainError::InvalidHorizon { start_year, end_year });
        }
        Ok(Self { start_year, end_year })
    }

    pub fn start(&self) -> Year {
        Year(self.start_year)
    }

    pub fn end(&self) -> Year {
        Year(self.end_year)
    }

    pub fn len(&self) -> usize {
        (self.end_year - self.start_year + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, year: Year) -> bool {
        (self.start_year..=self.end_year).contains(&year.0)
    }

    pub fn years(&self) -> impl Iterator<Item = Year> {
        (self.start_year..=self.end_year).map(Year)
    }

    /// Position of `year` in [`Horizon::years`].
    pub fn index(&self, year: Year) -> Option<usize> {
        self.contains(year).then(|| (year.0 - self.start_year) as usize)
    }
}

/// Floorspace in Mm².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FloorArea(pub f64);

impl FloorArea {
    pub const ZERO: FloorArea = FloorArea(0.0);

    /// Checked constructor: finite and non-negative.
    pub fn new(value: f64) -> Result<Self, DomainError> {
        if !value.is_finite() || value < 0.0 {
            return Err(DomainError::InvalidFloorArea(value));
        }
        Ok(Self(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Converts to m².
    pub fn to_m2(self) -> f64 {
        self.0 * M2_PER_MM2
    }
}

impl fmt::Display for FloorArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Mm2", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScenarioId(String);

impl ScenarioId {
    pub const NR: &'static str = "NR";
    pub const BAU: &'static str = "BAU";
    pub const TEP: &'static str = "TEP";

    pub fn new(name: impl Into<String>) -> Result<Self, DomainError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(DomainError::InvalidScenarioName(name));
        }
        Ok(Self(name))
    }

    pub fn nr() -> Self {
        Self(Self::NR.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The reserved zero-renovation scenario.
    pub fn is_nr(&self) -> bool {
        self.0 == Self::NR
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One simulated year for one (scenario, economy, building type) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub scenario: ScenarioId,
    pub economy: EconomyId,
    pub btype: BuildingType,
    pub year: Year,
    /// Scenario stock at the end of the year.
    pub bs: FloorArea,
    pub nb: FloorArea,
    pub db: FloorArea,
    pub rb: FloorArea,
    pub drb: FloorArea,
    /// Non-renovation stock for the same cell and year.
    pub bs_nr: FloorArea,
    /// Non-renovation stock of the previous year (held flat before the horizon).
    pub bs_nr_prev: FloorArea,
    /// New construction before the non-negativity clamp; may be negative.
    pub nb_unclamped: f64,
}

/// Relative tolerance used by the accounting identities.
pub const IDENTITY_RTOL: f64 = 1e-9;

/// `|lhs - rhs| <= rtol * scale`, with `scale` floored at 1 Mm² so that
/// identities over near-zero stocks are judged on an absolute basis.
pub fn close_rel(lhs: f64, rhs: f64, scale: f64, rtol: f64) -> bool {
    (lhs - rhs).abs() <= rtol * scale.abs().max(1.0)
}

impl FlowRecord {
    pub fn stock_delta_nr(&self) -> f64 {
        self.bs_nr.0 - self.bs_nr_prev.0
    }

    /// Magnitude against which the flow identity is judged.
    pub fn identity_scale(&self) -> f64 {
        [
            self.nb.0,
            self.db.0,
            self.rb.0,
            self.drb.0,
            self.bs_nr.0,
            self.bs_nr_prev.0,
        ]
        .into_iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Checks every [`FlowRecord`] invariant; an empty list means the record is valid.
pub fn validate_record(r: &FlowRecord) -> Vec<String> {
    let mut out = Vec::new();
    let fields = [
        ("bs", r.bs.0),
        ("nb", r.nb.0),
        ("db", r.db.0),
        ("rb", r.rb.0),
        ("drb", r.drb.0),
        ("bs_nr", r.bs_nr.0),
        ("bs_nr_prev", r.bs_nr_prev.0),
    ];
    for (name, v) in fields {
        if !v.is_finite() {
            out.push(format!("{name} must be finite"));
        } else if v < 0.0 {
            out.push(format!("{name} must be non-negative"));
        }
    }
    let lhs = r.nb.0 - r.db.0 + r.rb.0 - r.drb.0;
    let rhs = r.stock_delta_nr();
    if !close_rel(lhs, rhs, r.identity_scale(), IDENTITY_RTOL) {
        out.push(format!(
            "flow identity violated: nb - db + rb - drb = {lhs} but bs_nr(t) - bs_nr(t-1) = {rhs}"
        ));
    }
    if r.scenario.is_nr() {
        if r.rb.0 != 0.0 {
            out.push("NR scenario must have rb=0".to_string());
        }
        if r.drb.0 != 0.0 {
            out.push("NR scenario must have drb=0".to_string());
        }
        if r.bs.0 != r.bs_nr.0 {
            out.push("NR scenario must have bs equal to bs_nr".to_string());
        }
    }
    out
}
