//! Input series and their interpolation rules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{BuildingType, EconomyId, ScenarioId, Year};

/// How per-capita floorspace moves between two anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Easing {
    #[default]
    Linear,
    /// Logistic S-curve between anchors; endpoints and monotonicity are kept.
    Logistic,
}

const LOGISTIC_STEEPNESS: f64 = 10.0;

fn ease(s: f64, easing: Easing) -> f64 {
    match easing {
        Easing::Linear => s,
        Easing::Logistic => {
            let sigma = |x: f64| 1.0 / (1.0 + (-x).exp());
            let lo = sigma(-LOGISTIC_STEEPNESS / 2.0);
            let hi = sigma(LOGISTIC_STEEPNESS / 2.0);
            (sigma(LOGISTIC_STEEPNESS * (s - 0.5)) - lo) / (hi - lo)
        }
    }
}

/// Piecewise interpolation over points sorted by year, holding the boundary
/// values outside the covered range. `points` must be non-empty.
fn interpolate_points(points: &[(Year, f64)], t: Year, easing: Easing) -> f64 {
    debug_assert!(!points.is_empty());
    let (first, last) = (points[0], points[points.len() - 1]);
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    // First point strictly after t; it exists and has index >= 1 here.
    let hi = points.partition_point(|&(y, _)| y <= t);
    let (y0, v0) = points[hi - 1];
    let (y1, v1) = points[hi];
    if y0 == t {
        return v0;
    }
    let s = f64::from(t.0 - y0.0) / f64::from(y1.0 - y0.0);
    v0 + ease(s, easing) * (v1 - v0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSeries {
    pub economy: EconomyId,
    /// Persons by year.
    pub values: BTreeMap<Year, f64>,
}

impl PopulationSeries {
    fn points(&self) -> Vec<(Year, f64)> {
        self.values.iter().map(|(y, v)| (*y, *v)).collect()
    }
}

/// Linear between defined years, held at the boundary values outside them.
///
/// Panics if the series is empty.
pub fn interpolate_population(series: &PopulationSeries, t: Year) -> f64 {
    assert!(!series.values.is_empty(), "population series for {} is empty", series.economy);
    if let Some(v) = series.values.get(&t) {
        return *v;
    }
    interpolate_points(&series.points(), t, Easing::Linear)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerCapitaAnchors {
    pub economy: EconomyId,
    pub btype: BuildingType,
    /// (year, m²/person), strictly increasing in year.
    pub anchors: Vec<(Year, f64)>,
}

/// Per-capita floorspace at `t`: piecewise-linear between anchors, held flat
/// outside the anchor range.
pub fn interpolate_pf(anchors: &PerCapitaAnchors, t: Year) -> f64 {
    interpolate_pf_with(anchors, t, Easing::Linear)
}

pub fn interpolate_pf_with(anchors: &PerCapitaAnchors, t: Year, easing: Easing) -> f64 {
    assert!(!anchors.anchors.is_empty(), "no anchors for {}/{}", anchors.economy, anchors.btype);
    interpolate_points(&anchors.anchors, t, easing)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifetimeParams {
    pub economy: EconomyId,
    pub btype: BuildingType,
    pub mean_lifetime: f64,
    pub shape: f64,
    pub renovation_extension: f64,
    pub eligibility_age: f64,
}

impl LifetimeParams {
    /// Problems with the parameter set, as (field, value, constraint).
    pub fn violations(&self) -> Vec<(&'static str, f64, &'static str)> {
        let mut out = Vec::new();
        let finite = |v: f64| v.is_finite();
        if !(finite(self.mean_lifetime) && self.mean_lifetime > 0.0) {
            out.push(("mean_lifetime_years", self.mean_lifetime, "mean_lifetime_years > 0"));
        }
        if !(finite(self.shape) && self.shape >= 1.0) {
            out.push(("weibull_shape", self.shape, "weibull_shape >= 1"));
        }
        if !(finite(self.renovation_extension) && self.renovation_extension > 0.0) {
            out.push((
                "renovation_extension_years",
                self.renovation_extension,
                "renovation_extension_years > 0",
            ));
        }
        if !(finite(self.eligibility_age)
            && self.eligibility_age >= 0.0
            && self.eligibility_age < self.mean_lifetime)
        {
            out.push((
                "eligibility_age_years",
                self.eligibility_age,
                "0 <= eligibility_age_years < mean_lifetime_years",
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenovationSchedule {
    pub scenario: ScenarioId,
    pub economy: EconomyId,
    pub btype: BuildingType,
    /// Defined points; other years step-hold the last defined value.
    pub rates: BTreeMap<Year, f64>,
}

impl RenovationSchedule {
    /// Rate in force at `t`: the most recent defined value, zero before the first.
    pub fn rate_at(&self, t: Year) -> f64 {
        self.rates.range(..=t).next_back().map(|(_, r)| *r).unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionSeries {
    pub economy: EconomyId,
    pub btype: BuildingType,
    /// Operational emissions in MtCO₂ by year.
    pub values: BTreeMap<Year, f64>,
}
