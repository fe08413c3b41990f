//! Non-renovation stock: per-capita floorspace times population.

use crate::domain::{BuildingType, EconomyId, FloorArea, Horizon, Year, M2_PER_MM2};
use crate::error::EngineError;
use crate::ingest::{CellInputs, Dataset};

#[derive(Debug, Clone, PartialEq)]
pub struct NrTrajectory {
    pub economy: EconomyId,
    pub btype: BuildingType,
    pub horizon: Horizon,
    /// Mm², one entry per horizon year.
    pub stock: Vec<FloorArea>,
}

impl NrTrajectory {
    pub fn at(&self, year: Year) -> Option<FloorArea> {
        self.horizon.index(year).map(|i| self.stock[i])
    }

    /// Stock in `year`, with the start-year value held for earlier years.
    pub(crate) fn at_or_start(&self, year: Year) -> FloorArea {
        if year < self.horizon.start() {
            self.stock[0]
        } else {
            self.stock[self.horizon.index(year).expect("year within horizon")]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Year, FloorArea)> + '_ {
        self.horizon.years().zip(self.stock.iter().copied())
    }
}

/// Mm² from m²/person and persons.
pub fn stock_from_per_capita(m2_per_capita: f64, persons: f64) -> f64 {
    m2_per_capita * persons / M2_PER_MM2
}

pub fn project_cell(cell: &CellInputs, horizon: Horizon) -> NrTrajectory {
    NrTrajectory {
        economy: cell.economy.clone(),
        btype: cell.btype,
        horizon,
        stock: cell
            .per_capita
            .iter()
            .zip(&cell.population)
            .map(|(pf, pop)| FloorArea(stock_from_per_capita(*pf, *pop)))
            .collect(),
    }
}

/// Non-renovation trajectory for one cell, or `None` if the cell is unknown.
pub fn project_nr(dataset: &Dataset, economy: &EconomyId, btype: BuildingType) -> Option<NrTrajectory> {
    dataset
        .cell(economy.code(), btype)
        .map(|c| project_cell(c, dataset.horizon))
}

/// `stock(t) - stock(t-1)`; undefined at the horizon start.
pub fn stock_delta(traj: &NrTrajectory, t: Year) -> Result<f64, EngineError> {
    let h = traj.horizon;
    if t <= h.start() || t > h.end() {
        return Err(EngineError::YearOutOfRange {
            year: t,
            start: h.start().next(),
            end: h.end(),
        });
    }
    Ok(traj.at_or_start(t).0 - traj.at_or_start(t.prev()).0)
}
