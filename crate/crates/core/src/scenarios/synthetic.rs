//! Deterministic synthetic weather and demand days for desk-scale studies.
//!
//! Each outlook is one representative day per year: a half-sine irradiance bell
//! between 06:00 and 18:00, a diurnal temperature swing, a wind speed cosine and an
//! electricity demand with a midday shoulder and an evening peak. Demand grows 5% per
//! policy block.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BaseCase, TimeGrid};
use crate::catalog::ResourceId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outlook {
    Likely,
    Midlikely,
    Unlikely,
}

impl Outlook {
    pub const ALL: [Outlook; 3] = [Outlook::Likely, Outlook::Midlikely, Outlook::Unlikely];

    pub fn name(self) -> &'static str {
        match self {
            Outlook::Likely => "likely",
            Outlook::Midlikely => "midlikely",
            Outlook::Unlikely => "unlikely",
        }
    }

    // irradiance scale, temperature offset, mean wind, wind swing, demand scale
    fn shape(self) -> (f64, f64, f64, f64, f64) {
        match self {
            Outlook::Likely => (1.0, 0.0, 7.0, 2.5, 1.0),
            Outlook::Midlikely => (0.85, -2.0, 8.5, 3.0, 0.9),
            Outlook::Unlikely => (0.75, 3.0, 5.5, 2.0, 1.15),
        }
    }
}

const BLOCK_GROWTH: f64 = 0.05;

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn demand_shape(hour: f64) -> f64 {
    let bump = |centre: f64, width: f64| (-((hour - centre) / width).powi(2)).exp();
    0.6 + 0.25 * bump(12.0, 4.0) + 0.4 * bump(19.5, 2.5)
}

/// Builds a base case whose likely-outlook electricity peak in the first block is
/// roughly `peak_demand` kW; heat demand is `heat_fraction` of electricity.
pub fn synthetic_base(outlook: Outlook, grid: &TimeGrid, peak_demand: f64, heat_fraction: f64) -> BaseCase {
    let (irr_scale, temp_offset, wind_mean, wind_swing, demand_scale) = outlook.shape();
    let n = grid.len();
    let mut wind_speed = Vec::with_capacity(n);
    let mut irradiance = Vec::with_capacity(n);
    let mut temperature = Vec::with_capacity(n);
    let mut electricity = Vec::with_capacity(n);
    let mut heat = Vec::with_capacity(n);
    let peak_shape = (0..240).map(|i| demand_shape(i as f64 / 10.0)).fold(0.0, f64::max);
    for year in 0..grid.years {
        let growth = (1.0 + BLOCK_GROWTH).powi((year / grid.block_years) as i32);
        for t in 0..grid.intervals_per_day {
            let hour = (t as f64 + 0.5) * grid.delta_t;
            let sun = if (6.0..=18.0).contains(&hour) {
                (PI * (hour - 6.0) / 12.0).sin()
            } else {
                0.0
            };
            irradiance.push(round3(irr_scale * sun));
            temperature.push(round3(18.0 + temp_offset + 8.0 * (PI * (hour - 9.0) / 12.0).sin()));
            wind_speed.push(round3(
                (wind_mean + wind_swing * (2.0 * PI * (hour - 3.0) / 24.0).cos()).max(0.0),
            ));
            let e = round3(peak_demand * demand_scale * growth * demand_shape(hour) / peak_shape);
            electricity.push(e);
            heat.push(round3(heat_fraction * e));
        }
    }
    BaseCase {
        name: outlook.name().to_string(),
        wind_speed,
        irradiance,
        temperature,
        demand: BTreeMap::from([(ResourceId::Electricity, electricity), (ResourceId::Heat, heat)]),
    }
}
