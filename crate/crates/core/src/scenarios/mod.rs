//! Time grid, renewable availability, policy trajectories and scenario assembly.

mod profiles;
pub mod synthetic;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, EquipmentKind, PvParams, ResourceId, WindParams};
use crate::error::{Error, Result};

pub use profiles::{load_profiles, parse_profiles, write_profiles};

/// Discretisation of the planning horizon: `years` representative days, each split
/// into `intervals_per_day` intervals of `delta_t` hours and weighted by
/// `days_per_year`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub intervals_per_day: usize,
    pub delta_t: f64,
    pub years: usize,
    pub days_per_year: f64,
    pub block_years: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            intervals_per_day: 48,
            delta_t: 0.5,
            years: 20,
            days_per_year: 365.0,
            block_years: 5,
        }
    }
}

impl TimeGrid {
    pub fn new(intervals_per_day: usize, years: usize, block_years: usize) -> Result<TimeGrid> {
        let grid = TimeGrid {
            intervals_per_day,
            delta_t: 24.0 / intervals_per_day as f64,
            years,
            days_per_year: 365.0,
            block_years,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.intervals_per_day == 0 || self.years == 0 || self.block_years == 0 {
            return Err(Error::Invalid("time grid counts must be positive".into()));
        }
        if ((self.intervals_per_day as f64) * self.delta_t - 24.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "{} intervals of {} h do not cover 24 h",
                self.intervals_per_day, self.delta_t
            )));
        }
        if !self.years.is_multiple_of(self.block_years) {
            return Err(Error::Invalid(format!(
                "{} years is not a whole number of {}-year blocks",
                self.years, self.block_years
            )));
        }
        if !(self.days_per_year > 0.0) {
            return Err(Error::Invalid("days_per_year must be positive".into()));
        }
        Ok(())
    }

    /// Number of (year, interval) slots.
    pub fn len(&self) -> usize {
        self.years * self.intervals_per_day
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn slot(&self, year: usize, interval: usize) -> usize {
        year * self.intervals_per_day + interval
    }

    pub fn blocks(&self) -> usize {
        self.years / self.block_years
    }
}

/// A bundle of weather and demand profiles that always move together.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCase {
    pub name: String,
    /// m/s per (year, interval), flattened year-major.
    pub wind_speed: Vec<f64>,
    pub irradiance: Vec<f64>,
    /// °C.
    pub temperature: Vec<f64>,
    pub demand: BTreeMap<ResourceId, Vec<f64>>,
}

impl BaseCase {
    pub fn validate(&self, grid: &TimeGrid) -> Result<()> {
        let expected = grid.len();
        let mut series: Vec<(String, &Vec<f64>)> = vec![
            ("wind_speed".into(), &self.wind_speed),
            ("irradiance".into(), &self.irradiance),
            ("temperature".into(), &self.temperature),
        ];
        for (r, d) in &self.demand {
            series.push((format!("demand_{}", r.label().to_lowercase()), d));
        }
        for (name, s) in &series {
            if s.len() != expected {
                return Err(Error::ProfileLengthMismatch {
                    name: self.name.clone(),
                    series: name.clone(),
                    expected,
                    found: s.len(),
                });
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::Invalid(format!("{}: non-finite value in {name}", self.name)));
            }
        }
        if self.irradiance.iter().any(|&v| v < 0.0) {
            return Err(Error::Invalid(format!("{}: negative irradiance", self.name)));
        }
        if self.wind_speed.iter().any(|&v| v < 0.0) {
            return Err(Error::Invalid(format!("{}: negative wind speed", self.name)));
        }
        for (r, d) in &self.demand {
            if d.iter().any(|&v| v < 0.0) {
                return Err(Error::Invalid(format!("{}: negative {r} demand", self.name)));
            }
        }
        Ok(())
    }

    pub fn demand(&self, resource: ResourceId, slot: usize) -> f64 {
        self.demand.get(&resource).map_or(0.0, |d| d[slot])
    }

    /// Probability-weighted pointwise mean of several bases.
    pub fn weighted_mean(name: &str, bases: &[(&BaseCase, f64)]) -> BaseCase {
        let total: f64 = bases.iter().map(|(_, p)| p).sum();
        let len = bases[0].0.wind_speed.len();
        let mean = |pick: &dyn Fn(&BaseCase) -> Option<&Vec<f64>>| -> Vec<f64> {
            (0..len)
                .map(|i| weighted_mean(bases.iter().map(|(b, p)| (pick(b).map_or(0.0, |s| s[i]), *p)), total))
                .collect()
        };
        let resources: std::collections::BTreeSet<ResourceId> =
            bases.iter().flat_map(|(b, _)| b.demand.keys().copied()).collect();
        BaseCase {
            name: name.to_string(),
            wind_speed: mean(&|b| Some(&b.wind_speed)),
            irradiance: mean(&|b| Some(&b.irradiance)),
            temperature: mean(&|b| Some(&b.temperature)),
            demand: resources
                .into_iter()
                .map(|r| (r, mean(&|b| b.demand.get(&r))))
                .collect(),
        }
    }
}

/// Weighted mean that returns the common value exactly when all values agree.
fn weighted_mean(items: impl Iterator<Item = (f64, f64)> + Clone, total: f64) -> f64 {
    let mut values = items.clone().map(|(v, _)| v);
    let first = values.next().unwrap_or(0.0);
    if values.all(|v| v == first) {
        return first;
    }
    items.map(|(v, p)| v * p).sum::<f64>() / total
}

/// Per-year policy values that step multiplicatively at the start of each block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyTrajectory {
    pub base_value: f64,
    pub change_per_block: f64,
    pub values: Vec<f64>,
}

impl PolicyTrajectory {
    pub fn constant(value: f64, grid: &TimeGrid) -> PolicyTrajectory {
        PolicyTrajectory {
            base_value: value,
            change_per_block: 0.0,
            values: vec![value; grid.years],
        }
    }

    /// Probability-weighted mean of several trajectories, year by year.
    pub fn weighted_mean(trajectories: &[(&PolicyTrajectory, f64)]) -> PolicyTrajectory {
        if trajectories.iter().all(|(t, _)| *t == trajectories[0].0) {
            return trajectories[0].0.clone();
        }
        let total: f64 = trajectories.iter().map(|(_, p)| p).sum();
        let years = trajectories[0].0.values.len();
        let values: Vec<f64> = (0..years)
            .map(|k| weighted_mean(trajectories.iter().map(|(t, p)| (t.values[k], *p)), total))
            .collect();
        PolicyTrajectory {
            base_value: values[0],
            change_per_block: f64::NAN,
            values,
        }
    }
}

/// Builds `grid.years` values of `base · (1 + change)^block`, multiplying once per
/// completed block so a three-step 20% cut from 280 lands on 143.36 exactly.
pub fn build_trajectory(base: f64, change_per_block: f64, grid: &TimeGrid) -> Result<PolicyTrajectory> {
    if !(base > 0.0) || !(1.0 + change_per_block > 0.0) {
        return Err(Error::Invalid(format!(
            "trajectory needs base > 0 and change > -1, got {base} and {change_per_block}"
        )));
    }
    let factor = 1.0 + change_per_block;
    let mut level = base;
    let mut values = Vec::with_capacity(grid.years);
    for block in 0..grid.blocks() {
        if block > 0 {
            level *= factor;
        }
        values.extend(std::iter::repeat_n(level, grid.block_years));
    }
    Ok(PolicyTrajectory {
        base_value: base,
        change_per_block,
        values,
    })
}

/// Fraction of rated PV power available at irradiance `irradiance` and cell
/// temperature `temperature`, clamped to `[0, 1]`.
pub fn pv_availability(irradiance: f64, temperature: f64, params: &PvParams) -> f64 {
    let raw = params.efficiency * irradiance * (1.0 - params.temp_coeff * (temperature - params.t_ref));
    raw.clamp(0.0, 1.0)
}

/// Fraction of rated wind power available at wind speed `speed`.
pub fn wind_availability(speed: f64, params: &WindParams) -> f64 {
    if speed < params.cut_in || speed > params.cut_out {
        0.0
    } else if speed >= params.rated {
        1.0
    } else {
        (speed - params.cut_in) / (params.rated - params.cut_in)
    }
}

/// Emission and carbon-price trajectories applied together to every base case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyPair {
    pub name: String,
    pub cet_price: PolicyTrajectory,
    pub emission_limit: PolicyTrajectory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub base: Arc<BaseCase>,
    pub policy: String,
    /// Currency per gCO₂, per year.
    pub cet_price: PolicyTrajectory,
    /// gCO₂ per kWh of electric load, per year.
    pub emission_limit: PolicyTrajectory,
    pub probability: f64,
    /// Availability fraction per renewable equipment id, per (year, interval).
    pub availability: BTreeMap<String, Vec<f64>>,
}

impl Scenario {
    pub fn availability(&self, equip: &str, slot: usize) -> f64 {
        self.availability.get(equip).map_or(0.0, |a| a[slot])
    }

    pub fn demand(&self, resource: ResourceId, slot: usize) -> f64 {
        self.base.demand(resource, slot)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
    pub grid: TimeGrid,
}

impl ScenarioSet {
    pub fn new(scenarios: Vec<Scenario>, grid: TimeGrid) -> Result<ScenarioSet> {
        if scenarios.is_empty() {
            return Err(Error::Invalid("scenario set is empty".into()));
        }
        for s in &scenarios {
            if !(0.0..=1.0).contains(&s.probability) {
                return Err(Error::Invalid(format!("scenario {} probability out of [0, 1]", s.id)));
            }
        }
        let total: f64 = scenarios.iter().map(|s| s.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("scenario probabilities sum to {total}")));
        }
        Ok(ScenarioSet { scenarios, grid })
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    /// The set holding only scenario `index`, re-weighted to probability one.
    pub fn single(&self, index: usize) -> ScenarioSet {
        let mut s = self.scenarios[index].clone();
        s.probability = 1.0;
        ScenarioSet {
            scenarios: vec![s],
            grid: self.grid,
        }
    }
}

/// Availability series for every renewable device in the catalog under `base`.
pub fn availability_for(base: &BaseCase, catalog: &Catalog) -> BTreeMap<String, Vec<f64>> {
    catalog
        .equipment
        .iter()
        .filter_map(|e| {
            let series = match e.kind {
                EquipmentKind::RenewablePV => {
                    let p = e.pv_params.unwrap_or_default();
                    base.irradiance
                        .iter()
                        .zip(&base.temperature)
                        .map(|(&phi, &temp)| pv_availability(phi, temp, &p))
                        .collect()
                }
                EquipmentKind::RenewableWind => {
                    let w = e.wind_params.unwrap_or_default();
                    base.wind_speed.iter().map(|&v| wind_availability(v, &w)).collect()
                }
                _ => return None,
            };
            Some((e.id.clone(), series))
        })
        .collect()
}

/// Cartesian product of base cases and policy pairs with equal probabilities.
///
/// Scenarios are numbered policy-major: `w1..wB` share the first policy and run
/// through every base, then the next policy follows.
pub fn assemble_scenarios(
    bases: &[BaseCase],
    policies: &[PolicyPair],
    grid: &TimeGrid,
    catalog: &Catalog,
) -> Result<ScenarioSet> {
    grid.validate()?;
    if bases.is_empty() || policies.is_empty() {
        return Err(Error::Invalid("need at least one base case and one policy".into()));
    }
    for b in bases {
        b.validate(grid)?;
    }
    for p in policies {
        for (series, t) in [("cet_price", &p.cet_price), ("emission_limit", &p.emission_limit)] {
            if t.values.len() != grid.years {
                return Err(Error::ProfileLengthMismatch {
                    name: p.name.clone(),
                    series: series.into(),
                    expected: grid.years,
                    found: t.values.len(),
                });
            }
        }
    }
    let count = bases.len() * policies.len();
    let probability = 1.0 / count as f64;
    let shared: Vec<(Arc<BaseCase>, BTreeMap<String, Vec<f64>>)> = bases
        .iter()
        .map(|b| (Arc::new(b.clone()), availability_for(b, catalog)))
        .collect();
    let mut scenarios = Vec::with_capacity(count);
    for policy in policies {
        for (base, availability) in &shared {
            scenarios.push(Scenario {
                id: format!("w{}", scenarios.len() + 1),
                base: Arc::clone(base),
                policy: policy.name.clone(),
                cet_price: policy.cet_price.clone(),
                emission_limit: policy.emission_limit.clone(),
                probability,
                availability: availability.clone(),
            });
        }
    }
    ScenarioSet::new(scenarios, *grid)
}
