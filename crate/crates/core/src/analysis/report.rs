use log::warn;
use serde::Serialize;

use crate::catalog::{Catalog, Direction, ResourceId};
use crate::error::{Error, Result};
use crate::model::{emission_allowance, instance_resources, StudyConfig, Symbol, VarKey, SNG_PRICE_SHARE};
use crate::scenarios::ScenarioSet;
use crate::solve::Solution;

const GRAMS_PER_TONNE: f64 = 1e6;

fn value(solution: &Solution, key: &VarKey) -> f64 {
    solution.value(key).unwrap_or(0.0)
}

fn require_values(solution: &Solution) -> Result<()> {
    if solution.values.len() != solution.index.len() {
        return Err(Error::Invalid(format!("solution with status {} carries no assignment", solution.status)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignItem {
    pub equipment: String,
    pub rated_kw: f64,
    /// Storage only.
    pub capacity_kwh: Option<f64>,
}

/// Installed equipment in catalog order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DesignReport {
    pub items: Vec<DesignItem>,
}

impl DesignReport {
    pub fn ids(&self) -> Vec<&str> {
        self.items.iter().map(|i| i.equipment.as_str()).collect()
    }
}

/// Equipment with an install decision of one, with rated power and capacity.
pub fn extract_design(solution: &Solution, catalog: &Catalog) -> DesignReport {
    let items = catalog
        .equipment
        .iter()
        .filter(|e| value(solution, &VarKey::a(&e.id)) > 0.5)
        .map(|e| DesignItem {
            equipment: e.id.clone(),
            rated_kw: value(solution, &VarKey::rp(&e.id)),
            capacity_kwh: e.is_storage().then(|| value(solution, &VarKey::b(&e.id))),
        })
        .collect();
    DesignReport { items }
}

/// Signed electricity flow of one source during one interval; negative values draw
/// from the bus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flow {
    pub source: String,
    pub kwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispatchRow {
    /// 0-based.
    pub interval: usize,
    pub flows: Vec<Flow>,
    pub demand_kwh: f64,
}

impl DispatchRow {
    pub fn flow(&self, source: &str) -> f64 {
        self.flows.iter().filter(|f| f.source == source).map(|f| f.kwh).sum()
    }

    /// Flows minus demand; zero when the electricity balance holds.
    pub fn residual(&self) -> f64 {
        self.flows.iter().map(|f| f.kwh).sum::<f64>() - self.demand_kwh
    }

    /// Energy produced or bought during the interval. Storage discharge is left out
    /// because it only returns energy counted when it was produced.
    pub fn supply(&self) -> f64 {
        self.flows
            .iter()
            .filter(|f| !f.source.ends_with(DISCHARGE))
            .map(|f| f.kwh.max(0.0))
            .sum()
    }
}

pub const GRID: &str = "grid";
pub const SURPLUS: &str = "surplus";
pub const RESERVE: &str = "reserve";
const DISCHARGE: &str = ":discharge";

fn check_indices(set: &ScenarioSet, scenario: usize, year: usize) -> Result<()> {
    if scenario >= set.len() {
        return Err(Error::IndexOutOfRange(format!("scenario {} of {}", scenario + 1, set.len())));
    }
    if year >= set.grid.years {
        return Err(Error::IndexOutOfRange(format!("year {} of {}", year + 1, set.grid.years)));
    }
    Ok(())
}

/// Electricity flows of every interval of the representative day of `year` in
/// `scenario` (both 0-based).
///
/// Generators appear as `<id>` (output) and `<id>:use` (own consumption), storage as
/// `<id>:discharge` and `<id>:charge`, renewables as `<id>`, and the grid purchase,
/// surplus and reserve as `grid`, `surplus` and `reserve`.
pub fn dispatch_table(
    solution: &Solution,
    catalog: &Catalog,
    set: &ScenarioSet,
    scenario: usize,
    year: usize,
) -> Result<Vec<DispatchRow>> {
    require_values(solution)?;
    check_indices(set, scenario, year)?;
    let grid = &set.grid;
    let dt = grid.delta_t;
    let s = &set.scenarios[scenario];
    let elec = ResourceId::Electricity;
    let (k, w) = (year, scenario);
    let mut rows = Vec::with_capacity(grid.intervals_per_day);
    for t in 0..grid.intervals_per_day {
        let slot = grid.slot(k, t);
        let mut flows = Vec::new();
        let mut push = |source: String, kw: f64| flows.push(Flow { source, kwh: kw * dt });
        for e in &catalog.equipment {
            let g = e.rate(elec, Direction::Gen);
            let c = e.rate(elec, Direction::Cons);
            if g == 0.0 && c == 0.0 {
                continue;
            }
            let op = |sym| VarKey::equip_op(sym, &e.id, k, t, w);
            if e.is_generator() {
                let p = value(solution, &op(Symbol::P));
                if g != 0.0 {
                    push(e.id.clone(), g * p);
                }
                if c != 0.0 {
                    push(format!("{}:use", e.id), -c * p);
                }
            } else if e.is_storage() {
                push(format!("{}{DISCHARGE}", e.id), g * value(solution, &op(Symbol::Pdch)));
                push(format!("{}:charge", e.id), -c * value(solution, &op(Symbol::Pch)));
            } else {
                let rp = value(solution, &VarKey::rp(&e.id));
                push(e.id.clone(), (g - c) * s.availability(&e.id, slot) * rp);
            }
        }
        push(GRID.into(), value(solution, &VarKey::resource_op(Symbol::U, elec, k, t, w)));
        push(SURPLUS.into(), -value(solution, &VarKey::resource_op(Symbol::Yx, elec, k, t, w)));
        push(RESERVE.into(), -value(solution, &VarKey::spin(elec, k, w)));
        rows.push(DispatchRow {
            interval: t,
            flows,
            demand_kwh: s.demand(elec, slot) * dt,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenewableShare {
    pub percent: f64,
    /// Set when nothing was supplied and the share is reported as zero.
    pub no_supply: bool,
}

/// Percentage of the day's electricity production and purchases that came from wind
/// and solar. Storage round trips count once, at production.
pub fn renewable_share(
    solution: &Solution,
    catalog: &Catalog,
    set: &ScenarioSet,
    scenario: usize,
    year: usize,
) -> Result<RenewableShare> {
    let rows = dispatch_table(solution, catalog, set, scenario, year)?;
    let renewable: Vec<&str> = catalog
        .equipment
        .iter()
        .filter(|e| e.is_renewable())
        .map(|e| e.id.as_str())
        .collect();
    let mut green = 0.0;
    let mut total = 0.0;
    for row in &rows {
        total += row.supply();
        green += row
            .flows
            .iter()
            .filter(|f| renewable.contains(&f.source.as_str()))
            .map(|f| f.kwh.max(0.0))
            .sum::<f64>();
    }
    if total <= 0.0 {
        warn!("no electricity supplied in scenario {} year {}", scenario + 1, year + 1);
        return Ok(RenewableShare {
            percent: 0.0,
            no_supply: true,
        });
    }
    Ok(RenewableShare {
        percent: 100.0 * green / total,
        no_supply: false,
    })
}

/// Net CO₂ released in `year` of `scenario`, in tonnes per year.
pub fn annual_emissions(solution: &Solution, set: &ScenarioSet, scenario: usize, year: usize) -> Result<f64> {
    require_values(solution)?;
    check_indices(set, scenario, year)?;
    let grid = &set.grid;
    let grams_per_hour: f64 = (0..grid.intervals_per_day)
        .map(|t| value(solution, &VarKey::resource_op(Symbol::Yx, ResourceId::Co2, year, t, scenario)))
        .sum();
    Ok(grid.days_per_year * grid.delta_t * grams_per_hour / GRAMS_PER_TONNE)
}

/// Net present cost split by component. Incomes are positive amounts that reduce
/// the net present cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub initial: f64,
    pub om: f64,
    /// Resource purchases net of any priced surplus.
    pub purchases: f64,
    pub peak: f64,
    pub cap_trade_income: f64,
    pub sng_income: f64,
    pub net_present_cost: f64,
}

/// Recomputes every objective component from the solution values.
pub fn cost_breakdown(
    solution: &Solution,
    catalog: &Catalog,
    set: &ScenarioSet,
    config: &StudyConfig,
) -> Result<CostBreakdown> {
    require_values(solution)?;
    let grid = &set.grid;
    let day_hours = grid.days_per_year * grid.delta_t;
    let resources = instance_resources(catalog, set);
    let mut c = CostBreakdown::default();
    for e in &catalog.equipment {
        let a = value(solution, &VarKey::a(&e.id));
        let rp = value(solution, &VarKey::rp(&e.id));
        let b = if e.is_storage() { value(solution, &VarKey::b(&e.id)) } else { 0.0 };
        c.initial += e.alpha0 * rp + e.gamma0 * a + e.beta0 * b;
        let yearly = e.alpha_k * rp + e.gamma_k * a + e.beta_k * b;
        for k in 0..grid.years {
            c.om += config.discount(k) * config.escalation(k) * yearly;
        }
    }
    for k in 0..grid.years {
        let disc = config.discount(k);
        let esc = config.escalation(k);
        for (w, s) in set.scenarios.iter().enumerate() {
            let weight = disc * day_hours * s.probability;
            for t in 0..grid.intervals_per_day {
                for &n in &resources {
                    let u = value(solution, &VarKey::resource_op(Symbol::U, n, k, t, w));
                    let yx = value(solution, &VarKey::resource_op(Symbol::Yx, n, k, t, w));
                    c.purchases += weight * esc * (catalog.purchase_price(n) * u + catalog.surplus_price(n) * yx);
                }
            }
            c.peak += disc * grid.days_per_year * (grid.years * grid.intervals_per_day) as f64
                * s.probability
                * value(solution, &VarKey::peak(w));
            let co2: f64 = (0..grid.intervals_per_day)
                .map(|t| value(solution, &VarKey::resource_op(Symbol::Yx, ResourceId::Co2, k, t, w)))
                .sum();
            if config.include_cap_trade_income {
                let esc_ct = if config.cap_trade_inflation { esc } else { 1.0 };
                c.cap_trade_income += weight * esc_ct * s.cet_price.values[k] * (emission_allowance(set, k, w) - co2);
            }
            if config.include_sng_income {
                let gas: f64 = (0..grid.intervals_per_day)
                    .map(|t| value(solution, &VarKey::resource_op(Symbol::Yx, ResourceId::Gas, k, t, w)))
                    .sum();
                c.sng_income += weight * esc * SNG_PRICE_SHARE * catalog.purchase_price(ResourceId::Gas) * gas;
            }
        }
    }
    c.net_present_cost = c.initial + c.om + c.purchases + c.peak - c.cap_trade_income - c.sng_income;
    Ok(c)
}
