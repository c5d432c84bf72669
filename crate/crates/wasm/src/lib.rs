//! Browser bindings for three small mgplan operations. Every export takes plain
//! numbers and returns JSON text, so the page needs no generated type wrappers.

use mgplan::analysis::{cost_breakdown, dispatch_table, extract_design, renewable_share};
use mgplan::catalog::{PvParams, ResourceId, WindParams};
use mgplan::model::build_instance;
use mgplan::scenarios::synthetic::{synthetic_base, Outlook};
use mgplan::scenarios::{assemble_scenarios, build_trajectory, pv_availability, wind_availability, TimeGrid};
use mgplan::solve::{solve_exact_small, Limits};
use mgplan::study::RunConfig;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const DESK: &str = include_str!("../../../presets/desk.json");
const CURVE_POINTS: usize = 61;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Availability fraction of a wind turbine over wind speeds 0..30 m/s and of a PV
/// array over irradiance 0..1.2 kW/m² at `temperature` °C.
pub fn availability_curves(temperature: f64) -> (Curve, Curve) {
    let wind = WindParams::default();
    let speeds: Vec<f64> = (0..CURVE_POINTS).map(|i| i as f64 * 0.5).collect();
    let wind_curve = Curve {
        y: speeds.iter().map(|&v| wind_availability(v, &wind)).collect(),
        x: speeds,
    };
    let pv = PvParams::default();
    let irradiance: Vec<f64> = (0..CURVE_POINTS).map(|i| i as f64 * 0.02).collect();
    let pv_curve = Curve {
        y: irradiance.iter().map(|&g| pv_availability(g, temperature, &pv)).collect(),
        x: irradiance,
    };
    (wind_curve, pv_curve)
}

/// Yearly values of a policy trajectory that changes by `change` every block.
pub fn trajectory(base: f64, change: f64, years: usize, block_years: usize) -> Result<Vec<f64>, String> {
    let grid = TimeGrid::new(4, years, block_years).map_err(|e| e.to_string())?;
    build_trajectory(base, change, &grid)
        .map(|t| t.values)
        .map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct DesignLine {
    pub equipment: String,
    pub rated_kw: f64,
    pub capacity_kwh: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DispatchLine {
    pub interval: usize,
    pub demand_kwh: f64,
    pub flows: Vec<(String, f64)>,
}

#[derive(Debug, Serialize)]
pub struct Plan {
    pub status: String,
    pub net_present_cost: Option<f64>,
    pub design: Vec<DesignLine>,
    /// First scenario, first year.
    pub dispatch: Vec<DispatchLine>,
    pub renewable_percent: Option<f64>,
    pub columns: usize,
    pub rows: usize,
    pub seconds: f64,
}

/// Designs a one-year, six-interval microgrid with PV, wind and a battery for up to
/// three demand outlooks, using the built-in exact solver.
pub fn tiny_plan(peak_kw: f64, elec_price: f64, purchase_cap_kwh: f64, scenarios: usize) -> Result<Plan, String> {
    let err = |e: mgplan::Error| e.to_string();
    if !(1..=3).contains(&scenarios) {
        return Err("scenarios must be 1, 2 or 3".into());
    }
    let cfg = RunConfig::from_json(DESK, ".").map_err(err)?;
    let mut catalog = cfg.load_catalog().map_err(err)?;
    if let Some(p) = catalog.resource_prices.get_mut(&ResourceId::Electricity) {
        p.purchase = elec_price;
    }
    catalog.validate().map_err(err)?;
    let grid = TimeGrid::new(6, 1, 1).map_err(err)?;
    let bases: Vec<_> = Outlook::ALL[..scenarios]
        .iter()
        .map(|&o| synthetic_base(o, &grid, peak_kw, 0.0))
        .collect();
    let set = assemble_scenarios(&bases, &cfg.policy_pairs(&grid).map_err(err)?, &grid, &catalog).map_err(err)?;
    let mut config = cfg.study.clone();
    config.elec_purchase_cap = purchase_cap_kwh;
    config.validate().map_err(err)?;
    let instance = build_instance(&catalog, &set, &config).map_err(err)?;
    let solution = solve_exact_small(&instance, Limits::default()).map_err(err)?;
    let mut plan = Plan {
        status: solution.status.to_string(),
        net_present_cost: None,
        design: Vec::new(),
        dispatch: Vec::new(),
        renewable_percent: None,
        columns: instance.num_cols(),
        rows: instance.num_rows(),
        seconds: solution.wall_time,
    };
    if !solution.is_optimal() {
        return Ok(plan);
    }
    plan.net_present_cost = Some(cost_breakdown(&solution, &catalog, &set, &config).map_err(err)?.net_present_cost);
    plan.design = extract_design(&solution, &catalog)
        .items
        .into_iter()
        .map(|i| DesignLine {
            equipment: i.equipment,
            rated_kw: i.rated_kw,
            capacity_kwh: i.capacity_kwh,
        })
        .collect();
    plan.dispatch = dispatch_table(&solution, &catalog, &set, 0, 0)
        .map_err(err)?
        .into_iter()
        .map(|r| DispatchLine {
            interval: r.interval,
            demand_kwh: r.demand_kwh,
            flows: r.flows.into_iter().map(|f| (f.source, f.kwh)).collect(),
        })
        .collect();
    let share = renewable_share(&solution, &catalog, &set, 0, 0).map_err(err)?;
    plan.renewable_percent = (!share.no_supply).then_some(share.percent);
    Ok(plan)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

/// `{"wind": {x, y}, "pv": {x, y}}`.
#[wasm_bindgen(js_name = availabilityCurves)]
pub fn availability_curves_json(temperature: f64) -> Result<String, JsError> {
    let (wind, pv) = availability_curves(temperature);
    to_json(&serde_json::json!({ "wind": wind, "pv": pv }))
}

#[wasm_bindgen(js_name = trajectory)]
pub fn trajectory_json(base: f64, change: f64, years: usize, block_years: usize) -> Result<String, JsError> {
    to_json(&trajectory(base, change, years, block_years).map_err(|e| JsError::new(&e))?)
}

#[wasm_bindgen(js_name = tinyPlan)]
pub fn tiny_plan_json(peak_kw: f64, elec_price: f64, purchase_cap_kwh: f64, scenarios: usize) -> Result<String, JsError> {
    to_json(&tiny_plan(peak_kw, elec_price, purchase_cap_kwh, scenarios).map_err(|e| JsError::new(&e))?)
}
