//! Fixtures and independent checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use mgplan::catalog::{Catalog, EquipmentKind, EquipmentSpec, ResourceId, ResourcePrice};
use mgplan::model::{StudyConfig, Symbol, VarKey};
use mgplan::scenarios::{assemble_scenarios, BaseCase, PolicyPair, PolicyTrajectory, ScenarioSet, TimeGrid};
use mgplan::solve::{Solution, SOLVER_ENV};
use mgplan::study::{RunConfig, Study};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn preset_path(name: &str) -> PathBuf {
    workspace_root().join("presets").join(format!("{name}.json"))
}

pub fn preset(name: &str) -> RunConfig {
    RunConfig::load(preset_path(name)).expect("preset loads")
}

pub fn study(name: &str) -> Study {
    preset(name).assemble().expect("preset assembles")
}

/// External MILP solver: the environment template when set, otherwise the bundled
/// HiGHS script.
pub fn external_command() -> String {
    std::env::var(SOLVER_ENV).unwrap_or_else(|_| {
        format!(
            "python3 {} {{mps}} {{sol}}",
            workspace_root().join("scripts/milp_scipy.py").display()
        )
    })
}

pub fn spec(id: &str, kind: EquipmentKind, rp: (f64, f64)) -> EquipmentSpec {
    EquipmentSpec {
        id: id.into(),
        kind,
        rp_min: rp.0,
        rp_max: rp.1,
        cap_min: 0.0,
        cap_max: 0.0,
        alpha0: 0.0,
        beta0: 0.0,
        gamma0: 0.0,
        alpha_k: 0.0,
        beta_k: 0.0,
        gamma_k: 0.0,
        gen: BTreeMap::new(),
        cons: BTreeMap::new(),
        p_frac_min: 0.0,
        p_frac_max: 1.0,
        wind_params: None,
        pv_params: None,
    }
}

/// A gas engine and a battery: two resources, electricity and gas.
pub fn engine_and_battery() -> Catalog {
    let mut engine = spec("Engine", EquipmentKind::Generator, (10.0, 500.0));
    engine.gen.insert(ResourceId::Electricity, 1.0);
    engine.cons.insert(ResourceId::Gas, 2.4);
    engine.alpha0 = 100.0;
    engine.gamma0 = 50.0;
    engine.alpha_k = 5.0;
    engine.p_frac_min = 0.2;
    let mut battery = spec("Battery", EquipmentKind::Storage, (10.0, 200.0));
    battery.gen.insert(ResourceId::Electricity, 0.95);
    battery.cons.insert(ResourceId::Electricity, 1.05);
    battery.cap_min = 20.0;
    battery.cap_max = 800.0;
    battery.beta0 = 30.0;
    battery.beta_k = 1.0;
    let prices = BTreeMap::from([
        (ResourceId::Electricity, ResourcePrice { purchase: 2.0, surplus: 0.0 }),
        (ResourceId::Gas, ResourcePrice { purchase: 0.5, surplus: 0.0 }),
    ]);
    Catalog {
        equipment: vec![engine, battery],
        resource_prices: prices,
    }
}

/// A base case with the given electricity demand per slot and calm, dark weather.
pub fn flat_base(name: &str, grid: &TimeGrid, demand: impl Fn(usize) -> f64) -> BaseCase {
    let n = grid.len();
    BaseCase {
        name: name.into(),
        wind_speed: vec![0.0; n],
        irradiance: vec![0.0; n],
        temperature: vec![20.0; n],
        demand: BTreeMap::from([(ResourceId::Electricity, (0..n).map(demand).collect())]),
    }
}

pub fn constant_policy(grid: &TimeGrid) -> PolicyPair {
    PolicyPair {
        name: "constant".into(),
        cet_price: PolicyTrajectory::constant(0.0025, grid),
        emission_limit: PolicyTrajectory::constant(280.0, grid),
    }
}

pub fn scenario_set(catalog: &Catalog, grid: &TimeGrid, bases: &[BaseCase]) -> ScenarioSet {
    assemble_scenarios(bases, &[constant_policy(grid)], grid, catalog).unwrap()
}

fn val(solution: &Solution, key: &VarKey) -> f64 {
    solution.value(key).unwrap_or(0.0)
}

/// Recomputes every physical invariant of an optimal plan directly from catalog
/// rates and scenario data. Returns one message per violation.
pub fn physical_violations(study: &Study, solution: &Solution, tol: f64) -> Vec<String> {
    let (catalog, set, config) = (&study.catalog, &study.set, &study.config);
    let grid = &set.grid;
    let dt = grid.delta_t;
    let mut out = Vec::new();
    let resources: Vec<ResourceId> = solution
        .iter()
        .filter(|(k, _)| k.symbol == Symbol::U)
        .filter_map(|(k, _)| k.resource)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    for (w, s) in set.scenarios.iter().enumerate() {
        for k in 0..grid.years {
            for e in catalog.equipment.iter().filter(|e| e.is_storage()) {
                let mut drift = 0.0;
                for t in 0..grid.intervals_per_day {
                    let pch = val(solution, &VarKey::equip_op(Symbol::Pch, &e.id, k, t, w));
                    let pdch = val(solution, &VarKey::equip_op(Symbol::Pdch, &e.id, k, t, w));
                    drift += dt * (pch - pdch);
                    if pch * pdch > tol {
                        out.push(format!("{} charges and discharges at k{k} t{t} w{w}", e.id));
                    }
                }
                if drift.abs() > tol {
                    out.push(format!("{} state of charge drifts by {drift} over k{k} w{w}", e.id));
                }
            }
            let load: f64 = (0..grid.intervals_per_day)
                .map(|t| s.demand(ResourceId::Electricity, grid.slot(k, t)))
                .sum();
            let co2: f64 = (0..grid.intervals_per_day)
                .map(|t| val(solution, &VarKey::resource_op(Symbol::Yx, ResourceId::Co2, k, t, w)))
                .sum();
            if co2 > s.emission_limit.values[k] * load + tol {
                out.push(format!("emission cap exceeded at k{k} w{w}: {co2}"));
            }
            for t in 0..grid.intervals_per_day {
                let slot = grid.slot(k, t);
                for &n in &resources {
                    let mut net = 0.0;
                    for e in &catalog.equipment {
                        let g = e.gen.get(&n).copied().unwrap_or(0.0);
                        let c = e.cons.get(&n).copied().unwrap_or(0.0);
                        let op = |sym| val(solution, &VarKey::equip_op(sym, &e.id, k, t, w));
                        net += match e.kind {
                            EquipmentKind::Generator => (g - c) * op(Symbol::P),
                            EquipmentKind::Storage => g * op(Symbol::Pdch) - c * op(Symbol::Pch),
                            _ => (g - c) * s.availability(&e.id, slot) * val(solution, &VarKey::rp(&e.id)),
                        };
                    }
                    let u = val(solution, &VarKey::resource_op(Symbol::U, n, k, t, w));
                    let yx = val(solution, &VarKey::resource_op(Symbol::Yx, n, k, t, w));
                    let sp = val(solution, &VarKey::spin(n, k, w));
                    let residual = net + u - yx - sp - s.demand(n, slot);
                    if residual.abs() > tol {
                        out.push(format!("{n} balance residual {residual} at k{k} t{t} w{w}"));
                    }
                    let capped = match n {
                        ResourceId::Electricity if !config.relax_elec_purchase_cap => {
                            u * dt > config.elec_purchase_cap + tol
                        }
                        ResourceId::Heat | ResourceId::H2 | ResourceId::Co2 => u.abs() > tol,
                        _ => false,
                    };
                    if capped {
                        out.push(format!("{n} purchase {u} out of bounds at k{k} t{t} w{w}"));
                    }
                }
            }
        }
    }
    out
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn scaled_emission_limits(study: &Study, factor: f64) -> Study {
    let mut s = study.clone();
    for sc in s.set.scenarios.iter_mut() {
        for v in sc.emission_limit.values.iter_mut() {
            *v *= factor;
        }
    }
    s
}

pub fn default_config() -> StudyConfig {
    StudyConfig::default()
}
