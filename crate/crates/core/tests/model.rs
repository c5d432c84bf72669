mod common;

use std::collections::BTreeMap;

use approx::assert_relative_eq;
use common::*;
use mgplan::catalog::{default_catalog, Catalog, EquipmentKind, ResourceId};
use mgplan::model::*;
use mgplan::scenarios::synthetic::{synthetic_base, Outlook};
use mgplan::scenarios::{assemble_scenarios, PolicyPair, PolicyTrajectory, ScenarioSet, TimeGrid};
use mgplan::solve::{mps_string, solve_exact_small, Limits, SolveStatus};
use mgplan::Error;

fn counts(instance: &MilpInstance) -> (usize, usize) {
    let binaries = instance.variables.iter().filter(|v| v.integer).count();
    (instance.num_cols() - binaries, binaries)
}

fn tiny(scenarios: usize) -> (Catalog, ScenarioSet, MilpInstance) {
    let catalog = engine_and_battery();
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    let bases: Vec<_> = (0..scenarios)
        .map(|i| flat_base(&format!("b{i}"), &grid, |s| 50.0 + 10.0 * (s + i) as f64))
        .collect();
    let set = scenario_set(&catalog, &grid, &bases);
    let instance = build_instance(&catalog, &set, &StudyConfig::default()).unwrap();
    (catalog, set, instance)
}

#[test]
fn variable_counts_of_the_smallest_template() {
    let (catalog, set, instance) = tiny(1);
    assert_eq!(instance_resources(&catalog, &set), vec![ResourceId::Electricity, ResourceId::Gas]);
    assert_eq!(counts(&instance), (22, 6));
    let per_symbol = |s: Symbol| instance.variables.iter().filter(|v| v.key.symbol == s).count();
    let expected = [
        (Symbol::A, 2),
        (Symbol::Rp, 2),
        (Symbol::B, 1),
        (Symbol::P, 2),
        (Symbol::Pch, 2),
        (Symbol::Pdch, 2),
        (Symbol::Soc, 2),
        (Symbol::Kc, 2),
        (Symbol::Ks, 2),
        (Symbol::U, 4),
        (Symbol::Yx, 4),
        (Symbol::Sp, 2),
        (Symbol::Xi, 1),
    ];
    for (symbol, n) in expected {
        assert_eq!(per_symbol(symbol), n, "{symbol:?}");
    }
}

#[test]
fn second_stage_replicates_per_scenario() {
    let (_, _, one) = tiny(1);
    let (_, _, two) = tiny(2);
    let split = |i: &MilpInstance| {
        let (mut first, mut second) = ((0, 0), (0, 0));
        for v in &i.variables {
            let slot = if v.key.symbol.is_first_stage() { &mut first } else { &mut second };
            if v.integer {
                slot.1 += 1
            } else {
                slot.0 += 1
            }
        }
        (first, second)
    };
    let (f1, s1) = split(&one);
    let (f2, s2) = split(&two);
    assert_eq!(f1, (3, 2));
    assert_eq!(f2, f1);
    assert_eq!(s2, (2 * s1.0, 2 * s1.1));
    for v in &two.variables {
        assert_eq!(v.key.scenario.is_none(), v.key.symbol.is_first_stage(), "{}", v.key);
    }
}

#[test]
fn empty_catalog_is_rejected() {
    let (_, set, _) = tiny(1);
    let empty = Catalog {
        equipment: Vec::new(),
        resource_prices: BTreeMap::new(),
    };
    assert!(matches!(
        build_instance(&empty, &set, &StudyConfig::default()),
        Err(Error::Validation { .. })
    ));
}

fn default_catalog_set(grid: &TimeGrid) -> (Catalog, ScenarioSet) {
    let catalog = default_catalog();
    let base = synthetic_base(Outlook::Likely, grid, 40000.0, 0.25);
    let set = assemble_scenarios(&[base], &[constant_policy(grid)], grid, &catalog).unwrap();
    (catalog, set)
}

#[test]
fn row_counts_follow_the_family_formulas() {
    let grid = TimeGrid::new(4, 2, 1).unwrap();
    let catalog = default_catalog();
    let bases: Vec<_> = Outlook::ALL
        .iter()
        .map(|o| synthetic_base(*o, &grid, 40000.0, 0.25))
        .collect();
    let policies = [constant_policy(&grid), {
        let mut p = constant_policy(&grid);
        p.name = "other".into();
        p
    }];
    let set = assemble_scenarios(&bases, &policies, &grid, &catalog).unwrap();
    let instance = build_instance(&catalog, &set, &StudyConfig::default()).unwrap();

    let (t, k, w) = (grid.intervals_per_day, grid.years, set.len());
    let i = catalog.equipment.len();
    let s = catalog.equipment.iter().filter(|e| e.is_storage()).count();
    let g = catalog.equipment.iter().filter(|e| e.is_generator()).count();
    let n = instance_resources(&catalog, &set).len();
    assert_eq!((i, s, g, w), (18, 1, 11, 6));
    assert_eq!(instance.rows_in(Family::Install), 1 + 2 * i + 2 * s);
    assert_eq!(instance.rows_in(Family::Commitment), 3 * g * k * t * w);
    // six bound rows plus one cyclic recursion row per interval
    assert_eq!(instance.rows_in(Family::Storage), 7 * t * s * k * w);
    assert_eq!(instance.rows_in(Family::Balance), n * k * t * w);
    assert_eq!(instance.rows_in(Family::Peak), g * k * t * w);
    assert_eq!(instance.rows_in(Family::Emission), k * w);
    assert_eq!(instance.rows_in(Family::Forced), 0);
}

#[test]
fn cardinality_row_of_the_default_catalog() {
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    let (catalog, set) = default_catalog_set(&grid);
    let instance = build_instance(&catalog, &set, &StudyConfig::default()).unwrap();
    let card = &instance.constraints[0];
    assert_eq!(card.name, "install_count");
    assert_eq!(card.coeffs.len(), 18);
    assert!(card.coeffs.iter().all(|&(j, a)| a == 1.0 && instance.variables[j].key.symbol == Symbol::A));
    assert_eq!((card.sense, card.rhs), (Sense::Le, 10.0));
}

#[test]
fn forced_electrolyzer_fixes_install_and_adds_power_floor() {
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    let (catalog, set) = default_catalog_set(&grid);
    let config = StudyConfig {
        forced_installs: vec![ForcedInstall {
            equipment: "Electrolyzer".into(),
            min_rated_kw: 20000.0,
            forced_on: true,
        }],
        ..StudyConfig::default()
    };
    let instance = build_instance(&catalog, &set, &config).unwrap();
    let a = instance.col(&VarKey::a("Electrolyzer")).unwrap();
    assert_eq!((instance.variables[a].lb, instance.variables[a].ub), (1.0, 1.0));
    let rp = instance.col(&VarKey::rp("Electrolyzer")).unwrap();
    let forced: Vec<_> = instance.constraints.iter().filter(|c| c.family == Family::Forced).collect();
    assert_eq!(forced.len(), 1);
    assert_eq!(forced[0].coeffs, vec![(rp, 1.0)]);
    assert_eq!((forced[0].sense, forced[0].rhs), (Sense::Ge, 20000.0));
    for v in instance.variables.iter().filter(|v| v.key.symbol == Symbol::Kc) {
        let on = v.key.equip.as_deref() == Some("Electrolyzer");
        assert_eq!(v.lb, if on { 1.0 } else { 0.0 }, "{}", v.key);
    }

    let too_big = StudyConfig {
        forced_installs: vec![ForcedInstall {
            equipment: "Electrolyzer".into(),
            min_rated_kw: 1e9,
            forced_on: false,
        }],
        ..StudyConfig::default()
    };
    assert!(build_instance(&catalog, &set, &too_big).is_err());
}

fn row<'a>(instance: &'a MilpInstance, name: &str) -> &'a Constraint {
    instance
        .constraints
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no row {name}"))
}

fn point(instance: &MilpInstance, values: &[(VarKey, f64)]) -> Vec<f64> {
    let mut x = vec![0.0; instance.num_cols()];
    for (k, v) in values {
        x[instance.col(k).unwrap()] = *v;
    }
    x
}

#[test]
fn commitment_rows_by_substitution() {
    let (_, _, instance) = tiny(1);
    let lo = row(&instance, "commit_lo[Engine,k1,t1,w1]");
    let hi = row(&instance, "commit_hi[Engine,k1,t1,w1]");
    let on = row(&instance, "commit_on[Engine,k1,t1,w1]");
    let p = VarKey::equip_op(Symbol::P, "Engine", 0, 0, 0);
    let kc = VarKey::equip_op(Symbol::Kc, "Engine", 0, 0, 0);
    // committed at rp = 100 with a 20% minimum load: p must be at least 20
    let at = |pv: f64, kv: f64| point(&instance, &[(VarKey::rp("Engine"), 100.0), (kc.clone(), kv), (p.clone(), pv)]);
    assert!(lo.violation(&at(19.9, 1.0)) > 0.0);
    assert_eq!(lo.violation(&at(20.0, 1.0)), 0.0);
    assert_eq!(hi.violation(&at(100.0, 1.0)), 0.0);
    assert!(hi.violation(&at(100.5, 1.0)) > 0.0);
    // off: the minimum disappears and any output breaks the commitment cap
    assert_eq!(lo.violation(&at(0.0, 0.0)), 0.0);
    assert!(on.violation(&at(0.1, 0.0)) > 0.0);
}

#[test]
fn storage_window_follows_capacity() {
    let (_, _, instance) = tiny(1);
    let soc = VarKey::equip_op(Symbol::Soc, "Battery", 0, 1, 0);
    let at = |s: f64| point(&instance, &[(VarKey::b("Battery"), 100000.0), (soc.clone(), s)]);
    let lo = row(&instance, "soc_lo[Battery,k1,t2,w1]");
    let hi = row(&instance, "soc_hi[Battery,k1,t2,w1]");
    assert_eq!(lo.violation(&at(20000.0)), 0.0);
    assert!(lo.violation(&at(19999.0)) > 0.0);
    assert_eq!(hi.violation(&at(80000.0)), 0.0);
    assert!(hi.violation(&at(80001.0)) > 0.0);
    // the first interval continues from the last one of the same day
    let first = row(&instance, "soc_bal[Battery,k1,t1,w1]");
    let last = instance.col(&soc).unwrap();
    assert!(first.coeffs.iter().any(|&(j, a)| j == last && a == -1.0));
}

#[test]
fn gas_engine_rates_enter_the_balances() {
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    let (catalog, set) = default_catalog_set(&grid);
    let instance = build_instance(&catalog, &set, &StudyConfig::default()).unwrap();
    let p = instance.col(&VarKey::equip_op(Symbol::P, "RecipEngine3", 0, 0, 0)).unwrap();
    let coeff = |name: &str| {
        row(&instance, name)
            .coeffs
            .iter()
            .find(|&&(j, _)| j == p)
            .map(|&(_, a)| a)
            .unwrap()
    };
    // at p = 100 the engine draws 240 kWh/h of gas and releases 44820 g/h of CO2
    assert_eq!(100.0 * -coeff("balance[Gas,k1,t1,w1]"), 240.0);
    assert_relative_eq!(100.0 * coeff("balance[CO2,k1,t1,w1]"), 44820.0, max_relative = 1e-15);
    assert_eq!(coeff("balance[Electricity,k1,t1,w1]"), 1.0);
    for r in [ResourceId::Heat, ResourceId::H2, ResourceId::Co2] {
        let u = instance.col(&VarKey::resource_op(Symbol::U, r, 0, 0, 0)).unwrap();
        assert_eq!(instance.variables[u].ub, 0.0, "{r}");
    }
    // 2500 kWh per interval of 12 hours
    let u = instance.col(&VarKey::resource_op(Symbol::U, ResourceId::Electricity, 0, 0, 0)).unwrap();
    assert_eq!(instance.variables[u].ub, 2500.0 / 12.0);
    let sp = instance.col(&VarKey::spin(ResourceId::Gas, 0, 0)).unwrap();
    assert_eq!(instance.variables[sp].ub, 0.0);
}

#[test]
fn peak_row_and_emission_allowance() {
    let catalog = engine_and_battery();
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    // 400 + 600 kWh/h of load over the day
    let set = scenario_set(&catalog, &grid, &[flat_base("b", &grid, |s| if s == 0 { 400.0 } else { 600.0 })]);
    assert_eq!(emission_allowance(&set, 0, 0), 280000.0);
    let instance = build_instance(&catalog, &set, &StudyConfig::default()).unwrap();
    let peak = row(&instance, "peak[Engine,k1,t1,w1]");
    let p = VarKey::equip_op(Symbol::P, "Engine", 0, 0, 0);
    assert_eq!(peak.violation(&point(&instance, &[(p.clone(), 1000.0), (VarKey::peak(0), 10.0)])), 0.0);
    assert!(peak.violation(&point(&instance, &[(p, 1000.0), (VarKey::peak(0), 9.99)])) > 0.0);
    let emission = row(&instance, "emission[k1,w1]");
    assert_eq!(emission.rhs, 280000.0);
}

fn single_generator(alpha0: f64, gamma0: f64) -> Catalog {
    let mut g = spec("Gen", EquipmentKind::Generator, (1.0, 100.0));
    g.gen.insert(ResourceId::Electricity, 1.0);
    g.gen.insert(ResourceId::Co2, 500.0);
    g.cons.insert(ResourceId::Gas, 2.0);
    g.alpha0 = alpha0;
    g.gamma0 = gamma0;
    Catalog {
        equipment: vec![g],
        resource_prices: BTreeMap::from([(
            ResourceId::Gas,
            mgplan::catalog::ResourcePrice {
                purchase: 10.0,
                surplus: 0.0,
            },
        )]),
    }
}

#[test]
fn initial_cost_by_substitution() {
    let catalog = single_generator(5.0, 2.0);
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    let set = scenario_set(&catalog, &grid, &[flat_base("b", &grid, |_| 1.0)]);
    let instance = build_instance(&catalog, &set, &StudyConfig::default()).unwrap();
    let x = point(&instance, &[(VarKey::a("Gen"), 1.0), (VarKey::rp("Gen"), 10.0)]);
    assert_eq!(instance.objective_value(&x), 52.0);

    let battery = Catalog {
        equipment: vec![default_catalog().lookup("LithiumIonBattery").unwrap().clone()],
        resource_prices: BTreeMap::new(),
    };
    let set = scenario_set(&battery, &grid, &[flat_base("b", &grid, |_| 1.0)]);
    let instance = build_instance(&battery, &set, &StudyConfig::default()).unwrap();
    let b = instance.col(&VarKey::b("LithiumIonBattery")).unwrap();
    let mut x = vec![0.0; instance.num_cols()];
    x[b] = 1.0;
    // one kWh of capacity: build cost plus one year of upkeep
    assert_eq!(instance.objective_value(&x), 12096.0 + 336.0);
}

/// Half-hour grid, one year, one scenario, flat policy values.
fn income_instance(config: &StudyConfig, cet: f64, limit: f64) -> (ScenarioSet, MilpInstance) {
    let catalog = single_generator(0.0, 0.0);
    let grid = TimeGrid::new(48, 1, 1).unwrap();
    // daily load of 100 kWh/h summed over intervals
    let base = flat_base("b", &grid, |_| 100.0 / 48.0);
    let policy = PolicyPair {
        name: "p".into(),
        cet_price: PolicyTrajectory::constant(cet, &grid),
        emission_limit: PolicyTrajectory::constant(limit, &grid),
    };
    let set = assemble_scenarios(&[base], &[policy], &grid, &catalog).unwrap();
    let instance = build_instance(&catalog, &set, config).unwrap();
    (set, instance)
}

#[test]
fn cap_and_trade_income_by_substitution() {
    let config = StudyConfig {
        include_cap_trade_income: true,
        ..StudyConfig::default()
    };
    let (set, instance) = income_instance(&config, 2.0, 1.0);
    assert_relative_eq!(emission_allowance(&set, 0, 0), 100.0, max_relative = 1e-12);
    // 60 g/h of net CO2 spread over two intervals
    let x = point(
        &instance,
        &[
            (VarKey::resource_op(Symbol::Yx, ResourceId::Co2, 0, 0, 0), 25.0),
            (VarKey::resource_op(Symbol::Yx, ResourceId::Co2, 0, 7, 0), 35.0),
        ],
    );
    assert_relative_eq!(instance.objective_value(&x), -14600.0, max_relative = 1e-12);
}

#[test]
fn sng_income_by_substitution() {
    let config = StudyConfig {
        include_sng_income: true,
        ..StudyConfig::default()
    };
    let (_, instance) = income_instance(&config, 0.0, 280.0);
    let x = point(
        &instance,
        &[
            (VarKey::resource_op(Symbol::Yx, ResourceId::Gas, 0, 3, 0), 1.5),
            (VarKey::resource_op(Symbol::Yx, ResourceId::Gas, 0, 40, 0), 2.5),
        ],
    );
    assert_relative_eq!(instance.objective_value(&x), -6570.0, max_relative = 1e-12);
}

#[test]
fn discounting_and_escalation() {
    let catalog = single_generator(0.0, 0.0);
    let mut catalog = catalog;
    catalog.equipment[0].alpha_k = 1.0;
    let grid = TimeGrid::new(2, 3, 1).unwrap();
    let set = scenario_set(&catalog, &grid, &[flat_base("b", &grid, |_| 1.0)]);
    let config = StudyConfig {
        discount_rate: 0.1,
        inflation: 0.05,
        ..StudyConfig::default()
    };
    let instance = build_instance(&catalog, &set, &config).unwrap();
    let rp = instance.col(&VarKey::rp("Gen")).unwrap();
    let expected: f64 = (0..3).map(|k| 1.05f64.powi(k) / 1.1f64.powi(k)).sum();
    assert_relative_eq!(instance.objective[rp], expected, max_relative = 1e-14);
}

#[test]
fn mean_value_inputs_are_probability_weighted() {
    let catalog = engine_and_battery();
    let grid = TimeGrid::new(2, 1, 1).unwrap();
    let bases: Vec<_> = [90.0, 100.0, 110.0]
        .iter()
        .map(|&d| flat_base(&format!("d{d}"), &grid, move |_| d))
        .collect();
    let set = scenario_set(&catalog, &grid, &bases);
    let mean = mean_value_scenarios(&catalog, &set).unwrap();
    assert_eq!(mean.len(), 1);
    for slot in 0..grid.len() {
        assert_relative_eq!(mean.scenarios[0].demand(ResourceId::Electricity, slot), 100.0, max_relative = 1e-14);
    }

    let same: Vec<_> = (0..3).map(|_| bases[1].clone()).collect();
    let set = scenario_set(&catalog, &grid, &same);
    let config = StudyConfig::default();
    assert_eq!(
        mps_string(&build_mean_value_instance(&catalog, &set, &config).unwrap()),
        mps_string(&build_instance(&catalog, &set.single(0), &config).unwrap())
    );
}

#[test]
fn fixing_the_optimal_design_reproduces_the_optimum() {
    let (_, _, instance) = tiny(2);
    let solution = solve_exact_small(&instance, Limits::default()).unwrap();
    assert!(solution.is_optimal());
    let design = design_from_values(&instance, &solution.values);
    let fixed = fix_first_stage(&instance, &design).unwrap();
    assert_eq!(fixed.num_free_integer(), instance.num_free_integer() - 2);
    let again = solve_exact_small(&fixed, Limits::default()).unwrap();
    assert_relative_eq!(again.objective, solution.objective, max_relative = 1e-9);

    let mut missing = design.clone();
    missing.remove(&VarKey::rp("Engine"));
    assert!(matches!(fix_first_stage(&instance, &missing), Err(Error::MissingDesignValue(_))));

    let mut inconsistent = design.clone();
    inconsistent.insert(VarKey::a("Engine"), 1.0);
    inconsistent.insert(VarKey::rp("Engine"), 5.0);
    assert!(matches!(fix_first_stage(&instance, &inconsistent), Err(Error::Bound { .. })));
}

#[test]
fn undersized_design_makes_recourse_infeasible() {
    let (catalog, set, instance) = tiny(1);
    let mut design: Design = instance
        .variables
        .iter()
        .filter(|v| v.key.symbol.is_first_stage())
        .map(|v| (v.key.clone(), 0.0))
        .collect();
    design.insert(VarKey::a("Engine"), 1.0);
    design.insert(VarKey::rp("Engine"), 10.0);
    // demand far above the grid cap plus a 10 kW engine
    let grid = set.grid;
    let heavy = scenario_set(&catalog, &grid, &[flat_base("heavy", &grid, |_| 5000.0)]);
    let config = StudyConfig::default();
    let big = build_instance(&catalog, &heavy, &config).unwrap();
    let fixed = fix_first_stage(&big, &design).unwrap();
    let solution = solve_exact_small(&fixed, Limits::default()).unwrap();
    assert_eq!(solution.status, SolveStatus::Infeasible);
}
