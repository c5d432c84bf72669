//! Deterministic-equivalent assembly: columns, constraint families and the
//! net-present-cost objective.

use std::collections::BTreeSet;

use super::config::StudyConfig;
use super::instance::{Family, MilpInstance, Sense, Symbol, VarKey, Variable};
use crate::catalog::{Catalog, Direction, EquipmentSpec, ResourceId};
use crate::error::{Error, Result};
use crate::scenarios::ScenarioSet;

/// Stored energy is kept between these fractions of capacity.
pub const SOC_MIN_FRACTION: f64 = 0.2;
pub const SOC_MAX_FRACTION: f64 = 0.8;
/// Share of the purchase price paid for exported synthetic natural gas.
pub const SNG_PRICE_SHARE: f64 = 0.9;

/// Resources carried by the instance: everything some device touches, everything
/// with demand, and electricity.
pub fn instance_resources(catalog: &Catalog, set: &ScenarioSet) -> Vec<ResourceId> {
    let mut used: BTreeSet<ResourceId> = catalog.equipment.iter().flat_map(EquipmentSpec::resources).collect();
    used.insert(ResourceId::Electricity);
    for s in &set.scenarios {
        for (r, d) in &s.base.demand {
            if d.iter().any(|&v| v > 0.0) {
                used.insert(*r);
            }
        }
    }
    used.into_iter().collect()
}

fn generators(catalog: &Catalog) -> impl Iterator<Item = &EquipmentSpec> {
    catalog.equipment.iter().filter(|e| e.is_generator())
}

fn storages(catalog: &Catalog) -> impl Iterator<Item = &EquipmentSpec> {
    catalog.equipment.iter().filter(|e| e.is_storage())
}

fn renewables(catalog: &Catalog) -> impl Iterator<Item = &EquipmentSpec> {
    catalog.equipment.iter().filter(|e| e.is_renewable())
}

fn idx(k: usize, t: usize, w: usize) -> String {
    format!("k{},t{},w{}", k + 1, t + 1, w + 1)
}

/// Peak electricity demand of year `k` in scenario `w`.
fn peak_demand(set: &ScenarioSet, k: usize, w: usize) -> f64 {
    let grid = &set.grid;
    (0..grid.intervals_per_day)
        .map(|t| set.scenarios[w].demand(ResourceId::Electricity, grid.slot(k, t)))
        .fold(0.0, f64::max)
}

/// Every column of the deterministic equivalent with its natural bounds.
pub fn register_variables(catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig) -> Vec<Variable> {
    let grid = &set.grid;
    let (years, intervals, scenarios) = (grid.years, grid.intervals_per_day, set.len());
    let inf = f64::INFINITY;
    let mut vars = Vec::new();
    let mut push = |key: VarKey, lb: f64, ub: f64, integer: bool| vars.push(Variable { key, lb, ub, integer });

    for e in &catalog.equipment {
        push(VarKey::a(&e.id), 0.0, 1.0, true);
        push(VarKey::rp(&e.id), 0.0, e.rp_max, false);
        if e.is_storage() {
            push(VarKey::b(&e.id), 0.0, e.cap_max, false);
        }
    }
    for w in 0..scenarios {
        for k in 0..years {
            for t in 0..intervals {
                for e in &catalog.equipment {
                    let op = |s| VarKey::equip_op(s, &e.id, k, t, w);
                    if e.is_generator() {
                        push(op(Symbol::P), 0.0, inf, false);
                        push(op(Symbol::Kc), 0.0, 1.0, true);
                    } else if e.is_storage() {
                        push(op(Symbol::Pch), 0.0, inf, false);
                        push(op(Symbol::Pdch), 0.0, inf, false);
                        push(op(Symbol::Soc), 0.0, inf, false);
                        push(op(Symbol::Ks), 0.0, 1.0, true);
                    }
                }
            }
        }
    }
    let resources = instance_resources(catalog, set);
    for w in 0..scenarios {
        for k in 0..years {
            for &n in &resources {
                let spin_ub = if n == ResourceId::Electricity {
                    config.spin_fraction * peak_demand(set, k, w)
                } else {
                    0.0
                };
                push(VarKey::spin(n, k, w), 0.0, spin_ub, false);
                let u_ub = if !config.is_purchasable(n) {
                    0.0
                } else if n == ResourceId::Electricity && !config.relax_elec_purchase_cap {
                    config.elec_purchase_cap / grid.delta_t
                } else {
                    inf
                };
                let yx_ub = match config.surplus_cap.get(&n) {
                    Some(cap) if !config.relax_surplus_cap => cap / grid.delta_t,
                    _ => inf,
                };
                for t in 0..intervals {
                    push(VarKey::resource_op(Symbol::U, n, k, t, w), 0.0, u_ub, false);
                    push(VarKey::resource_op(Symbol::Yx, n, k, t, w), 0.0, yx_ub, false);
                }
            }
        }
        push(VarKey::peak(w), 0.0, inf, false);
    }
    vars
}

/// Cardinality limit, rated-power and capacity windows, forced installs.
pub fn add_installation_constraints(instance: &mut MilpInstance, catalog: &Catalog, config: &StudyConfig) -> Result<()> {
    let card: Vec<(usize, f64)> = catalog
        .equipment
        .iter()
        .map(|e| (instance.must(&VarKey::a(&e.id)), 1.0))
        .collect();
    instance.add_constraint("install_count", Family::Install, card, Sense::Le, config.max_equipment as f64);
    for e in &catalog.equipment {
        let a = instance.must(&VarKey::a(&e.id));
        let rp = instance.must(&VarKey::rp(&e.id));
        instance.add_constraint(format!("rp_lo[{}]", e.id), Family::Install, [(rp, 1.0), (a, -e.rp_min)], Sense::Ge, 0.0);
        instance.add_constraint(format!("rp_hi[{}]", e.id), Family::Install, [(rp, 1.0), (a, -e.rp_max)], Sense::Le, 0.0);
    }
    for e in storages(catalog) {
        let a = instance.must(&VarKey::a(&e.id));
        let b = instance.must(&VarKey::b(&e.id));
        instance.add_constraint(format!("b_lo[{}]", e.id), Family::Install, [(b, 1.0), (a, -e.cap_min)], Sense::Ge, 0.0);
        instance.add_constraint(format!("b_hi[{}]", e.id), Family::Install, [(b, 1.0), (a, -e.cap_max)], Sense::Le, 0.0);
    }
    for forced in &config.forced_installs {
        let e = catalog.lookup(&forced.equipment)?;
        if forced.min_rated_kw > e.rp_max {
            return Err(Error::validation(&e.id, "min_rated_kw", "forced minimum exceeds rp_max"));
        }
        let a = instance.must(&VarKey::a(&e.id));
        instance.variables[a].lb = 1.0;
        let rp = instance.must(&VarKey::rp(&e.id));
        instance.add_constraint(format!("force_rp[{}]", e.id), Family::Forced, [(rp, 1.0)], Sense::Ge, forced.min_rated_kw);
        if forced.forced_on && e.is_generator() {
            for v in instance.variables.iter_mut() {
                if v.key.symbol == Symbol::Kc && v.key.equip.as_deref() == Some(e.id.as_str()) {
                    v.lb = 1.0;
                }
            }
        }
    }
    Ok(())
}

/// Operating window of each generator tied to its commitment binary.
pub fn add_commitment_constraints(instance: &mut MilpInstance, catalog: &Catalog, set: &ScenarioSet) {
    let grid = &set.grid;
    for e in generators(catalog) {
        let rp = instance.must(&VarKey::rp(&e.id));
        let (lo, hi) = (e.p_frac_min, e.p_frac_max);
        for w in 0..set.len() {
            for k in 0..grid.years {
                for t in 0..grid.intervals_per_day {
                    let p = instance.must(&VarKey::equip_op(Symbol::P, &e.id, k, t, w));
                    let kc = instance.must(&VarKey::equip_op(Symbol::Kc, &e.id, k, t, w));
                    let at = format!("{},{}", e.id, idx(k, t, w));
                    // lo·(rp − (1 − kc)·rp_max) <= p
                    instance.add_constraint(
                        format!("commit_lo[{at}]"),
                        Family::Commitment,
                        [(rp, lo), (kc, lo * e.rp_max), (p, -1.0)],
                        Sense::Le,
                        lo * e.rp_max,
                    );
                    instance.add_constraint(format!("commit_hi[{at}]"), Family::Commitment, [(p, 1.0), (rp, -hi)], Sense::Le, 0.0);
                    instance.add_constraint(
                        format!("commit_on[{at}]"),
                        Family::Commitment,
                        [(p, 1.0), (kc, -hi * e.rp_max)],
                        Sense::Le,
                        0.0,
                    );
                }
            }
        }
    }
}

/// Charge/discharge limits, exclusivity, state-of-charge window and a cyclic
/// state-of-charge recursion that returns every day to its starting level.
pub fn add_storage_constraints(instance: &mut MilpInstance, catalog: &Catalog, set: &ScenarioSet) {
    let grid = &set.grid;
    let dt = grid.delta_t;
    let last = grid.intervals_per_day - 1;
    for e in storages(catalog) {
        let rp = instance.must(&VarKey::rp(&e.id));
        let b = instance.must(&VarKey::b(&e.id));
        let pmax = e.p_frac_max;
        let big_m = pmax * e.rp_max;
        for w in 0..set.len() {
            for k in 0..grid.years {
                for t in 0..grid.intervals_per_day {
                    let op = |s| VarKey::equip_op(s, &e.id, k, t, w);
                    let pch = instance.must(&op(Symbol::Pch));
                    let pdch = instance.must(&op(Symbol::Pdch));
                    let soc = instance.must(&op(Symbol::Soc));
                    let ks = instance.must(&op(Symbol::Ks));
                    let prev_t = if t == 0 { last } else { t - 1 };
                    let prev = instance.must(&VarKey::equip_op(Symbol::Soc, &e.id, k, prev_t, w));
                    let at = format!("{},{}", e.id, idx(k, t, w));
                    instance.add_constraint(format!("chg_cap[{at}]"), Family::Storage, [(pch, 1.0), (rp, -pmax)], Sense::Le, 0.0);
                    instance.add_constraint(format!("dis_cap[{at}]"), Family::Storage, [(pdch, 1.0), (rp, -pmax)], Sense::Le, 0.0);
                    instance.add_constraint(format!("chg_sel[{at}]"), Family::Storage, [(pch, 1.0), (ks, -big_m)], Sense::Le, 0.0);
                    instance.add_constraint(format!("dis_sel[{at}]"), Family::Storage, [(pdch, 1.0), (ks, big_m)], Sense::Le, big_m);
                    instance.add_constraint(
                        format!("soc_lo[{at}]"),
                        Family::Storage,
                        [(soc, 1.0), (b, -SOC_MIN_FRACTION)],
                        Sense::Ge,
                        0.0,
                    );
                    instance.add_constraint(
                        format!("soc_hi[{at}]"),
                        Family::Storage,
                        [(soc, 1.0), (b, -SOC_MAX_FRACTION)],
                        Sense::Le,
                        0.0,
                    );
                    // soc_t = soc_{t-1} + dt·(pch − pdch), with the first interval continuing
                    // from the last one of the same day.
                    instance.add_constraint(
                        format!("soc_bal[{at}]"),
                        Family::Storage,
                        [(soc, 1.0), (prev, -1.0), (pch, -dt), (pdch, dt)],
                        Sense::Eq,
                        0.0,
                    );
                }
            }
        }
    }
}

/// Material balance for every resource, interval and scenario.
pub fn add_balance_constraints(instance: &mut MilpInstance, catalog: &Catalog, set: &ScenarioSet) {
    let grid = &set.grid;
    let resources = instance_resources(catalog, set);
    for w in 0..set.len() {
        let scenario = &set.scenarios[w];
        for k in 0..grid.years {
            for t in 0..grid.intervals_per_day {
                let slot = grid.slot(k, t);
                for &n in &resources {
                    let mut terms: Vec<(usize, f64)> = Vec::new();
                    for e in &catalog.equipment {
                        let g = e.rate(n, Direction::Gen);
                        let c = e.rate(n, Direction::Cons);
                        if g == 0.0 && c == 0.0 {
                            continue;
                        }
                        let op = |s| VarKey::equip_op(s, &e.id, k, t, w);
                        if e.is_generator() {
                            terms.push((instance.must(&op(Symbol::P)), g - c));
                        } else if e.is_storage() {
                            terms.push((instance.must(&op(Symbol::Pdch)), g));
                            terms.push((instance.must(&op(Symbol::Pch)), -c));
                        } else {
                            let avail = scenario.availability(&e.id, slot);
                            terms.push((instance.must(&VarKey::rp(&e.id)), (g - c) * avail));
                        }
                    }
                    terms.push((instance.must(&VarKey::resource_op(Symbol::U, n, k, t, w)), 1.0));
                    terms.push((instance.must(&VarKey::resource_op(Symbol::Yx, n, k, t, w)), -1.0));
                    terms.push((instance.must(&VarKey::spin(n, k, w)), -1.0));
                    instance.add_constraint(
                        format!("balance[{n},{}]", idx(k, t, w)),
                        Family::Balance,
                        terms,
                        Sense::Eq,
                        scenario.demand(n, slot),
                    );
                }
            }
        }
    }
}

/// Peak-penalty level above every generator's electric output, and the daily net
/// CO₂ allowance.
pub fn add_peak_and_emission_constraints(
    instance: &mut MilpInstance,
    catalog: &Catalog,
    set: &ScenarioSet,
    config: &StudyConfig,
) {
    let grid = &set.grid;
    for e in generators(catalog) {
        let g = e.rate(ResourceId::Electricity, Direction::Gen);
        for w in 0..set.len() {
            let xi = instance.must(&VarKey::peak(w));
            for k in 0..grid.years {
                for t in 0..grid.intervals_per_day {
                    let p = instance.must(&VarKey::equip_op(Symbol::P, &e.id, k, t, w));
                    instance.add_constraint(
                        format!("peak[{},{}]", e.id, idx(k, t, w)),
                        Family::Peak,
                        [(p, config.peak_coeff * g), (xi, -1.0)],
                        Sense::Le,
                        0.0,
                    );
                }
            }
        }
    }
    for w in 0..set.len() {
        for k in 0..grid.years {
            let terms: Vec<(usize, f64)> = (0..grid.intervals_per_day)
                .filter_map(|t| instance.col(&VarKey::resource_op(Symbol::Yx, ResourceId::Co2, k, t, w)))
                .map(|j| (j, 1.0))
                .collect();
            instance.add_constraint(
                format!("emission[k{},w{}]", k + 1, w + 1),
                Family::Emission,
                terms,
                Sense::Le,
                emission_allowance(set, k, w),
            );
        }
    }
}

/// Daily CO₂ allowance of year `k` in scenario `w`: the emission limit times the
/// summed electric load.
pub fn emission_allowance(set: &ScenarioSet, k: usize, w: usize) -> f64 {
    let grid = &set.grid;
    let s = &set.scenarios[w];
    let load: f64 = (0..grid.intervals_per_day)
        .map(|t| s.demand(ResourceId::Electricity, grid.slot(k, t)))
        .sum();
    s.emission_limit.values[k] * load
}

/// Net present cost: initial investment, discounted and escalated maintenance,
/// purchases and peak penalty, minus the enabled income streams.
pub fn build_objective(instance: &mut MilpInstance, catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig) {
    let grid = &set.grid;
    let day_hours = grid.days_per_year * grid.delta_t;
    let resources = instance_resources(catalog, set);

    for e in &catalog.equipment {
        let a = instance.must(&VarKey::a(&e.id));
        let rp = instance.must(&VarKey::rp(&e.id));
        instance.add_cost(rp, e.alpha0);
        instance.add_cost(a, e.gamma0);
        if e.is_storage() {
            let b = instance.must(&VarKey::b(&e.id));
            instance.add_cost(b, e.beta0);
        }
    }

    for k in 0..grid.years {
        let disc = config.discount(k);
        let esc = config.escalation(k);
        for e in &catalog.equipment {
            let a = instance.must(&VarKey::a(&e.id));
            let rp = instance.must(&VarKey::rp(&e.id));
            instance.add_cost(rp, disc * esc * e.alpha_k);
            instance.add_cost(a, disc * esc * e.gamma_k);
            if e.is_storage() {
                let b = instance.must(&VarKey::b(&e.id));
                instance.add_cost(b, disc * esc * e.beta_k);
            }
        }
        for (w, scenario) in set.scenarios.iter().enumerate() {
            let weight = disc * day_hours * scenario.probability;
            for t in 0..grid.intervals_per_day {
                for &n in &resources {
                    let u = instance.must(&VarKey::resource_op(Symbol::U, n, k, t, w));
                    let yx = instance.must(&VarKey::resource_op(Symbol::Yx, n, k, t, w));
                    instance.add_cost(u, weight * esc * catalog.purchase_price(n));
                    instance.add_cost(yx, weight * esc * catalog.surplus_price(n));
                }
            }
            let xi = instance.must(&VarKey::peak(w));
            let peak_weight =
                disc * grid.days_per_year * (grid.years * grid.intervals_per_day) as f64 * scenario.probability;
            instance.add_cost(xi, peak_weight);

            if config.include_cap_trade_income {
                let esc_ct = if config.cap_trade_inflation { esc } else { 1.0 };
                let price = scenario.cet_price.values[k];
                let rate = weight * esc_ct * price;
                instance.objective_constant -= rate * emission_allowance(set, k, w);
                for t in 0..grid.intervals_per_day {
                    if let Some(j) = instance.col(&VarKey::resource_op(Symbol::Yx, ResourceId::Co2, k, t, w)) {
                        instance.add_cost(j, rate);
                    }
                }
            }
            if config.include_sng_income {
                let rate = weight * esc * SNG_PRICE_SHARE * catalog.purchase_price(ResourceId::Gas);
                for t in 0..grid.intervals_per_day {
                    if let Some(j) = instance.col(&VarKey::resource_op(Symbol::Yx, ResourceId::Gas, k, t, w)) {
                        instance.add_cost(j, -rate);
                    }
                }
            }
        }
    }
}

/// Compiles the deterministic equivalent of the two-stage program.
pub fn build_instance(catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig) -> Result<MilpInstance> {
    if catalog.equipment.is_empty() {
        return Err(Error::validation("<catalog>", "equipment", "catalog has no equipment"));
    }
    catalog.validate()?;
    config.validate()?;
    set.grid.validate()?;
    for f in &config.forced_installs {
        catalog.lookup(&f.equipment)?;
    }
    for s in &set.scenarios {
        s.base.validate(&set.grid)?;
        for r in renewables(catalog) {
            if s.availability.get(&r.id).map(Vec::len) != Some(set.grid.len()) {
                return Err(Error::Invalid(format!("scenario {} lacks availability for {}", s.id, r.id)));
            }
        }
    }
    let vars = register_variables(catalog, set, config);
    let mut instance = MilpInstance::new("microgrid", vars)?;
    add_installation_constraints(&mut instance, catalog, config)?;
    add_commitment_constraints(&mut instance, catalog, set);
    add_storage_constraints(&mut instance, catalog, set);
    add_balance_constraints(&mut instance, catalog, set);
    add_peak_and_emission_constraints(&mut instance, catalog, set, config);
    build_objective(&mut instance, catalog, set, config);
    instance.validate()?;
    Ok(instance)
}
