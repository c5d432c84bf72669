//! Derived instances used by the value-of-information procedures.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::build::build_instance;
use super::config::StudyConfig;
use super::instance::{Family, MilpInstance, Symbol, VarKey};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::scenarios::{availability_for, BaseCase, PolicyTrajectory, Scenario, ScenarioSet};

/// First-stage values keyed by their columns.
pub type Design = BTreeMap<VarKey, f64>;

const DESIGN_TOL: f64 = 1e-6;

/// Single-scenario set whose weather, demand and policy trajectories are the
/// probability-weighted means of `set`. Availability is recomputed from the mean
/// weather.
pub fn mean_value_scenarios(catalog: &Catalog, set: &ScenarioSet) -> Result<ScenarioSet> {
    if set.is_empty() {
        return Err(Error::Invalid("scenario set is empty".into()));
    }
    let bases: Vec<(&BaseCase, f64)> = set.scenarios.iter().map(|s| (s.base.as_ref(), s.probability)).collect();
    let base = BaseCase::weighted_mean("mean", &bases);
    let cet: Vec<(&PolicyTrajectory, f64)> = set.scenarios.iter().map(|s| (&s.cet_price, s.probability)).collect();
    let lim: Vec<(&PolicyTrajectory, f64)> =
        set.scenarios.iter().map(|s| (&s.emission_limit, s.probability)).collect();
    let availability = availability_for(&base, catalog);
    let scenario = Scenario {
        id: "mean".into(),
        base: Arc::new(base),
        policy: "mean".into(),
        cet_price: PolicyTrajectory::weighted_mean(&cet),
        emission_limit: PolicyTrajectory::weighted_mean(&lim),
        probability: 1.0,
        availability,
    };
    ScenarioSet::new(vec![scenario], set.grid)
}

/// The deterministic problem solved with expected inputs.
pub fn build_mean_value_instance(catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig) -> Result<MilpInstance> {
    build_instance(catalog, &mean_value_scenarios(catalog, set)?, config)
}

/// Reads the first-stage part of a column assignment.
pub fn design_from_values(instance: &MilpInstance, values: &[f64]) -> Design {
    instance
        .variables
        .iter()
        .zip(values)
        .filter(|(v, _)| v.key.symbol.is_first_stage())
        .map(|(v, &x)| (v.key.clone(), x))
        .collect()
}

/// Copy of `instance` with every install, rated-power and capacity column pinned to
/// `design`, leaving only recourse columns free.
pub fn fix_first_stage(instance: &MilpInstance, design: &Design) -> Result<MilpInstance> {
    let mut fixed = instance.clone();
    let mut pinned = vec![None; fixed.num_cols()];
    for (j, v) in fixed.variables.iter().enumerate() {
        if !v.key.symbol.is_first_stage() {
            continue;
        }
        let raw = *design
            .get(&v.key)
            .ok_or_else(|| Error::MissingDesignValue(v.key.to_string()))?;
        let value = if v.key.symbol == Symbol::A {
            let r = raw.round();
            if (raw - r).abs() > DESIGN_TOL {
                return Err(Error::Bound {
                    column: v.key.to_string(),
                    message: format!("install decision {raw} is not binary"),
                });
            }
            r
        } else {
            raw
        };
        let slack = DESIGN_TOL * (1.0 + value.abs());
        if value < v.lb - slack || value > v.ub + slack {
            return Err(Error::Bound {
                column: v.key.to_string(),
                message: format!("value {value} outside [{}, {}]", v.lb, v.ub),
            });
        }
        pinned[j] = Some(value.clamp(v.lb, v.ub));
    }
    let x: Vec<f64> = pinned.iter().map(|p| p.unwrap_or(0.0)).collect();
    for row in &fixed.constraints {
        if !matches!(row.family, Family::Install | Family::Forced) {
            continue;
        }
        let scale = 1.0 + row.coeffs.iter().map(|&(j, a)| (a * x[j]).abs()).fold(row.rhs.abs(), f64::max);
        if row.violation(&x) > DESIGN_TOL * scale {
            return Err(Error::Bound {
                column: row.name.clone(),
                message: "design violates the installation limits".into(),
            });
        }
    }
    for (v, p) in fixed.variables.iter_mut().zip(pinned) {
        if let Some(value) = p {
            v.lb = value;
            v.ub = value;
        }
    }
    fixed.name = format!("{}-fixed", instance.name);
    Ok(fixed)
}
