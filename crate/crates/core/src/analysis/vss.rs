use std::fmt;

use log::info;
use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::model::{build_instance, build_mean_value_instance, design_from_values, fix_first_stage, Design, StudyConfig};
use crate::scenarios::ScenarioSet;
use crate::solve::{Backend, SolveStatus};

/// A cost that may be unbounded because a recourse problem had no solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Extended::Infinite
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VssResult {
    /// Optimum of the stochastic problem.
    pub ss: f64,
    /// Expected cost of the mean-value design.
    pub evs: Extended,
    pub vss: Extended,
    /// First-stage decisions of the mean-value problem.
    pub mean_design: Option<Design>,
    /// Status of each scenario's recourse problem under the mean-value design, in
    /// scenario order.
    pub recourse: Vec<(String, SolveStatus)>,
    /// Whether the electricity purchase cap and surplus bounds were lifted.
    pub relaxed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvpiResult {
    pub ss: f64,
    /// Wait-and-see value: expected optimum when each scenario is known in advance.
    pub ws: f64,
    pub evpi: f64,
}

fn solve_stochastic(catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig, backend: &Backend) -> Result<f64> {
    let instance = build_instance(catalog, set, config)?;
    let solution = backend.solve(&instance)?;
    match solution.status {
        SolveStatus::Optimal => Ok(solution.objective),
        status => Err(Error::Invalid(format!("stochastic problem ended with status {status}"))),
    }
}

/// Value of the stochastic solution: how much the mean-value design loses against
/// the stochastic design once every scenario's recourse is optimised.
///
/// A scenario whose recourse problem is infeasible under the mean-value design makes
/// the expected cost, and with it the VSS, infinite.
pub fn compute_vss(catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig, backend: &Backend) -> Result<VssResult> {
    if set.is_empty() {
        return Err(Error::Invalid("scenario set is empty".into()));
    }
    let relaxed = config.relax_elec_purchase_cap && config.relax_surplus_cap;
    let ss = solve_stochastic(catalog, set, config, backend)?;
    info!("stochastic optimum {ss}");

    let mean = build_mean_value_instance(catalog, set, config)?;
    let mean_solution = backend.solve(&mean)?;
    if mean_solution.status != SolveStatus::Optimal {
        info!("mean-value problem ended with status {}", mean_solution.status);
        return Ok(VssResult {
            ss,
            evs: Extended::Infinite,
            vss: Extended::Infinite,
            mean_design: None,
            recourse: Vec::new(),
            relaxed,
        });
    }
    let design = design_from_values(&mean, &mean_solution.values);

    let mut recourse = Vec::with_capacity(set.len());
    let mut evs = 0.0;
    let mut infinite = false;
    for (w, scenario) in set.scenarios.iter().enumerate() {
        let single = build_instance(catalog, &set.single(w), config)?;
        let fixed = fix_first_stage(&single, &design)?;
        let solution = backend.solve(&fixed)?;
        match solution.status {
            SolveStatus::Optimal => evs += scenario.probability * solution.objective,
            SolveStatus::Infeasible => infinite = true,
            ref other => {
                return Err(Error::Invalid(format!(
                    "recourse problem for {} ended with status {other}",
                    scenario.id
                )))
            }
        }
        recourse.push((scenario.id.clone(), solution.status));
    }
    let (evs, vss) = if infinite {
        (Extended::Infinite, Extended::Infinite)
    } else {
        (Extended::Finite(evs), Extended::Finite(evs - ss))
    };
    Ok(VssResult {
        ss,
        evs,
        vss,
        mean_design: Some(design),
        recourse,
        relaxed,
    })
}

/// Expected value of perfect information, `SS − WS`.
pub fn compute_evpi(catalog: &Catalog, set: &ScenarioSet, config: &StudyConfig, backend: &Backend) -> Result<EvpiResult> {
    if set.is_empty() {
        return Err(Error::Invalid("scenario set is empty".into()));
    }
    let ss = solve_stochastic(catalog, set, config, backend)?;
    let mut ws = 0.0;
    for (w, scenario) in set.scenarios.iter().enumerate() {
        ws += scenario.probability * solve_stochastic(catalog, &set.single(w), config, backend)?;
    }
    Ok(EvpiResult { ss, ws, evpi: ss - ws })
}
