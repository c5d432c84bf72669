use std::fmt;

use super::Solution;
use crate::model::MilpInstance;

/// One failed check.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A constraint row, by name, and the amount by which it is violated.
    Row { name: String, amount: f64 },
    /// A column bound.
    Bound { column: String, value: f64, lb: f64, ub: f64 },
    /// A binary column away from {0, 1}.
    Integrality { column: String, value: f64 },
    /// The assignment does not cover every column.
    Missing { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Row { name, amount } => write!(f, "row {name} violated by {amount:e}"),
            Violation::Bound { column, value, lb, ub } => write!(f, "{column} = {value} outside [{lb}, {ub}]"),
            Violation::Integrality { column, value } => write!(f, "{column} = {value} is not binary"),
            Violation::Missing { expected, found } => write!(f, "{found} values for {expected} columns"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
    /// Objective recomputed from the values, including the constant.
    pub recomputed_objective: f64,
    pub reported_objective: f64,
}

impl CheckReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn objective_error(&self) -> f64 {
        (self.recomputed_objective - self.reported_objective).abs() / self.reported_objective.abs().max(1.0)
    }

    /// Names of violated rows.
    pub fn violated_rows(&self) -> Vec<&str> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::Row { name, .. } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }
}

/// Verifies rows, bounds and integrality of `solution` within `tol`, and recomputes
/// the objective independently of the solver.
pub fn check_solution(instance: &MilpInstance, solution: &Solution, tol: f64) -> CheckReport {
    let x = &solution.values;
    let mut violations = Vec::new();
    if x.len() != instance.num_cols() {
        violations.push(Violation::Missing {
            expected: instance.num_cols(),
            found: x.len(),
        });
        return CheckReport {
            violations,
            recomputed_objective: f64::NAN,
            reported_objective: solution.objective,
        };
    }
    for (v, &value) in instance.variables.iter().zip(x) {
        if !(value >= v.lb - tol && value <= v.ub + tol) {
            violations.push(Violation::Bound {
                column: v.key.to_string(),
                value,
                lb: v.lb,
                ub: v.ub,
            });
        }
        if v.integer && (value - value.round()).abs() > tol {
            violations.push(Violation::Integrality {
                column: v.key.to_string(),
                value,
            });
        }
    }
    for row in &instance.constraints {
        let amount = row.violation(x);
        if !(amount <= tol) {
            violations.push(Violation::Row {
                name: row.name.clone(),
                amount,
            });
        }
    }
    let mut recomputed = instance.objective_constant;
    for (c, v) in instance.objective.iter().zip(x) {
        recomputed += c * v;
    }
    CheckReport {
        violations,
        recomputed_objective: recomputed,
        reported_objective: solution.objective,
    }
}
