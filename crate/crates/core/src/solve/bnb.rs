//! Best-first branch-and-bound over binary columns.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::debug;

use super::simplex::{LpData, LpStatus};
use super::{Solution, SolveStatus, Stopwatch};
use crate::error::{Error, Result};
use crate::model::MilpInstance;

const INT_TOL: f64 = 1e-6;
const FEAS_TOL: f64 = 1e-6;

/// Size and time budget for [`solve_exact_small`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Binary columns not already fixed by their bounds.
    pub max_binaries: usize,
    pub max_columns: usize,
    /// Seconds; `None` means unlimited.
    pub time: Option<f64>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_binaries: 64,
            max_columns: 5000,
            time: None,
        }
    }
}

struct Node {
    bound: f64,
    seq: usize,
    fixings: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: smaller bound first, then older node first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Incumbent {
    objective: f64,
    values: Vec<f64>,
    key: Vec<u8>,
}

struct Search<'a> {
    instance: &'a MilpInstance,
    lp: LpData,
    base_lb: Vec<f64>,
    base_ub: Vec<f64>,
    binaries: Vec<usize>,
    /// Rows touching each column.
    rows_of: Vec<Vec<usize>>,
    incumbent: Option<Incumbent>,
}

fn tolerance(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

impl<'a> Search<'a> {
    fn bounds(&self, fixings: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
        let mut lb = self.base_lb.clone();
        let mut ub = self.base_ub.clone();
        for &(j, v) in fixings {
            lb[j] = v;
            ub[j] = v;
        }
        (lb, ub)
    }

    fn most_fractional(&self, x: &[f64]) -> Option<usize> {
        let mut best = None;
        let mut best_dist = INT_TOL;
        for &j in &self.binaries {
            let dist = (x[j] - x[j].round()).abs();
            if dist > best_dist + 1e-12 {
                best_dist = dist;
                best = Some(j);
            }
        }
        best
    }

    /// Rounds each binary towards the value that keeps the rows it touches satisfied
    /// at the current continuous values, preferring the nearer value.
    fn round(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for &j in &self.binaries {
            let near = y[j].round();
            let far = 1.0 - near;
            let holds = |y: &mut Vec<f64>, v: f64| {
                y[j] = v;
                self.rows_of[j]
                    .iter()
                    .all(|&i| self.instance.constraints[i].violation(y) <= FEAS_TOL)
            };
            if !holds(&mut y, near) && !holds(&mut y, far) {
                y[j] = near;
            }
        }
        y
    }

    /// Re-solves the LP with every binary pinned to its rounded value and offers the
    /// result as an incumbent.
    fn polish(&mut self, x: &[f64]) {
        let rounded = self.round(x);
        let fixings: Vec<(usize, f64)> = self.binaries.iter().map(|&j| (j, rounded[j])).collect();
        let (lb, ub) = self.bounds(&fixings);
        let lp = self.lp.solve(&lb, &ub);
        if lp.status != LpStatus::Optimal {
            return;
        }
        let mut values = lp.x;
        for &(j, v) in &fixings {
            values[j] = v;
        }
        let max_violation = self
            .instance
            .constraints
            .iter()
            .map(|r| r.violation(&values))
            .fold(0.0, f64::max);
        if max_violation > FEAS_TOL {
            debug!("polished point rejected, violation {max_violation:e}");
            return;
        }
        let objective = self.instance.objective_value(&values);
        let key: Vec<u8> = self.binaries.iter().map(|&j| values[j] as u8).collect();
        let better = match &self.incumbent {
            None => true,
            Some(inc) => {
                let tol = tolerance(inc.objective);
                objective < inc.objective - tol || (objective <= inc.objective + tol && key < inc.key)
            }
        };
        if better {
            debug!("incumbent {objective}");
            self.incumbent = Some(Incumbent { objective, values, key });
        }
    }
}

/// Exact optimum of a small MILP by best-first branch-and-bound on its binary columns.
pub fn solve_exact_small(instance: &MilpInstance, limits: Limits) -> Result<Solution> {
    instance.validate()?;
    let free = instance.num_free_integer();
    if free > limits.max_binaries {
        return Err(Error::LimitExceeded(format!(
            "{free} free binaries exceed the limit of {}",
            limits.max_binaries
        )));
    }
    if instance.num_cols() > limits.max_columns {
        return Err(Error::LimitExceeded(format!(
            "{} columns exceed the limit of {}",
            instance.num_cols(),
            limits.max_columns
        )));
    }
    let clock = Stopwatch::start();
    let index = instance.index().clone();
    let mut search = Search {
        instance,
        lp: LpData::from_instance(instance),
        base_lb: instance.variables.iter().map(|v| v.lb).collect(),
        base_ub: instance.variables.iter().map(|v| v.ub).collect(),
        binaries: (0..instance.num_cols())
            .filter(|&j| instance.variables[j].integer && instance.variables[j].lb < instance.variables[j].ub)
            .collect(),
        rows_of: vec![Vec::new(); instance.num_cols()],
        incumbent: None,
    };
    for (i, row) in instance.constraints.iter().enumerate() {
        for &(j, _) in &row.coeffs {
            search.rows_of[j].push(i);
        }
    }
    // Integer columns pinned by their bounds must still be integral.
    for (j, v) in instance.variables.iter().enumerate() {
        if v.integer && v.lb == v.ub && (v.lb - v.lb.round()).abs() > INT_TOL {
            return Ok(Solution::without_values(SolveStatus::Infeasible, index, clock.seconds()));
        }
        if v.integer {
            search.base_lb[j] = v.lb.ceil();
            search.base_ub[j] = v.ub.floor();
        }
    }

    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        seq: 0,
        fixings: Vec::new(),
    });
    let mut seq = 1;
    let mut nodes = 0usize;
    let mut root = true;
    let mut limit_hit: Option<String> = None;
    let mut best_bound = f64::NEG_INFINITY;

    while let Some(node) = heap.pop() {
        if let Some(t) = limits.time {
            if clock.seconds() > t {
                best_bound = node.bound;
                limit_hit = Some("time".into());
                break;
            }
        }
        if let Some(inc) = &search.incumbent {
            if node.bound >= inc.objective - instance.objective_constant - tolerance(inc.objective) {
                continue;
            }
        }
        nodes += 1;
        let (lb, ub) = search.bounds(&node.fixings);
        let lp = search.lp.solve(&lb, &ub);
        match lp.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                root = false;
                continue;
            }
            LpStatus::Unbounded => {
                if root {
                    return Ok(Solution::without_values(SolveStatus::Unbounded, index, clock.seconds()));
                }
                continue;
            }
            LpStatus::IterationLimit => {
                limit_hit = Some("simplex iterations".into());
                best_bound = node.bound;
                break;
            }
        }
        root = false;
        if let Some(inc) = &search.incumbent {
            if lp.objective >= inc.objective - instance.objective_constant - tolerance(inc.objective) {
                continue;
            }
        }
        match search.most_fractional(&lp.x) {
            None => search.polish(&lp.x),
            Some(j) => {
                search.polish(&lp.x);
                let current = lp.x[j];
                // explore the nearer side first among equal bounds
                let order = if current >= 0.5 { [1.0, 0.0] } else { [0.0, 1.0] };
                for v in order {
                    let mut fixings = node.fixings.clone();
                    fixings.push((j, v));
                    heap.push(Node {
                        bound: lp.objective,
                        seq,
                        fixings,
                    });
                    seq += 1;
                }
            }
        }
    }
    debug!("branch-and-bound explored {nodes} nodes");

    let wall_time = clock.seconds();
    match (search.incumbent, limit_hit) {
        (Some(inc), None) => Ok(Solution {
            status: SolveStatus::Optimal,
            objective: inc.objective,
            values: inc.values,
            gap: Some(0.0),
            wall_time,
            index,
        }),
        (None, None) => Ok(Solution::without_values(SolveStatus::Infeasible, index, wall_time)),
        (inc, Some(reason)) => {
            let mut s = Solution::without_values(SolveStatus::Limit(reason), index, wall_time);
            if let Some(inc) = inc {
                let bound = best_bound + instance.objective_constant;
                s.gap = Some(((inc.objective - bound) / inc.objective.abs().max(1e-9)).max(0.0));
                s.objective = inc.objective;
                s.values = inc.values;
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Family, Sense, Symbol, VarKey, Variable};

    fn col(symbol: Symbol, name: &str, ub: f64, integer: bool) -> Variable {
        Variable {
            key: VarKey::first_stage(symbol, name),
            lb: 0.0,
            ub,
            integer,
        }
    }

    #[test]
    fn covering_toy() {
        // min x + y, x + y >= 1, x binary, y >= 0
        let mut m =
            MilpInstance::new("toy", vec![col(Symbol::A, "x", 1.0, true), col(Symbol::Rp, "y", f64::INFINITY, false)])
                .unwrap();
        m.add_constraint("cover", Family::Install, [(0, 1.0), (1, 1.0)], Sense::Ge, 1.0);
        m.objective = vec![1.0, 1.0];
        let s = solve_exact_small(&m, Limits::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
        let again = solve_exact_small(&m, Limits::default()).unwrap();
        assert_eq!(s.values, again.values);
    }

    #[test]
    fn knapsack_needs_branching() {
        // max 5a + 4b + 3c s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8
        let vars = ["a", "b", "c"].iter().map(|n| col(Symbol::A, n, 1.0, true)).collect();
        let mut m = MilpInstance::new("ks", vars).unwrap();
        m.add_constraint("w1", Family::Install, [(0, 2.0), (1, 3.0), (2, 1.0)], Sense::Le, 5.0);
        m.add_constraint("w2", Family::Install, [(0, 4.0), (1, 1.0), (2, 2.0)], Sense::Le, 11.0);
        m.add_constraint("w3", Family::Install, [(0, 3.0), (1, 4.0), (2, 2.0)], Sense::Le, 8.0);
        m.objective = vec![-5.0, -4.0, -3.0];
        let s = solve_exact_small(&m, Limits::default()).unwrap();
        // brute force
        let mut best = f64::INFINITY;
        for mask in 0..8u32 {
            let x: Vec<f64> = (0..3).map(|i| ((mask >> i) & 1) as f64).collect();
            if m.constraints.iter().all(|r| r.violation(&x) == 0.0) {
                best = best.min(m.objective_value(&x));
            }
        }
        assert_eq!(s.objective, best);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut m = MilpInstance::new("bad", vec![col(Symbol::Rp, "x", f64::INFINITY, false)]).unwrap();
        m.add_constraint("lo", Family::Install, [(0, 1.0)], Sense::Ge, 2.0);
        m.add_constraint("hi", Family::Install, [(0, 1.0)], Sense::Le, 1.0);
        let s = solve_exact_small(&m, Limits::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
        assert!(s.values.is_empty());
    }

    #[test]
    fn limits_are_enforced() {
        let vars = (0..3).map(|i| col(Symbol::A, &format!("v{i}"), 1.0, true)).collect();
        let m = MilpInstance::new("big", vars).unwrap();
        let limits = Limits {
            max_binaries: 2,
            ..Limits::default()
        };
        assert!(matches!(solve_exact_small(&m, limits), Err(Error::LimitExceeded(_))));
        let limits = Limits {
            max_columns: 2,
            ..Limits::default()
        };
        assert!(matches!(solve_exact_small(&m, limits), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn unbounded_is_reported() {
        let mut m = MilpInstance::new("u", vec![col(Symbol::Rp, "x", f64::INFINITY, false)]).unwrap();
        m.objective = vec![-1.0];
        let s = solve_exact_small(&m, Limits::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Unbounded);
    }
}
