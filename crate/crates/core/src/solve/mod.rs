//! Solving layer: MPS export, an external-solver adapter, the built-in exact solver and
//! an independent solution checker.

mod bnb;
mod check;
mod external;
pub mod mps;
pub mod simplex;

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::model::{MilpInstance, VarIndex, VarKey};

pub use bnb::{solve_exact_small, Limits};
pub use check::{check_solution, CheckReport, Violation};
pub use external::{parse_solution_file, solution_string, solve_external, SOLVER_ENV};
pub use mps::{mps_string, write_mps};

/// Which solver answers a request.
#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    /// The built-in branch-and-bound.
    Exact(Limits),
    /// A subprocess driven by a command template with `{mps}` and `{sol}`.
    External(String),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Exact(Limits::default())
    }
}

impl Backend {
    pub fn solve(&self, instance: &MilpInstance) -> Result<Solution> {
        match self {
            Backend::Exact(limits) => solve_exact_small(instance, *limits),
            Backend::External(template) => solve_external(instance, template),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// A node, time or iteration budget ran out before optimality was proven.
    Limit(String),
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Optimal => f.write_str("Optimal"),
            SolveStatus::Infeasible => f.write_str("Infeasible"),
            SolveStatus::Unbounded => f.write_str("Unbounded"),
            SolveStatus::Limit(why) => write!(f, "Limit({why})"),
        }
    }
}

/// Result of a solve. `values` follows the instance's column order; it is complete
/// when the status is optimal and holds the best incumbent (possibly empty) otherwise.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    /// Includes the instance's objective constant.
    pub objective: f64,
    pub values: Vec<f64>,
    /// Relative gap between incumbent and best bound, when known.
    pub gap: Option<f64>,
    /// Seconds.
    pub wall_time: f64,
    pub index: Arc<VarIndex>,
}

impl Solution {
    pub(crate) fn without_values(status: SolveStatus, index: Arc<VarIndex>, wall_time: f64) -> Solution {
        let objective = match status {
            SolveStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        };
        Solution {
            status,
            objective,
            values: Vec::new(),
            gap: None,
            wall_time,
            index,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Value of a column, if the key exists and a value is present.
    pub fn value(&self, key: &VarKey) -> Option<f64> {
        self.index.get(key).and_then(|j| self.values.get(j).copied())
    }

    /// Pairs of key and value in column order.
    pub fn iter(&self) -> impl Iterator<Item = (&VarKey, f64)> + '_ {
        self.index.keys().iter().zip(self.values.iter().copied())
    }
}

/// Wall-clock stopwatch that degrades to zero where no clock is available.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Stopwatch {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub(crate) fn seconds(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}
