//! Subprocess adapter for any MILP solver that reads MPS.
//!
//! The command template is split on whitespace; `{mps}` and `{sol}` are replaced by
//! the temporary input and output paths. The solver (or a wrapper script) must write
//!
//! ```text
//! status Optimal
//! objective 1234.5
//! C0000001 1
//! C0000002 0.25
//! ```
//!
//! Column names may be the MPS names or the human-readable column keys. Columns that
//! are not listed are taken as zero.

use std::collections::HashMap;
use std::fs;
use std::io::ErrorKind;
use std::process::Command;

use log::{debug, warn};

use super::mps::{column_from_name, number, write_mps};
use super::{Solution, SolveStatus, Stopwatch};
use crate::error::{Error, Result};
use crate::model::MilpInstance;

/// Environment variable holding the default solver command template.
pub const SOLVER_ENV: &str = "MGPLAN_SOLVER_CMD";

const STDERR_EXCERPT: usize = 2000;

/// Writes `instance` to a temporary MPS file, runs the solver and reads its answer.
pub fn solve_external(instance: &MilpInstance, template: &str) -> Result<Solution> {
    instance.validate()?;
    if !template.contains("{mps}") || !template.contains("{sol}") {
        return Err(Error::Invalid(format!(
            "solver template must contain {{mps}} and {{sol}}: {template:?}"
        )));
    }
    let dir = tempfile::tempdir().map_err(|e| Error::io(std::env::temp_dir(), e))?;
    let mps = dir.path().join("model.mps");
    let sol = dir.path().join("model.sol");
    write_mps(instance, &mps)?;

    let fill = |part: &str| {
        part.replace("{mps}", &mps.to_string_lossy())
            .replace("{sol}", &sol.to_string_lossy())
    };
    let mut parts = template.split_whitespace().map(fill);
    let program = parts.next().ok_or_else(|| Error::Invalid("empty solver template".into()))?;
    let args: Vec<String> = parts.collect();
    debug!("running {program} {args:?}");

    let clock = Stopwatch::start();
    let output = Command::new(&program).args(&args).output().map_err(|e| {
        if e.kind() == ErrorKind::NotFound {
            Error::SolverNotFound(program.clone())
        } else {
            Error::io(&program, e)
        }
    })?;
    let wall_time = clock.seconds();
    if !output.status.success() {
        let stderr = String::from_utf8_lossy(&output.stderr);
        let excerpt: String = stderr.chars().take(STDERR_EXCERPT).collect();
        return Err(Error::SolverFailed {
            code: output.status.code(),
            stderr: excerpt,
        });
    }
    let text = fs::read_to_string(&sol).map_err(|e| Error::io(&sol, e))?;
    let mut solution = parse_solution_file(instance, &text)?;
    solution.wall_time = wall_time;
    Ok(solution)
}

/// Parses the solution-file convention against `instance`'s columns.
pub fn parse_solution_file(instance: &MilpInstance, text: &str) -> Result<Solution> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = |line: Option<&str>, key: &str| -> Result<String> {
        let line = line.ok_or_else(|| Error::Parse(format!("solution file lacks a '{key}' line")))?;
        match line.split_once(char::is_whitespace) {
            Some((k, v)) if k.eq_ignore_ascii_case(key) => Ok(v.trim().to_string()),
            _ => Err(Error::Parse(format!("expected '{key} …', found {line:?}"))),
        }
    };
    let status = match header(lines.next(), "status")?.to_ascii_lowercase().as_str() {
        "optimal" => SolveStatus::Optimal,
        "infeasible" => SolveStatus::Infeasible,
        "unbounded" => SolveStatus::Unbounded,
        other => SolveStatus::Limit(other.to_string()),
    };
    let objective_text = header(lines.next(), "objective")?;
    let objective: f64 = objective_text
        .parse()
        .map_err(|_| Error::Parse(format!("bad objective {objective_text:?}")))?;

    let index = instance.index().clone();
    let readable: HashMap<String, usize> = index
        .keys()
        .iter()
        .enumerate()
        .map(|(j, k)| (k.to_string(), j))
        .collect();
    let mut values = vec![0.0; instance.num_cols()];
    let mut seen = 0usize;
    for line in lines {
        let (name, value) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse(format!("expected 'name value', found {line:?}")))?;
        let name = name.trim();
        let j = column_from_name(name)
            .filter(|&j| j < values.len())
            .or_else(|| readable.get(name).copied())
            .ok_or_else(|| Error::Parse(format!("unknown column {name:?}")))?;
        values[j] = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad value {value:?} for {name}")))?;
        seen += 1;
    }
    if status != SolveStatus::Optimal {
        let mut s = Solution::without_values(status, index, 0.0);
        if seen > 0 {
            s.values = values;
            s.objective = objective;
        }
        return Ok(s);
    }
    // The MPS file carries no objective constant, so the solver's figure excludes it.
    let objective = objective + instance.objective_constant;
    let recomputed = instance.objective_value(&values);
    if (recomputed - objective).abs() > 1e-6 * objective.abs().max(1.0) {
        warn!("solver objective {objective} differs from recomputed {recomputed}");
    }
    Ok(Solution {
        status,
        objective,
        values,
        gap: None,
        wall_time: 0.0,
        index,
    })
}

/// Renders `solution` in the solution-file convention with readable column keys, so
/// that [`parse_solution_file`] reads it back. As with solver output, the objective
/// line excludes the instance's objective constant.
pub fn solution_string(instance: &MilpInstance, solution: &Solution) -> String {
    let status = match &solution.status {
        SolveStatus::Limit(_) => "Limit".to_string(),
        s => s.to_string(),
    };
    let objective = if solution.objective.is_finite() {
        solution.objective - instance.objective_constant
    } else {
        0.0
    };
    let mut out = format!("status {status}\nobjective {}\n", number(objective));
    for (key, value) in solution.iter() {
        out.push_str(&format!("{key} {}\n", number(value)));
    }
    out
}
