//! Fixed-format MPS export.
//!
//! Columns are named `C0000001…` and rows `R0000001…` in canonical order, so the same
//! instance always produces the same bytes. Numbers are written at full round-trip
//! precision; a value longer than the 12-character field simply widens the line,
//! which whitespace-splitting readers accept. The objective constant has no place in
//! MPS and is recorded in a `*` comment line instead.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{MilpInstance, Sense};

pub const OBJECTIVE_ROW: &str = "OBJ";
pub const CONSTANT_COMMENT: &str = "* objective constant";

pub fn column_name(j: usize) -> String {
    format!("C{:07}", j + 1)
}

pub fn row_name(i: usize) -> String {
    format!("R{:07}", i + 1)
}

/// Column index encoded in a `C…` name.
pub fn column_from_name(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('C')?;
    if digits.len() != 7 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<usize>().ok()?.checked_sub(1)
}

/// Shortest decimal that parses back to exactly `x`.
pub fn number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let plain = format!("{x}");
    if plain.len() <= 12 {
        return plain;
    }
    let exp = format!("{x:e}");
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

fn entry(out: &mut String, first: &str, second: &str, value: f64) {
    let _ = writeln!(out, "    {first:<8}  {second:<8}  {:>12}", number(value));
}

fn bound(out: &mut String, kind: &str, column: &str, value: Option<f64>) {
    match value {
        Some(v) => {
            let _ = writeln!(out, " {kind} BND       {column:<8}  {:>12}", number(v));
        }
        None => {
            let _ = writeln!(out, " {kind} BND       {column}");
        }
    }
}

/// Renders `instance` as fixed-format MPS.
pub fn mps_string(instance: &MilpInstance) -> String {
    let mut out = String::new();
    let name: String = instance.name.chars().filter(|c| !c.is_whitespace()).collect();
    let _ = writeln!(out, "NAME          {}", if name.is_empty() { "MGPLAN" } else { &name });
    let _ = writeln!(out, "{CONSTANT_COMMENT} {}", number(instance.objective_constant));
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJECTIVE_ROW}");
    for (i, row) in instance.constraints.iter().enumerate() {
        let kind = match row.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        let _ = writeln!(out, " {kind}  {}", row_name(i));
    }

    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); instance.num_cols()];
    for (i, row) in instance.constraints.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            by_col[j].push((i, a));
        }
    }
    out.push_str("COLUMNS\n");
    let mut in_marker = false;
    let mut markers = 0;
    for (j, var) in instance.variables.iter().enumerate() {
        if var.integer != in_marker {
            markers += 1;
            let tag = if var.integer { "'INTORG'" } else { "'INTEND'" };
            let _ = writeln!(out, "    M{markers:07}  'MARKER'                 {tag}");
            in_marker = var.integer;
        }
        let col = column_name(j);
        let cost = instance.objective[j];
        if cost != 0.0 || by_col[j].is_empty() {
            entry(&mut out, &col, OBJECTIVE_ROW, cost);
        }
        for &(i, a) in &by_col[j] {
            entry(&mut out, &col, &row_name(i), a);
        }
    }
    if in_marker {
        markers += 1;
        let _ = writeln!(out, "    M{markers:07}  'MARKER'                 'INTEND'");
    }

    out.push_str("RHS\n");
    for (i, row) in instance.constraints.iter().enumerate() {
        if row.rhs != 0.0 {
            entry(&mut out, "RHS", &row_name(i), row.rhs);
        }
    }
    out.push_str("RANGES\n");
    out.push_str("BOUNDS\n");
    for (j, var) in instance.variables.iter().enumerate() {
        let col = column_name(j);
        let (lb, ub) = (var.lb, var.ub);
        if var.integer {
            bound(&mut out, "LO", &col, Some(lb));
            bound(&mut out, "UP", &col, Some(ub));
        } else if lb == ub {
            bound(&mut out, "FX", &col, Some(lb));
        } else if lb == f64::NEG_INFINITY && ub == f64::INFINITY {
            bound(&mut out, "FR", &col, None);
        } else {
            if lb == f64::NEG_INFINITY {
                bound(&mut out, "MI", &col, None);
            } else if lb != 0.0 || ub < 0.0 {
                bound(&mut out, "LO", &col, Some(lb));
            }
            if ub.is_finite() {
                bound(&mut out, "UP", &col, Some(ub));
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

/// Writes `instance` as fixed-format MPS to `path`.
pub fn write_mps(instance: &MilpInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    instance.validate()?;
    fs::write(path, mps_string(instance)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Family, Symbol, VarKey, Variable};

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 12096.0, 1e-12, -2.5e20, 143.36, 110.00000000000001] {
            let s = number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(number(-0.0), "0");
    }

    #[test]
    fn names() {
        assert_eq!(column_name(0), "C0000001");
        assert_eq!(row_name(41), "R0000042");
        assert_eq!(column_from_name("C0000042"), Some(41));
        assert_eq!(column_from_name("C0000000"), None);
        assert_eq!(column_from_name("X0000001"), None);
    }

    #[test]
    fn skeleton() {
        let v = Variable {
            key: VarKey::first_stage(Symbol::Rp, "x"),
            lb: 0.0,
            ub: f64::INFINITY,
            integer: false,
        };
        let mut m = MilpInstance::new("t", vec![v]).unwrap();
        m.add_constraint("r", Family::Install, [(0, 1.0)], Sense::Le, 4.0);
        m.objective[0] = 1.0;
        let text = mps_string(&m);
        let rows: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "ROWS")
            .skip(1)
            .take_while(|l| l.starts_with(' '))
            .collect();
        assert_eq!(rows, vec![" N  OBJ", " L  R0000001"]);
        for section in ["NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"] {
            assert!(text.lines().any(|l| l.starts_with(section)), "{section}");
        }
    }
}
