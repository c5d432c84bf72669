use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::catalog::ResourceId;
use crate::error::{Error, Result};

/// Decision-variable families. Declaration order is the canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Install decision (binary, first stage).
    A,
    /// Rated power (first stage).
    Rp,
    /// Storage capacity (first stage).
    B,
    /// Generator operating power.
    P,
    Pch,
    Pdch,
    Soc,
    /// Generator commitment (binary).
    Kc,
    /// Storage charge/discharge selector (binary).
    Ks,
    /// System input of a resource.
    U,
    /// Surplus output of a resource.
    Yx,
    /// Spinning reserve.
    Sp,
    /// Peak penalty level.
    Xi,
}

impl Symbol {
    pub fn name(self) -> &'static str {
        match self {
            Symbol::A => "a",
            Symbol::Rp => "rp",
            Symbol::B => "b",
            Symbol::P => "p",
            Symbol::Pch => "pch",
            Symbol::Pdch => "pdch",
            Symbol::Soc => "soc",
            Symbol::Kc => "kc",
            Symbol::Ks => "ks",
            Symbol::U => "u",
            Symbol::Yx => "yx",
            Symbol::Sp => "sp",
            Symbol::Xi => "xi",
        }
    }

    pub fn is_first_stage(self) -> bool {
        matches!(self, Symbol::A | Symbol::Rp | Symbol::B)
    }
}

/// Identifies one column by symbol and indices. Year, interval and scenario are
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarKey {
    pub symbol: Symbol,
    pub equip: Option<Arc<str>>,
    pub resource: Option<ResourceId>,
    pub year: Option<usize>,
    pub interval: Option<usize>,
    pub scenario: Option<usize>,
}

impl VarKey {
    pub fn first_stage(symbol: Symbol, equip: &str) -> VarKey {
        VarKey {
            symbol,
            equip: Some(equip.into()),
            resource: None,
            year: None,
            interval: None,
            scenario: None,
        }
    }

    pub fn equip_op(symbol: Symbol, equip: &str, k: usize, t: usize, w: usize) -> VarKey {
        VarKey {
            symbol,
            equip: Some(equip.into()),
            resource: None,
            year: Some(k),
            interval: Some(t),
            scenario: Some(w),
        }
    }

    pub fn resource_op(symbol: Symbol, resource: ResourceId, k: usize, t: usize, w: usize) -> VarKey {
        VarKey {
            symbol,
            equip: None,
            resource: Some(resource),
            year: Some(k),
            interval: Some(t),
            scenario: Some(w),
        }
    }

    pub fn spin(resource: ResourceId, k: usize, w: usize) -> VarKey {
        VarKey {
            symbol: Symbol::Sp,
            equip: None,
            resource: Some(resource),
            year: Some(k),
            interval: None,
            scenario: Some(w),
        }
    }

    pub fn peak(w: usize) -> VarKey {
        VarKey {
            symbol: Symbol::Xi,
            equip: None,
            resource: None,
            year: None,
            interval: None,
            scenario: Some(w),
        }
    }

    pub fn a(equip: &str) -> VarKey {
        VarKey::first_stage(Symbol::A, equip)
    }

    pub fn rp(equip: &str) -> VarKey {
        VarKey::first_stage(Symbol::Rp, equip)
    }

    pub fn b(equip: &str) -> VarKey {
        VarKey::first_stage(Symbol::B, equip)
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.symbol.name())?;
        let mut parts: Vec<String> = Vec::new();
        if let Some(e) = &self.equip {
            parts.push(e.to_string());
        }
        if let Some(r) = self.resource {
            parts.push(r.label().to_string());
        }
        if let Some(k) = self.year {
            parts.push(format!("k{}", k + 1));
        }
        if let Some(t) = self.interval {
            parts.push(format!("t{}", t + 1));
        }
        if let Some(w) = self.scenario {
            parts.push(format!("w{}", w + 1));
        }
        write!(f, "{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub key: VarKey,
    pub lb: f64,
    pub ub: f64,
    pub integer: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Constraint families in canonical row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Install,
    Forced,
    Commitment,
    Storage,
    Balance,
    Peak,
    Emission,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    /// Sorted by column, no duplicates, no zeros.
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row, zero when satisfied.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Column keys and the reverse lookup; shared by an instance and its solutions.
#[derive(Debug, Default)]
pub struct VarIndex {
    keys: Vec<VarKey>,
    map: HashMap<VarKey, usize>,
}

impl VarIndex {
    pub fn new(keys: Vec<VarKey>) -> VarIndex {
        let map = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        VarIndex { keys, map }
    }

    pub fn get(&self, key: &VarKey) -> Option<usize> {
        self.map.get(key).copied()
    }

    pub fn key(&self, column: usize) -> &VarKey {
        &self.keys[column]
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// A solver-agnostic MILP: minimize `objective · x + objective_constant`.
#[derive(Debug, Clone)]
pub struct MilpInstance {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Dense cost vector, one entry per column.
    pub objective: Vec<f64>,
    pub objective_constant: f64,
    index: Arc<VarIndex>,
}

impl MilpInstance {
    /// Creates an instance with no rows; columns are sorted into canonical order.
    pub fn new(name: impl Into<String>, mut variables: Vec<Variable>) -> Result<MilpInstance> {
        variables.sort_by(|a, b| a.key.cmp(&b.key));
        if let Some(w) = variables.windows(2).find(|w| w[0].key == w[1].key) {
            return Err(Error::Invalid(format!("duplicate column {}", w[0].key)));
        }
        let index = Arc::new(VarIndex::new(variables.iter().map(|v| v.key.clone()).collect()));
        Ok(MilpInstance {
            name: name.into(),
            objective: vec![0.0; variables.len()],
            variables,
            constraints: Vec::new(),
            objective_constant: 0.0,
            index,
        })
    }

    pub fn index(&self) -> &Arc<VarIndex> {
        &self.index
    }

    pub fn col(&self, key: &VarKey) -> Option<usize> {
        self.index.get(key)
    }

    /// Column for `key`; panics when the builder forgot to register it.
    pub(crate) fn must(&self, key: &VarKey) -> usize {
        self.index
            .get(key)
            .unwrap_or_else(|| panic!("column {key} is not registered"))
    }

    pub fn num_cols(&self) -> usize {
        self.variables.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_integer(&self) -> usize {
        self.variables.iter().filter(|v| v.integer).count()
    }

    /// Integer columns whose bounds still leave a choice.
    pub fn num_free_integer(&self) -> usize {
        self.variables.iter().filter(|v| v.integer && v.lb < v.ub).count()
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        family: Family,
        terms: impl IntoIterator<Item = (usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) {
        let mut coeffs: Vec<(usize, f64)> = terms.into_iter().collect();
        coeffs.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for (j, a) in coeffs {
            match merged.last_mut() {
                Some((lj, la)) if *lj == j => *la += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.constraints.push(Constraint {
            name: name.into(),
            family,
            coeffs: merged,
            sense,
            rhs,
        });
    }

    pub fn add_cost(&mut self, column: usize, cost: f64) {
        self.objective[column] += cost;
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    pub fn rows_in(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }

    pub fn validate(&self) -> Result<()> {
        for v in &self.variables {
            if v.lb.is_nan() || v.ub.is_nan() || v.lb > v.ub {
                return Err(Error::Bound {
                    column: v.key.to_string(),
                    message: format!("lb {} > ub {}", v.lb, v.ub),
                });
            }
            if v.integer && (v.lb < 0.0 || v.ub > 1.0) {
                return Err(Error::Bound {
                    column: v.key.to_string(),
                    message: "binary column must lie in [0, 1]".into(),
                });
            }
        }
        let n = self.num_cols();
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return Err(Error::Invalid(format!("row {} has non-finite rhs", c.name)));
            }
            for &(j, a) in &c.coeffs {
                if j >= n || !a.is_finite() {
                    return Err(Error::Invalid(format!("row {} references bad column {j}", c.name)));
                }
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) || !self.objective_constant.is_finite() {
            return Err(Error::Invalid("objective has non-finite coefficients".into()));
        }
        Ok(())
    }
}
