//! Dense bounded-variable primal simplex.
//!
//! Every row gets a slack so that `A x + s = b` with slack bounds encoding the row
//! sense; nonbasic columns sit at one of their bounds. Phase one minimises the sum of
//! artificial columns added for rows whose initial slack would be out of bounds.
//! The full tableau `B⁻¹[A I]` is kept dense and refactored from scratch now and then
//! to shed accumulated rounding error.

use crate::model::{MilpInstance, Sense};

const PIVOT_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 400;
const REFACTOR_MAX_ROWS: usize = 1500;
/// Consecutive degenerate pivots before pricing falls back to Bland's rule.
const STALL_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering and leaving columns; never cycles.
    Bland,
    /// Largest reduced cost, switching to Bland's rule while progress stalls.
    DantzigWithBlandFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural column values (meaningful when optimal).
    pub x: Vec<f64>,
    /// `c · x` without the instance constant.
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

/// Row-scaled copy of an instance's LP relaxation, reusable across bound changes.
#[derive(Debug, Clone)]
pub struct LpData {
    m: usize,
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
    cols: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    slack_lb: Vec<f64>,
    slack_ub: Vec<f64>,
    cost: Vec<f64>,
    cost_scale: f64,
    pub rule: PivotRule,
}

impl LpData {
    pub fn from_instance(instance: &MilpInstance) -> LpData {
        let m = instance.num_rows();
        let n = instance.num_cols();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut slack_lb = Vec::with_capacity(m);
        let mut slack_ub = Vec::with_capacity(m);
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, c) in instance.constraints.iter().enumerate() {
            let biggest = c.coeffs.iter().map(|&(_, a)| a.abs()).fold(0.0, f64::max);
            let scale = if biggest > 0.0 { 1.0 / biggest } else { 1.0 };
            let row: Vec<(usize, f64)> = c.coeffs.iter().map(|&(j, a)| (j, a * scale)).collect();
            for &(j, a) in &row {
                cols[j].push((i, a));
            }
            rows.push(row);
            rhs.push(c.rhs * scale);
            let (lo, hi) = match c.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            slack_lb.push(lo);
            slack_ub.push(hi);
        }
        let biggest = instance.objective.iter().map(|c| c.abs()).fold(0.0, f64::max);
        let cost_scale = if biggest > 0.0 { 1.0 / biggest } else { 1.0 };
        LpData {
            m,
            n,
            rows,
            cols,
            rhs,
            slack_lb,
            slack_ub,
            cost: instance.objective.clone(),
            cost_scale,
            rule: PivotRule::DantzigWithBlandFallback,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    /// Solves `min c·x` subject to the rows and the given column bounds.
    pub fn solve(&self, lb: &[f64], ub: &[f64]) -> LpSolution {
        debug_assert_eq!(lb.len(), self.n);
        if lb.iter().zip(ub).any(|(l, u)| l > u) {
            return LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective: f64::INFINITY,
                iterations: 0,
            };
        }
        let mut t = Tableau::new(self, lb, ub);
        let status = t.run();
        let x = t.x[..self.n].to_vec();
        let objective = if status == LpStatus::Optimal {
            self.cost.iter().zip(&x).map(|(c, v)| c * v).sum()
        } else if status == LpStatus::Infeasible {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        LpSolution {
            status,
            x,
            objective,
            iterations: t.iterations,
        }
    }
}

struct Tableau<'a> {
    lp: &'a LpData,
    m: usize,
    width: usize,
    /// Row-major `m × width`.
    tab: Vec<f64>,
    /// Reduced costs of the active phase.
    d: Vec<f64>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    /// (row, sign) of each artificial column, in column order after the slacks.
    artificials: Vec<(usize, f64)>,
    iterations: usize,
    since_refactor: usize,
    stalled: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a LpData, lb: &[f64], ub: &[f64]) -> Tableau<'a> {
        let (m, n) = (lp.m, lp.n);
        let mut lower: Vec<f64> = lb.to_vec();
        let mut upper: Vec<f64> = ub.to_vec();
        lower.extend_from_slice(&lp.slack_lb);
        upper.extend_from_slice(&lp.slack_ub);
        let mut x = vec![0.0; n + m];
        let mut state = vec![State::AtLower; n + m];
        for j in 0..n {
            let (l, u) = (lower[j], upper[j]);
            if l.is_finite() {
                x[j] = l;
                state[j] = State::AtLower;
            } else if u.is_finite() {
                x[j] = u;
                state[j] = State::AtUpper;
            } else {
                x[j] = 0.0;
                state[j] = State::Free;
            }
        }
        let mut residual = lp.rhs.clone();
        for (i, row) in lp.rows.iter().enumerate() {
            residual[i] -= row.iter().map(|&(j, a)| a * x[j]).sum::<f64>();
        }
        let mut artificials = Vec::new();
        let mut basis = vec![0; m];
        for i in 0..m {
            let s = n + i;
            let r = residual[i];
            if r >= lower[s] - PRIMAL_TOL && r <= upper[s] + PRIMAL_TOL {
                basis[i] = s;
                x[s] = r;
                state[s] = State::Basic;
            } else {
                let at = if r < lower[s] { lower[s] } else { upper[s] };
                x[s] = at;
                state[s] = if at == lower[s] { State::AtLower } else { State::AtUpper };
                let sign = if r - at >= 0.0 { 1.0 } else { -1.0 };
                artificials.push((i, sign));
            }
        }
        let width = n + m + artificials.len();
        lower.resize(width, 0.0);
        upper.resize(width, f64::INFINITY);
        x.resize(width, 0.0);
        state.resize(width, State::AtLower);
        let mut sign_of_row = vec![1.0; m];
        for (a, &(i, sign)) in artificials.iter().enumerate() {
            let col = n + m + a;
            basis[i] = col;
            state[col] = State::Basic;
            x[col] = (residual[i] - x[n + i]).abs();
            sign_of_row[i] = sign;
        }
        let mut tab = vec![0.0; m * width];
        for i in 0..m {
            let sign = sign_of_row[i];
            let row = &mut tab[i * width..(i + 1) * width];
            for &(j, a) in &lp.rows[i] {
                row[j] = sign * a;
            }
            row[n + i] = sign;
        }
        for (a, &(i, _)) in artificials.iter().enumerate() {
            tab[i * width + n + m + a] = 1.0;
        }
        let mut cost = vec![0.0; width];
        for a in 0..artificials.len() {
            cost[n + m + a] = 1.0;
        }
        let mut t = Tableau {
            lp,
            m,
            width,
            tab,
            d: Vec::new(),
            cost,
            lower,
            upper,
            x,
            state,
            basis,
            artificials,
            iterations: 0,
            since_refactor: 0,
            stalled: 0,
        };
        t.reprice();
        t
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.tab[i * self.width..(i + 1) * self.width]
    }

    /// Recomputes reduced costs from the current tableau.
    fn reprice(&mut self) {
        let mut d = self.cost.clone();
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.tab[i * self.width..(i + 1) * self.width];
                for (dj, &a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            d[b] = 0.0;
        }
        self.d = d;
    }

    fn run(&mut self) -> LpStatus {
        let limit = 50 * (self.width + self.m) + 1000;
        let n_art = self.artificials.len();
        if n_art > 0 {
            match self.iterate(limit) {
                Some(LpStatus::IterationLimit) => return LpStatus::IterationLimit,
                Some(_) | None => {}
            }
            self.refactor();
            let infeas: f64 = (0..n_art).map(|a| self.x[self.lp.n + self.lp.m + a]).sum();
            let scale = 1.0 + self.lp.rhs.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
            if infeas > 1e-9 * scale {
                return LpStatus::Infeasible;
            }
            let first_art = self.lp.n + self.lp.m;
            for col in first_art..self.width {
                self.upper[col] = 0.0;
                self.cost[col] = 0.0;
                if self.state[col] != State::Basic {
                    self.x[col] = 0.0;
                    self.state[col] = State::AtLower;
                }
            }
            self.drive_out_artificials(first_art);
        }
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        for j in 0..self.lp.n {
            self.cost[j] = self.lp.cost[j] * self.lp.cost_scale;
        }
        self.reprice();
        for _ in 0..3 {
            match self.iterate(limit) {
                Some(status) => return status,
                None => {
                    // optimal on the updated tableau; confirm on a fresh factorization
                    if !self.refactor() || self.is_converged() {
                        return LpStatus::Optimal;
                    }
                }
            }
        }
        LpStatus::Optimal
    }

    fn is_converged(&self) -> bool {
        let primal_ok = self.basis.iter().all(|&b| {
            self.x[b] >= self.lower[b] - 1e-7 * (1.0 + self.lower[b].abs())
                && self.x[b] <= self.upper[b] + 1e-7 * (1.0 + self.upper[b].abs())
        });
        primal_ok && self.price(PivotRule::Bland).is_none()
    }

    fn drive_out_artificials(&mut self, first_art: usize) {
        for r in 0..self.m {
            if self.basis[r] < first_art {
                continue;
            }
            let row = self.row(r);
            let pick = (0..first_art)
                .filter(|&j| self.state[j] != State::Basic)
                .max_by(|&a, &b| row[a].abs().total_cmp(&row[b].abs()));
            if let Some(j) = pick {
                if self.row(r)[j].abs() > 1e-7 {
                    let leaving = self.basis[r];
                    self.pivot(r, j);
                    self.state[leaving] = State::AtLower;
                    self.x[leaving] = 0.0;
                }
            }
        }
    }

    /// Runs simplex steps; `None` means optimal for the current costs.
    fn iterate(&mut self, limit: usize) -> Option<LpStatus> {
        loop {
            if self.iterations >= limit {
                return Some(LpStatus::IterationLimit);
            }
            let rule = match self.lp.rule {
                PivotRule::Bland => PivotRule::Bland,
                PivotRule::DantzigWithBlandFallback if self.stalled >= STALL_LIMIT => PivotRule::Bland,
                rule => rule,
            };
            match self.step(rule) {
                Step::Optimal => return None,
                Step::Unbounded => return Some(LpStatus::Unbounded),
                Step::Moved => {
                    self.iterations += 1;
                    if self.since_refactor >= REFACTOR_EVERY && self.m <= REFACTOR_MAX_ROWS {
                        self.refactor();
                    }
                }
            }
        }
    }

    fn eligible(&self, j: usize) -> Option<f64> {
        let dj = self.d[j];
        match self.state[j] {
            State::Basic => None,
            _ if self.lower[j] == self.upper[j] => None,
            State::AtLower if dj < -DUAL_TOL => Some(1.0),
            State::AtUpper if dj > DUAL_TOL => Some(-1.0),
            State::Free if dj.abs() > DUAL_TOL => Some(if dj < 0.0 { 1.0 } else { -1.0 }),
            _ => None,
        }
    }

    fn price(&self, rule: PivotRule) -> Option<(usize, f64)> {
        match rule {
            PivotRule::Bland => (0..self.width).find_map(|j| self.eligible(j).map(|dir| (j, dir))),
            PivotRule::DantzigWithBlandFallback => {
                let mut best: Option<(usize, f64)> = None;
                let mut best_score = 0.0;
                for j in 0..self.width {
                    if let Some(dir) = self.eligible(j) {
                        let score = self.d[j].abs();
                        if score > best_score {
                            best_score = score;
                            best = Some((j, dir));
                        }
                    }
                }
                best
            }
        }
    }

    fn step(&mut self, rule: PivotRule) -> Step {
        let Some((j, dir)) = self.price(rule) else {
            return Step::Optimal;
        };
        // Ratio test over basic rows; x_B moves by -dir·alpha·theta.
        let mut theta = self.upper[j] - self.lower[j];
        let mut leave: Option<(usize, bool)> = None;
        let mut best_alpha = 0.0;
        for i in 0..self.m {
            let alpha = self.tab[i * self.width + j];
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[i];
            let delta = -dir * alpha;
            let (limit, to_upper) = if delta < 0.0 {
                if !self.lower[b].is_finite() {
                    continue;
                }
                (((self.x[b] - self.lower[b]) / -delta).max(0.0), false)
            } else {
                if !self.upper[b].is_finite() {
                    continue;
                }
                (((self.upper[b] - self.x[b]) / delta).max(0.0), true)
            };
            let better = match leave {
                None => limit < theta,
                Some((r, _)) => {
                    let tie = (limit - theta).abs() <= 1e-12 * (1.0 + theta.abs());
                    if tie {
                        match rule {
                            PivotRule::Bland => b < self.basis[r],
                            _ => alpha.abs() > best_alpha,
                        }
                    } else {
                        limit < theta
                    }
                }
            };
            if better {
                theta = limit;
                leave = Some((i, to_upper));
                best_alpha = alpha.abs();
            }
        }
        if theta.is_infinite() {
            return Step::Unbounded;
        }
        if theta <= 1e-12 {
            self.stalled += 1;
        } else {
            self.stalled = 0;
        }
        // move
        self.x[j] += dir * theta;
        for i in 0..self.m {
            let alpha = self.tab[i * self.width + j];
            if alpha != 0.0 {
                let b = self.basis[i];
                self.x[b] -= dir * alpha * theta;
            }
        }
        match leave {
            None => {
                // bound flip
                if dir > 0.0 {
                    self.x[j] = self.upper[j];
                    self.state[j] = State::AtUpper;
                } else {
                    self.x[j] = self.lower[j];
                    self.state[j] = State::AtLower;
                }
            }
            Some((r, to_upper)) => {
                let leaving = self.basis[r];
                self.pivot(r, j);
                if to_upper {
                    self.x[leaving] = self.upper[leaving];
                    self.state[leaving] = State::AtUpper;
                } else {
                    self.x[leaving] = self.lower[leaving];
                    self.state[leaving] = State::AtLower;
                }
            }
        }
        Step::Moved
    }

    /// Makes column `j` basic in row `r`.
    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.width;
        let inv = 1.0 / self.tab[r * w + j];
        for v in &mut self.tab[r * w..(r + 1) * w] {
            *v *= inv;
        }
        self.tab[r * w + j] = 1.0;
        let (before, rest) = self.tab.split_at_mut(r * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        let nonzero: Vec<usize> = (0..w).filter(|&k| pivot_row[k] != 0.0).collect();
        let eliminate = |row: &mut [f64]| {
            let f = row[j];
            if f != 0.0 {
                for &k in &nonzero {
                    row[k] -= f * pivot_row[k];
                }
                row[j] = 0.0;
            }
        };
        before.chunks_mut(w).for_each(eliminate);
        after.chunks_mut(w).for_each(eliminate);
        let f = self.d[j];
        if f != 0.0 {
            for &k in &nonzero {
                self.d[k] -= f * pivot_row[k];
            }
            self.d[j] = 0.0;
        }
        self.basis[r] = j;
        self.state[j] = State::Basic;
        self.since_refactor += 1;
    }

    /// Original (scaled) column `j` of `[A I art]` as sparse entries.
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        let (n, m) = (self.lp.n, self.lp.m);
        if j < n {
            self.lp.cols[j].clone()
        } else if j < n + m {
            vec![(j - n, 1.0)]
        } else {
            let (i, sign) = self.artificials[j - n - m];
            vec![(i, sign)]
        }
    }

    /// Rebuilds tableau, basic values and reduced costs from the basis. Returns false
    /// when the basis matrix is numerically singular (state left untouched).
    fn refactor(&mut self) -> bool {
        let m = self.m;
        if m == 0 || m > REFACTOR_MAX_ROWS {
            self.since_refactor = 0;
            return m == 0;
        }
        let mut bmat = vec![0.0; m * m];
        for (c, &b) in self.basis.iter().enumerate() {
            for (i, a) in self.column(b) {
                bmat[i * m + c] = a;
            }
        }
        let Some(lu) = Lu::factor(bmat, m) else {
            self.since_refactor = 0;
            return false;
        };
        // Columns of B⁻¹, then B⁻¹A one sparse column at a time.
        let mut inv_cols = vec![0.0; m * m];
        for c in 0..m {
            let col = &mut inv_cols[c * m..(c + 1) * m];
            col[c] = 1.0;
            lu.solve(col);
        }
        let mut tab = vec![0.0; m * self.width];
        for j in 0..self.width {
            if self.state[j] == State::Basic {
                continue;
            }
            for (k, a) in self.column(j) {
                let inv = &inv_cols[k * m..(k + 1) * m];
                for i in 0..m {
                    tab[i * self.width + j] += inv[i] * a;
                }
            }
        }
        for (r, &b) in self.basis.iter().enumerate() {
            tab[r * self.width + b] = 1.0;
        }
        // x_B = B⁻¹ (rhs − N x_N)
        let mut rhs = self.lp.rhs.clone();
        for j in 0..self.width {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                for (i, a) in self.column(j) {
                    rhs[i] -= a * self.x[j];
                }
            }
        }
        lu.solve(&mut rhs);
        for (r, &b) in self.basis.iter().enumerate() {
            self.x[b] = rhs[r];
        }
        self.tab = tab;
        self.reprice();
        self.since_refactor = 0;
        true
    }
}

/// Dense LU with partial pivoting.
struct Lu {
    m: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<f64>, m: usize) -> Option<Lu> {
        let mut perm: Vec<usize> = (0..m).collect();
        for k in 0..m {
            let (p, big) = (k..m)
                .map(|i| (i, a[i * m + k].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))?;
            if big < 1e-12 {
                return None;
            }
            if p != k {
                for c in 0..m {
                    a.swap(k * m + c, p * m + c);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * m + k];
            for i in k + 1..m {
                let f = a[i * m + k] / pivot;
                if f != 0.0 {
                    a[i * m + k] = f;
                    for c in k + 1..m {
                        a[i * m + c] -= f * a[k * m + c];
                    }
                } else {
                    a[i * m + k] = 0.0;
                }
            }
        }
        Some(Lu { m, a, perm })
    }

    fn solve(&self, b: &mut [f64]) {
        let m = self.m;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        // column-oriented substitutions skip the many zero entries of sparse bases
        for c in 0..m {
            let v = y[c];
            if v != 0.0 {
                for i in c + 1..m {
                    y[i] -= self.a[i * m + c] * v;
                }
            }
        }
        for c in (0..m).rev() {
            if y[c] != 0.0 {
                y[c] /= self.a[c * m + c];
                let v = y[c];
                for i in 0..c {
                    y[i] -= self.a[i * m + c] * v;
                }
            }
        }
        b.copy_from_slice(&y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Family, MilpInstance, Symbol, VarKey, Variable};

    fn var(name: &str, lb: f64, ub: f64) -> Variable {
        Variable {
            key: VarKey::first_stage(Symbol::Rp, name),
            lb,
            ub,
            integer: false,
        }
    }

    fn lp(vars: Vec<Variable>, rows: &[(&[(usize, f64)], Sense, f64)], cost: &[f64]) -> MilpInstance {
        let mut m = MilpInstance::new("lp", vars).unwrap();
        for (i, (terms, sense, rhs)) in rows.iter().enumerate() {
            m.add_constraint(format!("r{i}"), Family::Install, terms.iter().copied(), *sense, *rhs);
        }
        m.objective = cost.to_vec();
        m
    }

    fn solve(m: &MilpInstance, rule: PivotRule) -> LpSolution {
        let mut data = LpData::from_instance(m);
        data.rule = rule;
        let lb: Vec<f64> = m.variables.iter().map(|v| v.lb).collect();
        let ub: Vec<f64> = m.variables.iter().map(|v| v.ub).collect();
        data.solve(&lb, &ub)
    }

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let m = lp(
            vec![var("x", 0.0, f64::INFINITY), var("y", 0.0, f64::INFINITY)],
            &[
                (&[(0, 1.0)], Sense::Le, 4.0),
                (&[(1, 2.0)], Sense::Le, 12.0),
                (&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
            &[-3.0, -5.0],
        );
        for rule in [PivotRule::Bland, PivotRule::DantzigWithBlandFallback] {
            let s = solve(&m, rule);
            assert_eq!(s.status, LpStatus::Optimal);
            assert!((s.objective + 36.0).abs() < 1e-9);
            assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn needs_phase_one() {
        // min x + y s.t. x + y >= 2, x - y = 1 -> x = 1.5, y = 0.5
        let m = lp(
            vec![var("x", 0.0, 10.0), var("y", 0.0, 10.0)],
            &[(&[(0, 1.0), (1, 1.0)], Sense::Ge, 2.0), (&[(0, 1.0), (1, -1.0)], Sense::Eq, 1.0)],
            &[1.0, 1.0],
        );
        let s = solve(&m, PivotRule::Bland);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 2.0).abs() < 1e-9);
        assert!((s.x[0] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let m = lp(vec![var("x", 0.0, 1.0)], &[(&[(0, 1.0)], Sense::Ge, 2.0)], &[1.0]);
        assert_eq!(solve(&m, PivotRule::Bland).status, LpStatus::Infeasible);
        let m = lp(vec![var("x", 0.0, f64::INFINITY)], &[(&[(0, 1.0)], Sense::Ge, 2.0)], &[-1.0]);
        assert_eq!(solve(&m, PivotRule::Bland).status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_upper_bounded_columns() {
        // min -x + y with x free, x - y <= 3, y in [-2, 5] -> x = 1, y = -2, obj -3
        let m = lp(
            vec![var("x", f64::NEG_INFINITY, f64::INFINITY), var("y", -2.0, 5.0)],
            &[(&[(0, 1.0), (1, -1.0)], Sense::Le, 3.0)],
            &[-1.0, 1.0],
        );
        let s = solve(&m, PivotRule::DantzigWithBlandFallback);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 3.0).abs() < 1e-9, "{}", s.objective);
    }

    #[test]
    fn lu_round_trip() {
        let a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let lu = Lu::factor(a.clone(), 3).unwrap();
        let mut b = vec![3.0, 2.0, 4.0];
        lu.solve(&mut b);
        for i in 0..3 {
            let lhs: f64 = (0..3).map(|c| a[i * 3 + c] * b[c]).sum();
            assert!((lhs - [3.0, 2.0, 4.0][i]).abs() < 1e-12);
        }
    }
}
