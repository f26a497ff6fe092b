//! Dense two-phase primal simplex.
//!
//! Programs are stated as `maximize c.x` subject to equality rows, `<=` rows
//! and per-variable bounds (default `x >= 0`). Internally every variable is
//! shifted or split to be nonnegative, inequalities receive slacks, and rows
//! with a negative right-hand side are negated. Phase one minimizes the sum
//! of artificial variables; artificial columns are never stored, an
//! artificial that leaves the basis is dropped for good.
//!
//! Pricing is Dantzig's largest-coefficient rule; after a run of degenerate
//! pivots the solver falls back to Bland's smallest-index rule until the
//! objective moves again. Phase two runs on a slightly perturbed right-hand
//! side to break the heavy degeneracy of polytope programs; the unperturbed
//! right-hand side is carried along and the solution is read from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Phase-one threshold above which a program is declared infeasible.
pub const DEFAULT_LP_TOL: f64 = 1e-7;

const PIVOT_TOL: f64 = 1e-9;
const PRICE_TOL: f64 = 1e-10;
const DROP_TOL: f64 = 1e-14;
/// Scale of the phase-two right-hand-side perturbation.
const PERTURBATION: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    /// Maximized.
    pub objective: Vec<f64>,
    pub equalities: Vec<(Vec<f64>, f64)>,
    /// `a.x <= rhs`.
    pub inequalities: Vec<(Vec<f64>, f64)>,
    /// `(lower, upper)`, either may be infinite.
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// `variables` nonnegative variables, zero objective, no rows.
    pub fn new(variables: usize) -> Self {
        Self {
            objective: vec![0.0; variables],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); variables],
        }
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn maximize(&mut self, objective: Vec<f64>) -> &mut Self {
        self.objective = objective;
        self
    }

    pub fn equality(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.equalities.push((row, rhs));
        self
    }

    pub fn inequality(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.inequalities.push((row, rhs));
        self
    }

    pub fn bound(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.bounds[var] = (lower, upper);
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bound(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.variables();
        if self.bounds.len() != n {
            return Err(Error::MalformedProgram(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedProgram("non-finite objective".into()));
        }
        let rows = self.equalities.iter().chain(&self.inequalities);
        for (i, (row, rhs)) in rows.enumerate() {
            if row.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "row {i} has {} coefficients for {n} variables",
                    row.len()
                )));
            }
            if !rhs.is_finite() || row.iter().any(|v| !v.is_finite()) {
                return Err(Error::MalformedProgram(format!("row {i} is not finite")));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan()
                || hi.is_nan()
                || lo > hi
                || lo == f64::INFINITY
                || hi == f64::NEG_INFINITY
            {
                return Err(Error::MalformedProgram(format!(
                    "variable {j} has bounds ({lo}, {hi})"
                )));
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let eq = self
            .equalities
            .iter()
            .map(|(r, b)| (dot(r) - b).abs())
            .fold(0.0, f64::max);
        let ineq = self
            .inequalities
            .iter()
            .map(|(r, b)| (dot(r) - b).max(0.0))
            .fold(0.0, f64::max);
        let bnd = self
            .bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &v)| (lo - v).max(v - hi).max(0.0))
            .fold(0.0, f64::max);
        eq.max(ineq).max(bnd)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal point; the phase-one end point when infeasible.
    pub solution: Vec<f64>,
    pub objective: f64,
    pub max_residual: f64,
    /// Minimized sum of artificial variables (total row violation).
    pub phase_one_violation: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tableau_dump: Option<String>,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: Option<usize>,
    /// Consecutive degenerate pivots tolerated before switching to Bland.
    pub degenerate_limit: usize,
    pub dump_tableau: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_LP_TOL,
            max_iterations: None,
            degenerate_limit: 50,
            dump_tableau: false,
        }
    }
}

pub fn solve(lp: &LinearProgram, tol: f64) -> Result<LpOutcome> {
    solve_with(
        lp,
        &SolverOptions {
            tol,
            ..Default::default()
        },
    )
}

/// Phase one only: a feasible point, or `Infeasible` with the minimized
/// total violation.
pub fn feasibility(
    equalities: Vec<(Vec<f64>, f64)>,
    inequalities: Vec<(Vec<f64>, f64)>,
    bounds: Vec<(f64, f64)>,
    tol: f64,
) -> Result<LpOutcome> {
    let lp = LinearProgram {
        objective: vec![0.0; bounds.len()],
        equalities,
        inequalities,
        bounds,
    };
    solve(&lp, tol)
}

pub fn solve_with(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpOutcome> {
    lp.check()?;
    let std = StandardForm::build(lp);
    let mut tab = Tableau::new(&std);
    let max_iter = opts
        .max_iterations
        .unwrap_or(20_000 + 50 * (tab.rows.len() + tab.ncols));

    tab.set_phase_one_costs();
    let phase_one_end = tab.iterate(1, max_iter, opts.degenerate_limit, false)?;
    debug_assert_ne!(phase_one_end, PhaseEnd::Unbounded);
    let violation = tab.objective_value().max(0.0);
    if violation > opts.tol {
        let x = std.recover(&tab.primal());
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            objective: lp.objective_value(&x),
            max_residual: lp.residual(&x),
            solution: x,
            phase_one_violation: violation,
            iterations: tab.iterations,
            tableau_dump: opts.dump_tableau.then(|| tab.dump()),
        });
    }
    tab.drive_out_artificials();
    tab.perturb();
    tab.set_costs(&std.cost);
    let end = tab.iterate(2, max_iter, opts.degenerate_limit, true)?;
    let x = std.recover(&tab.primal());
    let residual = lp.residual(&x);
    if end == PhaseEnd::Optimal && residual > (1e3 * opts.tol).max(1e-6) {
        return Err(Error::Numerical {
            phase: 2,
            iterations: tab.iterations,
            detail: format!("optimal basis violates constraints by {residual:e}"),
        });
    }
    Ok(LpOutcome {
        status: match end {
            PhaseEnd::Optimal => LpStatus::Optimal,
            PhaseEnd::Unbounded => LpStatus::Unbounded,
        },
        objective: lp.objective_value(&x),
        max_residual: residual,
        solution: x,
        phase_one_violation: violation,
        iterations: tab.iterations,
        tableau_dump: opts.dump_tableau.then(|| tab.dump()),
    })
}

/// How an original variable is expressed in nonnegative internal columns.
#[derive(Clone, Copy, Debug)]
enum VarMap {
    /// `x = offset + y[col]`
    Shift { col: usize, offset: f64 },
    /// `x = offset - y[col]`
    Mirror { col: usize, offset: f64 },
    /// `x = y[col] - y[col + 1]`
    Split { col: usize },
}

struct StandardForm {
    maps: Vec<VarMap>,
    /// Internal columns: structural then slacks.
    ncols: usize,
    /// Minimized.
    cost: Vec<f64>,
    /// Rows over internal columns with nonnegative rhs, and the initial basic
    /// column if a +1 slack is available.
    rows: Vec<(Vec<f64>, f64, Option<usize>)>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut maps = Vec::with_capacity(lp.variables());
        let mut nstruct = 0;
        let mut upper_rows = Vec::new();
        for &(lo, hi) in &lp.bounds {
            let map = if lo.is_finite() {
                if hi.is_finite() {
                    upper_rows.push((nstruct, hi - lo));
                }
                VarMap::Shift {
                    col: nstruct,
                    offset: lo,
                }
            } else if hi.is_finite() {
                VarMap::Mirror {
                    col: nstruct,
                    offset: hi,
                }
            } else {
                nstruct += 1;
                VarMap::Split { col: nstruct - 1 }
            };
            nstruct += 1;
            maps.push(map);
        }
        let nslack = lp.inequalities.len() + upper_rows.len();
        let ncols = nstruct + nslack;

        let lower = |row: &[f64], rhs: f64| -> (Vec<f64>, f64) {
            let mut out = vec![0.0; ncols];
            let mut rhs = rhs;
            for (&a, map) in row.iter().zip(&maps) {
                if a == 0.0 {
                    continue;
                }
                match *map {
                    VarMap::Shift { col, offset } => {
                        out[col] += a;
                        rhs -= a * offset;
                    }
                    VarMap::Mirror { col, offset } => {
                        out[col] -= a;
                        rhs -= a * offset;
                    }
                    VarMap::Split { col } => {
                        out[col] += a;
                        out[col + 1] -= a;
                    }
                }
            }
            (out, rhs)
        };

        let mut rows = Vec::new();
        for (row, rhs) in &lp.equalities {
            let (mut r, mut b) = lower(row, *rhs);
            if b < 0.0 {
                r.iter_mut().for_each(|v| *v = -*v);
                b = -b;
            }
            rows.push((r, b, None));
        }
        let mut slack = nstruct;
        let ineqs = lp
            .inequalities
            .iter()
            .map(|(r, b)| lower(r, *b))
            .chain(upper_rows.iter().map(|&(col, width)| {
                let mut r = vec![0.0; ncols];
                r[col] = 1.0;
                (r, width)
            }));
        for (mut r, mut b) in ineqs {
            r[slack] = 1.0;
            let basic = if b < 0.0 {
                r.iter_mut().for_each(|v| *v = -*v);
                b = -b;
                None
            } else {
                Some(slack)
            };
            rows.push((r, b, basic));
            slack += 1;
        }

        let mut cost = vec![0.0; ncols];
        for (&c, map) in lp.objective.iter().zip(&maps) {
            match *map {
                VarMap::Shift { col, .. } => cost[col] -= c,
                VarMap::Mirror { col, .. } => cost[col] += c,
                VarMap::Split { col } => {
                    cost[col] -= c;
                    cost[col + 1] += c;
                }
            }
        }
        Self {
            maps,
            ncols,
            cost,
            rows,
        }
    }

    fn recover(&self, y: &[f64]) -> Vec<f64> {
        self.maps
            .iter()
            .map(|m| match *m {
                VarMap::Shift { col, offset } => offset + y[col],
                VarMap::Mirror { col, offset } => offset - y[col],
                VarMap::Split { col } => y[col] - y[col + 1],
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Basic {
    Column(usize),
    /// Artificial variable of the given original row.
    Artificial(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Each row holds `ncols` coefficients followed by the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<Basic>,
    /// Reduced costs followed by minus the objective value.
    cost: Vec<f64>,
    ncols: usize,
    iterations: usize,
}

impl Tableau {
    fn new(std: &StandardForm) -> Self {
        let mut rows = Vec::with_capacity(std.rows.len());
        let mut basis = Vec::with_capacity(std.rows.len());
        for (i, (r, b, basic)) in std.rows.iter().enumerate() {
            let mut row = r.clone();
            row.push(*b);
            row.push(*b);
            rows.push(row);
            basis.push(match basic {
                Some(c) => Basic::Column(*c),
                None => Basic::Artificial(i),
            });
        }
        Self {
            rows,
            basis,
            cost: vec![0.0; std.ncols + 2],
            ncols: std.ncols,
            iterations: 0,
        }
    }

    fn set_phase_one_costs(&mut self) {
        self.cost.iter_mut().for_each(|v| *v = 0.0);
        for (row, b) in self.rows.iter().zip(&self.basis) {
            if let Basic::Artificial(_) = b {
                for (c, v) in self.cost.iter_mut().zip(row) {
                    *c -= v;
                }
            }
        }
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.cost[..self.ncols].copy_from_slice(cost);
        self.cost[self.ncols] = 0.0;
        self.cost[self.ncols + 1] = 0.0;
        for (row, b) in self.rows.iter().zip(&self.basis) {
            let Basic::Column(j) = *b else {
                unreachable!("artificials were driven out before phase two")
            };
            let cb = cost[j];
            if cb != 0.0 {
                for (c, v) in self.cost.iter_mut().zip(row) {
                    *c -= cb * v;
                }
            }
        }
    }

    fn objective_value(&self) -> f64 {
        -self.cost[self.ncols]
    }

    fn primal(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.ncols];
        for (row, b) in self.rows.iter().zip(&self.basis) {
            if let Basic::Column(j) = *b {
                y[j] = row[self.ncols].max(0.0);
            }
        }
        y
    }

    /// Ordering key for Bland's rule; artificials rank first.
    fn bland_key(b: Basic) -> (u8, usize) {
        match b {
            Basic::Artificial(i) => (0, i),
            Basic::Column(j) => (1, j),
        }
    }

    fn iterate(
        &mut self,
        phase: u8,
        max_iter: usize,
        degenerate_limit: usize,
        allow_unbounded: bool,
    ) -> Result<PhaseEnd> {
        let n = self.ncols;
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= degenerate_limit;
            let entering = if bland {
                (0..n).find(|&j| self.cost[j] < -PRICE_TOL)
            } else {
                let mut best = None;
                let mut best_val = -PRICE_TOL;
                for j in 0..n {
                    if self.cost[j] < best_val {
                        best_val = self.cost[j];
                        best = Some(j);
                    }
                }
                best
            };
            let Some(col) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut leave: Option<(usize, f64, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[col];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = row[n + 1].max(0.0) / a;
                match leave {
                    None => leave = Some((i, ratio, a)),
                    Some((li, lr, la)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr);
                        let better = if tie {
                            if bland {
                                Self::bland_key(self.basis[i]) < Self::bland_key(self.basis[li])
                            } else {
                                a > la
                            }
                        } else {
                            ratio < lr
                        };
                        if better {
                            leave = Some((i, ratio, a));
                        }
                    }
                }
            }
            let Some((row, ratio, _)) = leave else {
                if allow_unbounded {
                    return Ok(PhaseEnd::Unbounded);
                }
                return Err(Error::Numerical {
                    phase,
                    iterations: self.iterations,
                    detail: format!("phase-one column {col} has no pivot row"),
                });
            };

            self.pivot(row, col)?;
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.iterations += 1;
            if self.iterations > max_iter {
                return Err(Error::Numerical {
                    phase,
                    iterations: self.iterations,
                    detail: "iteration limit reached".into(),
                });
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        let n = self.ncols;
        let p = self.rows[r][c];
        if !p.is_finite() || p.abs() < 1e-300 {
            return Err(Error::Numerical {
                phase: 0,
                iterations: self.iterations,
                detail: format!("pivot element {p:e} at ({r}, {c})"),
            });
        }
        {
            let prow = &mut self.rows[r];
            for v in prow.iter_mut() {
                *v /= p;
            }
            prow[c] = 1.0;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..n + 2).filter(|&j| prow[j] != 0.0).collect();
        let eliminate = |target: &mut Vec<f64>| {
            let f = target[c];
            if f == 0.0 {
                return;
            }
            for &j in &nz {
                let v = target[j] - f * prow[j];
                target[j] = if v.abs() < DROP_TOL { 0.0 } else { v };
            }
            target[c] = 0.0;
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        if !self.cost[n].is_finite() {
            return Err(Error::Numerical {
                phase: 0,
                iterations: self.iterations,
                detail: "objective became non-finite".into(),
            });
        }
        self.rows[r] = prow;
        self.basis[r] = Basic::Column(c);
        Ok(())
    }

    /// Pivots remaining zero-level artificials out of the basis, deleting
    /// rows that are linear combinations of the others.
    fn drive_out_artificials(&mut self) {
        let n = self.ncols;
        let mut i = 0;
        while i < self.rows.len() {
            if let Basic::Artificial(_) = self.basis[i] {
                self.rows[i][n] = 0.0;
                self.rows[i][n + 1] = 0.0;
                let best = (0..n)
                    .map(|j| (j, self.rows[i][j].abs()))
                    .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                if best.1 > PIVOT_TOL {
                    // degenerate: the pivot row's rhs is zero
                    self.pivot(i, best.0).expect("finite nonzero pivot");
                } else {
                    self.rows.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    /// Adds small distinct positive amounts to the working right-hand side.
    fn perturb(&mut self) {
        let n = self.ncols;
        for (i, row) in self.rows.iter_mut().enumerate() {
            let spread = (i.wrapping_mul(2_654_435_761) % 1024) as f64 / 1024.0;
            row[n + 1] = row[n] + PERTURBATION * (1.0 + spread) * (1.0 + row[n].abs());
        }
    }

    fn dump(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "rows {} cols {} pivots {}",
            self.rows.len(),
            self.ncols,
            self.iterations
        );
        for (row, b) in self.rows.iter().zip(&self.basis) {
            let name = match b {
                Basic::Column(j) => format!("y{j}"),
                Basic::Artificial(i) => format!("art{i}"),
            };
            let _ = write!(s, "{name:>8} |");
            for v in row {
                let _ = write!(s, " {v:>10.4}");
            }
            let _ = writeln!(s);
        }
        let _ = write!(s, "{:>8} |", "cost");
        for v in &self.cost {
            let _ = write!(s, " {v:>10.4}");
        }
        let _ = writeln!(s);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![1.0]).inequality(vec![1.0], 3.0);
        let out = solve(&lp, DEFAULT_LP_TOL).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_upper_is_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.inequality(vec![1.0], -1.0);
        let out = solve(&lp, DEFAULT_LP_TOL).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!((out.phase_one_violation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![1.0]);
        assert_eq!(
            solve(&lp, DEFAULT_LP_TOL).unwrap().status,
            LpStatus::Unbounded
        );
    }

    #[test]
    fn simplex_feasibility() {
        let out = feasibility(
            vec![(vec![1.0; 4], 1.0)],
            vec![],
            vec![(0.0, f64::INFINITY); 4],
            DEFAULT_LP_TOL,
        )
        .unwrap();
        assert!(out.is_optimal());
        assert!((out.solution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(out.solution.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn contradictory_sums() {
        let out = feasibility(
            vec![(vec![1.0; 3], 1.0), (vec![1.0; 3], 2.0)],
            vec![],
            vec![(0.0, f64::INFINITY); 3],
            DEFAULT_LP_TOL,
        )
        .unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(out.phase_one_violation >= 1.0 - 1e-12);
    }

    #[test]
    fn empty_program_sits_at_lower_bounds() {
        let out = feasibility(vec![], vec![], vec![(0.0, 5.0), (-2.0, 1.0)], 1e-7).unwrap();
        assert!(out.is_optimal());
        assert_eq!(out.solution, vec![0.0, -2.0]);
    }

    #[test]
    fn bounds_and_free_variables() {
        // max x + y - z, x in [1,2], y <= 4 free below, z free, x + y + z = 3, z >= -10 via row
        let mut lp = LinearProgram::new(3);
        lp.maximize(vec![1.0, 1.0, -1.0])
            .bound(0, 1.0, 2.0)
            .bound(1, f64::NEG_INFINITY, 4.0)
            .free(2)
            .equality(vec![1.0, 1.0, 1.0], 3.0)
            .inequality(vec![0.0, 0.0, -1.0], 10.0);
        let out = solve(&lp, 1e-9).unwrap();
        assert!(out.is_optimal());
        // z = -10 pushes x + y = 13 but y <= 4, x <= 2 caps x + y = 6, so z = -3
        assert!((out.objective - 9.0).abs() < 1e-9, "{out:?}");
        assert!(out.max_residual < 1e-9);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(3);
        lp.maximize(vec![1.0, 2.0, 3.0])
            .equality(vec![1.0, 1.0, 1.0], 1.0)
            .equality(vec![2.0, 2.0, 2.0], 2.0)
            .equality(vec![1.0, 0.0, 0.0], 0.25);
        let out = solve(&lp, 1e-9).unwrap();
        assert!(out.is_optimal());
        assert!((out.objective - (0.25 + 0.75 * 3.0)).abs() < 1e-12);
    }

    #[test]
    fn malformed_rows_rejected() {
        let mut lp = LinearProgram::new(2);
        lp.equality(vec![1.0], 1.0);
        assert!(matches!(solve(&lp, 1e-7), Err(Error::MalformedProgram(_))));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example under the largest-coefficient rule
        let mut lp = LinearProgram::new(4);
        lp.maximize(vec![0.75, -150.0, 0.02, -6.0])
            .inequality(vec![0.25, -60.0, -0.04, 9.0], 0.0)
            .inequality(vec![0.5, -90.0, -0.02, 3.0], 0.0)
            .inequality(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        let out = solve_with(
            &lp,
            &SolverOptions {
                tol: 1e-9,
                degenerate_limit: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(out.is_optimal());
        assert!((out.objective - 0.05).abs() < 1e-9);
    }

    #[test]
    fn dump_is_available() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 1.0]).inequality(vec![1.0, 2.0], 4.0);
        let out = solve_with(
            &lp,
            &SolverOptions {
                dump_tableau: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(out.tableau_dump.unwrap().contains("cost"));
    }
}
