//! N-shareability of bipartite behaviors: symmetric extensions of the
//! second party into `N` clones.
//!
//! The extended scenario has party `0` (the original first party) followed
//! by clones `1..=N` of the original second party.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, DEFAULT_LP_TOL};
use crate::model::{Behavior, Scenario};
use crate::polytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShareMode {
    /// Extensions may signal.
    Unrestricted,
    /// Extensions must be no-signalling.
    Ns,
}

impl std::str::FromStr for ShareMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unrestricted" => Ok(ShareMode::Unrestricted),
            "ns" | "no-signalling" => Ok(ShareMode::Ns),
            _ => Err(Error::InvalidArgument(format!("unknown share mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSpec {
    pub base: Behavior,
    pub clones: usize,
    pub mode: ShareMode,
    pub tol: f64,
}

impl ExtensionSpec {
    pub fn new(base: Behavior, clones: usize, mode: ShareMode) -> Self {
        Self {
            base,
            clones,
            mode,
            tol: DEFAULT_LP_TOL,
        }
    }

    pub fn run(&self) -> Result<Extension> {
        match self.mode {
            ShareMode::Unrestricted => {
                unrestricted_extension(&self.base, self.clones).map(Extension::Feasible)
            }
            ShareMode::Ns => ns_extension(&self.base, self.clones, self.tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionCertificate {
    pub mode: ShareMode,
    pub behavior: Behavior,
    /// Largest change of any entry under a transposition of two clones.
    pub symmetry_residual: f64,
    /// Largest deviation of a `(first party, clone)` marginal from its target.
    pub marginal_residual: f64,
}

impl ExtensionCertificate {
    pub fn clones(&self) -> usize {
        self.behavior.scenario().parties() - 1
    }

    pub fn max_residual(&self) -> f64 {
        self.symmetry_residual.max(self.marginal_residual)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Extension {
    Feasible(ExtensionCertificate),
    /// `score` is the minimized phase-one violation.
    Infeasible {
        score: f64,
    },
}

impl Extension {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Extension::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&ExtensionCertificate> {
        match self {
            Extension::Feasible(c) => Some(c),
            Extension::Infeasible { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareVerdict {
    pub shareable: bool,
    pub score: f64,
}

fn check_base(b: &Behavior, clones: usize) -> Result<Scenario> {
    let sc = b.scenario();
    if sc.parties() != 2 {
        return Err(Error::InvalidArgument(format!(
            "extensions need a 2-party behavior, got {} parties",
            sc.parties()
        )));
    }
    if clones == 0 {
        return Err(Error::InvalidArgument(
            "at least one clone is required".into(),
        ));
    }
    let mut settings = vec![sc.settings()[0]];
    let mut outcomes = vec![sc.outcomes()[0]];
    settings.extend(std::iter::repeat_n(sc.settings()[1], clones));
    outcomes.extend(std::iter::repeat_n(sc.outcomes()[1], clones));
    Scenario::new(settings, outcomes)
}

/// Delta construction: every clone reports the same outcome, drawn from the
/// base at the smallest clone setting,
/// `P(a, b_1..b_N | A, B_1..B_N) = P(a, b_1 | A, min_k B_k) prod_i delta(b_1, b_i)`.
///
/// The result signals in general. Its `(a, b_i)` marginal is the base
/// evaluated at `min_k B_k`, which is the base itself whenever all clones
/// share a setting.
pub fn unrestricted_extension(b: &Behavior, clones: usize) -> Result<ExtensionCertificate> {
    let ext = check_base(b, clones)?;
    let table = Behavior::from_fn(ext, |ctx, out| {
        let y = *ctx[1..].iter().min().expect("at least one clone");
        if out[1..].iter().all(|&o| o == out[1]) {
            b.prob(&[ctx[0], y], &[out[0], out[1]])
        } else {
            0.0
        }
    });
    Ok(certify(b, table, ShareMode::Unrestricted))
}

/// LP feasibility over the raw extended table: positivity, normalization,
/// no-signalling, clone symmetry, and the `(a, b_1)` marginal fixed to `b`.
pub fn ns_extension(b: &Behavior, clones: usize, tol: f64) -> Result<Extension> {
    let ext = check_base(b, clones)?;
    let ns = b.no_signalling_report(1e-9_f64.max(tol));
    if !ns.is_no_signalling {
        return Err(Error::InvalidArgument(format!(
            "base behavior signals (violation {:e})",
            ns.max_violation
        )));
    }
    let mut prog = polytope::ns_program(&ext, 0);
    for (row, rhs) in symmetry_rows(&ext) {
        prog.equality(row, rhs);
    }
    for (row, rhs) in marginal_rows(b, &ext) {
        prog.equality(row, rhs);
    }
    extension_from_lp(b, &ext, &prog, tol)
}

fn extension_from_lp(
    b: &Behavior,
    ext: &Scenario,
    prog: &LinearProgram,
    tol: f64,
) -> Result<Extension> {
    let out = lp::solve(prog, tol)?;
    match out.status {
        LpStatus::Optimal => {
            let behavior = polytope::behavior_from_solution(ext, &out.solution);
            Ok(Extension::Feasible(certify(b, behavior, ShareMode::Ns)))
        }
        LpStatus::Infeasible => Ok(Extension::Infeasible {
            score: out.phase_one_violation,
        }),
        LpStatus::Unbounded => Err(Error::Numerical {
            phase: 2,
            iterations: out.iterations,
            detail: "feasibility program reported unbounded".into(),
        }),
    }
}

/// Thin wrapper: `score` is zero when an extension exists.
pub fn is_n_shareable(
    b: &Behavior,
    clones: usize,
    mode: ShareMode,
    tol: f64,
) -> Result<ShareVerdict> {
    let spec = ExtensionSpec {
        base: b.clone(),
        clones,
        mode,
        tol,
    };
    Ok(match spec.run()? {
        Extension::Feasible(_) => ShareVerdict {
            shareable: true,
            score: 0.0,
        },
        Extension::Infeasible { score } => ShareVerdict {
            shareable: false,
            score,
        },
    })
}

/// Recomputes residuals of `ext` against `base`, checking every clone.
pub fn certify(base: &Behavior, ext: Behavior, mode: ShareMode) -> ExtensionCertificate {
    let symmetry_residual = symmetry_residual(&ext);
    let marginal_residual = marginal_residual(base, &ext, mode);
    ExtensionCertificate {
        mode,
        behavior: ext,
        symmetry_residual,
        marginal_residual,
    }
}

/// Drops the last clone (its setting held at `0`), giving an extension with
/// one clone fewer.
pub fn drop_last_clone(
    base: &Behavior,
    cert: &ExtensionCertificate,
) -> Result<ExtensionCertificate> {
    let n = cert.behavior.scenario().parties();
    if n < 3 {
        return Err(Error::InvalidArgument(
            "certificate has a single clone".into(),
        ));
    }
    let keep: Vec<usize> = (0..n - 1).collect();
    let m = cert.behavior.marginal(&keep, &vec![0; n])?;
    Ok(certify(base, m.behavior, cert.mode))
}

/// Index of the entry with clones `i` and `j` exchanged.
fn swapped_index(sc: &Scenario, ctx: &mut [usize], out: &mut [usize], i: usize, j: usize) -> usize {
    ctx.swap(i, j);
    out.swap(i, j);
    let idx = sc.index(ctx, out);
    ctx.swap(i, j);
    out.swap(i, j);
    idx
}

fn symmetry_residual(ext: &Behavior) -> f64 {
    let sc = ext.scenario();
    let n = sc.parties();
    let t = ext.table();
    let mut worst: f64 = 0.0;
    for c in 0..sc.num_contexts() {
        let mut ctx = sc.context(c);
        for o in 0..sc.num_outcome_vectors() {
            let mut out = sc.outcome_vector(o);
            let here = t[sc.index(&ctx, &out)];
            for i in 1..n {
                for j in i + 1..n {
                    let there = t[swapped_index(sc, &mut ctx, &mut out, i, j)];
                    worst = worst.max((here - there).abs());
                }
            }
        }
    }
    worst
}

fn marginal_residual(base: &Behavior, ext: &Behavior, mode: ShareMode) -> f64 {
    let sc = ext.scenario();
    let n = sc.parties();
    let (oa, ob) = (base.scenario().outcomes()[0], base.scenario().outcomes()[1]);
    let mut worst: f64 = 0.0;
    let outs: Vec<Vec<usize>> = (0..sc.num_outcome_vectors())
        .map(|o| sc.outcome_vector(o))
        .collect();
    for c in 0..sc.num_contexts() {
        let ctx = sc.context(c);
        let row = ext.context_slice(c);
        for i in 1..n {
            let mut acc = vec![0.0; oa * ob];
            for (out, &p) in outs.iter().zip(row) {
                acc[out[0] * ob + out[i]] += p;
            }
            let y = match mode {
                ShareMode::Ns => ctx[i],
                ShareMode::Unrestricted => *ctx[1..].iter().min().expect("clones"),
            };
            for a in 0..oa {
                for bo in 0..ob {
                    let target = base.prob(&[ctx[0], y], &[a, bo]);
                    worst = worst.max((acc[a * ob + bo] - target).abs());
                }
            }
        }
    }
    worst
}

/// `P(x) = P(tau x)` for adjacent clone transpositions, one row per orbit
/// pair.
fn symmetry_rows(sc: &Scenario) -> Vec<(Vec<f64>, f64)> {
    let n = sc.parties();
    let mut rows = Vec::new();
    for c in 0..sc.num_contexts() {
        let mut ctx = sc.context(c);
        for o in 0..sc.num_outcome_vectors() {
            let mut out = sc.outcome_vector(o);
            let here = sc.index(&ctx, &out);
            for i in 1..n - 1 {
                let there = swapped_index(sc, &mut ctx, &mut out, i, i + 1);
                if here < there {
                    let mut row = vec![0.0; sc.table_len()];
                    row[here] = 1.0;
                    row[there] = -1.0;
                    rows.push((row, 0.0));
                }
            }
        }
    }
    rows
}

/// `sum_{b_2..b_N} P(a, b_1, .. | A, B_1, 0, .., 0) = P(a, b_1 | A, B_1)`.
fn marginal_rows(base: &Behavior, sc: &Scenario) -> Vec<(Vec<f64>, f64)> {
    let n = sc.parties();
    let bs = base.scenario();
    let mut rows = Vec::new();
    for x in 0..bs.settings()[0] {
        for y in 0..bs.settings()[1] {
            let mut ctx = vec![0; n];
            ctx[0] = x;
            ctx[1] = y;
            let c = sc.context_index(&ctx);
            for a in 0..bs.outcomes()[0] {
                for b in 0..bs.outcomes()[1] {
                    let mut row = vec![0.0; sc.table_len()];
                    for o in 0..sc.num_outcome_vectors() {
                        let out = sc.outcome_vector(o);
                        if out[0] == a && out[1] == b {
                            row[c * sc.num_outcome_vectors() + o] = 1.0;
                        }
                    }
                    rows.push((row, base.prob(&[x, y], &[a, b])));
                }
            }
        }
    }
    rows
}
