//! Local polytope: deterministic strategies, local hidden-variable
//! decompositions, and local bounds of Bell functionals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::lp::{self, LinearProgram, LpStatus};
use crate::model::{Behavior, Scenario};

/// Enumeration refuses scenarios with more deterministic strategies.
pub const STRATEGY_CAP: usize = 1_000_000;

/// `responses[party][setting]` is the outcome the party reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub responses: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    pub fn to_behavior(&self, sc: &Scenario) -> Behavior {
        Behavior::from_fn(sc.clone(), |ctx, out| {
            let hit = ctx
                .iter()
                .zip(out)
                .enumerate()
                .all(|(p, (&s, &o))| self.responses[p][s] == o);
            if hit {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Number of deterministic strategies, `prod_j outcomes_j ^ settings_j`.
pub fn strategy_count(sc: &Scenario) -> Result<usize> {
    let mut total = 1usize;
    for (&s, &o) in sc.settings().iter().zip(sc.outcomes()) {
        let per = u32::try_from(s)
            .ok()
            .and_then(|s| o.checked_pow(s))
            .unwrap_or(usize::MAX);
        total = total.saturating_mul(per);
    }
    if total > STRATEGY_CAP {
        return Err(Error::SizeCap {
            size: total,
            cap: STRATEGY_CAP,
        });
    }
    Ok(total)
}

/// All deterministic strategies in a fixed order: party 0 is the most
/// significant digit, and within a party setting 0 is.
pub fn strategies(sc: &Scenario) -> Result<Vec<DeterministicStrategy>> {
    let count = strategy_count(sc)?;
    let mut out = Vec::with_capacity(count);
    for mut idx in 0..count {
        let mut responses: Vec<Vec<usize>> = sc.settings().iter().map(|&s| vec![0; s]).collect();
        for (p, resp) in responses.iter_mut().enumerate().rev() {
            for r in resp.iter_mut().rev() {
                *r = idx % sc.outcomes()[p];
                idx /= sc.outcomes()[p];
            }
        }
        out.push(DeterministicStrategy { responses });
    }
    Ok(out)
}

pub fn deterministic_behaviors(sc: &Scenario) -> Result<Vec<Behavior>> {
    Ok(strategies(sc)?.iter().map(|s| s.to_behavior(sc)).collect())
}

/// Weights over deterministic strategies; only strategies with positive
/// weight are kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalModel {
    pub strategies: Vec<DeterministicStrategy>,
    pub weights: Vec<f64>,
}

impl LocalModel {
    pub fn reconstruct(&self, sc: &Scenario) -> Behavior {
        let mut table = vec![0.0; sc.table_len()];
        for (s, &w) in self.strategies.iter().zip(&self.weights) {
            for (t, v) in table.iter_mut().zip(s.to_behavior(sc).table()) {
                *t += w * v;
            }
        }
        Behavior::new(sc.clone(), table).expect("table length matches")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Locality {
    Local(LocalModel),
    /// `score` is the minimized L1 violation of the decomposition equations.
    NotLocal {
        score: f64,
    },
}

impl Locality {
    pub fn is_local(&self) -> bool {
        matches!(self, Locality::Local(_))
    }
}

/// Searches weights `p(lambda) >= 0` with `sum p(lambda) D_lambda = b`.
pub fn local_decomposition(b: &Behavior, tol: f64) -> Result<Locality> {
    let sc = b.scenario();
    let strats = strategies(sc)?;
    let verts: Vec<Behavior> = strats.iter().map(|s| s.to_behavior(sc)).collect();
    let mut prog = LinearProgram::new(strats.len());
    for (e, &target) in b.table().iter().enumerate() {
        let row = verts.iter().map(|v| v.table()[e]).collect();
        prog.equality(row, target);
    }
    let out = lp::solve(&prog, tol)?;
    match out.status {
        LpStatus::Optimal => {
            let (strategies, weights) = strats
                .into_iter()
                .zip(out.solution)
                .filter(|(_, w)| *w > 0.0)
                .unzip();
            Ok(Locality::Local(LocalModel {
                strategies,
                weights,
            }))
        }
        LpStatus::Infeasible => Ok(Locality::NotLocal {
            score: out.phase_one_violation,
        }),
        LpStatus::Unbounded => Err(Error::Numerical {
            phase: 2,
            iterations: out.iterations,
            detail: "feasibility program reported unbounded".into(),
        }),
    }
}

/// Maximum of `f` over the deterministic strategies of `sc`.
pub fn local_bound(f: &BellFunctional, sc: &Scenario) -> Result<f64> {
    let (x, y) = f.settings();
    if sc.settings() != [x, y] || !sc.is_dichotomic() {
        return Err(Error::InvalidArgument(format!(
            "{} functional does not fit scenario {:?}",
            f.name, sc
        )));
    }
    let strats = strategies(sc)?;
    let sign = |o: usize| if o == 0 { 1.0 } else { -1.0 };
    let best = strats
        .iter()
        .map(|s| {
            let a: Vec<f64> = s.responses[0].iter().map(|&o| sign(o)).collect();
            let b: Vec<f64> = s.responses[1].iter().map(|&o| sign(o)).collect();
            let corr: Vec<Vec<f64>> = a
                .iter()
                .map(|ai| b.iter().map(|bj| ai * bj).collect())
                .collect();
            f.evaluate_expectations(&corr, &a, &b)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best)
}
