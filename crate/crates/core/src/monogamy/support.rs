//! Support functions of the `(B_ab, B_ac)` regions along directions
//! `(cos theta, sin theta)`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::search::{quantum_boundary_search, separable_orthogonal_search, SearchOptions};
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::localpoly::deterministic_behaviors;
use crate::lp::{self, LpStatus, DEFAULT_LP_TOL};
use crate::model::{Behavior, Scenario};
use crate::polytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportClass {
    Local,
    Quantum,
    Ns,
    SeparableOrthogonal,
}

impl SupportClass {
    pub fn name(self) -> &'static str {
        match self {
            SupportClass::Local => "local",
            SupportClass::Quantum => "quantum",
            SupportClass::Ns => "ns",
            SupportClass::SeparableOrthogonal => "separable-orthogonal",
        }
    }
}

impl std::str::FromStr for SupportClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(SupportClass::Local),
            "quantum" => Ok(SupportClass::Quantum),
            "ns" => Ok(SupportClass::Ns),
            "separable-orthogonal" => Ok(SupportClass::SeparableOrthogonal),
            _ => Err(Error::InvalidArgument(format!("unknown class {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub theta: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Behavior>,
}

/// `theta_i = 2 pi i / grid` for `i < grid`.
pub fn theta_grid(grid: usize) -> Vec<f64> {
    (0..grid)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / grid as f64)
        .collect()
}

/// Coefficient rows of `B_ab` and `B_ac` over the three-party table.
fn pair_forms() -> (Scenario, Vec<f64>, Vec<f64>) {
    let sc = Scenario::uniform(3, 2, 2).expect("valid scenario");
    let chsh = BellFunctional::chsh();
    let ab = polytope::linear_form(&sc, |b| chsh.evaluate_pair(b, 0, 1).expect("3-party"));
    let ac = polytope::linear_form(&sc, |b| chsh.evaluate_pair(b, 0, 2).expect("3-party"));
    (sc, ab, ac)
}

/// Maximum of a linear objective over the no-signalling polytope of `sc`.
pub fn ns_max(sc: &Scenario, objective: Vec<f64>) -> Result<(f64, Behavior)> {
    let mut prog = polytope::ns_program(sc, 0);
    prog.maximize(objective);
    let out = lp::solve(&prog, DEFAULT_LP_TOL)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Numerical {
            phase: if out.status == LpStatus::Infeasible {
                1
            } else {
                2
            },
            iterations: out.iterations,
            detail: format!("no-signalling polytope LP ended {:?}", out.status),
        });
    }
    Ok((
        out.objective,
        polytope::behavior_from_solution(sc, &out.solution),
    ))
}

/// LP support of the no-signalling region, with maximizing behaviors.
pub fn ns_support(thetas: &[f64]) -> Result<Vec<SupportPoint>> {
    let (sc, ab, ac) = pair_forms();
    thetas
        .par_iter()
        .map(|&theta| {
            let (c, s) = (theta.cos(), theta.sin());
            let obj = ab.iter().zip(&ac).map(|(x, y)| c * x + s * y).collect();
            let (value, b) = ns_max(&sc, obj)?;
            Ok(SupportPoint {
                theta,
                value,
                argmax: Some(b),
            })
        })
        .collect()
}

/// Support of the local region, maximized over deterministic vertices.
pub fn local_support(thetas: &[f64]) -> Result<Vec<SupportPoint>> {
    let (sc, ab, ac) = pair_forms();
    let verts = deterministic_behaviors(&sc)?;
    let values: Vec<(f64, f64)> = verts
        .iter()
        .map(|v| {
            let dot = |f: &[f64]| f.iter().zip(v.table()).map(|(x, y)| x * y).sum::<f64>();
            (dot(&ab), dot(&ac))
        })
        .collect();
    Ok(thetas
        .iter()
        .map(|&theta| {
            let (c, s) = (theta.cos(), theta.sin());
            let (k, value) = values.iter().map(|(x, y)| c * x + s * y).enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, v)| if v > acc.1 { (k, v) } else { acc },
            );
            SupportPoint {
                theta,
                value,
                argmax: Some(verts[k].clone()),
            }
        })
        .collect())
}

pub fn separable_orthogonal_support(thetas: &[f64], opts: &SearchOptions) -> Vec<SupportPoint> {
    separable_orthogonal_search(thetas, opts)
        .into_iter()
        .map(|(theta, value)| SupportPoint {
            theta,
            value,
            argmax: None,
        })
        .collect()
}

/// The trace of one class on the uniform grid of `grid` directions.
/// The quantum trace is a lower bound found by search.
pub fn support_trace(
    class: SupportClass,
    grid: usize,
    opts: &SearchOptions,
) -> Result<Vec<SupportPoint>> {
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let thetas = theta_grid(grid);
    match class {
        SupportClass::Local => local_support(&thetas),
        SupportClass::Ns => ns_support(&thetas),
        SupportClass::SeparableOrthogonal => Ok(separable_orthogonal_support(&thetas, opts)),
        SupportClass::Quantum => Ok(quantum_boundary_search(&thetas, opts)
            .into_iter()
            .map(|p| SupportPoint {
                theta: p.theta,
                value: p.value,
                argmax: None,
            })
            .collect()),
    }
}

/// `theta,max_value,class` rows with a header line.
pub fn write_csv<W: Write>(w: W, class: SupportClass, points: &[SupportPoint]) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["theta", "max_value", "class"])
        .map_err(csv_error)?;
    for p in points {
        out.write_record([
            p.theta.to_string(),
            p.value.to_string(),
            class.name().to_string(),
        ])
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
