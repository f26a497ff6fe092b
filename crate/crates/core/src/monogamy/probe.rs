//! Four-party probe of `C_ab`, `C_ac`, `C_ad` over the no-signalling
//! polytope, all pairs sharing `a`'s settings.

use serde::{Deserialize, Serialize};

use super::{CheckReport, InequalityId};
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::lp::{self, LpStatus, DEFAULT_LP_TOL};
use crate::model::{Behavior, Scenario};
use crate::polytope;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignPatternValue {
    /// Signs on `(C_ab, C_ac, C_ad)`.
    pub signs: [i8; 3],
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PbProbeReport {
    pub functional: String,
    pub local_bound: f64,
    pub patterns: Vec<SignPatternValue>,
    /// Maximum of `|C_ab| + |C_ac| + |C_ad|`.
    pub max_abs_sum: f64,
    /// `(C_ab, C_ac, C_ad)` at the maximizer.
    pub pair_values: [f64; 3],
    pub argmax: Behavior,
    /// Comparison of `max_abs_sum` with `3 LR`; reported, not enforced.
    pub bound_check: CheckReport,
    /// Largest `t` with `C_ab + C_ac >= t` and `C_ab + C_ad >= t`.
    pub t_star: f64,
    pub t_pair_values: [f64; 3],
    pub t_argmax: Behavior,
    /// Whether `t_star > 2 LR`.
    pub both_pairs_exceed: bool,
}

/// Runs the eight sign-pattern LPs and the max-min LP for a two-party
/// functional lifted to pairs `(a, b)`, `(a, c)`, `(a, d)`.
pub fn pb_probe(f: &BellFunctional, tol: f64) -> Result<PbProbeReport> {
    let (x, y) = f.settings();
    if x != y {
        return Err(Error::InvalidArgument(
            "probe needs the same number of settings on both sides".into(),
        ));
    }
    let sc = Scenario::uniform(4, x, 2)?;
    let forms: Vec<Vec<f64>> = (1..4)
        .map(|k| polytope::linear_form(&sc, |b| f.evaluate_pair(b, 0, k).expect("4-party")))
        .collect();
    let pair_values = |b: &Behavior| -> Result<[f64; 3]> {
        Ok([
            f.evaluate_pair(b, 0, 1)?,
            f.evaluate_pair(b, 0, 2)?,
            f.evaluate_pair(b, 0, 3)?,
        ])
    };

    let mut patterns = Vec::with_capacity(8);
    let mut best: Option<(f64, Behavior)> = None;
    for mask in 0..8u8 {
        let signs: [i8; 3] = std::array::from_fn(|i| if mask >> (2 - i) & 1 == 0 { 1 } else { -1 });
        let obj: Vec<f64> = (0..sc.table_len())
            .map(|e| (0..3).map(|i| signs[i] as f64 * forms[i][e]).sum())
            .collect();
        let (value, b) = super::ns_max(&sc, obj)?;
        patterns.push(SignPatternValue { signs, value });
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, b));
        }
    }
    let (max_abs_sum, argmax) = best.expect("eight patterns");

    let len = sc.table_len();
    let mut prog = polytope::ns_program(&sc, 1);
    prog.free(len);
    let mut obj = vec![0.0; len + 1];
    obj[len] = 1.0;
    prog.maximize(obj);
    for other in [1, 2] {
        // t - C_ab - C_other <= 0
        let mut row: Vec<f64> = forms[0]
            .iter()
            .zip(&forms[other])
            .map(|(p, q)| -(p + q))
            .collect();
        row.push(1.0);
        prog.inequality(row, 0.0);
    }
    let out = lp::solve(&prog, DEFAULT_LP_TOL)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Numerical {
            phase: 2,
            iterations: out.iterations,
            detail: format!("max-min program ended {:?}", out.status),
        });
    }
    let t_argmax = polytope::behavior_from_solution(&sc, &out.solution);
    let lr = f.local_bound;
    Ok(PbProbeReport {
        functional: f.name.clone(),
        local_bound: lr,
        patterns,
        max_abs_sum,
        pair_values: pair_values(&argmax)?,
        argmax,
        bound_check: CheckReport::new(InequalityId::PawlowskiBrukner, max_abs_sum, 3.0 * lr, tol),
        t_star: out.objective,
        t_pair_values: pair_values(&t_argmax)?,
        t_argmax,
        both_pairs_exceed: out.objective > 2.0 * lr + tol,
    })
}
