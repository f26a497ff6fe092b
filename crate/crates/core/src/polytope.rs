//! Linear constraints describing the no-signalling polytope of a scenario,
//! with the raw table entries as LP variables.

use crate::lp::LinearProgram;
use crate::model::{Behavior, Scenario};

/// One equality row per context: its outcome probabilities sum to one.
pub fn normalization_rows(sc: &Scenario) -> Vec<(Vec<f64>, f64)> {
    let nout = sc.num_outcome_vectors();
    (0..sc.num_contexts())
        .map(|c| {
            let mut row = vec![0.0; sc.table_len()];
            row[c * nout..(c + 1) * nout].fill(1.0);
            (row, 1.0)
        })
        .collect()
}

/// For each party `k`, each setting `s > 0` of `k`, each setting vector of
/// the others and each outcome vector of the others: the marginal of the
/// others with `k` at setting `s` equals the one with `k` at setting `0`.
pub fn no_signalling_rows(sc: &Scenario) -> Vec<(Vec<f64>, f64)> {
    let n = sc.parties();
    let mut rows = Vec::new();
    if n < 2 {
        return rows;
    }
    for k in 0..n {
        for c in 0..sc.num_contexts() {
            let ctx = sc.context(c);
            if ctx[k] != 0 {
                continue;
            }
            for s in 1..sc.settings()[k] {
                let mut alt = ctx.clone();
                alt[k] = s;
                let others: Vec<usize> = (0..n).filter(|&p| p != k).collect();
                let sub = sc.sub(&others).expect("valid party subset");
                for j in 0..sub.num_outcome_vectors() {
                    let rest = sub.outcome_vector(j);
                    let mut row = vec![0.0; sc.table_len()];
                    let mut out = vec![0; n];
                    for (&p, &o) in others.iter().zip(&rest) {
                        out[p] = o;
                    }
                    for a in 0..sc.outcomes()[k] {
                        out[k] = a;
                        row[sc.index(&alt, &out)] += 1.0;
                        row[sc.index(&ctx, &out)] -= 1.0;
                    }
                    rows.push((row, 0.0));
                }
            }
        }
    }
    rows
}

/// `{positivity, normalization, no-signalling}` over the table of `sc`, with
/// `extra` trailing free-or-bounded variables appended after the table.
pub fn ns_program(sc: &Scenario, extra: usize) -> LinearProgram {
    let len = sc.table_len();
    let mut lp = LinearProgram::new(len + extra);
    for (mut row, rhs) in normalization_rows(sc)
        .into_iter()
        .chain(no_signalling_rows(sc))
    {
        row.resize(len + extra, 0.0);
        lp.equality(row, rhs);
    }
    lp
}

/// Coefficient vector of a linear functional of the table, found by
/// evaluating it on unit tables.
pub fn linear_form(sc: &Scenario, f: impl Fn(&Behavior) -> f64) -> Vec<f64> {
    let len = sc.table_len();
    let mut unit = vec![0.0; len];
    (0..len)
        .map(|i| {
            unit[i] = 1.0;
            let b = Behavior::new(sc.clone(), unit.clone()).expect("table length matches");
            unit[i] = 0.0;
            f(&b)
        })
        .collect()
}

/// Reads an LP solution back as a behavior, clamping tiny negatives from
/// floating-point round-off.
pub fn behavior_from_solution(sc: &Scenario, x: &[f64]) -> Behavior {
    let table = x[..sc.table_len()].iter().map(|v| v.max(0.0)).collect();
    Behavior::new(sc.clone(), table).expect("table length matches")
}
