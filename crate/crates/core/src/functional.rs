//! Two-party Bell functionals over correlators and single-party marginals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localpoly;
use crate::model::{Behavior, Scenario};

/// `sum_xy c[x][y] <A_x B_y> + sum_x first[x] <A_x> + sum_y second[y] <B_y>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellFunctional {
    pub name: String,
    pub correlators: Vec<Vec<f64>>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    /// Largest value over local behaviors.
    pub local_bound: f64,
}

impl BellFunctional {
    pub fn new(
        name: impl Into<String>,
        correlators: Vec<Vec<f64>>,
        first: Vec<f64>,
        second: Vec<f64>,
    ) -> Result<Self> {
        let x = correlators.len();
        let y = correlators.first().map_or(0, Vec::len);
        if x == 0 || y == 0 || correlators.iter().any(|r| r.len() != y) {
            return Err(Error::InvalidArgument(
                "ragged correlator coefficients".into(),
            ));
        }
        if first.len() != x || second.len() != y {
            return Err(Error::InvalidArgument(format!(
                "marginal coefficients {}/{} do not match {x}x{y} settings",
                first.len(),
                second.len()
            )));
        }
        let mut f = Self {
            name: name.into(),
            correlators,
            first,
            second,
            local_bound: f64::NAN,
        };
        f.local_bound = localpoly::local_bound(&f, &f.scenario())?;
        Ok(f)
    }

    /// `AB + AB' + A'B - A'B'`.
    pub fn chsh() -> Self {
        Self::new(
            "CHSH",
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![0.0; 2],
            vec![0.0; 2],
        )
        .expect("valid functional")
    }

    /// `AB + A'B + A''B + AB' + A'B' + AB'' - A''B' - A'B'' + A + A' - B - B'`.
    pub fn collins_gisin() -> Self {
        Self::new(
            "CG",
            vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 1.0, -1.0],
                vec![1.0, -1.0, 0.0],
            ],
            vec![1.0, 1.0, 0.0],
            vec![-1.0, -1.0, 0.0],
        )
        .expect("valid functional")
    }

    pub fn zero(x: usize, y: usize) -> Self {
        Self::new("zero", vec![vec![0.0; y]; x], vec![0.0; x], vec![0.0; y])
            .expect("valid functional")
    }

    pub fn settings(&self) -> (usize, usize) {
        (self.correlators.len(), self.second.len())
    }

    /// The two-party dichotomic scenario the functional is defined on.
    pub fn scenario(&self) -> Scenario {
        let (x, y) = self.settings();
        Scenario::new(vec![x, y], vec![2, 2]).expect("valid scenario")
    }

    /// Evaluates from precomputed expectations.
    pub fn evaluate_expectations(&self, corr: &[Vec<f64>], first: &[f64], second: &[f64]) -> f64 {
        let mut v = 0.0;
        for (crow, erow) in self.correlators.iter().zip(corr) {
            for (c, e) in crow.iter().zip(erow) {
                v += c * e;
            }
        }
        v + self
            .first
            .iter()
            .zip(first)
            .map(|(c, e)| c * e)
            .sum::<f64>()
            + self
                .second
                .iter()
                .zip(second)
                .map(|(c, e)| c * e)
                .sum::<f64>()
    }

    /// Value on a two-party behavior.
    pub fn evaluate(&self, b: &Behavior) -> Result<f64> {
        let sc = b.scenario();
        if *sc != self.scenario() {
            return Err(Error::InvalidArgument(format!(
                "{} functional needs settings {:?}, behavior has {:?}/{:?}",
                self.name,
                self.settings(),
                sc.settings(),
                sc.outcomes()
            )));
        }
        let (x, y) = self.settings();
        let mut corr = vec![vec![0.0; y]; x];
        for (i, row) in corr.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                if self.correlators[i][j] != 0.0 {
                    *e = b.correlator(&[i, j])?;
                }
            }
        }
        let mut first = vec![0.0; x];
        for (i, e) in first.iter_mut().enumerate() {
            if self.first[i] != 0.0 {
                *e = b.one_body(0, i)?;
            }
        }
        let mut second = vec![0.0; y];
        for (j, e) in second.iter_mut().enumerate() {
            if self.second[j] != 0.0 {
                *e = b.one_body(1, j)?;
            }
        }
        Ok(self.evaluate_expectations(&corr, &first, &second))
    }

    /// Value on the `(x, y)` pair marginal of a multi-party behavior, other
    /// parties held at setting `0`.
    pub fn evaluate_pair(&self, b: &Behavior, x: usize, y: usize) -> Result<f64> {
        let ctx = vec![0; b.scenario().parties()];
        self.evaluate(&b.marginal(&[x, y], &ctx)?.behavior)
    }
}
