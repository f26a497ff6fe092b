//! Monogamy trade-offs between Bell values on overlapping pairs of parties.
//!
//! In a three-party scenario `(a, b, c)` with two dichotomic settings each,
//! `B_ab` is CHSH on the `(a, b)` marginal and `B_ac` CHSH on `(a, c)`. Both
//! use the same two settings of `a`.

mod probe;
mod search;
mod support;

use serde::{Deserialize, Serialize};

pub use probe::{pb_probe, PbProbeReport, SignPatternValue};
pub use search::{
    cg_double_violation_search, quantum_boundary_search, separable_orthogonal_search,
    BoundaryPoint, CgPoint, SearchOptions,
};
pub use support::{
    local_support, ns_max, ns_support, separable_orthogonal_support, support_trace, theta_grid,
    write_csv, SupportClass, SupportPoint,
};

use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::model::{Behavior, Scenario};
use crate::quantum::{born_behavior, sigma_y, DensityMatrix, Observable};

/// Default slack allowed on every trade-off check.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InequalityId {
    /// `|B_ab| + |B_ac| <= 4` for no-signalling correlations.
    #[serde(rename = "NS-13")]
    NsTradeoff,
    /// `B_ab^2 + B_ac^2 <= 8` for quantum correlations.
    #[serde(rename = "TV-14")]
    TonerVerstraete,
    /// `B_ab^2 + B_ac^2 <= 8 (1 - <Y>_a^2)`.
    #[serde(rename = "STRONG-21")]
    Strengthened,
    /// `B_ab^2 + B_ac^2 + B_bc^2 <= 8`. False in general.
    #[serde(rename = "NAIVE-23")]
    NaiveTriple,
    /// `B_ab^2 + B_ac^2 + B_bc^2 <= 12 - 4 (<Y>_a^2 + <Y>_b^2 + <Y>_c^2)`.
    #[serde(rename = "TRIPLE-25")]
    Triple,
    #[serde(rename = "CYL-AB-AC")]
    CylinderAbAc,
    #[serde(rename = "CYL-AB-BC")]
    CylinderAbBc,
    #[serde(rename = "CYL-AC-BC")]
    CylinderAcBc,
    /// `|C_ab| + |C_ac| + |C_ad| <= 3 LR`.
    #[serde(rename = "PB-30")]
    PawlowskiBrukner,
    /// `B_ab^2 + 4 <AC>^2 <= 8`.
    #[serde(rename = "KEY-31")]
    KeyCorollary,
}

impl InequalityId {
    pub fn label(self) -> &'static str {
        match self {
            InequalityId::NsTradeoff => "NS-13",
            InequalityId::TonerVerstraete => "TV-14",
            InequalityId::Strengthened => "STRONG-21",
            InequalityId::NaiveTriple => "NAIVE-23",
            InequalityId::Triple => "TRIPLE-25",
            InequalityId::CylinderAbAc => "CYL-AB-AC",
            InequalityId::CylinderAbBc => "CYL-AB-BC",
            InequalityId::CylinderAcBc => "CYL-AC-BC",
            InequalityId::PawlowskiBrukner => "PB-30",
            InequalityId::KeyCorollary => "KEY-31",
        }
    }

    /// Whether the inequality is a theorem. The naive triple bound is not.
    pub fn is_theorem(self) -> bool {
        self != InequalityId::NaiveTriple
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: InequalityId,
    pub lhs: f64,
    pub bound: f64,
    /// `bound - lhs`.
    pub slack: f64,
    pub passes: bool,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn new(id: InequalityId, lhs: f64, bound: f64, tolerance: f64) -> Self {
        let slack = bound - lhs;
        Self {
            id,
            lhs,
            bound,
            slack,
            passes: slack >= -tolerance,
            tolerance,
        }
    }
}

/// Bell values of one configuration, with optional context scalars.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub b_ab: f64,
    pub b_ac: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_bc: Option<f64>,
    /// `<sigma_y>` of the single-qubit states of `a`, `b`, `c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_y: Option<[f64; 3]>,
    /// `<A C>` with both parties at setting `0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ac: Option<f64>,
}

impl TradeoffPoint {
    pub fn pair(b_ab: f64, b_ac: f64) -> Self {
        Self {
            b_ab,
            b_ac,
            ..Default::default()
        }
    }

    pub fn triple(b_ab: f64, b_ac: f64, b_bc: f64) -> Self {
        Self {
            b_ab,
            b_ac,
            b_bc: Some(b_bc),
            ..Default::default()
        }
    }

    pub fn with_sigma_y(mut self, sigma_y: [f64; 3]) -> Self {
        self.sigma_y = Some(sigma_y);
        self
    }
}

pub fn bell_value(b: &Behavior, f: &BellFunctional) -> Result<f64> {
    f.evaluate(b)
}

fn check_three_party(b: &Behavior) -> Result<()> {
    if *b.scenario() != Scenario::uniform(3, 2, 2)? {
        return Err(Error::InvalidArgument(format!(
            "trade-off values need 3 parties with 2 settings and 2 outcomes, got {:?}",
            b.scenario()
        )));
    }
    Ok(())
}

/// `(B_ab, B_ac)` and `<AC>`.
pub fn pair_values(b: &Behavior) -> Result<TradeoffPoint> {
    check_three_party(b)?;
    let chsh = BellFunctional::chsh();
    Ok(TradeoffPoint {
        b_ab: chsh.evaluate_pair(b, 0, 1)?,
        b_ac: chsh.evaluate_pair(b, 0, 2)?,
        ac: Some(
            b.marginal(&[0, 2], &[0, 0, 0])?
                .behavior
                .correlator(&[0, 0])?,
        ),
        ..Default::default()
    })
}

/// `(B_ab, B_ac, B_bc)`; `B_bc` uses `b`'s settings as the first party.
pub fn triple_values(b: &Behavior) -> Result<TradeoffPoint> {
    let mut p = pair_values(b)?;
    p.b_bc = Some(BellFunctional::chsh().evaluate_pair(b, 1, 2)?);
    Ok(p)
}

/// Triple values of a three-qubit state measured with planar observables,
/// `angles[party] = [alpha, alpha']`, including the `<sigma_y>` scalars.
pub fn quantum_point(rho: &DensityMatrix, angles: &[[f64; 2]]) -> Result<TradeoffPoint> {
    if rho.qubits() != 3 || angles.len() != 3 {
        return Err(Error::InvalidArgument(
            "quantum trade-off points need 3 qubits and 3 angle pairs".into(),
        ));
    }
    let obs: Vec<Vec<Observable>> = angles
        .iter()
        .map(|a| a.iter().map(|&t| Observable::planar(t)).collect())
        .collect();
    let b = born_behavior(rho, &obs)?;
    let mut p = triple_values(&b)?;
    let mut y = [0.0; 3];
    for (q, v) in y.iter_mut().enumerate() {
        *v = rho.partial_trace(&[q])?.expectation(&sigma_y())?;
    }
    p.sigma_y = Some(y);
    Ok(p)
}

pub fn check_ns_tradeoff(p: &TradeoffPoint, tol: f64) -> CheckReport {
    CheckReport::new(
        InequalityId::NsTradeoff,
        p.b_ab.abs() + p.b_ac.abs(),
        4.0,
        tol,
    )
}

pub fn check_tv_tradeoff(p: &TradeoffPoint, tol: f64) -> CheckReport {
    CheckReport::new(
        InequalityId::TonerVerstraete,
        p.b_ab.powi(2) + p.b_ac.powi(2),
        8.0,
        tol,
    )
}

pub fn check_strengthened(p: &TradeoffPoint, tol: f64) -> Result<CheckReport> {
    let y = p
        .sigma_y
        .ok_or_else(|| Error::InvalidArgument("strengthened check needs <sigma_y>_a".into()))?;
    Ok(CheckReport::new(
        InequalityId::Strengthened,
        p.b_ab.powi(2) + p.b_ac.powi(2),
        8.0 * (1.0 - y[0] * y[0]),
        tol,
    ))
}

/// The triple bound, the naive bound and the three pairwise cylinders, in
/// that order.
pub fn check_triple(p: &TradeoffPoint, tol: f64) -> Result<Vec<CheckReport>> {
    let bc = p
        .b_bc
        .ok_or_else(|| Error::InvalidArgument("triple check needs B_bc".into()))?;
    let y = p
        .sigma_y
        .ok_or_else(|| Error::InvalidArgument("triple check needs <sigma_y> per party".into()))?;
    let (ab2, ac2, bc2) = (p.b_ab.powi(2), p.b_ac.powi(2), bc.powi(2));
    let sum = ab2 + ac2 + bc2;
    let ysq: f64 = y.iter().map(|v| v * v).sum();
    Ok(vec![
        CheckReport::new(InequalityId::Triple, sum, 12.0 - 4.0 * ysq, tol),
        CheckReport::new(InequalityId::NaiveTriple, sum, 8.0, tol),
        CheckReport::new(InequalityId::CylinderAbAc, ab2 + ac2, 8.0, tol),
        CheckReport::new(InequalityId::CylinderAbBc, ab2 + bc2, 8.0, tol),
        CheckReport::new(InequalityId::CylinderAcBc, ac2 + bc2, 8.0, tol),
    ])
}

pub fn check_key_corollary(b_ab: f64, ac: f64, tol: f64) -> CheckReport {
    CheckReport::new(
        InequalityId::KeyCorollary,
        b_ab.powi(2) + 4.0 * ac.powi(2),
        8.0,
        tol,
    )
}

/// Every applicable check for a point; the naive triple bound is included
/// and reported like the rest.
pub fn check_all(p: &TradeoffPoint, tol: f64) -> Result<Vec<CheckReport>> {
    let mut out = vec![check_ns_tradeoff(p, tol), check_tv_tradeoff(p, tol)];
    if p.sigma_y.is_some() {
        out.push(check_strengthened(p, tol)?);
        if p.b_bc.is_some() {
            out.extend(check_triple(p, tol)?);
        }
    }
    if let Some(ac) = p.ac {
        out.push(check_key_corollary(p.b_ab, ac, tol));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{embed_product, named_box, BoxKind};
    use crate::quantum::{named_state, NamedState, StateVector};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    const TSIRELSON: f64 = 2.0 * SQRT_2;

    #[test]
    fn bell_values_of_named_boxes() {
        let chsh = BellFunctional::chsh();
        let pr = named_box(&BoxKind::Pr, &Scenario::chsh()).unwrap();
        assert_eq!(bell_value(&pr, &chsh).unwrap(), 4.0);
        let cg = BellFunctional::collins_gisin();
        let det = named_box(&BoxKind::Deterministic(vec![vec![0; 3]; 2]), &cg.scenario()).unwrap();
        assert_eq!(bell_value(&det, &cg).unwrap(), 4.0);
        assert!(bell_value(&pr, &cg).is_err());
    }

    #[test]
    fn pr_with_uniform_third_party() {
        let pr = named_box(&BoxKind::Pr, &Scenario::chsh()).unwrap();
        let u = named_box(&BoxKind::Uniform, &Scenario::uniform(1, 2, 2).unwrap()).unwrap();
        let b = embed_product(&[(&[0, 1], &pr), (&[2], &u)]).unwrap();
        let p = pair_values(&b).unwrap();
        assert_eq!((p.b_ab, p.b_ac), (4.0, 0.0));
        let u3 = named_box(&BoxKind::Uniform, &Scenario::uniform(3, 2, 2).unwrap()).unwrap();
        let p = pair_values(&u3).unwrap();
        assert_eq!((p.b_ab, p.b_ac), (0.0, 0.0));
        assert!(pair_values(&pr).is_err());
    }

    #[test]
    fn bell_pair_times_zero_ket() {
        let psi = crate::quantum::named_vector(&NamedState::PhiPlus)
            .unwrap()
            .kron(&StateVector::basis(1, 0));
        let angles = [[0.0, FRAC_PI_2], [FRAC_PI_4, -FRAC_PI_4], [0.0, FRAC_PI_2]];
        let p = quantum_point(&psi.density(), &angles).unwrap();
        assert!((p.b_ab - TSIRELSON).abs() < 1e-12);
        assert!(p.b_ac.abs() < 1e-12);
        assert!(p.sigma_y.unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn ns_tradeoff_examples() {
        let r = check_ns_tradeoff(&TradeoffPoint::pair(4.0, 0.0), CHECK_TOL);
        assert!(r.passes && r.slack == 0.0);
        assert!(!check_ns_tradeoff(&TradeoffPoint::pair(TSIRELSON, TSIRELSON), CHECK_TOL).passes);
        let r = check_ns_tradeoff(&TradeoffPoint::pair(2.0, 2.0), CHECK_TOL);
        assert!(r.passes && r.slack == 0.0);
    }

    #[test]
    fn tv_tradeoff_examples() {
        let r = check_tv_tradeoff(&TradeoffPoint::pair(TSIRELSON, 0.0), CHECK_TOL);
        assert!(r.passes && r.slack.abs() < 1e-12);
        assert!(check_tv_tradeoff(&TradeoffPoint::pair(2.0, 2.0), CHECK_TOL).passes);
        assert!(!check_tv_tradeoff(&TradeoffPoint::pair(2.5, 2.5), CHECK_TOL).passes);
    }

    #[test]
    fn strengthened_examples() {
        let p = TradeoffPoint::pair(TSIRELSON, 0.0).with_sigma_y([0.0; 3]);
        let r = check_strengthened(&p, CHECK_TOL).unwrap();
        assert!(r.passes && r.slack.abs() < 1e-12);
        let zero = TradeoffPoint::pair(0.0, 0.0).with_sigma_y([1.0, 0.0, 0.0]);
        let r = check_strengthened(&zero, CHECK_TOL).unwrap();
        assert!(r.passes && r.bound == 0.0);
        let one = TradeoffPoint::pair(0.1, 0.0).with_sigma_y([1.0, 0.0, 0.0]);
        assert!(!check_strengthened(&one, CHECK_TOL).unwrap().passes);
        let p = TradeoffPoint::pair(2.0, 2.0).with_sigma_y([0.5, 0.0, 0.0]);
        let r = check_strengthened(&p, CHECK_TOL).unwrap();
        assert!(!r.passes && r.bound == 6.0);
        assert!(check_strengthened(&TradeoffPoint::pair(0.0, 0.0), CHECK_TOL).is_err());
    }

    #[test]
    fn zero_ket_saturates_triple() {
        let rho = StateVector::basis(3, 0).density();
        let z = FRAC_PI_2;
        let p = quantum_point(&rho, &[[z, z], [z, z], [z, z]]).unwrap();
        assert_eq!(p.b_bc, Some(2.0));
        let reports = check_triple(&p, CHECK_TOL).unwrap();
        assert_eq!(reports[0].id, InequalityId::Triple);
        assert!((reports[0].lhs - 12.0).abs() < 1e-9 && reports[0].passes);
        assert_eq!(reports[1].id, InequalityId::NaiveTriple);
        assert!(!reports[1].passes);
    }

    #[test]
    fn ghz_triple_passes() {
        let rho = named_state(&NamedState::Ghz).unwrap();
        let p = quantum_point(
            &rho,
            &[[0.0, FRAC_PI_2], [FRAC_PI_4, -FRAC_PI_4], [0.0, FRAC_PI_2]],
        )
        .unwrap();
        let reports = check_triple(&p, CHECK_TOL).unwrap();
        assert!(reports[0].passes);
    }

    #[test]
    fn key_corollary_examples() {
        let r = check_key_corollary(TSIRELSON, 0.0, CHECK_TOL);
        assert!(r.passes && r.slack.abs() < 1e-12);
        assert!(check_key_corollary(2.0, 1.0, CHECK_TOL).passes);
        assert!(!check_key_corollary(2.5, 1.0, CHECK_TOL).passes);
    }

    #[test]
    fn report_ids_serialize_as_labels() {
        let r = check_tv_tradeoff(&TradeoffPoint::pair(1.0, 1.0), CHECK_TOL);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"TV-14\""));
        assert_eq!(serde_json::from_str::<CheckReport>(&s).unwrap(), r);
    }
}
