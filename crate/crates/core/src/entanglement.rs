//! Two-qubit concurrence and tangle, pure-state cut tangle, and the
//! distributed-entanglement (CKW) check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{eig_hermitian, sigma_y, DensityMatrix, StateVector, C64};

/// Slack allowed below zero on the CKW residual.
pub const CKW_TOL: f64 = 1e-9;
/// Largest eigenvalue threshold for treating a state as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// Eigenvalues of `rho` below this are treated as zero.
const RANK_TOL: f64 = 1e-14;

/// `max(0, s1 - s2 - s3 - s4)` where `s_i` are the square roots of the
/// eigenvalues of `rho (Y x Y) rho* (Y x Y)`, in decreasing order.
///
/// The `s_i` are taken as singular values of `tau_jk = w_j^T (Y x Y) w_k`
/// over the subnormalized eigenvectors `w_k = sqrt(p_k) v_k` of `rho`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.qubits(),
        });
    }
    let yy = sigma_y().kron(&sigma_y());
    let eig = eig_hermitian(rho.matrix())?;
    let w: Vec<Vec<C64>> = (0..4)
        .filter(|&k| eig.values[k] > RANK_TOL)
        .map(|k| {
            let scale = eig.values[k].sqrt();
            eig.vector(k).into_iter().map(|z| z * scale).collect()
        })
        .collect();
    let yw: Vec<Vec<C64>> = w.iter().map(|v| yy.mul_vec(v)).collect();
    let mut tau: Vec<Vec<C64>> = w
        .iter()
        .map(|wj| {
            yw.iter()
                .map(|ywk| wj.iter().zip(ywk).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let mut s = singular_values(&mut tau);
    s.resize(4, 0.0);
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Singular values of a square matrix given as rows, descending, by
/// one-sided Jacobi on the columns. Overwrites `a`.
fn singular_values(a: &mut [Vec<C64>]) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = a.iter().map(|r| r[p].norm_sqr()).sum();
                let beta: f64 = a.iter().map(|r| r[q].norm_sqr()).sum();
                let gamma: C64 = a.iter().map(|r| r[p].conj() * r[q]).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q] * phase.conj());
                    row[p] = x * c - y * sn;
                    row[q] = x * sn + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = (0..n)
        .map(|k| a.iter().map(|r| r[k].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Square of the concurrence.
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence(rho)?.powi(2))
}

/// `4 det rho_pivot` for a pure multi-qubit state.
pub fn cut_tangle(psi: &DensityMatrix, pivot: usize) -> Result<f64> {
    check_pure(psi)?;
    if pivot >= psi.qubits() {
        return Err(Error::InvalidArgument(format!(
            "pivot {pivot} out of range for {} qubits",
            psi.qubits()
        )));
    }
    let r = psi.partial_trace(&[pivot])?;
    let m = r.matrix();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Ok(4.0 * det.re)
}

fn check_pure(psi: &DensityMatrix) -> Result<()> {
    let top = psi.largest_eigenvalue()?;
    if top < 1.0 - PURITY_TOL {
        return Err(Error::NotPure(top));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangleReport {
    pub pivot: usize,
    /// `(other qubit, tangle of the reduced pair state)`.
    pub pairwise: Vec<(usize, f64)>,
    pub cut: f64,
    /// `cut - sum of pairwise`.
    pub residual: f64,
    pub passes: bool,
}

/// Pairwise tangles against `pivot` and the cut tangle of a pure 3- or
/// 4-qubit state.
pub fn ckw_check(psi: &DensityMatrix, pivot: usize) -> Result<TangleReport> {
    let n = psi.qubits();
    if !(3..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "CKW check supports 3 or 4 qubits, got {n}"
        )));
    }
    let cut = cut_tangle(psi, pivot)?;
    let pairwise = (0..n)
        .filter(|&q| q != pivot)
        .map(|q| Ok((q, tangle(&psi.partial_trace(&[pivot, q])?)?)))
        .collect::<Result<Vec<_>>>()?;
    let residual = cut - pairwise.iter().map(|p| p.1).sum::<f64>();
    Ok(TangleReport {
        pivot,
        pairwise,
        cut,
        residual,
        passes: residual >= -CKW_TOL,
    })
}

/// Convenience wrapper for state vectors.
pub fn ckw_check_vector(psi: &StateVector, pivot: usize) -> Result<TangleReport> {
    ckw_check(&psi.density(), pivot)
}
