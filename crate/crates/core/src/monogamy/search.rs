//! Multi-start searches over real three-qubit states and planar settings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::functional::BellFunctional;
use crate::optimize::NelderMead;
use crate::quantum::{named_vector, NamedState};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub nelder_mead: NelderMead,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: 0,
            nelder_mead: NelderMead::default(),
        }
    }
}

impl SearchOptions {
    /// Independent generator for grid point `index`.
    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// `O(alpha) psi` on qubit `q` of a real `n`-qubit vector, with
/// `O(alpha) = [[sin, cos], [cos, -sin]]`.
fn apply_planar(psi: &[f64], n: usize, q: usize, alpha: f64) -> Vec<f64> {
    let (s, c) = alpha.sin_cos();
    let bit = 1 << (n - 1 - q);
    let mut out = vec![0.0; psi.len()];
    for i in 0..psi.len() {
        if i & bit == 0 {
            let (x0, x1) = (psi[i], psi[i | bit]);
            out[i] = s * x0 + c * x1;
            out[i | bit] = c * x0 - s * x1;
        }
    }
    out
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn normalized(x: &[f64]) -> Option<Vec<f64>> {
    let n = dot(x, x).sqrt();
    (n > 1e-12).then(|| x.iter().map(|v| v / n).collect())
}

/// `angles[q][k]` is setting `k` of qubit `q`; returns `O_k psi` per qubit.
fn rotated(psi: &[f64], angles: &[&[f64]]) -> Vec<Vec<Vec<f64>>> {
    let n = angles.len();
    angles
        .iter()
        .enumerate()
        .map(|(q, a)| a.iter().map(|&t| apply_planar(psi, n, q, t)).collect())
        .collect()
}

/// Value of a two-party functional between qubits `x` and `y` from the
/// rotated vectors. `<A B> = <A psi, B psi>` since the factors commute.
fn functional_value(
    f: &BellFunctional,
    psi: &[f64],
    ops: &[Vec<Vec<f64>>],
    x: usize,
    y: usize,
) -> f64 {
    let mut v = 0.0;
    for (i, row) in f.correlators.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != 0.0 {
                v += c * dot(&ops[x][i], &ops[y][j]);
            }
        }
    }
    for (i, &c) in f.first.iter().enumerate() {
        if c != 0.0 {
            v += c * dot(psi, &ops[x][i]);
        }
    }
    for (j, &c) in f.second.iter().enumerate() {
        if c != 0.0 {
            v += c * dot(psi, &ops[y][j]);
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub theta: f64,
    /// `cos(theta) B_ab + sin(theta) B_ac` at the best parameters found.
    pub value: f64,
    pub b_ab: f64,
    pub b_ac: f64,
    /// Real amplitudes of the state, normalized.
    pub amplitudes: Vec<f64>,
    /// `[a, a', b, b', c, c']` planar angles.
    pub angles: Vec<f64>,
}

fn chsh_pair(psi: &[f64], angles: &[f64]) -> (f64, f64) {
    let chsh = BellFunctional::chsh();
    let ops = rotated(psi, &[&angles[0..2], &angles[2..4], &angles[4..6]]);
    (
        functional_value(&chsh, psi, &ops, 0, 1),
        functional_value(&chsh, psi, &ops, 0, 2),
    )
}

/// Maximizes `cos(theta) B_ab + sin(theta) B_ac` over real three-qubit
/// states and two planar settings per party, one search per `theta`.
pub fn quantum_boundary_search(thetas: &[f64], opts: &SearchOptions) -> Vec<BoundaryPoint> {
    thetas
        .par_iter()
        .enumerate()
        .map(|(k, &theta)| {
            let (ct, st) = (theta.cos(), theta.sin());
            let objective = |x: &[f64]| match normalized(&x[..8]) {
                Some(psi) => {
                    let (ab, ac) = chsh_pair(&psi, &x[8..]);
                    ct * ab + st * ac
                }
                None => f64::NEG_INFINITY,
            };
            let mut rng = opts.rng(k);
            let best = opts
                .nelder_mead
                .maximize_multistart(objective, opts.restarts.max(1), &mut rng, |r| {
                    let mut x: Vec<f64> = (0..8).map(|_| r.random_range(-1.0..1.0)).collect();
                    x.extend(
                        (0..6).map(|_| r.random_range(-std::f64::consts::PI..std::f64::consts::PI)),
                    );
                    x
                })
                .expect("at least one restart");
            let psi = normalized(&best.x[..8]).expect("finite optimum");
            let (b_ab, b_ac) = chsh_pair(&psi, &best.x[8..]);
            BoundaryPoint {
                theta,
                value: ct * b_ab + st * b_ac,
                b_ab,
                b_ac,
                amplitudes: psi,
                angles: best.x[8..].to_vec(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgPoint {
    pub mu: f64,
    /// `min(C_ab, C_ac)`.
    pub value: f64,
    pub c_ab: f64,
    pub c_ac: f64,
    /// `[a, a', a'', b, b', b'', c, c', c'']` planar angles.
    pub angles: Vec<f64>,
}

fn cg_pair(psi: &[f64], angles: &[f64]) -> (f64, f64) {
    let cg = BellFunctional::collins_gisin();
    let ops = rotated(psi, &[&angles[0..3], &angles[3..6], &angles[6..9]]);
    (
        functional_value(&cg, psi, &ops, 0, 1),
        functional_value(&cg, psi, &ops, 0, 2),
    )
}

/// For each `mu`, maximizes `min(C_ab, C_ac)` on the state
/// `mu|000> + sqrt((1 - mu^2)/2)(|110> + |101>)` over three planar
/// settings per party.
pub fn cg_double_violation_search(
    mus: &[f64],
    opts: &SearchOptions,
) -> crate::Result<Vec<CgPoint>> {
    mus.par_iter()
        .enumerate()
        .map(|(k, &mu)| {
            let psi: Vec<f64> = named_vector(&NamedState::Cg(mu))?
                .amplitudes()
                .iter()
                .map(|z| z.re)
                .collect();
            let objective = |x: &[f64]| {
                let (ab, ac) = cg_pair(&psi, x);
                ab.min(ac)
            };
            let mut rng = opts.rng(k);
            let best = opts
                .nelder_mead
                .maximize_multistart(objective, opts.restarts.max(1), &mut rng, |r| {
                    (0..9)
                        .map(|_| r.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                        .collect()
                })
                .expect("at least one restart");
            let (c_ab, c_ac) = cg_pair(&psi, &best.x);
            Ok(CgPoint {
                mu,
                value: c_ab.min(c_ac),
                c_ab,
                c_ac,
                angles: best.x,
            })
        })
        .collect()
}

/// Bloch vector in the `x`-`z` plane and the `y` component, from polar
/// angles `(t, p)`.
fn bloch(t: f64, p: f64) -> (f64, f64) {
    (t.sin() * p.cos(), t.cos())
}

/// Maximizes `cos(theta) B_ab + sin(theta) B_ac` over product states of
/// three qubits with every party measuring `sigma_x` then `sigma_z`.
/// Returns `(theta, value)` per direction.
pub fn separable_orthogonal_search(thetas: &[f64], opts: &SearchOptions) -> Vec<(f64, f64)> {
    thetas
        .par_iter()
        .enumerate()
        .map(|(k, &theta)| {
            let (ct, st) = (theta.cos(), theta.sin());
            let objective = |x: &[f64]| {
                let (ax, az) = bloch(x[0], x[1]);
                let (bx, bz) = bloch(x[2], x[3]);
                let (cx, cz) = bloch(x[4], x[5]);
                // AB + AB' + A'B - A'B' with A = X, A' = Z
                let ab = ax * (bx + bz) + az * (bx - bz);
                let ac = ax * (cx + cz) + az * (cx - cz);
                ct * ab + st * ac
            };
            let mut rng = opts.rng(k);
            let best = opts
                .nelder_mead
                .maximize_multistart(objective, opts.restarts.max(1), &mut rng, |r| {
                    (0..6)
                        .map(|_| r.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                        .collect()
                })
                .expect("at least one restart");
            (theta, best.value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn planar_action_matches_matrix() {
        let psi = vec![0.6, 0.0, 0.0, 0.8];
        let out = apply_planar(&psi, 2, 0, FRAC_PI_2);
        // sigma_z on qubit 0
        assert!((out[0] - 0.6).abs() < 1e-15 && (out[3] + 0.8).abs() < 1e-15);
    }

    #[test]
    fn witness_reaches_tsirelson() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![0.0; 8];
        psi[0b000] = h;
        psi[0b110] = h;
        let (ab, ac) = chsh_pair(&psi, &[0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4, 0.0, 0.0]);
        assert!((ab - 2.0 * SQRT_2).abs() < 1e-12);
        assert!(ac.abs() < 1e-12);
    }

    #[test]
    fn boundary_search_small() {
        let opts = SearchOptions {
            restarts: 8,
            seed: 3,
            ..Default::default()
        };
        let pts = quantum_boundary_search(&[0.0, FRAC_PI_4], &opts);
        for p in &pts {
            assert!(p.value <= 2.0 * SQRT_2 + 1e-9);
            assert!(p.value > 2.0);
        }
        assert_eq!(pts, quantum_boundary_search(&[0.0, FRAC_PI_4], &opts));
    }

    #[test]
    fn product_state_cg_is_local() {
        let opts = SearchOptions {
            restarts: 4,
            ..Default::default()
        };
        let pts = cg_double_violation_search(&[1.0], &opts).unwrap();
        assert!(pts[0].value <= 4.0 + 1e-9);
    }

    #[test]
    fn separable_orthogonal_square() {
        let opts = SearchOptions {
            restarts: 10,
            ..Default::default()
        };
        let pts = separable_orthogonal_search(&[0.0, FRAC_PI_4], &opts);
        assert!((pts[0].1 - SQRT_2).abs() < 1e-6);
        assert!((pts[1].1 - 2.0).abs() < 1e-6);
    }
}
