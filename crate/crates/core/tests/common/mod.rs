//! Brute-force reference computations, written without the library's
//! linear algebra.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type Dense = Vec<Vec<C>>;

pub fn dense(n: usize) -> Dense {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = dense(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Characteristic polynomial coefficients `c[0..=n]` of `det(x I - A)`,
/// `c[n] = 1`, by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &Dense) -> Vec<C> {
    let n = a.len();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut m = dense(n);
    for k in 1..=n {
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let tr: C = (0..n).map(|i| am[i][i]).sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

fn eval_real(c: &[C], x: f64) -> f64 {
    c.iter()
        .rev()
        .fold(C::new(0.0, 0.0), |acc, &ci| acc * x + ci)
        .re
}

/// Real roots of a polynomial with only real, simple roots inside
/// `[-bound, bound]`, by sign scanning and bisection.
pub fn real_roots(c: &[C], bound: f64) -> Vec<f64> {
    let steps = 20_000;
    let mut roots = Vec::new();
    let h = 2.0 * bound / steps as f64;
    let mut x0 = -bound;
    let mut f0 = eval_real(c, x0);
    for s in 1..=steps {
        let x1 = -bound + s as f64 * h;
        let f1 = eval_real(c, x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi) = (x0, x1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if eval_real(c, lo) * eval_real(c, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Eigenvalues of a Hermitian matrix, ascending, via its characteristic
/// polynomial. Requires a simple spectrum.
pub fn hermitian_eigenvalues(a: &Dense) -> Vec<f64> {
    let bound = a
        .iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    real_roots(&char_poly(a), bound)
}

/// `rho_S[i][j] = sum_rest psi[i, rest] conj(psi[j, rest])` for the leading
/// `kept` qubits of an `n`-qubit vector.
pub fn leading_reduced(psi: &[C], n: usize, kept: usize) -> Dense {
    let d = 1 << kept;
    let rest = 1 << (n - kept);
    let mut out = dense(d);
    for i in 0..d {
        for j in 0..d {
            for r in 0..rest {
                out[i][j] += psi[i * rest + r] * psi[j * rest + r].conj();
            }
        }
    }
    out
}

/// W-state pair reduced matrix written out by hand.
pub fn w_pair_matrix() -> Dense {
    let t = C::new(1.0 / 3.0, 0.0);
    let mut m = dense(4);
    m[0][0] = t;
    m[1][1] = t;
    m[2][2] = t;
    m[1][2] = t;
    m[2][1] = t;
    m
}

/// Concurrence of a two-qubit X-shaped state (nonzero entries only on the
/// diagonal and anti-diagonal): `2 max(0, |r12| - sqrt(r00 r33), |r03| - sqrt(r11 r22))`.
pub fn x_state_concurrence(m: &Dense) -> f64 {
    let a = m[1][2].norm() - (m[0][0].re * m[3][3].re).sqrt();
    let b = m[0][3].norm() - (m[1][1].re * m[2][2].re).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// CHSH straight from a two-party table in the library's layout.
pub fn chsh_from_table(t: &[f64]) -> f64 {
    let e = |x: usize, y: usize| {
        let o = (x * 2 + y) * 4;
        t[o] - t[o + 1] - t[o + 2] + t[o + 3]
    };
    e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1)
}

/// Two-party `<O(a) x O(b)>` for a real two-qubit amplitude vector, with
/// `O(t) = [[sin t, cos t], [cos t, -sin t]]`.
pub fn planar_correlator(psi: &[f64; 4], a: f64, b: f64) -> f64 {
    let o = |t: f64| [[t.sin(), t.cos()], [t.cos(), -t.sin()]];
    let (oa, ob) = (o(a), o(b));
    let mut v = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let m = oa[i >> 1][j >> 1] * ob[i & 1][j & 1];
            v += psi[i] * m * psi[j];
        }
    }
    v
}
