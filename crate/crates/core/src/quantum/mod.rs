//! Few-qubit states, planar dichotomic observables and Born-rule behaviors.
//!
//! Party `0` is the most significant qubit, so `|abc>` has index
//! `4a + 2b + c`. Outcome `0` of an observable `O` is the `+1` eigenspace,
//! projector `(I + O) / 2`; outcome `1` is `(I - O) / 2`.

mod eigen;
mod matrix;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use eigen::{eig_hermitian, HermitianEigen};
pub use matrix::{kron_all, sigma_x, sigma_y, sigma_z, ComplexMatrix, C64};

use crate::error::{Error, Result};
use crate::model::{Behavior, Scenario};
use matrix::{ONE, ZERO};

/// Tolerance on Hermiticity and trace for density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-9;

fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    qubits: usize,
}

impl StateVector {
    /// Normalizes `amps`.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let qubits = qubit_count(amps.len())?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        Ok(Self {
            amps: amps.into_iter().map(|z| z / norm).collect(),
            qubits,
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << qubits];
        amps[index] = ONE;
        Self { amps, qubits }
    }

    /// Product of single-qubit kets, first ket is qubit 0.
    pub fn product(kets: &[[C64; 2]]) -> Result<Self> {
        let mut amps = vec![ONE];
        for k in kets {
            let norm = (k[0].norm_sqr() + k[1].norm_sqr()).sqrt();
            if !(norm > 1e-300) {
                return Err(Error::InvalidArgument("zero single-qubit ket".into()));
            }
            amps = amps
                .iter()
                .flat_map(|a| [a * k[0] / norm, a * k[1] / norm])
                .collect();
        }
        Self::new(amps)
    }

    /// Single-qubit ket with Bloch angles `(theta, phi)`.
    pub fn bloch_ket(theta: f64, phi: f64) -> [C64; 2] {
        [
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]
    }

    /// Haar-random pure state from normalized complex Gaussians.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> Self {
        let amps = (0..1 << qubits)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(amps).expect("gaussian vector is nonzero")
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn kron(&self, other: &StateVector) -> StateVector {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        StateVector {
            amps,
            qubits: self.qubits + other.qubits,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amps),
            qubits: self.qubits,
        }
    }

    /// `<psi| O_0 (x) O_1 (x) ... |psi>` with `None` meaning identity.
    pub fn expect_local(&self, ops: &[Option<&ComplexMatrix>]) -> Result<f64> {
        if ops.len() != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits,
                got: ops.len(),
            });
        }
        let mut phi = self.amps.clone();
        for (q, op) in ops.iter().enumerate() {
            let Some(op) = op else { continue };
            if op.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: op.dim(),
                });
            }
            apply_one_qubit(&mut phi, self.qubits, q, op);
        }
        let z: C64 = self.amps.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
        Ok(z.re)
    }
}

/// Applies a 2x2 operator to qubit `q` of an `n`-qubit amplitude vector.
fn apply_one_qubit(amps: &mut [C64], n: usize, q: usize, op: &ComplexMatrix) {
    let bit = 1 << (n - 1 - q);
    for i in 0..amps.len() {
        if i & bit != 0 {
            continue;
        }
        let (x0, x1) = (amps[i], amps[i | bit]);
        amps[i] = op[(0, 0)] * x0 + op[(0, 1)] * x1;
        amps[i | bit] = op[(1, 0)] * x0 + op[(1, 1)] * x1;
    }
}

/// Unit-trace positive semidefinite Hermitian matrix on qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    qubits: usize,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubit_count(matrix.dim())?;
        let herm = matrix.hermitian_deviation();
        if !(herm <= STATE_TOL) {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if !((tr.re - 1.0).abs() <= STATE_TOL && tr.im.abs() <= STATE_TOL) {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        let min = *eig_hermitian(&matrix)?.values.last().expect("nonempty");
        if min < -PSD_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "smallest eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix, qubits })
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let d = 1 << qubits;
        Self {
            matrix: ComplexMatrix::diagonal(&vec![1.0 / d as f64; d]),
            qubits,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kron(&other.matrix),
            qubits: self.qubits + other.qubits,
        }
    }

    pub fn mixture(states: &[DensityMatrix], weights: &[f64]) -> Result<DensityMatrix> {
        let Some(first) = states.first() else {
            return Err(Error::InvalidArgument("empty mixture".into()));
        };
        let sum: f64 = weights.iter().sum();
        if states.len() != weights.len()
            || weights.iter().any(|&w| w < 0.0)
            || (sum - 1.0).abs() > 1e-9
        {
            return Err(Error::BadWeights { sum });
        }
        let mut m = ComplexMatrix::zeros(first.dim());
        for (s, &w) in states.iter().zip(weights) {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    got: s.dim(),
                });
            }
            m = &m + &s.matrix.scale(C64::new(w, 0.0));
        }
        Ok(DensityMatrix {
            matrix: m,
            qubits: first.qubits,
        })
    }

    /// Conjugation `U rho U^dagger`.
    pub fn transform(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.dim(),
            });
        }
        Ok(DensityMatrix {
            matrix: &(u * &self.matrix) * &u.adjoint(),
            qubits: self.qubits,
        })
    }

    /// Reduced state on `keep` (sorted ascending, duplicates rejected).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.qubits;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "partial trace keeps no qubit".into(),
            ));
        }
        if keep.windows(2).any(|w| w[0] == w[1]) || keep.iter().any(|&q| q >= n) {
            return Err(Error::InvalidArgument(format!(
                "qubit subset {keep:?} invalid for {n} qubits"
            )));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let spread = |sub: usize, qubits: &[usize], width: usize| -> usize {
            qubits.iter().enumerate().fold(0, |acc, (i, &q)| {
                let b = (sub >> (width - 1 - i)) & 1;
                acc | (b << (n - 1 - q))
            })
        };
        let mut out = ComplexMatrix::zeros(1 << k);
        for t in 0..1usize << traced.len() {
            let toff = spread(t, &traced, traced.len());
            for i in 0..1usize << k {
                let ri = spread(i, &keep, k) | toff;
                for j in 0..1usize << k {
                    let cj = spread(j, &keep, k) | toff;
                    out[(i, j)] += self.matrix[(ri, cj)];
                }
            }
        }
        Ok(DensityMatrix {
            matrix: out,
            qubits: k,
        })
    }

    /// `Tr[O rho]`; fails when the imaginary part exceeds `1e-10`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        let z = op.trace_product(&self.matrix);
        if z.im.abs() > 1e-10 {
            return Err(Error::NotHermitian(z.im.abs()));
        }
        Ok(z.re)
    }

    /// `(<sigma_x>, <sigma_y>, <sigma_z>)` of a single qubit.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.qubits != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.qubits,
            });
        }
        Ok([
            self.expectation(&sigma_x())?,
            self.expectation(&sigma_y())?,
            self.expectation(&sigma_z())?,
        ])
    }

    pub fn largest_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(&self.matrix)?.values[0])
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.matrix.data().iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<DensityMatrix> {
        let dim = (pairs.len() as f64).sqrt().round() as usize;
        if dim * dim != pairs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not form a square matrix",
                pairs.len()
            )));
        }
        let data = pairs.iter().map(|p| C64::new(p[0], p[1])).collect();
        DensityMatrix::new(ComplexMatrix::from_vec(dim, data)?)
    }
}

/// Dichotomic observable: Hermitian with `O^2 = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    /// `cos(alpha) sigma_x + sin(alpha) sigma_z`.
    pub fn planar(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self {
            matrix: ComplexMatrix::from_real(2, &[s, c, c, -s]).expect("2x2"),
        }
    }

    /// `n . sigma` for a nonzero Bloch direction (normalized here).
    pub fn bloch(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !(norm > 1e-300) {
            return Err(Error::InvalidArgument("zero Bloch direction".into()));
        }
        let (x, y, z) = (n[0] / norm, n[1] / norm, n[2] / norm);
        Ok(Self {
            matrix: ComplexMatrix::from_vec(
                2,
                vec![
                    C64::new(z, 0.0),
                    C64::new(x, -y),
                    C64::new(x, y),
                    C64::new(-z, 0.0),
                ],
            )?,
        })
    }

    pub fn sigma_y() -> Self {
        Self { matrix: sigma_y() }
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        let herm = m.hermitian_deviation();
        if herm > STATE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let sq = &m * &m;
        let dev = sq.max_abs_diff(&ComplexMatrix::identity(m.dim()));
        if dev > STATE_TOL {
            return Err(Error::NotInvolutive(dev));
        }
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `(I + O)/2` for outcome 0, `(I - O)/2` for outcome 1.
    pub fn projector(&self, outcome: usize) -> ComplexMatrix {
        let sign = if outcome == 0 { 0.5 } else { -0.5 };
        let id = ComplexMatrix::identity(self.matrix.dim()).scale(C64::new(0.5, 0.0));
        &id + &self.matrix.scale(C64::new(sign, 0.0))
    }
}

/// `P(a_1..a_N | A_1..A_N) = Tr[(P^{A_1}_{a_1} (x) ... ) rho]`, one qubit
/// per party, `observables[party][setting]`.
pub fn born_behavior(rho: &DensityMatrix, observables: &[Vec<Observable>]) -> Result<Behavior> {
    let n = rho.qubits();
    if observables.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: observables.len(),
        });
    }
    for obs in observables {
        for o in obs {
            if o.matrix.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: o.matrix.dim(),
                });
            }
            let dev = (&o.matrix * &o.matrix).max_abs_diff(&ComplexMatrix::identity(2));
            if dev > STATE_TOL {
                return Err(Error::NotInvolutive(dev));
            }
        }
    }
    let sc = Scenario::new(observables.iter().map(Vec::len).collect(), vec![2; n])?;
    let proj: Vec<Vec<[ComplexMatrix; 2]>> = observables
        .iter()
        .map(|obs| {
            obs.iter()
                .map(|o| [o.projector(0), o.projector(1)])
                .collect()
        })
        .collect();
    let dim = rho.dim();
    let m = rho.matrix();
    let mut factors: Vec<&ComplexMatrix> = Vec::with_capacity(n);
    Ok(Behavior::from_fn(sc, |ctx, out| {
        factors.clear();
        for p in 0..n {
            factors.push(&proj[p][ctx[p]][out[p]]);
        }
        // Tr[Pi rho] = sum_ij Pi_ij rho_ji with Pi_ij a product over qubits
        let mut t = ZERO;
        for i in 0..dim {
            for j in 0..dim {
                let r = m[(j, i)];
                if r == ZERO {
                    continue;
                }
                let mut pij = ONE;
                for (q, f) in factors.iter().enumerate() {
                    let shift = n - 1 - q;
                    pij *= f[((i >> shift) & 1, (j >> shift) & 1)];
                    if pij == ZERO {
                        break;
                    }
                }
                t += pij * r;
            }
        }
        t.re
    }))
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn expectation(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<f64> {
    rho.expectation(op)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NamedState {
    /// `(|01> - |10>)/sqrt 2`
    Singlet,
    /// `(|00> + |11>)/sqrt 2`
    PhiPlus,
    /// `(|000> + |111>)/sqrt 2`
    Ghz,
    /// `(|001> + |010> + |100>)/sqrt 3`
    W,
    /// `mu|000> + sqrt((1 - mu^2)/2)(|110> + |101>)`
    Cg(f64),
    /// Single-qubit kets as `[[re0, im0], [re1, im1]]`.
    Product(Vec<[[f64; 2]; 2]>),
}

pub fn named_vector(kind: &NamedState) -> Result<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        NamedState::Singlet => StateVector::from_real(&[0.0, h, -h, 0.0]),
        NamedState::PhiPlus => StateVector::from_real(&[h, 0.0, 0.0, h]),
        NamedState::Ghz => {
            let mut a = [0.0; 8];
            a[0] = h;
            a[7] = h;
            StateVector::from_real(&a)
        }
        NamedState::W => {
            let t = 1.0 / 3f64.sqrt();
            let mut a = [0.0; 8];
            a[0b001] = t;
            a[0b010] = t;
            a[0b100] = t;
            StateVector::from_real(&a)
        }
        NamedState::Cg(mu) => {
            if !(0.0..=1.0).contains(mu) {
                return Err(Error::InvalidArgument(format!("mu = {mu} outside [0, 1]")));
            }
            let side = ((1.0 - mu * mu) / 2.0).sqrt();
            let mut a = [0.0; 8];
            a[0b000] = *mu;
            a[0b110] = side;
            a[0b101] = side;
            StateVector::from_real(&a)
        }
        NamedState::Product(kets) => {
            let kets: Vec<[C64; 2]> = kets
                .iter()
                .map(|k| [C64::new(k[0][0], k[0][1]), C64::new(k[1][0], k[1][1])])
                .collect();
            StateVector::product(&kets)
        }
    }
}

pub fn named_state(kind: &NamedState) -> Result<DensityMatrix> {
    Ok(named_vector(kind)?.density())
}
