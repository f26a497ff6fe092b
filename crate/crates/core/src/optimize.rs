//! Derivative-free maximization: Nelder-Mead simplex with random restarts.

use rand::Rng;

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub initial_step: f64,
    pub max_evals: usize,
    /// Stops when the spread of simplex values falls below this.
    pub f_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            max_evals: 4000,
            f_tol: 1e-13,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimumPoint {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl NelderMead {
    /// Maximizes `f` starting from `x0`.
    pub fn maximize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> OptimumPoint {
        let n = x0.len();
        let g = |x: &[f64]| -f(x);
        let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += self.initial_step;
            simplex.push(v);
        }
        let mut vals: Vec<f64> = simplex.iter().map(|v| g(v)).collect();
        let mut evals = n + 1;

        while evals < self.max_evals {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            vals = order.iter().map(|&i| vals[i]).collect();
            if (vals[n] - vals[0]).abs() <= self.f_tol * (1.0 + vals[0].abs()) {
                break;
            }

            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let xr = along(-1.0);
            let fr = g(&xr);
            evals += 1;
            if fr < vals[0] {
                let xe = along(-2.0);
                let fe = g(&xe);
                evals += 1;
                if fe < fr {
                    simplex[n] = xe;
                    vals[n] = fe;
                } else {
                    simplex[n] = xr;
                    vals[n] = fr;
                }
                continue;
            }
            if fr < vals[n - 1] {
                simplex[n] = xr;
                vals[n] = fr;
                continue;
            }
            let (xc, fc) = if fr < vals[n] {
                let x = along(-0.5);
                let v = g(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = g(&x);
                (x, v)
            };
            evals += 1;
            if fc < vals[n].min(fr) {
                simplex[n] = xc;
                vals[n] = fc;
                continue;
            }
            for i in 1..=n {
                let shrunk: Vec<f64> = simplex[0]
                    .iter()
                    .zip(&simplex[i])
                    .map(|(b, v)| b + 0.5 * (v - b))
                    .collect();
                vals[i] = g(&shrunk);
                simplex[i] = shrunk;
            }
            evals += n;
        }

        let best = (0..=n)
            .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
            .expect("nonempty");
        OptimumPoint {
            x: simplex[best].clone(),
            value: -vals[best],
            evals,
        }
    }

    /// Best of `restarts` runs from points drawn by `start`; ties keep the
    /// earliest run.
    pub fn maximize_multistart<R: Rng + ?Sized>(
        &self,
        f: impl Fn(&[f64]) -> f64,
        restarts: usize,
        rng: &mut R,
        mut start: impl FnMut(&mut R) -> Vec<f64>,
    ) -> Option<OptimumPoint> {
        let mut best: Option<OptimumPoint> = None;
        for _ in 0..restarts {
            let x0 = start(rng);
            let run = self.maximize(&f, &x0);
            if best.as_ref().is_none_or(|b| run.value > b.value) {
                best = Some(run);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn concave_quadratic() {
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 3.0 * (x[1] + 2.0).powi(2) + 5.0;
        let r = NelderMead::default().maximize(f, &[0.0, 0.0]);
        assert!((r.value - 5.0).abs() < 1e-10);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] + 2.0).abs() < 1e-4);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let nm = NelderMead {
            max_evals: 20_000,
            ..Default::default()
        };
        let r = nm.maximize(f, &[-1.2, 1.0]);
        assert!(r.value > -1e-9, "{r:?}");
    }

    #[test]
    fn multistart_escapes_local_maximum() {
        // global maximum 2 at x = 3, local maximum 1 at x = -3
        let f = |x: &[f64]| (-(x[0] - 3.0).powi(2)).exp() * 2.0 + (-(x[0] + 3.0).powi(2)).exp();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let nm = NelderMead::default();
        let r = nm
            .maximize_multistart(f, 20, &mut rng, |r| vec![r.random_range(-6.0..6.0)])
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }
}
