//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness; exits nonzero if any check fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::time::{Duration, Instant};

use monogamy::entanglement::{ckw_check_vector, concurrence};
use monogamy::functional::BellFunctional;
use monogamy::lp::DEFAULT_LP_TOL;
use monogamy::model::{named_box, Behavior, BoxKind, Scenario};
use monogamy::monogamy::{
    cg_double_violation_search, check_strengthened, check_triple, check_tv_tradeoff, ns_max,
    pb_probe, quantum_point, separable_orthogonal_search, support_trace, write_csv, SearchOptions,
    SupportClass, CHECK_TOL,
};
use monogamy::polytope::linear_form;
use monogamy::quantum::{
    born_behavior, named_state, named_vector, NamedState, Observable, StateVector,
};
use monogamy::sharing::{ns_extension, unrestricted_extension, Extension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TSIRELSON: f64 = 2.0 * SQRT_2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: &str, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = out.pass && in_time;
    let budget = limit
        .map(|l| format!(" / limit {:.0?}", l))
        .unwrap_or_default();
    println!(
        "{} [{id:>3}] {title}: {} ({:.2?}{budget})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed
    );
    pass
}

fn tsirelson_observables() -> Vec<Vec<Observable>> {
    vec![
        vec![Observable::planar(0.0), Observable::planar(FRAC_PI_2)],
        vec![
            Observable::planar(FRAC_PI_4),
            Observable::planar(-FRAC_PI_4),
        ],
    ]
}

fn random_ns_three_party(r: &mut ChaCha8Rng) -> Behavior {
    // a mixture of LP vertices for random objectives, symmetrized in (b, c)
    let sc = Scenario::uniform(3, 2, 2).unwrap();
    let verts: Vec<Behavior> = (0..3)
        .map(|_| {
            let obj: Vec<f64> = (0..sc.table_len())
                .map(|_| r.random_range(-1.0..1.0))
                .collect();
            ns_max(&sc, obj).unwrap().1
        })
        .collect();
    let w: Vec<f64> = (0..3).map(|_| r.random::<f64>()).collect();
    let total: f64 = w.iter().sum();
    let w: Vec<f64> = w.iter().map(|x| x / total).collect();
    let b = Behavior::mixture(&verts, &w).unwrap();
    b.mix(&b.reorder_parties(&[0, 2, 1]).unwrap(), 0.5).unwrap()
}

fn main() {
    let mut results = Vec::new();
    let chsh = BellFunctional::chsh();

    results.push(check(
        "1",
        "Tsirelson value",
        Some(Duration::from_secs(1)),
        || {
            let b = born_behavior(
                &named_state(&NamedState::PhiPlus).unwrap(),
                &tsirelson_observables(),
            )
            .unwrap();
            let v = chsh.evaluate(&b).unwrap();
            let oracle = common::chsh_from_table(b.table());
            Outcome {
                pass: (v - TSIRELSON).abs() < 1e-9 && (oracle - TSIRELSON).abs() < 1e-9,
                detail: format!(
                    "CHSH(phi+) = {v:.12}, |diff| = {:.1e}",
                    (v - TSIRELSON).abs()
                ),
            }
        },
    ));

    results.push(check("2", "No-signalling trade-off by LP", Some(Duration::from_secs(10)), || {
        let pair = Scenario::chsh();
        let (single, argmax) = ns_max(&pair, linear_form(&pair, |b| chsh.evaluate(b).unwrap())).unwrap();
        let pr = named_box(&BoxKind::Pr, &pair).unwrap();
        let pr_gap = argmax.max_abs_diff(&pr).unwrap();
        let three = Scenario::uniform(3, 2, 2).unwrap();
        let obj = linear_form(&three, |b| chsh.evaluate_pair(b, 0, 1).unwrap() + chsh.evaluate_pair(b, 0, 2).unwrap());
        let (sum, _) = ns_max(&three, obj).unwrap();
        Outcome {
            pass: (single - 4.0).abs() < 1e-6 && (sum - 4.0).abs() < 1e-6 && pr_gap < 1e-6,
            detail: format!("max CHSH = {single:.9}, max B_ab + B_ac = {sum:.9}, maximizer vs PR {pr_gap:.1e}"),
        }
    }));

    results.push(check(
        "3",
        "Shareability implies CHSH <= 2",
        Some(Duration::from_secs(120)),
        || {
            let mut r = ChaCha8Rng::seed_from_u64(3);
            let mut worst = 0.0f64;
            let mut extendable = 0;
            for _ in 0..100 {
                let b3 = random_ns_three_party(&mut r);
                let b = b3.marginal(&[0, 1], &[0, 0, 0]).unwrap().behavior;
                worst = worst.max(chsh.evaluate(&b).unwrap().abs());
                if ns_extension(&b, 2, DEFAULT_LP_TOL).unwrap().is_feasible() {
                    extendable += 1;
                }
            }
            let mut infeasible = 0;
            let mut tried = 0;
            let mut violating = 0;
            while violating < 20 && tried < 200_000 {
                tried += 1;
                let psi = StateVector::random(&mut r, 2).density();
                let obs: Vec<Vec<Observable>> = (0..2)
                    .map(|_| {
                        (0..2)
                            .map(|_| Observable::planar(r.random_range(-PI..PI)))
                            .collect()
                    })
                    .collect();
                let b = born_behavior(&psi, &obs).unwrap();
                if chsh.evaluate(&b).unwrap() > 2.1 {
                    violating += 1;
                    if matches!(
                        ns_extension(&b, 2, DEFAULT_LP_TOL).unwrap(),
                        Extension::Infeasible { .. }
                    ) {
                        infeasible += 1;
                    }
                }
            }
            Outcome {
                pass: worst <= 2.0 + 1e-6
                    && extendable == 100
                    && violating == 20
                    && infeasible == 20,
                detail: format!(
                    "100 shareable: max |CHSH| = {worst:.9}, {extendable}/100 extend at N = 2; \
                 {infeasible}/{violating} quantum CHSH > 2.1 infeasible ({tried} sampled)"
                ),
            }
        },
    ));

    results.push(check("4", "Unrestricted shareability", None, || {
        let mut r = ChaCha8Rng::seed_from_u64(4);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let mut t: Vec<f64> = (0..16).map(|_| r.random::<f64>()).collect();
            for c in t.chunks_mut(4) {
                let s: f64 = c.iter().sum();
                c.iter_mut().for_each(|x| *x /= s);
            }
            let b = Behavior::new(Scenario::chsh(), t).unwrap();
            for n in 2..=4 {
                worst = worst.max(unrestricted_extension(&b, n).unwrap().max_residual());
            }
        }
        Outcome {
            pass: worst == 0.0,
            detail: format!("150 certificates, largest residual {worst:e}"),
        }
    }));

    results.push(check("5", "Quantum trade-off sampling", Some(Duration::from_secs(120)), || {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let (mut max_tv, mut fail, mut order) = (0.0f64, 0, 0);
        for _ in 0..10_000 {
            let rho = StateVector::random(&mut r, 3).density();
            let angles: Vec<[f64; 2]> = (0..3).map(|_| [r.random_range(-PI..PI), r.random_range(-PI..PI)]).collect();
            let p = quantum_point(&rho, &angles).unwrap();
            let tv = check_tv_tradeoff(&p, CHECK_TOL);
            let strong = check_strengthened(&p, CHECK_TOL).unwrap();
            max_tv = max_tv.max(tv.lhs);
            fail += usize::from(!tv.passes || !strong.passes);
            order += usize::from(strong.slack > tv.slack + 1e-12);
        }
        let witness = named_state(&NamedState::PhiPlus).unwrap().kron(&StateVector::basis(1, 0).density());
        let p = quantum_point(&witness, &[[0.0, FRAC_PI_2], [FRAC_PI_4, -FRAC_PI_4], [0.0, FRAC_PI_2]]).unwrap();
        let edge = p.b_ab.powi(2) + p.b_ac.powi(2);
        Outcome {
            pass: max_tv <= 8.0 + 1e-9 && fail == 0 && order == 0 && edge >= 8.0 - 1e-6,
            detail: format!(
                "max B_ab^2 + B_ac^2 = {max_tv:.6}, {fail} failures, {order} slack-order breaks; witness {edge:.9}"
            ),
        }
    }));

    results.push(check("6", "Naive triple bound falsified", None, || {
        let z = FRAC_PI_2;
        let p = quantum_point(&StateVector::basis(3, 0).density(), &[[z, z]; 3]).unwrap();
        let r = check_triple(&p, CHECK_TOL).unwrap();
        let lhs = r[0].lhs;
        Outcome {
            pass: (lhs - 12.0).abs() < 1e-9 && !r[1].passes && r[0].passes,
            detail: format!(
                "|000>, sigma_z settings: squared sum {lhs}, naive bound 8 violated: {}",
                !r[1].passes
            ),
        }
    }));

    results.push(check("7", "CKW on random pure states", Some(Duration::from_secs(60)), || {
        let mut r = ChaCha8Rng::seed_from_u64(7);
        let mut worst3 = f64::INFINITY;
        for i in 0..10_000 {
            worst3 = worst3.min(ckw_check_vector(&StateVector::random(&mut r, 3), i % 3).unwrap().residual);
        }
        let mut worst4 = f64::INFINITY;
        for i in 0..1_000 {
            worst4 = worst4.min(ckw_check_vector(&StateVector::random(&mut r, 4), i % 4).unwrap().residual);
        }
        let w = ckw_check_vector(&named_vector(&NamedState::W).unwrap(), 0).unwrap();
        let w_ok = w.pairwise.iter().all(|(_, t)| (t - 4.0 / 9.0).abs() < 1e-9)
            && (w.cut - 8.0 / 9.0).abs() < 1e-9
            && w.residual.abs() < 1e-9;
        Outcome {
            pass: worst3 >= -1e-9 && worst4 >= -1e-9 && w_ok,
            detail: format!(
                "min residual 3 qubits {worst3:.3e}, 4 qubits {worst4:.3e}; W: cut {:.12}, residual {:.1e}",
                w.cut, w.residual
            ),
        }
    }));

    results.push(check("8", "Identical entangled W pairs", None, || {
        let w = named_state(&NamedState::W).unwrap();
        let (ab, ac) = (
            w.partial_trace(&[0, 1]).unwrap(),
            w.partial_trace(&[0, 2]).unwrap(),
        );
        let gap = ab.matrix().max_abs_diff(ac.matrix());
        let (c1, c2) = (concurrence(&ab).unwrap(), concurrence(&ac).unwrap());
        Outcome {
            pass: gap < 1e-12 && (c1 - 2.0 / 3.0).abs() < 1e-9 && (c2 - 2.0 / 3.0).abs() < 1e-9,
            detail: format!("entry gap {gap:e}, concurrences {c1:.12} and {c2:.12}"),
        }
    }));

    results.push(check(
        "9",
        "Collins-Gisin double violation",
        Some(Duration::from_secs(300)),
        || {
            let mus: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
            let opts = SearchOptions {
                restarts: 20,
                ..Default::default()
            };
            let pts = cg_double_violation_search(&mus, &opts).unwrap();
            let best = pts
                .iter()
                .max_by(|a, b| a.value.total_cmp(&b.value))
                .unwrap();
            Outcome {
                pass: best.value > 4.0,
                detail: format!(
                    "best min(C_ab, C_ac) = {:.6} at mu = {:.2} (margin {:.4})",
                    best.value,
                    best.mu,
                    best.value - 4.0
                ),
            }
        },
    ));

    results.push(check("10", "Separable orthogonal square", None, || {
        let opts = SearchOptions {
            restarts: 20,
            ..Default::default()
        };
        let best = separable_orthogonal_search(&[0.0, PI], &opts)
            .into_iter()
            .map(|(_, v)| v)
            .fold(f64::MIN, f64::max);
        Outcome {
            pass: (best - SQRT_2).abs() < 1e-6,
            detail: format!("max |CHSH| = {best:.9}"),
        }
    }));

    results.push(check("11", "Four-party probe", Some(Duration::from_secs(600)), || {
        match pb_probe(&BellFunctional::collins_gisin(), CHECK_TOL) {
            Ok(r) => Outcome {
                pass: r.max_abs_sum.is_finite() && r.t_star.is_finite(),
                detail: format!(
                    "max |C_ab| + |C_ac| + |C_ad| = {:.6} vs 3 LR = {} ({}), at {:?}; t* = {:.6} vs 2 LR = {} \
                     (both pairs exceed: {})",
                    r.max_abs_sum,
                    r.bound_check.bound,
                    if r.bound_check.passes { "within" } else { "exceeds" },
                    r.pair_values.map(|v| (v * 1e6).round() / 1e6),
                    r.t_star,
                    2.0 * r.local_bound,
                    r.both_pairs_exceed
                ),
            },
            Err(e) => Outcome {
                pass: false,
                detail: format!("probe failed: {e}"),
            },
        }
    }));

    results.push(check("F1", "Support traces nest", None, || {
        let grid = 72;
        let opts = SearchOptions {
            restarts: 20,
            ..Default::default()
        };
        let dir = tempfile::tempdir().unwrap();
        let mut traces = Vec::new();
        for class in [
            SupportClass::Local,
            SupportClass::Quantum,
            SupportClass::Ns,
            SupportClass::SeparableOrthogonal,
        ] {
            let pts = support_trace(class, grid, &opts).unwrap();
            let path = dir.path().join(format!("{}.csv", class.name()));
            write_csv(std::fs::File::create(&path).unwrap(), class, &pts).unwrap();
            traces.push(pts);
        }
        let (local, quantum, ns, sep) = (&traces[0], &traces[1], &traces[2], &traces[3]);
        let mut worst = f64::INFINITY;
        let mut square = 0.0f64;
        for i in 0..grid {
            worst = worst.min(quantum[i].value - local[i].value).min(ns[i].value - quantum[i].value);
            let (c, s) = (local[i].theta.cos(), local[i].theta.sin());
            square = square.max((sep[i].value - SQRT_2 * (c.abs() + s.abs())).abs());
        }
        let files = std::fs::read_dir(dir.path()).unwrap().count();
        Outcome {
            pass: worst >= -1e-6 && files == 4,
            detail: format!(
                "{grid} directions, smallest containment gap {worst:.2e}; separable trace off sqrt2 square by {square:.1e}"
            ),
        }
    }));

    let failed = results.iter().filter(|p| !**p).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
