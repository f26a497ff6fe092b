//! Tangles of named and random pure states: `tau(a:b) + tau(a:c) <= tau(a:bc)`.

use monogamy::entanglement::{ckw_check_vector, concurrence};
use monogamy::quantum::{named_vector, NamedState, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> monogamy::Result<()> {
    for (name, kind) in [
        ("GHZ", NamedState::Ghz),
        ("W", NamedState::W),
        ("CG(0.9)", NamedState::Cg(0.9)),
    ] {
        let r = ckw_check_vector(&named_vector(&kind)?, 0)?;
        println!(
            "{name}: pairwise {:?}, cut {:.6}, residual {:.3e}",
            r.pairwise, r.cut, r.residual
        );
    }

    let w = named_vector(&NamedState::W)?.density();
    let (ab, ac) = (w.partial_trace(&[0, 1])?, w.partial_trace(&[0, 2])?);
    println!(
        "W: rho_ab and rho_ac differ by {:e}, concurrences {:.9} and {:.9}",
        ab.matrix().max_abs_diff(ac.matrix()),
        concurrence(&ab)?,
        concurrence(&ac)?
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for qubits in [3, 4] {
        let worst = (0..1000)
            .map(|_| {
                ckw_check_vector(&StateVector::random(&mut rng, qubits), 0).map(|r| r.residual)
            })
            .collect::<monogamy::Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        println!("{qubits} qubits, 1000 random states: smallest residual {worst:.3e}");
    }
    Ok(())
}
