//! Quantum trade-off checks on random pure states with random planar
//! settings, and the product state that breaks the naive triple bound.

use std::f64::consts::PI;

use monogamy::monogamy::{check_all, quantum_point, CHECK_TOL};
use monogamy::quantum::StateVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> monogamy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = std::collections::BTreeMap::new();
    for _ in 0..2000 {
        let rho = StateVector::random(&mut rng, 3).density();
        let angles: Vec<[f64; 2]> = (0..3)
            .map(|_| [rng.random_range(-PI..PI), rng.random_range(-PI..PI)])
            .collect();
        for r in check_all(&quantum_point(&rho, &angles)?, CHECK_TOL)? {
            let slot = worst.entry(r.id.label()).or_insert(f64::INFINITY);
            *slot = slot.min(r.slack);
        }
    }
    for (id, slack) in &worst {
        println!("{id:<10} smallest slack {slack:.3e}");
    }

    let zero = StateVector::basis(3, 0).density();
    let z = PI / 2.0;
    let p = quantum_point(&zero, &[[z, z]; 3])?;
    println!(
        "|000> with sigma_z settings: B = ({}, {}, {}), squared sum {}",
        p.b_ab,
        p.b_ac,
        p.b_bc.unwrap_or(f64::NAN),
        p.b_ab.powi(2) + p.b_ac.powi(2) + p.b_bc.unwrap_or(f64::NAN).powi(2)
    );
    for r in check_all(&p, CHECK_TOL)? {
        println!(
            "  {:<10} lhs {:>6.3} bound {:>6.3} passes {}",
            r.id.label(),
            r.lhs,
            r.bound,
            r.passes
        );
    }
    Ok(())
}
