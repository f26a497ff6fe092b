//! Local decompositions by LP, and local bounds by vertex enumeration.

use monogamy::functional::BellFunctional;
use monogamy::localpoly::{local_bound, local_decomposition, strategy_count, Locality};
use monogamy::lp::DEFAULT_LP_TOL;
use monogamy::model::{named_box, BoxKind, Scenario};

fn main() -> monogamy::Result<()> {
    let sc = Scenario::chsh();
    let pr = named_box(&BoxKind::Pr, &sc)?;
    let uniform = named_box(&BoxKind::Uniform, &sc)?;
    println!("{} deterministic strategies", strategy_count(&sc)?);
    for v in [0.4, 0.5, 0.6] {
        let b = pr.mix(&uniform, v)?;
        match local_decomposition(&b, DEFAULT_LP_TOL)? {
            Locality::Local(m) => {
                let err = m.reconstruct(&sc).max_abs_diff(&b).unwrap_or(f64::NAN);
                println!(
                    "v = {v}: local, {} strategies, reconstruction error {err:.2e}",
                    m.weights.len()
                );
            }
            Locality::NotLocal { score } => println!("v = {v}: not local (score {score:.3e})"),
        }
    }
    for f in [BellFunctional::chsh(), BellFunctional::collins_gisin()] {
        println!(
            "{}: local bound {}",
            f.name,
            local_bound(&f, &f.scenario())?
        );
    }
    Ok(())
}
