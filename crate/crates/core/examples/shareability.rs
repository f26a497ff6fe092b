//! Noisy PR boxes `v PR + (1 - v) uniform`: which are 2-shareable under
//! no-signalling, and what the unrestricted delta construction gives.

use monogamy::functional::BellFunctional;
use monogamy::lp::DEFAULT_LP_TOL;
use monogamy::model::{named_box, BoxKind, Scenario};
use monogamy::sharing::{is_n_shareable, unrestricted_extension, ShareMode};

fn main() -> monogamy::Result<()> {
    let sc = Scenario::chsh();
    let pr = named_box(&BoxKind::Pr, &sc)?;
    let uniform = named_box(&BoxKind::Uniform, &sc)?;
    let chsh = BellFunctional::chsh();
    for k in 0..=10 {
        let v = k as f64 / 10.0;
        let b = pr.mix(&uniform, v)?;
        let verdict = is_n_shareable(&b, 2, ShareMode::Ns, DEFAULT_LP_TOL)?;
        println!(
            "v = {v:.1}  CHSH = {:.2}  2-shareable: {}  (score {:.3e})",
            chsh.evaluate(&b)?,
            verdict.shareable,
            verdict.score
        );
    }
    for n in 2..=4 {
        let cert = unrestricted_extension(&pr, n)?;
        println!(
            "unrestricted, {n} clones: symmetry {:e}, marginal {:e}",
            cert.symmetry_residual, cert.marginal_residual
        );
    }
    Ok(())
}
