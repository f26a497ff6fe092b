//! CHSH of a maximally entangled pair at the optimal planar settings, and
//! the behavior table it produces.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use monogamy::functional::BellFunctional;
use monogamy::io::behavior_to_json;
use monogamy::quantum::{born_behavior, named_state, NamedState, Observable};

fn main() -> monogamy::Result<()> {
    let chsh = BellFunctional::chsh();
    let settings = vec![
        vec![Observable::planar(0.0), Observable::planar(FRAC_PI_2)],
        vec![
            Observable::planar(FRAC_PI_4),
            Observable::planar(-FRAC_PI_4),
        ],
    ];
    for (name, kind) in [
        ("phi+", NamedState::PhiPlus),
        ("singlet", NamedState::Singlet),
    ] {
        let b = born_behavior(&named_state(&kind)?, &settings)?;
        println!(
            "{name}: CHSH = {:.12} (2 sqrt 2 = {:.12})",
            chsh.evaluate(&b)?,
            2.0 * 2f64.sqrt()
        );
    }
    let b = born_behavior(&named_state(&NamedState::PhiPlus)?, &settings)?;
    println!("{}", behavior_to_json(&b));
    Ok(())
}
