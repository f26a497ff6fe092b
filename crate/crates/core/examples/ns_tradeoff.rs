//! Over no-signalling boxes a single CHSH reaches 4, but `B_ab + B_ac`
//! shared through one party still only reaches 4.

use monogamy::functional::BellFunctional;
use monogamy::model::{named_box, BoxKind, Scenario};
use monogamy::monogamy::{check_ns_tradeoff, ns_max, pair_values, CHECK_TOL};
use monogamy::polytope::linear_form;

fn main() -> monogamy::Result<()> {
    let chsh = BellFunctional::chsh();
    let pair = Scenario::chsh();
    let (single, argmax) = ns_max(
        &pair,
        linear_form(&pair, |b| chsh.evaluate(b).expect("2-party")),
    )?;
    println!("max CHSH over the 2-party polytope: {single:.9}");
    println!(
        "PR box CHSH: {}",
        chsh.evaluate(&named_box(&BoxKind::Pr, &pair)?)?
    );
    println!(
        "LP maximizer equals PR: {:?}",
        argmax.max_abs_diff(&named_box(&BoxKind::Pr, &pair)?)
    );

    let three = Scenario::uniform(3, 2, 2)?;
    let obj = linear_form(&three, |b| {
        chsh.evaluate_pair(b, 0, 1).expect("3-party")
            + chsh.evaluate_pair(b, 0, 2).expect("3-party")
    });
    let (sum, b) = ns_max(&three, obj)?;
    let p = pair_values(&b)?;
    println!(
        "max B_ab + B_ac: {sum:.9} at B_ab = {:.6}, B_ac = {:.6}",
        p.b_ab, p.b_ac
    );
    println!("{:?}", check_ns_tradeoff(&p, CHECK_TOL));
    Ok(())
}
