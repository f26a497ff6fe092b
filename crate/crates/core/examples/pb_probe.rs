//! Four parties, three settings each: how large can |C_ab| + |C_ac| + |C_ad|
//! get over no-signalling boxes, and can both C_ab + C_ac and C_ab + C_ad
//! exceed twice the local bound at once?

use std::time::Instant;

use monogamy::functional::BellFunctional;
use monogamy::monogamy::pb_probe;

fn main() -> monogamy::Result<()> {
    let cg = BellFunctional::collins_gisin();
    let start = Instant::now();
    let r = pb_probe(&cg, 1e-9)?;
    println!("local bound LR = {}", r.local_bound);
    for p in &r.patterns {
        println!("signs {:?}: {:.9}", p.signs, p.value);
    }
    println!(
        "max |C_ab| + |C_ac| + |C_ad| = {:.9} (3 LR = {}), at {:?}",
        r.max_abs_sum, r.bound_check.bound, r.pair_values
    );
    println!(
        "t* = {:.9} at {:?}; exceeds 2 LR: {}",
        r.t_star, r.t_pair_values, r.both_pairs_exceed
    );
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
