//! Both pairs `(a, b)` and `(a, c)` of one three-qubit state violating the
//! Collins-Gisin inequality at once.

use monogamy::monogamy::{cg_double_violation_search, SearchOptions};

fn main() -> monogamy::Result<()> {
    let mus: Vec<f64> = (0..11).map(|i| 0.85 + 0.01 * i as f64).collect();
    let opts = SearchOptions {
        restarts: 20,
        seed: 7,
        ..Default::default()
    };
    let points = cg_double_violation_search(&mus, &opts)?;
    for p in &points {
        println!(
            "mu = {:.2}: C_ab = {:.6}, C_ac = {:.6}",
            p.mu, p.c_ab, p.c_ac
        );
    }
    let best = points
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("nonempty");
    println!(
        "best min(C_ab, C_ac) = {:.6} at mu = {:.2} (local bound 4)",
        best.value, best.mu
    );
    println!("angles {:?}", best.angles);
    Ok(())
}
