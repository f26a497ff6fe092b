//! The four support traces of the `(B_ab, B_ac)` regions, written as CSV to
//! the directory given as the first argument (default: the temp dir).

use std::fs::File;
use std::path::PathBuf;

use monogamy::monogamy::{support_trace, write_csv, SearchOptions, SupportClass};

fn main() -> monogamy::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let grid = 72;
    let opts = SearchOptions {
        restarts: 10,
        ..Default::default()
    };
    let mut traces = Vec::new();
    for class in [
        SupportClass::Local,
        SupportClass::SeparableOrthogonal,
        SupportClass::Quantum,
        SupportClass::Ns,
    ] {
        let pts = support_trace(class, grid, &opts)?;
        let path = dir.join(format!("{}.csv", class.name()));
        write_csv(File::create(&path)?, class, &pts)?;
        println!("{:<21} -> {}", class.name(), path.display());
        traces.push(pts);
    }
    let (local, quantum, ns) = (&traces[0], &traces[2], &traces[3]);
    let contained = (0..grid).all(|i| {
        local[i].value <= quantum[i].value + 1e-6 && quantum[i].value <= ns[i].value + 1e-6
    });
    println!("local <= quantum <= ns on every direction: {contained}");
    for i in [0, grid / 8, grid / 4] {
        println!(
            "theta = {:.4}: local {:.6}, quantum {:.6}, ns {:.6}",
            local[i].theta, local[i].value, quantum[i].value, ns[i].value
        );
    }
    Ok(())
}
