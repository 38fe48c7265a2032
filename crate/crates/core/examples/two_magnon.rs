//! Every two-magnon eigenstate: real pairs, bound pairs and the singular pair.
use bethe_lab::equations::{classify_two_magnon, PairKind};
use bethe_lab::spin_chain::highest_weight_levels;

fn main() -> bethe_lab::Result<()> {
    let sites = 10;
    let report = classify_two_magnon(sites)?;
    for kind in [PairKind::RealPair, PairKind::BoundPair, PairKind::Singular] {
        println!("{kind:?}:");
        for s in report.of_kind(kind) {
            let roots: Vec<String> = s.roots.values.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            println!("  E = {:+.10}  roots [{}]", s.energy, roots.join(", "));
        }
    }
    let hw = highest_weight_levels(sites, 2, 1.0, 1e-8)?;
    println!("{} distinct Bethe levels, {} highest-weight ED levels", report.levels(1e-8).len(), hw.len());
    Ok(())
}
