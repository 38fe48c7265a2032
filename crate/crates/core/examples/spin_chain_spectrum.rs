//! Exact spectrum of the periodic Heisenberg chain, sector by sector.
use bethe_lab::linalg::{eigen_levels, eigenvalues};
use bethe_lab::spin_chain::{build_xxx_hamiltonian, highest_weight_levels, ChainSpace};

fn main() -> bethe_lab::Result<()> {
    let sites = 8;
    for down in 0..=sites / 2 {
        let h = build_xxx_hamiltonian(1.0, &ChainSpace::sector(sites, down)?)?;
        let e = eigenvalues(&h)?;
        let levels = eigen_levels(&e, 1e-9);
        println!("N = {down}: dim {:3}, ground {:+.10}, {} levels", h.dim(), e[0], levels.len());
    }

    // Highest-weight levels are what the Bethe ansatz labels.
    let hw = highest_weight_levels(sites, 2, 1.0, 1e-9)?;
    println!("\nhighest-weight levels with two down spins:");
    for (e, m) in hw {
        println!("  {e:+.10}  x{m}");
    }
    Ok(())
}
