//! Antiferromagnetic ground state from the logarithmic Bethe equations,
//! compared with exact diagonalization.
use bethe_lab::coordinate::{energy_xxx, momentum_xxx};
use bethe_lab::equations::{bae_residual_xxx, solve_logbae, QuantumNumbers};
use bethe_lab::spin_chain::{build_xxx_hamiltonian, ground_state, ChainSpace};

fn main() -> bethe_lab::Result<()> {
    for sites in [4, 6, 8, 10, 12] {
        let n = sites / 2;
        let rep = solve_logbae(sites, n, &QuantumNumbers::ground_state(n))?;
        let e = energy_xxx(&rep.roots, 1.0)?.re;
        let h = build_xxx_hamiltonian(1.0, &ChainSpace::sector(sites, n)?)?;
        let (ed, _) = ground_state(&h)?;
        println!(
            "L = {sites:2}: E = {e:+.12}  ED {ed:+.12}  |dE| {:.1e}  P = {:.6}  residual {:.1e}",
            (e - ed).abs(),
            momentum_xxx(&rep.roots)?,
            bae_residual_xxx(&rep.roots)?
        );
    }

    let rep = solve_logbae(10, 5, &QuantumNumbers::ground_state(5))?;
    println!("\nroots at L = 10:");
    for r in &rep.roots.values {
        println!("  {:+.12}", r.re);
    }
    Ok(())
}
