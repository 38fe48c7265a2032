//! Coordinate Bethe vector: an eigenvector on-shell, only a bulk eigenvector off-shell.
use bethe_lab::coordinate::{bulk_eigen_residual, energy_xxx, highest_weight_residual, offshell_vector, RapiditySet};
use bethe_lab::equations::{solve_logbae, QuantumNumbers};
use bethe_lab::linalg::norm;
use bethe_lab::spin_chain::{build_xxx_hamiltonian, ChainSpace};
use bethe_lab::C64;

fn main() -> bethe_lab::Result<()> {
    let sites = 8;
    let rep = solve_logbae(sites, 3, &QuantumNumbers(vec![1, 2, 4]))?;
    let roots = rep.roots;
    let h = build_xxx_hamiltonian(1.0, &ChainSpace::sector(sites, 3)?)?;

    let v = offshell_vector(&roots)?.normalized();
    let e = energy_xxx(&roots, 1.0)?;
    println!("on-shell roots {:?}", roots.values.iter().map(|z| z.re).collect::<Vec<_>>());
    println!("  |H v - E v|  = {:.2e}", norm(&(h.apply(&v) - &v * e)));
    println!("  |S+ v|       = {:.2e}", highest_weight_residual(&v, &offshell_vector(&roots)?.basis)?);

    let moved: Vec<C64> = roots.values.iter().map(|z| z + 0.05).collect();
    let off = RapiditySet::xxx(sites, moved);
    let w = offshell_vector(&off)?.normalized();
    let f = energy_xxx(&off, 1.0)?;
    println!("shifted off-shell:");
    println!("  |H v - E v|  = {:.2e}", norm(&(h.apply(&w) - &w * f)));
    println!("  bulk residual = {:.2e}", bulk_eigen_residual(&off, 1.0)?);
    Ok(())
}
