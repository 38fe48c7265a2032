//! Nested Bethe states of the Hubbard chain checked against its exact spectrum.
use bethe_lab::hubbard::{build_hubbard_hamiltonian, ground_quantum_numbers, solve_liebwu, verify_nested, NestedRoots};
use bethe_lab::linalg::eigenvalues;

fn main() -> bethe_lab::Result<()> {
    let (sites, electrons, down) = (6, 2, 1);
    let (charge, spin) = ground_quantum_numbers(electrons, down);
    for u in [1.0, 2.0, 4.0] {
        let rep = solve_liebwu(sites, electrons, down, u, &charge, &spin)?;
        let roots = NestedRoots::from_rapidities(&rep.roots)?;
        let check = verify_nested(&roots)?;
        let ed = eigenvalues(&build_hubbard_hamiltonian(sites, u, electrons, down)?)?;
        println!(
            "u = {u}: E = {:+.10} (ED ground {:+.10})  P = {:.6}  |Hv - Ev| {:.1e}  |S+ v| {:.1e}",
            check.energy.re, ed[0], check.momentum.re, check.eigen_residual, check.spin_raise_residual
        );
    }
    Ok(())
}
