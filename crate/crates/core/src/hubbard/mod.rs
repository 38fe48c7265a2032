//! One-dimensional Hubbard model: fermionic exact diagonalization, the
//! Lieb-Wu equations, and the nested Bethe wavefunction checked against it.

mod basis;
mod liebwu;
mod wavefunction;

pub use basis::{
    annihilate, build_fermion_shift, build_hubbard_hamiltonian, create, hop, orbital, raise_spin, FermionBasis,
    MAX_HUBBARD_SITES,
};
pub use liebwu::{energy_momentum, ground_quantum_numbers, liebwu_residual, solve_liebwu, NestedRoots};
pub use wavefunction::{
    assemble_state, nested_wavefunction, nested_wavefunction_in_sector, verify_nested, NestedVerification,
    MAX_NESTED_DOWN, MAX_NESTED_ELECTRONS,
};

#[cfg(test)]
mod tests;
