//! Six-vertex model: R-matrix, Yang-Baxter checks, monodromy and transfer
//! matrices, partition functions, the XXZ Hamiltonian as the logarithmic
//! derivative of the transfer matrix, and the square-ice entropy.

pub(crate) mod transfer;
mod weights;

pub use transfer::{
    hamiltonian_from_transfer, hamiltonian_from_transfer_with_step, ice_entropy, ice_entropy_exact, monodromy,
    partition_function, partition_function_bruteforce, perron_root, rtt_residual, transfer, transfer_block, HamiltonianLink, IceEntropy, IceRow,
    TransferMatrix, LINK_STEP, MAX_VERTEX_SITES,
};
pub use weights::{r_from_weights, r_matrix, ybe_residual, ybe_residual_with, Parameterization, VertexWeights};
