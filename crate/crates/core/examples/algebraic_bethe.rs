//! B-operator states: eigenvectors of the transfer matrix on-shell, equal to
//! coordinate Bethe vectors for any roots.
use bethe_lab::algebraic::{apply_transfer, b_product_state, bethe_residual, restrict, transfer_eigenvalue, AbaModel};
use bethe_lab::coordinate::offshell_vector_xxz;
use bethe_lab::equations::{solve_logbae_xxz, QuantumNumbers};
use bethe_lab::linalg::{collinearity, norm};
use bethe_lab::{C64, I};

fn main() -> bethe_lab::Result<()> {
    let (sites, gamma) = (8, 0.9);
    let model = AbaModel::homogeneous(sites, I * gamma, C64::new(1.0, 0.0))?;
    let rep = solve_logbae_xxz(sites, 3, gamma, &QuantumNumbers::ground_state(3))?;
    let mu = rep.roots.values;
    println!("Bethe equations residual {:.2e}", bethe_residual(&mu, &model.vacuum()));

    let v = b_product_state(&model, &mu)?;
    for l in [C64::new(0.3, 0.2), C64::new(-0.7, 0.4)] {
        let lam = transfer_eigenvalue(l, &mu, &model.vacuum())?;
        let r = norm(&(apply_transfer(&model, l, &v)? - &v * lam)) / norm(&v);
        println!("t({l}) v = Lambda v  residual {r:.2e}");
    }

    let roots = [C64::new(0.2, 0.3), C64::new(-0.4, 0.1)];
    let coord = offshell_vector_xxz(&roots, model.eta, sites)?;
    let b = restrict(&b_product_state(&model, &roots)?, &coord.basis);
    println!("off-shell |cos angle| with the coordinate vector: {:.15}", collinearity(&b, &coord.amplitudes));
    Ok(())
}
