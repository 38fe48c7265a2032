//! Scalar product of an on-shell and an off-shell Bethe vector as a determinant.
use bethe_lab::algebraic::{pairing_report, AbaModel};
use bethe_lab::equations::{solve_logbae_xxz, QuantumNumbers};
use bethe_lab::{C64, I};

fn main() -> bethe_lab::Result<()> {
    let (sites, gamma) = (8, 0.9);
    let model = AbaModel::homogeneous(sites, I * gamma, C64::new(1.0, 0.0))?;
    for n in 1..=3 {
        let mu = solve_logbae_xxz(sites, n, gamma, &QuantumNumbers::ground_state(n))?.roots.values;
        let lambda: Vec<C64> = (0..n).map(|k| C64::new(0.4 * k as f64 - 0.3, 0.2 + 0.1 * k as f64)).collect();
        let rep = pairing_report(&model, &mu, &lambda)?;
        println!(
            "N = {n}: determinant {:+.12e}{:+.12e}i  explicit {:+.12e}{:+.12e}i  rel err {:.1e}",
            rep.slavnov.re, rep.slavnov.im, rep.bruteforce.re, rep.bruteforce.im, rep.rel_err
        );
    }
    Ok(())
}
