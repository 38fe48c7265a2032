//! Ground-state root density and the energy per site of the infinite chain.
use bethe_lab::thermo::{closed_form_density, condensation_check, density_d, gs_energy_density, solve_root_density};

fn main() -> bethe_lab::Result<()> {
    let exact = -std::f64::consts::LN_2;
    for q in [1.0, 2.0, 4.0, 8.0, f64::INFINITY] {
        let rho = solve_root_density(q, 256)?;
        println!(
            "q = {q:>4}: rho(0) = {:.8}  filling {:.8}  e = {:+.10}  (e + ln 2 = {:.1e})",
            rho.evaluate(0.0),
            density_d(&rho),
            gs_energy_density(&rho, 1.0),
            gs_energy_density(&rho, 1.0) - exact
        );
    }
    println!("closed form at 0: {:.8}", closed_form_density(0.0));

    println!("\nroot sums against the density integral:");
    for row in condensation_check(&[8, 16, 32, 64], |l| 1.0 / (l * l + 0.25))? {
        println!("  L = {:3}: {:.10} vs {:.10}", row.sites, row.sum, row.integral);
    }
    Ok(())
}
