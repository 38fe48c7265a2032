//! Yang-Baxter equation and commuting transfer matrices of the six-vertex model.
use bethe_lab::linalg::commutator_norm;
use bethe_lab::vertex::{rtt_residual, transfer, ybe_residual, VertexWeights};
use bethe_lab::{C64, Result};

fn main() -> Result<()> {
    let (eta, rho) = (C64::new(0.6, 0.3), C64::new(1.0, 0.0));
    let (l, m, n) = (C64::new(0.2, -0.4), C64::new(-0.5, 0.1), C64::new(0.3, 0.7));
    println!("YBE residual {:.2e}", ybe_residual(l, m, n, eta, rho));

    let w = VertexWeights::parameterized(rho, C64::new(0.0, 0.0), eta);
    for sites in [4, 6, 8] {
        let t1 = transfer(l, sites, &w)?.full()?;
        let t2 = transfer(m, sites, &w)?.full()?;
        println!("L = {sites}: |[t(l), t(m)]| = {:.2e}", commutator_norm(&t1, &t2)?);
    }

    let xi = vec![C64::new(0.1, 0.0), C64::new(-0.2, 0.1), C64::new(0.3, -0.2), C64::new(0.0, 0.15)];
    let inhom = w.with_inhomogeneities(xi)?;
    println!("RTT residual, 4 inhomogeneous sites: {:.2e}", rtt_residual(l, m, 4, &inhom)?);
    Ok(())
}
