//! The XXZ Hamiltonian as the logarithmic derivative of the transfer matrix.
use bethe_lab::vertex::{hamiltonian_from_transfer_with_step, LINK_STEP};

fn main() -> bethe_lab::Result<()> {
    let (sites, eta) = (4, 0.3);
    let mut previous: Option<f64> = None;
    for k in 0..5 {
        let step = 0.04 / 2f64.powi(k);
        let dev = hamiltonian_from_transfer_with_step(sites, eta, 1.0, 1.0, step)?.deviation;
        match previous {
            Some(p) => println!("step {step:.4}: deviation {dev:.3e}  ratio {:.3}", p / dev),
            None => println!("step {step:.4}: deviation {dev:.3e}"),
        }
        previous = Some(dev);
    }
    let link = hamiltonian_from_transfer_with_step(sites, eta, 1.0, 1.0, LINK_STEP)?;
    println!("default step {LINK_STEP:e}: deviation {:.3e}", link.deviation);
    Ok(())
}
