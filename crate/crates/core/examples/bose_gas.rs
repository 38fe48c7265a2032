//! Lieb-Liniger roots from weak to infinite repulsion.
use bethe_lab::equations::{bose_energy, solve_bose, QuantumNumbers};
use std::f64::consts::PI;

fn main() -> bethe_lab::Result<()> {
    let (ring, n) = (1.0, 4);
    let q = QuantumNumbers::ground_state(n);
    for c in [0.1, 1.0, 10.0, 1e3, 1e6] {
        let rep = solve_bose(ring, n, c, &q)?;
        let k: Vec<String> = rep.roots.values.iter().map(|z| format!("{:+.6}", z.re)).collect();
        println!("c = {c:>9}: E = {:10.6}  k = [{}]", bose_energy(&rep.roots).re, k.join(", "));
    }
    let free: Vec<String> = (0..n).map(|j| format!("{:+.6}", 2.0 * PI * (j as f64 - 1.5) / ring)).collect();
    println!("free fermions:       k = [{}]", free.join(", "));
    Ok(())
}
