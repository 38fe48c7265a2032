//! Residual entropy of square ice from the largest transfer-matrix eigenvalue.
use bethe_lab::vertex::{ice_entropy, ice_entropy_exact, partition_function, VertexWeights};

fn main() -> bethe_lab::Result<()> {
    let ice = ice_entropy(12)?;
    for row in &ice.rows {
        println!("L = {:2}  (1/L) ln Lambda0 = {:.9}", row.sites, row.log_lambda_over_l);
    }
    println!("extrapolated {:.9}  exact {:.9}", ice.extrapolated, ice_entropy_exact());

    let z = partition_function(3, 4, &VertexWeights::ice())?;
    println!("ice configurations on a 3 x 4 torus: {}", z.re.round());
    Ok(())
}
