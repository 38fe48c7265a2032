//! Matrices, eigen-solvers, determinants and permutations shared by the
//! physics modules.

mod det;
mod eigen;
mod operator;
mod perm;

pub use det::{log_determinant, LogDet};
pub use eigen::{diagonalize, eigenvalues, group_levels as eigen_levels, Spectrum, Which};
pub use operator::{commutator_norm, MatrixJson, OperatorMatrix, Space, Storage, DENSE_LIMIT};
pub use perm::{for_each_permutation, permutation_sign};

use crate::C64;
use nalgebra::DVector;

/// Euclidean norm of a complex vector.
pub fn norm(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|<u, v>| / (|u| |v|)`; 1 means collinear.
pub fn collinearity(u: &DVector<C64>, v: &DVector<C64>) -> f64 {
    let nu = norm(u);
    let nv = norm(v);
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    u.dotc(v).norm() / (nu * nv)
}

/// Distance between two vectors after removing the best relative phase and
/// scale, relative to `|v|`.
pub fn ratio_distance(u: &DVector<C64>, v: &DVector<C64>) -> f64 {
    let vv = v.dotc(v);
    let nv = vv.re.sqrt();
    if nv == 0.0 {
        return norm(u);
    }
    let s = v.dotc(u) / vv;
    norm(&(u - v * s)) / (nv * s.norm().max(f64::MIN_POSITIVE))
}
