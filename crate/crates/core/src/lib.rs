//! Numerical laboratory for the Bethe Ansatz.
//!
//! Every analytic construction here (coordinate and algebraic Bethe vectors,
//! Bethe-equation solvers, six-vertex transfer matrices, the Slavnov pairing,
//! the nested Hubbard ansatz) is paired with a brute-force counterpart so the
//! two can be compared at small system size.
//!
//! Conventions shared by all modules:
//!
//! * Site `j` (1-based) of a spin chain is bit `j - 1` of a configuration
//!   word; a set bit is a down spin. Full-space basis index = the word itself.
//! * The auxiliary space of a monodromy matrix is the slowest index:
//!   `index = aux * 2^L + config`, with aux `0` the up state.
//! * Complex numbers serialize as `[re, im]`.

pub mod algebraic;
pub mod coordinate;
pub mod equations;
pub mod error;
pub mod hubbard;
pub mod io;
pub mod linalg;
pub mod runner;
pub mod spin_chain;
pub mod thermo;
pub mod vertex;

pub use error::{LabError, Result};
pub use num_complex::Complex64 as C64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
