//! Bethe equations: residuals, damped-Newton solvers on the logarithmic
//! form, admissibility, and the two-magnon sector.
//!
//! Residuals of the product form are measured as `|ln LHS - ln RHS|` with
//! the imaginary part wrapped into `(-pi, pi]`. This is a relative error,
//! which stays meaningful when bound pairs make both sides exponentially
//! large or small.

mod bose;
mod newton;
mod two_magnon;
mod xxx;
mod xxz;

pub use bose::{bae_residual_bose, bose_energy, solve_bose};
pub use newton::{damped_newton, NewtonOptions, NewtonOutcome};
pub use two_magnon::{classify_two_magnon, PairKind, TwoMagnonReport, TwoMagnonSolution};
pub use xxx::{bae_residual_xxx, logbae_residual, solve_logbae, solve_logbae_with};
pub use xxz::{bae_residual_xxz, energy_xxz, logbae_residual_xxz, solve_logbae_xxz};

use crate::coordinate::{Length, Model, ModelParams, RapiditySet, ROOT_EQ_TOL};
use crate::error::{domain, Result};
use crate::{C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Integers labelling a solution of the logarithmic equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers(pub Vec<i64>);

impl QuantumNumbers {
    /// `n_j = j`, the lowest state of each sector.
    pub fn ground_state(count: usize) -> Self {
        Self((1..=count as i64).collect())
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub(crate) fn check(&self, count: usize) -> Result<()> {
        if self.0.len() != count {
            return domain(format!("{} quantum numbers for N = {count}", self.0.len()));
        }
        if self.0.windows(2).any(|w| w[0] >= w[1]) {
            return domain(format!("quantum numbers {:?} are not strictly increasing", self.0));
        }
        Ok(())
    }
}

/// Outcome of a Bethe-equation solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ReportWire", into = "ReportWire")]
pub struct SolveReport {
    pub roots: RapiditySet,
    pub qnums: Vec<i64>,
    /// Second family of quantum numbers (Hubbard spin rapidities).
    pub spin_qnums: Option<Vec<i64>>,
    /// Max residual of the solved (logarithmic) system.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct ReportWire {
    model: Model,
    #[serde(rename = "L")]
    length: Length,
    #[serde(rename = "N")]
    count: usize,
    #[serde(default)]
    params: ModelParams,
    qnums: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    spin_qnums: Option<Vec<i64>>,
    roots: Vec<C64>,
    residual: f64,
    iterations: usize,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    seed: Option<u64>,
}

impl TryFrom<ReportWire> for SolveReport {
    type Error = String;
    fn try_from(w: ReportWire) -> std::result::Result<Self, String> {
        let expected = w.count + w.params.spin_rapidities.unwrap_or(0);
        if w.roots.len() != expected {
            return Err(format!("report lists {} roots, expected {expected}", w.roots.len()));
        }
        Ok(SolveReport {
            roots: RapiditySet { model: w.model, length: w.length, values: w.roots, params: w.params },
            qnums: w.qnums,
            spin_qnums: w.spin_qnums,
            residual: w.residual,
            iterations: w.iterations,
            converged: w.converged,
            seed: w.seed,
        })
    }
}

impl From<SolveReport> for ReportWire {
    fn from(r: SolveReport) -> Self {
        let spin = r.roots.params.spin_rapidities.unwrap_or(0);
        ReportWire {
            model: r.roots.model,
            length: r.roots.length,
            count: r.roots.values.len() - spin,
            params: r.roots.params,
            qnums: r.qnums,
            spin_qnums: r.spin_qnums,
            roots: r.roots.values,
            residual: r.residual,
            iterations: r.iterations,
            converged: r.converged,
            seed: r.seed,
        }
    }
}

/// Admissibility verdict with the violated conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reasons: Vec<String>,
}

/// Pairwise distinct, no difference `+-i`, no root at `+-i/2` (tolerance 1e-8).
pub fn admissibility(roots: &RapiditySet) -> Admissibility {
    let v = &roots.values;
    let mut reasons = Vec::new();
    let mut push = |r: &str| {
        if !reasons.iter().any(|x| x == r) {
            reasons.push(r.to_string());
        }
    };
    for (j, a) in v.iter().enumerate() {
        if (a - 0.5 * I).norm() < ROOT_EQ_TOL || (a + 0.5 * I).norm() < ROOT_EQ_TOL {
            push("root at ±i/2");
        }
        for b in &v[j + 1..] {
            let d = a - b;
            if d.norm() < ROOT_EQ_TOL {
                push("coincident roots");
            }
            if (d - I).norm() < ROOT_EQ_TOL || (d + I).norm() < ROOT_EQ_TOL {
                push("difference i");
            }
        }
    }
    Admissibility { admissible: reasons.is_empty(), reasons }
}

/// Imaginary part reduced into `(-pi, pi]`.
pub(crate) fn wrap_log(z: C64) -> C64 {
    let mut im = z.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    C64::new(z.re, im)
}

/// The integer-labelled logarithmic form is equivalent to the product form
/// only for even `L`: for odd `L` it solves the equations with an extra
/// factor `(-1)^L`.
pub(crate) fn check_even_chain(sites: usize, count: usize) -> Result<()> {
    if !sites.is_multiple_of(2) {
        return domain(format!("logarithmic equations with integer n_j need even L, got {sites}"));
    }
    if 2 * count > sites {
        return domain(format!("N = {count} exceeds L/2 = {}", sites / 2));
    }
    Ok(())
}

pub(crate) fn check_distinct(values: &[C64]) -> Result<()> {
    for (j, a) in values.iter().enumerate() {
        for b in &values[j + 1..] {
            if (a - b).norm() < ROOT_EQ_TOL {
                return domain(format!("coincident roots {a} and {b}"));
            }
        }
    }
    Ok(())
}
