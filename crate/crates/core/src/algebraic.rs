//! Algebraic Bethe ansatz for the six-vertex monodromy matrix.
//!
//! The monodromy is built with inhomogeneities `xi_j` (default `eta/2`), so
//! the transfer matrix here is the six-vertex one shifted by `eta/2`. Its
//! `2 x 2` auxiliary blocks `A, B, C, D` act on the chain; `B` creates a down
//! spin and `C` removes one. Products of `B` on the all-up vacuum give
//! off-shell Bethe vectors, and the Slavnov determinant gives their pairing
//! with an on-shell dual vector.

use crate::error::{domain, pole, LabError, Result};
use crate::linalg::{log_determinant, OperatorMatrix, Space};
use crate::spin_chain::SectorBasis;
use crate::vertex::transfer::propagate;
use crate::vertex::{monodromy, VertexWeights};
use crate::{c, C64};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest chain for explicit block operators.
pub const MAX_ABA_SITES: usize = 12;
/// Minimum distance between any two parameters entering a pairing.
pub const POLE_GUARD: f64 = 1e-6;
/// Bethe-equation residual accepted for "on-shell".
pub const ONSHELL_TOL: f64 = 1e-10;

fn coth(z: C64) -> C64 {
    z.cosh() / z.sinh()
}

/// Chain with anisotropy `eta`, normalization `rho` and inhomogeneities `xi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbaModel {
    #[serde(rename = "L")]
    pub sites: usize,
    pub eta: C64,
    pub rho: C64,
    pub xi: Vec<C64>,
}

impl AbaModel {
    /// `xi_j = eta / 2`: `A + D` at `lambda` is the six-vertex transfer
    /// matrix at `lambda - eta/2`.
    pub fn homogeneous(sites: usize, eta: C64, rho: C64) -> Result<Self> {
        Self::inhomogeneous(eta, rho, vec![eta / 2.0; sites])
    }

    pub fn inhomogeneous(eta: C64, rho: C64, xi: Vec<C64>) -> Result<Self> {
        let sites = xi.len();
        if sites == 0 || sites > MAX_ABA_SITES {
            return domain(format!("need 1 <= L <= {MAX_ABA_SITES}, got {sites}"));
        }
        if eta.sinh().norm() < 1e-12 || rho.norm() == 0.0 {
            return domain("need sh(eta) != 0 and rho != 0");
        }
        Ok(Self { sites, eta, rho, xi })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.xi.iter().all(|x| (x - self.eta / 2.0).norm() < 1e-15)
    }

    pub fn weights(&self) -> VertexWeights {
        VertexWeights::parameterized(self.rho, c(0.0), self.eta)
            .with_inhomogeneities(self.xi.clone())
            .expect("parameterized weights accept inhomogeneities")
    }

    pub fn vacuum(&self) -> VacuumFunctions {
        VacuumFunctions { rho: self.rho, eta: self.eta, xi: self.xi.clone() }
    }

    /// `2^L`.
    pub fn dim(&self) -> usize {
        1 << self.sites
    }

    /// The all-up state `|0>` in the full space.
    pub fn vacuum_state(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[0] = c(1.0);
        v
    }
}

/// `a(l) = rho^L prod sh(l - xi_j + eta)`, `d(l) = rho^L prod sh(l - xi_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VacuumFunctions {
    pub rho: C64,
    pub eta: C64,
    pub xi: Vec<C64>,
}

impl VacuumFunctions {
    pub fn a(&self, l: C64) -> C64 {
        self.xi.iter().map(|&x| self.rho * (l - x + self.eta).sinh()).product()
    }

    pub fn d(&self, l: C64) -> C64 {
        self.xi.iter().map(|&x| self.rho * (l - x).sinh()).product()
    }

    /// `d/dl ln(d/a)`.
    fn log_ratio_derivative(&self, l: C64) -> C64 {
        self.xi.iter().map(|&x| coth(l - x) - coth(l - x + self.eta)).sum()
    }
}

/// Entry of the auxiliary `2 x 2` structure: `A = (0,0)`, `B = (0,1)`,
/// `C = (1,0)`, `D = (1,1)` as (out, in).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    A,
    B,
    C,
    D,
}

impl Block {
    fn aux(self) -> (u32, u32) {
        match self {
            Block::A => (0, 0),
            Block::B => (0, 1),
            Block::C => (1, 0),
            Block::D => (1, 1),
        }
    }
}

/// `A, B, C, D` at one spectral parameter as explicit operators.
#[derive(Clone, Debug)]
pub struct MonodromyBlocks {
    pub lambda: C64,
    pub a: OperatorMatrix,
    pub b: OperatorMatrix,
    pub c: OperatorMatrix,
    pub d: OperatorMatrix,
}

impl MonodromyBlocks {
    pub fn transfer(&self) -> Result<OperatorMatrix> {
        self.a.combine(c(1.0), &self.d, c(1.0))
    }
}

pub fn monodromy_blocks(model: &AbaModel, lambda: C64) -> Result<MonodromyBlocks> {
    let t = monodromy(lambda, model.sites, &model.weights())?;
    let half = model.dim();
    let mut parts: [Vec<(usize, usize, C64)>; 4] = Default::default();
    for (i, j, v) in t.triplets() {
        parts[2 * (i / half) + j / half].push((i % half, j % half, v));
    }
    let space = Space::Full { sites: model.sites };
    let [a, b, cc, d] = parts.map(|p| OperatorMatrix::from_triplets(half, p, space.clone()));
    Ok(MonodromyBlocks { lambda, a, b, c: cc, d })
}

/// `X(lambda) v` for one block, without forming the matrix.
pub fn apply_block(model: &AbaModel, block: Block, lambda: C64, v: &DVector<C64>) -> Result<DVector<C64>> {
    check_len(model, v)?;
    let w = model.weights().site_weights(lambda, model.sites)?;
    let (out_aux, in_aux) = block.aux();
    let mut result = DVector::zeros(v.len());
    for (cfg, &amp) in v.iter().enumerate() {
        if amp != C64::default() {
            propagate(in_aux, cfg as u32, &w, &mut |ao, co, x| {
                if ao == out_aux {
                    result[co as usize] += amp * x;
                }
            });
        }
    }
    Ok(result)
}

/// Row-vector action `w^T X(lambda)`.
pub fn apply_block_left(model: &AbaModel, block: Block, lambda: C64, w: &DVector<C64>) -> Result<DVector<C64>> {
    check_len(model, w)?;
    let sw = model.weights().site_weights(lambda, model.sites)?;
    let (out_aux, in_aux) = block.aux();
    let mut result = DVector::zeros(w.len());
    for col in 0..w.len() {
        let mut acc = C64::default();
        propagate(in_aux, col as u32, &sw, &mut |ao, co, x| {
            if ao == out_aux {
                acc += w[co as usize] * x;
            }
        });
        result[col] = acc;
    }
    Ok(result)
}

fn check_len(model: &AbaModel, v: &DVector<C64>) -> Result<()> {
    if v.len() != model.dim() {
        return Err(LabError::DimensionMismatch { left: v.len(), right: model.dim() });
    }
    Ok(())
}

/// `(A + D)(lambda) v`.
pub fn apply_transfer(model: &AbaModel, lambda: C64, v: &DVector<C64>) -> Result<DVector<C64>> {
    Ok(apply_block(model, Block::A, lambda, v)? + apply_block(model, Block::D, lambda, v)?)
}

/// `B(l_N) ... B(l_1) |0>` in the full `2^L` space.
pub fn b_product_state(model: &AbaModel, roots: &[C64]) -> Result<DVector<C64>> {
    if roots.len() > model.sites {
        return domain(format!("{} B operators on {} sites", roots.len(), model.sites));
    }
    let mut v = model.vacuum_state();
    for &l in roots {
        v = apply_block(model, Block::B, l, &v)?;
    }
    Ok(v)
}

/// `<0| C(m_1) ... C(m_N)` as a row vector in the full space.
pub fn c_product_dual(model: &AbaModel, roots: &[C64]) -> Result<DVector<C64>> {
    if roots.len() > model.sites {
        return domain(format!("{} C operators on {} sites", roots.len(), model.sites));
    }
    let mut w = model.vacuum_state();
    for &m in roots {
        w = apply_block_left(model, Block::C, m, &w)?;
    }
    Ok(w)
}

/// Restricts a full-space vector to the sector with `down` down spins.
pub fn restrict(v: &DVector<C64>, basis: &SectorBasis) -> DVector<C64> {
    DVector::from_iterator(basis.len(), basis.states().iter().map(|&s| v[s as usize]))
}

/// `Q(l | {nu}) = prod sh(l - nu)`.
pub fn q_function(lambda: C64, roots: &[C64]) -> C64 {
    roots.iter().map(|&n| (lambda - n).sinh()).product()
}

/// `[a(l) Q(l - eta) + d(l) Q(l + eta)] / Q(l)`.
pub fn transfer_eigenvalue(lambda: C64, roots: &[C64], vac: &VacuumFunctions) -> Result<C64> {
    let q = q_function(lambda, roots);
    if q.norm() < 1e-14 {
        return pole(format!("{lambda} is a root"));
    }
    let eta = vac.eta;
    Ok((vac.a(lambda) * q_function(lambda - eta, roots) + vac.d(lambda) * q_function(lambda + eta, roots)) / q)
}

/// Max over roots of `|a Q(l_j - eta) + d Q(l_j + eta)|` relative to the
/// larger of the two terms.
pub fn bethe_residual(roots: &[C64], vac: &VacuumFunctions) -> f64 {
    roots
        .iter()
        .map(|&l| {
            let x = vac.a(l) * q_function(l - vac.eta, roots);
            let y = vac.d(l) * q_function(l + vac.eta, roots);
            (x + y).norm() / x.norm().max(y.norm()).max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// Coefficient of `B({l}_j)` in `t(l_ell) B({l}_ell)`.
fn action_coefficient(params: &[C64], ell: usize, j: usize, vac: &VacuumFunctions) -> C64 {
    let without = |k: usize| -> Vec<C64> { params.iter().enumerate().filter(|e| e.0 != k).map(|e| *e.1).collect() };
    let (set_ell, set_j) = (without(ell), without(j));
    let l = params[j];
    (vac.a(l) * q_function(l - vac.eta, &set_ell) + vac.d(l) * q_function(l + vac.eta, &set_ell))
        / q_function(l, &set_j)
}

fn check_distinct(params: &[C64]) -> Result<()> {
    for (i, a) in params.iter().enumerate() {
        for b in &params[i + 1..] {
            if (a - b).norm() < POLE_GUARD {
                return pole(format!("parameters {a} and {b} closer than {POLE_GUARD}"));
            }
        }
    }
    Ok(())
}

fn without(params: &[C64], k: usize) -> Vec<C64> {
    params.iter().enumerate().filter(|e| e.0 != k).map(|e| *e.1).collect()
}

/// `|t(l_ell) B({l}_ell) - sum_j coef_j B({l}_j)| / |t(l_ell) B({l}_ell)|`
/// for `N + 1` distinct parameters; `ell` is 0-based.
pub fn offshell_action_residual(model: &AbaModel, params: &[C64], ell: usize) -> Result<f64> {
    check_distinct(params)?;
    if ell >= params.len() {
        return domain(format!("ell = {ell} out of range"));
    }
    let vac = model.vacuum();
    let lhs = apply_transfer(model, params[ell], &b_product_state(model, &without(params, ell))?)?;
    let mut rhs = DVector::zeros(lhs.len());
    for j in 0..params.len() {
        rhs += b_product_state(model, &without(params, j))? * action_coefficient(params, ell, j, &vac);
    }
    Ok((&lhs - &rhs).norm() / lhs.norm().max(1e-300))
}

/// Dual version with `C`-products acting from the left.
pub fn dual_action_residual(model: &AbaModel, params: &[C64], ell: usize) -> Result<f64> {
    check_distinct(params)?;
    if ell >= params.len() {
        return domain(format!("ell = {ell} out of range"));
    }
    let vac = model.vacuum();
    let dual = c_product_dual(model, &without(params, ell))?;
    let lhs = apply_block_left(model, Block::A, params[ell], &dual)? + apply_block_left(model, Block::D, params[ell], &dual)?;
    let mut rhs = DVector::zeros(lhs.len());
    for j in 0..params.len() {
        rhs += c_product_dual(model, &without(params, j))? * action_coefficient(params, ell, j, &vac);
    }
    Ok((&lhs - &rhs).norm() / lhs.norm().max(1e-300))
}

/// Residual of the homogeneous linear system for `X^j = C({mu}) B({l}_j)`
/// with `N + 1` parameters `params` and on-shell `mu`.
pub fn linear_system_residual(model: &AbaModel, mu: &[C64], params: &[C64], ell: usize) -> Result<f64> {
    check_distinct(params)?;
    if mu.len() + 1 != params.len() || ell >= params.len() {
        return domain("need |params| = |mu| + 1 and ell in range");
    }
    let vac = model.vacuum();
    let dual = c_product_dual(model, mu)?;
    let x: Vec<C64> = (0..params.len())
        .map(|j| Ok(dual.dot(&b_product_state(model, &without(params, j))?)))
        .collect::<Result<_>>()?;
    let lhs: C64 = (0..params.len()).map(|j| action_coefficient(params, ell, j, &vac) * x[j]).sum();
    let rhs = transfer_eigenvalue(params[ell], mu, &vac)? * x[ell];
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max) * rhs.norm().max(lhs.norm()) / x[ell].norm().max(1e-300);
    Ok((lhs - rhs).norm() / scale.max(1e-300))
}

/// `<0| C(mu_1)...C(mu_N) B(l_N)...B(l_1) |0>` from explicit vectors.
pub fn bruteforce_pairing(model: &AbaModel, mu: &[C64], lambda: &[C64]) -> Result<C64> {
    if mu.len() != lambda.len() {
        return domain("pairing needs |mu| = |lambda|");
    }
    Ok(c_product_dual(model, mu)?.dot(&b_product_state(model, lambda)?))
}

/// `frak a(l | {mu}) = d(l) Q(l + eta) / (a(l) Q(l - eta))` and its
/// derivative from the logarithmic derivative of the product form.
fn frak_a(l: C64, mu: &[C64], vac: &VacuumFunctions) -> (C64, C64) {
    let eta = vac.eta;
    let value = vac.d(l) * q_function(l + eta, mu) / (vac.a(l) * q_function(l - eta, mu));
    let log_deriv = vac.log_ratio_derivative(l) + mu.iter().map(|&m| coth(l + eta - m) - coth(l - eta - m)).sum::<C64>();
    (value, value * log_deriv)
}

/// `C({mu}) B({lambda}) / C({mu}) B({mu})` from the Slavnov determinant.
///
/// Numerator entries are
/// `e(mu_j - l_k) / (1 + frak a(l_k)) - e(l_k - mu_j) / (1 + 1/frak a(l_k))`
/// with `e(z) = coth z - coth(z + eta)`; the second term carries the
/// reversed argument (the form with `e(mu_j - l_k)` in both terms fails
/// against the explicit pairing already at `N = 1`). `Lambda(mu_j)` in the
/// prefactor is the finite value of the on-shell eigenvalue at its own root.
pub fn slavnov_ratio(model: &AbaModel, mu: &[C64], lambda: &[C64]) -> Result<C64> {
    let n = mu.len();
    if n != lambda.len() || n == 0 {
        return domain("Slavnov ratio needs |mu| = |lambda| >= 1");
    }
    let all: Vec<C64> = mu.iter().chain(lambda).copied().collect();
    check_distinct(&all)?;
    let vac = model.vacuum();
    let residual = bethe_residual(mu, &vac);
    if residual > ONSHELL_TOL {
        return domain(format!("mu is not on-shell (residual {residual:e})"));
    }
    let eta = vac.eta;
    let e = |z: C64| coth(z) - coth(z + eta);
    let kernel = |z: C64| coth(z - eta) - coth(z + eta);

    let fa_l: Vec<(C64, C64)> = lambda.iter().map(|&l| frak_a(l, mu, &vac)).collect();
    let fa_m: Vec<(C64, C64)> = mu.iter().map(|&m| frak_a(m, mu, &vac)).collect();

    let numer = DMatrix::from_fn(n, n, |j, k| {
        let fa = fa_l[k].0;
        e(mu[j] - lambda[k]) / (1.0 + fa) - e(lambda[k] - mu[j]) / (1.0 + 1.0 / fa)
    });
    let gaudin = DMatrix::from_fn(n, n, |j, k| {
        let delta = if j == k { c(1.0) } else { c(0.0) };
        delta - kernel(mu[j] - mu[k]) / fa_m[k].1
    });
    let cauchy = DMatrix::from_fn(n, n, |j, k| 1.0 / (mu[j] - lambda[k]).sinh());

    let mut log_prefactor = C64::default();
    for j in 0..n {
        log_prefactor += transfer_eigenvalue(lambda[j], mu, &vac)?.ln();
        let others = without(mu, j);
        let at_root = vac.a(mu[j]) * q_function(mu[j] - eta, mu) * fa_m[j].1 / q_function(mu[j], &others);
        log_prefactor -= at_root.ln();
    }
    let (num, gd, cd) = (log_determinant(&numer)?, log_determinant(&gaudin)?, log_determinant(&cauchy)?);
    let log_abs = log_prefactor.re + num.log_abs - gd.log_abs - cd.log_abs;
    let phase = C64::from_polar(1.0, log_prefactor.im) * num.phase / (gd.phase * cd.phase);
    Ok(phase * log_abs.exp())
}

/// Slavnov ratio beside the explicit pairing ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "N")]
    pub count: usize,
    pub mu: Vec<C64>,
    pub lambda: Vec<C64>,
    pub slavnov: C64,
    pub bruteforce: C64,
    pub rel_err: f64,
}

pub fn pairing_report(model: &AbaModel, mu: &[C64], lambda: &[C64]) -> Result<PairingReport> {
    let slavnov = slavnov_ratio(model, mu, lambda)?;
    let norm = bruteforce_pairing(model, mu, mu)?;
    if norm.norm() == 0.0 {
        return Err(LabError::Singular("on-shell pairing vanishes".into()));
    }
    let bruteforce = bruteforce_pairing(model, mu, lambda)? / norm;
    let rel_err = (slavnov - bruteforce).norm() / bruteforce.norm().max(1e-300);
    Ok(PairingReport { sites: model.sites, count: mu.len(), mu: mu.to_vec(), lambda: lambda.to_vec(), slavnov, bruteforce, rel_err })
}

/// XXZ energy `J [sh(eta)/2 d/dl ln Lambda(l) - ch(eta) L / 2]` at
/// `l = eta / 2`, with `Delta = ch eta`. Homogeneous models only.
pub fn energy_from_eigenvalue(model: &AbaModel, roots: &[C64], j: f64) -> Result<C64> {
    if !model.is_homogeneous() {
        return domain("energy needs the homogeneous model");
    }
    let eta = model.eta;
    let l = eta / 2.0;
    if model.sites < 2 {
        return domain("energy needs L >= 2");
    }
    if roots.iter().any(|&r| (r - l).norm() < POLE_GUARD || (r + l).norm() < POLE_GUARD) {
        return pole("root at +-eta/2");
    }
    // d(l) vanishes to order L at eta/2, so only a(l) Q(l - eta) / Q(l) survives.
    let log_deriv = model.sites as f64 * coth(eta)
        + roots.iter().map(|&m| coth(l - eta - m) - coth(l - m)).sum::<C64>();
    Ok(j * (eta.sinh() / 2.0 * log_deriv - eta.cosh() * model.sites as f64 / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::offshell_vector_xxz;
    use crate::equations::{energy_xxz, solve_logbae_xxz, QuantumNumbers};
    use crate::linalg::collinearity;
    use crate::vertex::transfer;
    use crate::I;

    fn model(sites: usize) -> AbaModel {
        AbaModel::homogeneous(sites, C64::new(0.3, 0.8), C64::new(1.1, -0.2)).unwrap()
    }

    #[test]
    fn vacuum_eigenvalues_and_annihilation() {
        let m = model(5);
        let l = C64::new(0.2, -0.4);
        let vac = m.vacuum();
        let e0 = m.vacuum_state();
        let av = apply_block(&m, Block::A, l, &e0).unwrap();
        let dv = apply_block(&m, Block::D, l, &e0).unwrap();
        assert!((av[0] - vac.a(l)).norm() < 1e-12 * vac.a(l).norm());
        assert!((dv[0] - vac.d(l)).norm() < 1e-12 * vac.d(l).norm());
        assert!((av.norm() - av[0].norm()).abs() < 1e-14);
        assert!(apply_block(&m, Block::C, l, &e0).unwrap().norm() == 0.0);
        let home = vac.a(l) / (m.rho * (l + m.eta / 2.0).sinh()).powi(5);
        assert!((home - 1.0).norm() < 1e-12);
    }

    #[test]
    fn blocks_match_matrix_free_action_and_transfer() {
        let m = model(4);
        let l = C64::new(-0.35, 0.5);
        let blocks = monodromy_blocks(&m, l).unwrap();
        let v = DVector::from_fn(16, |i, _| C64::new(i as f64 * 0.1 - 0.4, 0.05 * (i * i) as f64));
        for (op, block) in [(&blocks.a, Block::A), (&blocks.b, Block::B), (&blocks.c, Block::C), (&blocks.d, Block::D)] {
            assert!((op.apply(&v) - apply_block(&m, block, l, &v).unwrap()).norm() < 1e-13);
            assert!((op.apply_transpose(&v) - apply_block_left(&m, block, l, &v).unwrap()).norm() < 1e-13);
        }
        let hom = VertexWeights::parameterized(m.rho, c(0.0), m.eta);
        let t6v = transfer(l - m.eta / 2.0, 4, &hom).unwrap().full().unwrap();
        assert!(blocks.transfer().unwrap().max_difference(&t6v).unwrap() < 1e-12);
    }

    #[test]
    fn single_b_matches_closed_form() {
        let m = model(6);
        let l = C64::new(0.4, 0.15);
        let v = b_product_state(&m, &[l]).unwrap();
        let (sm, sp) = ((l - m.eta / 2.0).sinh(), (l + m.eta / 2.0).sinh());
        let pref = m.rho.powi(6) * m.eta.sinh() / (sm * sp);
        for x in 1..=6usize {
            let expect = pref * sm.powi(x as i32) * sp.powi((6 - x + 1) as i32);
            assert!((v[1 << (x - 1)] - expect).norm() < 1e-12 * expect.norm());
        }
    }

    #[test]
    fn b_products_match_coordinate_vectors() {
        let m = model(6);
        let roots = [C64::new(0.1, 0.3), C64::new(-0.5, 0.2), C64::new(0.7, -0.4)];
        let b = b_product_state(&m, &roots).unwrap();
        let swapped = b_product_state(&m, &[roots[2], roots[0], roots[1]]).unwrap();
        assert!((&b - &swapped).norm() < 1e-12 * b.norm());
        let coord = offshell_vector_xxz(&roots, m.eta, 6).unwrap();
        let restricted = restrict(&b, &coord.basis);
        assert!((restricted.norm() - b.norm()).abs() < 1e-12 * b.norm());
        assert!(collinearity(&restricted, &coord.amplitudes) > 1.0 - 1e-10);
    }

    #[test]
    fn q_function_basics() {
        assert_eq!(q_function(c(0.3), &[]), c(1.0));
        let nu = C64::new(0.2, 0.1);
        assert_eq!(q_function(c(0.5), &[nu]), (c(0.5) - nu).sinh());
        assert_eq!(q_function(nu, &[c(1.0), nu]).norm(), 0.0);
    }

    #[test]
    fn offshell_actions() {
        let m = model(6);
        let params = [C64::new(0.1, 0.2), C64::new(-0.4, 0.5), C64::new(0.6, -0.3)];
        for ell in 0..3 {
            assert!(offshell_action_residual(&m, &params, ell).unwrap() < 1e-10);
            assert!(dual_action_residual(&m, &params, ell).unwrap() < 1e-10);
        }
    }

    fn onshell(sites: usize, count: usize, gamma: f64) -> (AbaModel, Vec<C64>) {
        let rep = solve_logbae_xxz(sites, count, gamma, &QuantumNumbers::ground_state(count)).unwrap();
        assert!(rep.converged);
        (AbaModel::homogeneous(sites, I * gamma, c(1.0)).unwrap(), rep.roots.values)
    }

    #[test]
    fn onshell_states_are_eigenvectors() {
        let (m, mu) = onshell(6, 3, 1.1);
        let vac = m.vacuum();
        assert!(bethe_residual(&mu, &vac) < 1e-12);
        let v = b_product_state(&m, &mu).unwrap();
        for l in [C64::new(0.3, 0.2), C64::new(-0.8, 0.1)] {
            let tv = apply_transfer(&m, l, &v).unwrap();
            let lam = transfer_eigenvalue(l, &mu, &vac).unwrap();
            assert!((&tv - &v * lam).norm() < 1e-10 * tv.norm());
        }
        let e = energy_from_eigenvalue(&m, &mu, 1.0).unwrap();
        let roots = crate::coordinate::RapiditySet::xxz(6, 1.1, mu.clone());
        assert!((e - energy_xxz(&roots).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn slavnov_against_pairing() {
        for count in 1..=3 {
            let (m, mu) = onshell(8, count, 0.9);
            let lambda: Vec<C64> = (0..count).map(|k| C64::new(0.3 * k as f64 - 0.2, 0.25 + 0.1 * k as f64)).collect();
            let rep = pairing_report(&m, &mu, &lambda).unwrap();
            assert!(rep.rel_err < 1e-9, "N = {count}: {rep:?}");
            let params: Vec<C64> = lambda.iter().copied().chain([C64::new(0.55, -0.35)]).collect();
            assert!(linear_system_residual(&m, &mu, &params, count).unwrap() < 1e-9);
        }
    }

    #[test]
    fn slavnov_limit_and_symmetry() {
        let (m, mu) = onshell(6, 2, 1.3);
        let delta = [C64::new(0.3, -0.7), C64::new(-0.5, 0.2)];
        let near: Vec<C64> = mu.iter().zip(&delta).map(|(m, d)| m + d * 1e-5).collect();
        assert!((slavnov_ratio(&m, &mu, &near).unwrap() - 1.0).norm() < 1e-4);
        let lambda = [C64::new(0.2, 0.4), C64::new(-0.6, -0.1)];
        let a = slavnov_ratio(&m, &mu, &lambda).unwrap();
        let b = slavnov_ratio(&m, &[mu[1], mu[0]], &[lambda[1], lambda[0]]).unwrap();
        let cc = slavnov_ratio(&m, &mu, &[lambda[1], lambda[0]]).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm() && (a - cc).norm() < 1e-12 * a.norm());
        assert!(slavnov_ratio(&m, &mu, &[mu[0], lambda[1]]).is_err());
    }
}
