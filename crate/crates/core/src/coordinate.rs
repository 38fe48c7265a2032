//! Coordinate Bethe Ansatz: regularized wavefunctions, off-shell vectors and
//! their energy and momentum.
//!
//! The XXX wavefunction is
//!
//! ```text
//! Psi(x) = sum_Q sign(Q) prod_{k<l} (l_Qk - l_Ql + i)
//!          prod_k (l_Qk + i/2)^{x_k} (l_Qk - i/2)^{L - x_k + 1}
//! ```
//!
//! It stays finite when roots coincide or sit at `i/2`. Terms are summed in
//! log-magnitude form with a common scale so long chains do not overflow.

use crate::error::{domain, pole, LabError, Result};
use crate::linalg::{self, for_each_permutation};
use crate::spin_chain::{build_xxx_hamiltonian, raise_vector, ChainSpace, SectorBasis};
use crate::{c, C64, I};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Factorial-cost guard for permutation sums.
pub const MAX_ROOTS: usize = 10;
/// Roots closer than this count as equal.
pub const ROOT_EQ_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "XXX")]
    Xxx,
    #[serde(rename = "XXZ")]
    Xxz,
    #[serde(rename = "BOSE")]
    Bose,
    #[serde(rename = "HUBBARD_CHARGE_SPIN")]
    HubbardChargeSpin,
}

/// Chain length in sites, or a continuum ring length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Length {
    Sites(usize),
    Ring(f64),
}

impl Length {
    pub fn value(&self) -> f64 {
        match *self {
            Length::Sites(n) => n as f64,
            Length::Ring(x) => x,
        }
    }

    pub fn sites(&self) -> Result<usize> {
        match *self {
            Length::Sites(n) => Ok(n),
            Length::Ring(_) => domain("lattice model needs an integer number of sites"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub u: Option<f64>,
    /// Number of spin rapidities stored after the charge momenta (Hubbard).
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub spin_rapidities: Option<usize>,
}

/// Ordered rapidities (or quasi-momenta) with the model they belong to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RapidityWire", into = "RapidityWire")]
pub struct RapiditySet {
    pub model: Model,
    pub length: Length,
    pub values: Vec<C64>,
    pub params: ModelParams,
}

#[derive(Serialize, Deserialize)]
struct RapidityWire {
    model: Model,
    #[serde(rename = "L")]
    length: Length,
    #[serde(rename = "N")]
    count: usize,
    values: Vec<C64>,
    #[serde(default)]
    params: ModelParams,
}

impl TryFrom<RapidityWire> for RapiditySet {
    type Error = String;
    fn try_from(w: RapidityWire) -> std::result::Result<Self, String> {
        if w.values.len() != w.count {
            return Err(format!("N = {} but {} values given", w.count, w.values.len()));
        }
        Ok(RapiditySet { model: w.model, length: w.length, values: w.values, params: w.params })
    }
}

impl From<RapiditySet> for RapidityWire {
    fn from(r: RapiditySet) -> Self {
        RapidityWire { model: r.model, length: r.length, count: r.values.len(), values: r.values, params: r.params }
    }
}

impl RapiditySet {
    pub fn xxx(sites: usize, values: Vec<C64>) -> Self {
        Self { model: Model::Xxx, length: Length::Sites(sites), values, params: ModelParams::default() }
    }

    pub fn xxx_real(sites: usize, values: &[f64]) -> Self {
        Self::xxx(sites, values.iter().map(|&x| c(x)).collect())
    }

    pub fn xxz(sites: usize, gamma: f64, values: Vec<C64>) -> Self {
        Self {
            model: Model::Xxz,
            length: Length::Sites(sites),
            values,
            params: ModelParams { gamma: Some(gamma), ..Default::default() },
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sites(&self) -> Result<usize> {
        self.length.sites()
    }

    pub fn conjugate(&self) -> Self {
        Self { values: self.values.iter().map(|z| z.conj()).collect(), ..self.clone() }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|z| z.im.abs() <= tol)
    }

    pub(crate) fn expect_model(&self, model: Model) -> Result<()> {
        if self.model != model {
            return Err(LabError::Domain(format!("expected {model:?} roots, got {:?}", self.model)));
        }
        Ok(())
    }
}

/// A vector over `SectorBasis(L, N)` stored as `amplitudes * exp(log_scale)`.
#[derive(Clone, Debug)]
pub struct BetheVector {
    pub basis: SectorBasis,
    pub amplitudes: DVector<C64>,
    pub log_scale: f64,
}

impl BetheVector {
    /// Actual component values; may overflow for large chains.
    pub fn unscaled(&self) -> DVector<C64> {
        &self.amplitudes * c(self.log_scale.exp())
    }

    /// Unit-norm copy of the amplitudes (zero vector stays zero).
    pub fn normalized(&self) -> DVector<C64> {
        let n = linalg::norm(&self.amplitudes);
        if n == 0.0 {
            return self.amplitudes.clone();
        }
        &self.amplitudes / c(n)
    }

    /// Amplitude at 1-based down-spin positions, on the stored scale.
    pub fn at(&self, positions: &[usize]) -> Option<C64> {
        self.basis.index(SectorBasis::from_positions(positions)).map(|i| self.amplitudes[i])
    }
}

/// `k` with `e^{ik} = (l + i/2)/(l - i/2)`, `Re k` in `(-pi, pi]`.
pub fn rapidity_to_momentum(lambda: C64) -> Result<C64> {
    let den = lambda - 0.5 * I;
    let num = lambda + 0.5 * I;
    if den.norm() == 0.0 {
        return pole("rapidity at i/2 makes e^{ik} infinite");
    }
    if num.norm() == 0.0 {
        return pole("rapidity at -i/2 gives e^{ik} = 0");
    }
    let mut k = -I * (num / den).ln();
    if k.re <= -PI {
        k.re += 2.0 * PI;
    }
    Ok(k)
}

/// Logs of the factors entering one permutation-sum wavefunction.
struct LogFactors {
    /// `pair[a][b]`: factor for an ordered root pair `(a, b)`.
    pair: Vec<Vec<C64>>,
    /// Raised to `x_k`.
    left: Vec<C64>,
    /// Raised to `L - x_k + 1`.
    right: Vec<C64>,
}

impl LogFactors {
    fn xxx(roots: &[C64]) -> Self {
        LogFactors {
            pair: roots.iter().map(|&a| roots.iter().map(|&b| (a - b + I).ln()).collect()).collect(),
            left: roots.iter().map(|&l| (l + 0.5 * I).ln()).collect(),
            right: roots.iter().map(|&l| (l - 0.5 * I).ln()).collect(),
        }
    }

    fn xxz(roots: &[C64], eta: C64) -> Self {
        LogFactors {
            pair: roots.iter().map(|&a| roots.iter().map(|&b| (a - b - eta).sinh().ln()).collect()).collect(),
            left: roots.iter().map(|&l| (l - eta / 2.0).sinh().ln()).collect(),
            right: roots.iter().map(|&l| (l + eta / 2.0).sinh().ln()).collect(),
        }
    }

    /// Returns `(s, m)` with the wavefunction equal to `s * exp(m)`.
    fn evaluate(&self, x: &[usize], sites: usize) -> (C64, f64) {
        let n = x.len();
        let mut logs: Vec<(f64, C64)> = Vec::new();
        for_each_permutation(n, |q, sign| {
            let mut t = C64::default();
            for k in 0..n {
                for l in k + 1..n {
                    t += self.pair[q[k]][q[l]];
                }
                t += self.left[q[k]] * x[k] as f64 + self.right[q[k]] * (sites - x[k] + 1) as f64;
            }
            logs.push((sign, t));
        });
        let scale = logs.iter().map(|t| t.1.re).fold(f64::NEG_INFINITY, f64::max);
        if !scale.is_finite() {
            return (C64::default(), 0.0);
        }
        let s = logs.iter().map(|(sign, t)| (t - scale).exp() * *sign).sum();
        (s, scale)
    }
}

fn check_configuration(x: &[usize], sites: usize, n: usize) -> Result<()> {
    if n > MAX_ROOTS {
        return domain(format!("N = {n} exceeds the permutation-sum cap {MAX_ROOTS}"));
    }
    if x.len() != n {
        return domain(format!("configuration has {} entries, expected {n}", x.len()));
    }
    if x.windows(2).any(|w| w[0] >= w[1]) || x.first().is_some_and(|&a| a < 1) || x.last().is_some_and(|&b| b > sites) {
        return domain(format!("configuration {x:?} is not 1 <= x_1 < ... < x_N <= {sites}"));
    }
    Ok(())
}

/// The regularized XXX wavefunction at 1-based positions `x`. It carries the
/// Vandermonde of the roots, so relabelling them by a permutation multiplies
/// it by the sign of that permutation.
pub fn offshell_wavefunction(x: &[usize], roots: &RapiditySet) -> Result<C64> {
    roots.expect_model(crate::coordinate::Model::Xxx)?;
    let sites = roots.sites()?;
    check_configuration(x, sites, roots.len())?;
    let (s, m) = LogFactors::xxx(&roots.values).evaluate(x, sites);
    Ok(s * m.exp())
}

/// XXZ analogue with `eta` the anisotropy parameter (`Delta = ch eta`):
/// pair factor `sh(l_a - l_b - eta)`, single-site factors `sh(l -+ eta/2)`.
/// Collinear with the algebraic B-operator states.
pub fn offshell_wavefunction_xxz(x: &[usize], roots: &[C64], eta: C64, sites: usize) -> Result<C64> {
    check_configuration(x, sites, roots.len())?;
    let (s, m) = LogFactors::xxz(roots, eta).evaluate(x, sites);
    Ok(s * m.exp())
}

fn assemble(factors: &LogFactors, sites: usize, n: usize) -> Result<BetheVector> {
    if n > MAX_ROOTS {
        return domain(format!("N = {n} exceeds the permutation-sum cap {MAX_ROOTS}"));
    }
    let basis = SectorBasis::new(sites, n)?;
    let parts: Vec<(C64, f64)> = basis
        .states()
        .iter()
        .map(|&s| factors.evaluate(&SectorBasis::positions(s), sites))
        .collect();
    let scale = parts
        .iter()
        .filter(|p| p.0 != C64::default())
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = if scale.is_finite() { scale } else { 0.0 };
    let amplitudes = DVector::from_iterator(parts.len(), parts.iter().map(|(s, m)| s * (m - scale).exp()));
    Ok(BetheVector { basis, amplitudes, log_scale: scale })
}

/// Off-shell vector `sum_x Psi(x) |x>` over `SectorBasis(L, N)`.
pub fn offshell_vector(roots: &RapiditySet) -> Result<BetheVector> {
    roots.expect_model(Model::Xxx)?;
    assemble(&LogFactors::xxx(&roots.values), roots.sites()?, roots.len())
}

/// XXZ analogue of [`offshell_vector`].
pub fn offshell_vector_xxz(roots: &[C64], eta: C64, sites: usize) -> Result<BetheVector> {
    assemble(&LogFactors::xxz(roots, eta), sites, roots.len())
}

fn check_pole(roots: &RapiditySet) -> Result<()> {
    for z in &roots.values {
        if (z - 0.5 * I).norm() < ROOT_EQ_TOL || (z + 0.5 * I).norm() < ROOT_EQ_TOL {
            return pole(format!("root {z} at +-i/2"));
        }
    }
    Ok(())
}

/// `E = -(J/2) sum 1/(l^2 + 1/4)`.
pub fn energy_xxx(roots: &RapiditySet, j: f64) -> Result<C64> {
    check_pole(roots)?;
    Ok(roots.values.iter().map(|l| -0.5 * j / (l * l + 0.25)).sum())
}

/// `P = -i sum ln((l + i/2)/(l - i/2))` reduced into `[0, 2 pi)`. Root sets
/// whose momentum is not real are rejected.
pub fn momentum_xxx(roots: &RapiditySet) -> Result<f64> {
    check_pole(roots)?;
    let p: C64 = roots
        .values
        .iter()
        .map(|&l| -I * ((l + 0.5 * I) / (l - 0.5 * I)).ln())
        .sum();
    if p.im.abs() > 1e-8 * (1.0 + p.norm()) {
        return domain(format!("momentum {p} is not real"));
    }
    Ok(p.re.rem_euclid(2.0 * PI))
}

/// `|S^+ v| / |v|` for a vector on `SectorBasis(L, N)`, `N >= 1`.
pub fn highest_weight_residual(v: &DVector<C64>, basis: &SectorBasis) -> Result<f64> {
    if basis.down() == 0 {
        return domain("highest-weight residual needs N >= 1");
    }
    let n = linalg::norm(v);
    if n == 0.0 {
        return domain("zero vector");
    }
    let (r, _) = raise_vector(v, basis)?;
    Ok(linalg::norm(&r) / n)
}

/// Largest `|(H v)(x) - E v(x)|` over configurations that touch neither site
/// 1 nor site `L`, relative to the largest amplitude. Off-shell vectors obey
/// the bulk eigenvalue equation there; only periodicity needs on-shell roots.
pub fn bulk_eigen_residual(roots: &RapiditySet, j: f64) -> Result<f64> {
    let v = offshell_vector(roots)?;
    let sites = roots.sites()?;
    let e = energy_xxx(roots, j)?;
    let h = build_xxx_hamiltonian(j, &ChainSpace::Sector(v.basis.clone()))?;
    let hv = h.apply(&v.amplitudes);
    let scale = v.amplitudes.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if scale == 0.0 {
        return domain("vector vanishes identically");
    }
    let boundary = 1u32 | 1 << (sites - 1);
    let mut worst: f64 = 0.0;
    for (i, &s) in v.basis.states().iter().enumerate() {
        if s & boundary == 0 {
            worst = worst.max((hv[i] - e * v.amplitudes[i]).norm());
        }
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn momentum_map() {
        assert_relative_eq!(rapidity_to_momentum(c(0.0)).unwrap().re, PI, epsilon = 1e-15);
        assert_relative_eq!(rapidity_to_momentum(c(0.5)).unwrap().re, PI / 2.0, epsilon = 1e-15);
        assert!(rapidity_to_momentum(c(1e9)).unwrap().norm() < 1e-8);
        assert!(rapidity_to_momentum(0.5 * I).is_err());
        assert!(rapidity_to_momentum(-0.5 * I).is_err());
    }

    #[test]
    fn single_magnon_wavefunction() {
        let l = C64::new(0.3, 0.1);
        let r = RapiditySet::xxx(6, vec![l]);
        for x in 1..=6 {
            let expect = (l + 0.5 * I).powu(x as u32) * (l - 0.5 * I).powu((7 - x) as u32);
            let got = offshell_wavefunction(&[x], &r).unwrap();
            assert!((got - expect).norm() < 1e-14 * expect.norm());
        }
    }

    #[test]
    fn vanishing_cases() {
        let l = C64::new(0.37, -0.2);
        for pair in [vec![l, l], vec![l, 0.5 * I], vec![l, -0.5 * I]] {
            let v = offshell_vector(&RapiditySet::xxx(6, pair)).unwrap();
            assert!(linalg::norm(&v.unscaled()) < 1e-10, "{v:?}");
        }
    }

    #[test]
    fn difference_i_keeps_one_ordering() {
        // l1 - l2 = -i kills the identity term only; the swapped term survives
        let l = C64::new(0.37, -0.2);
        let (l1, l2) = (l, l + I);
        let r = RapiditySet::xxx(6, vec![l1, l2]);
        for x in [[1, 2], [2, 5], [3, 6]] {
            let swapped = -(l2 - l1 + I)
                * (l2 + 0.5 * I).powu(x[0] as u32)
                * (l2 - 0.5 * I).powu((7 - x[0]) as u32)
                * (l1 + 0.5 * I).powu(x[1] as u32)
                * (l1 - 0.5 * I).powu((7 - x[1]) as u32);
            let got = offshell_wavefunction(&x, &r).unwrap();
            assert!((got - swapped).norm() < 1e-13 * swapped.norm());
            assert!(got.norm() > 1e-6);
        }
    }

    #[test]
    fn vacuum_vector_and_energy() {
        let r = RapiditySet::xxx(5, vec![]);
        let v = offshell_vector(&r).unwrap();
        assert_eq!(v.amplitudes.len(), 1);
        assert_eq!(v.unscaled()[0], c(1.0));
        assert_eq!(energy_xxx(&r, 1.0).unwrap(), c(0.0));
        assert_eq!(momentum_xxx(&r).unwrap(), 0.0);
        let one = RapiditySet::xxx_real(5, &[0.0]);
        assert_relative_eq!(energy_xxx(&one, 1.0).unwrap().re, -2.0);
        assert_relative_eq!(momentum_xxx(&one).unwrap(), PI);
    }

    #[test]
    fn magnon_energy_form() {
        for &l in &[0.1, -0.7, 2.3] {
            let k = rapidity_to_momentum(c(l)).unwrap().re;
            let e = energy_xxx(&RapiditySet::xxx_real(8, &[l]), 1.3).unwrap().re;
            assert_relative_eq!(e, 1.3 * (k.cos() - 1.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn bulk_equation_holds_off_shell() {
        let r = RapiditySet::xxx(9, vec![C64::new(0.3, 0.2), C64::new(-1.1, 0.05), C64::new(0.8, -0.4)]);
        assert!(bulk_eigen_residual(&r, 1.0).unwrap() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let r = RapiditySet::xxz(6, 0.7, vec![C64::new(0.1, -0.2)]);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"L\":6") && s.contains("\"N\":1"));
        let back: RapiditySet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let bad = s.replace("\"N\":1", "\"N\":2");
        assert!(serde_json::from_str::<RapiditySet>(&bad).is_err());
    }
}
