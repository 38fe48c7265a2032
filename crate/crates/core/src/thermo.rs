//! Ground-state root density of the XXX chain in the thermodynamic limit.
//!
//! Solves `rho(l) + int_{-q}^{q} K(l - m) rho(m) dm = 2 / (pi (1 + 4 l^2))`
//! with `K(x) = 1 / (pi (1 + x^2))` by Nystrom discretization on
//! Gauss-Legendre nodes. For `q = inf` the Fourier solution
//! `1 / (2 ch(pi l))` is sampled on a tanh-mapped grid.

use crate::equations::{solve_logbae, QuantumNumbers};
use crate::error::{domain, LabError, Result};
use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;
use std::num::NonZeroUsize;

pub const DEFAULT_NODES: usize = 256;
/// Scale of the `l = kappa atanh(s)` map used for `q = inf`.
const MAP_SCALE: f64 = 4.0;

fn driving(l: f64) -> f64 {
    2.0 / (PI * (1.0 + 4.0 * l * l))
}

fn kernel(x: f64) -> f64 {
    1.0 / (PI * (1.0 + x * x))
}

/// `rho(l | q)` sampled on quadrature nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootDensity {
    #[serde(serialize_with = "write_q", deserialize_with = "read_q")]
    pub q: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

pub(crate) fn write_q<S: Serializer>(q: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if q.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*q)
    }
}

pub(crate) fn read_q<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Q {
        Num(f64),
        Text(String),
    }
    match Q::deserialize(d)? {
        Q::Num(x) => Ok(x),
        Q::Text(t) if t == "inf" || t == "infinity" => Ok(f64::INFINITY),
        Q::Text(t) => Err(serde::de::Error::custom(format!("bad q {t:?}"))),
    }
}

/// Gauss-Legendre rule on `(-q, q)`, or the tanh-mapped rule on the line.
pub(crate) fn quadrature(q: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = NonZeroUsize::new(n).ok_or_else(|| LabError::Domain("need at least one node".into()))?;
    let rule = GaussLegendre::new(n);
    let mut nodes = Vec::with_capacity(n.get());
    let mut weights = Vec::with_capacity(n.get());
    for &(s, w) in rule.iter() {
        if q.is_infinite() {
            nodes.push(MAP_SCALE * s.atanh());
            weights.push(MAP_SCALE * w / (1.0 - s * s));
        } else {
            nodes.push(q * s);
            weights.push(q * w);
        }
    }
    Ok((nodes, weights))
}

/// Solves the root-density equation on `(-q, q)`; `q = f64::INFINITY` uses
/// the closed form.
pub fn solve_root_density(q: f64, n_nodes: usize) -> Result<RootDensity> {
    if !(q > 0.0) {
        return domain(format!("support half-width q = {q} must be positive"));
    }
    let (nodes, weights) = quadrature(q, n_nodes)?;
    let values = if q.is_infinite() {
        nodes.iter().map(|&l| closed_form_density(l)).collect()
    } else {
        let n = nodes.len();
        let a = DMatrix::from_fn(n, n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta + weights[j] * kernel(nodes[i] - nodes[j])
        });
        let b = DVector::from_iterator(n, nodes.iter().map(|&l| driving(l)));
        let x = a.lu().solve(&b).ok_or_else(|| LabError::Singular("Nystrom system".into()))?;
        x.iter().copied().collect()
    };
    Ok(RootDensity { q, nodes, weights, values })
}

/// `1 / (2 ch(pi l))`.
pub fn closed_form_density(l: f64) -> f64 {
    0.5 / (PI * l).cosh()
}

impl RootDensity {
    pub fn is_infinite(&self) -> bool {
        self.q.is_infinite()
    }

    /// `rho` at any point: the Nystrom interpolant, or the closed form.
    pub fn evaluate(&self, l: f64) -> f64 {
        if self.is_infinite() {
            return closed_form_density(l);
        }
        driving(l) - self.integrate(|m| kernel(l - m))
    }

    /// `int rho(m) g(m) dm` with the stored rule.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).zip(&self.values).map(|((&x, &w), &r)| w * r * g(x)).sum()
    }

    /// Max residual of the integral equation at the midpoints between nodes,
    /// with the convolution recomputed on an independent rule twice as fine.
    pub fn integral_residual(&self) -> Result<f64> {
        let (fine_x, fine_w) = quadrature(self.q, 2 * self.nodes.len())?;
        let fine_rho: Vec<f64> = fine_x.iter().map(|&m| self.evaluate(m)).collect();
        let mut worst: f64 = 0.0;
        for pair in self.nodes.windows(2) {
            let l = 0.5 * (pair[0] + pair[1]);
            let conv: f64 = fine_x.iter().zip(&fine_w).zip(&fine_rho).map(|((&m, &w), &r)| w * r * kernel(l - m)).sum();
            worst = worst.max((self.evaluate(l) + conv - driving(l)).abs());
        }
        Ok(worst)
    }

    /// `z(l) = (1/pi) atan(2l) - (1/pi) int rho(m) atan(l - m) dm`, whose
    /// derivative is `rho`.
    pub fn counting_function(&self, l: f64) -> f64 {
        (2.0 * l).atan() / PI - self.integrate(|m| (l - m).atan()) / PI
    }
}

/// `D = int rho`.
pub fn density_d(rho: &RootDensity) -> f64 {
    rho.integrate(|_| 1.0)
}

/// `e = -(J/2) int rho(l) / (l^2 + 1/4) dl`.
pub fn gs_energy_density(rho: &RootDensity, j: f64) -> f64 {
    -0.5 * j * rho.integrate(|l| 1.0 / (l * l + 0.25))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondensationRow {
    #[serde(rename = "L")]
    pub sites: usize,
    pub sum: f64,
    pub integral: f64,
    pub gap: f64,
}

/// Compares `(1/L) sum_j f(l_j)` over the finite-`L` ground-state roots with
/// `int rho_inf f`.
pub fn condensation_check(sizes: &[usize], f: impl Fn(f64) -> f64) -> Result<Vec<CondensationRow>> {
    let rho = solve_root_density(f64::INFINITY, 4 * DEFAULT_NODES)?;
    let integral = rho.integrate(&f);
    sizes
        .iter()
        .map(|&l| {
            if l % 2 != 0 || l < 2 {
                return domain(format!("condensation needs even L >= 2, got {l}"));
            }
            let rep = solve_logbae(l, l / 2, &QuantumNumbers::ground_state(l / 2))?;
            if !rep.converged {
                return Err(LabError::NoConvergence(format!("ground state at L = {l}")));
            }
            let sum = rep.roots.values.iter().map(|z| f(z.re)).sum::<f64>() / l as f64;
            Ok(CondensationRow { sites: l, sum, integral, gap: sum - integral })
        })
        .collect()
}
