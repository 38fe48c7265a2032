use crate::coordinate::{Length, Model, ModelParams, RapiditySet};
use crate::equations::{damped_newton, wrap_log, NewtonOptions, SolveReport};
use crate::error::{domain, pole, LabError, Result};
use crate::{c, C64, I};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Charge momenta `k` and spin rapidities `lambda` of one Lieb-Wu state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NestedWire", into = "NestedWire")]
pub struct NestedRoots {
    pub sites: usize,
    pub u: f64,
    pub k: Vec<C64>,
    pub lambda: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct NestedWire {
    #[serde(rename = "L")]
    sites: usize,
    #[serde(rename = "N")]
    electrons: usize,
    #[serde(rename = "M")]
    down: usize,
    u: f64,
    k: Vec<C64>,
    lambda: Vec<C64>,
}

impl TryFrom<NestedWire> for NestedRoots {
    type Error = String;
    fn try_from(w: NestedWire) -> std::result::Result<Self, String> {
        if w.k.len() != w.electrons || w.lambda.len() != w.down {
            return Err(format!("N = {}, M = {} but {} k and {} lambda given", w.electrons, w.down, w.k.len(), w.lambda.len()));
        }
        NestedRoots::new(w.sites, w.u, w.k, w.lambda).map_err(|e| e.to_string())
    }
}

impl From<NestedRoots> for NestedWire {
    fn from(r: NestedRoots) -> Self {
        NestedWire { sites: r.sites, electrons: r.k.len(), down: r.lambda.len(), u: r.u, k: r.k, lambda: r.lambda }
    }
}

impl NestedRoots {
    /// Checks `2M <= N <= L` and `u != 0`.
    pub fn new(sites: usize, u: f64, k: Vec<C64>, lambda: Vec<C64>) -> Result<Self> {
        if 2 * lambda.len() > k.len() || k.len() > sites {
            return domain(format!("need 2M <= N <= L, got L = {sites}, N = {}, M = {}", k.len(), lambda.len()));
        }
        if u == 0.0 || !u.is_finite() {
            return domain("Lieb-Wu equations need finite u != 0");
        }
        Ok(Self { sites, u, k, lambda })
    }

    pub fn electrons(&self) -> usize {
        self.k.len()
    }

    pub fn down(&self) -> usize {
        self.lambda.len()
    }

    /// Stored as charge momenta followed by spin rapidities.
    pub fn to_rapidities(&self) -> RapiditySet {
        RapiditySet {
            model: Model::HubbardChargeSpin,
            length: Length::Sites(self.sites),
            values: self.k.iter().chain(&self.lambda).copied().collect(),
            params: ModelParams { u: Some(self.u), spin_rapidities: Some(self.lambda.len()), ..Default::default() },
        }
    }

    pub fn from_rapidities(r: &RapiditySet) -> Result<Self> {
        r.expect_model(Model::HubbardChargeSpin)?;
        let m = r.params.spin_rapidities.unwrap_or(0);
        let u = r.params.u.ok_or_else(|| LabError::Domain("Hubbard roots need u".into()))?;
        if m > r.values.len() {
            return domain("more spin rapidities than values");
        }
        let n = r.values.len() - m;
        Self::new(r.sites()?, u, r.values[..n].to_vec(), r.values[n..].to_vec())
    }
}

fn charge_factor(lambda: C64, k: C64, u: f64) -> Result<C64> {
    let s = k.sin();
    let (num, den) = (lambda - s - I * u, lambda - s + I * u);
    if num.norm() < 1e-12 || den.norm() < 1e-12 {
        return pole(format!("lambda - sin k = +-iu at lambda = {lambda}, k = {k}"));
    }
    Ok(num / den)
}

/// Max over both families of the wrapped log mismatch in
/// `e^{i k_j L} = prod_l (l_l - sin k_j - iu)/(l_l - sin k_j + iu)` and
/// `prod_j (l_l - sin k_j - iu)/(l_l - sin k_j + iu) = prod_{m != l} (l_l - l_m - 2iu)/(l_l - l_m + 2iu)`.
pub fn liebwu_residual(roots: &NestedRoots) -> Result<f64> {
    let (u, len) = (roots.u, roots.sites as f64);
    let mut worst: f64 = 0.0;
    for &k in &roots.k {
        let mut r = I * k * len;
        for &l in &roots.lambda {
            r -= charge_factor(l, k, u)?.ln();
        }
        worst = worst.max(wrap_log(r).norm());
    }
    for (a, &l) in roots.lambda.iter().enumerate() {
        let mut r = C64::default();
        for &k in &roots.k {
            r += charge_factor(l, k, u)?.ln();
        }
        for (b, &m) in roots.lambda.iter().enumerate() {
            if a != b {
                let (num, den) = (l - m - 2.0 * I * u, l - m + 2.0 * I * u);
                if num.norm() < 1e-12 || den.norm() < 1e-12 {
                    return pole(format!("spin rapidities {l}, {m} differ by +-2iu"));
                }
                r -= (num / den).ln();
            }
        }
        worst = worst.max(wrap_log(r).norm());
    }
    Ok(worst)
}

/// Integer labels for the lowest state of the `(N, M)` block:
/// `I_j = n_j - M/2` and `J_l = m_l - (N - M + 1)/2` centred on zero.
pub fn ground_quantum_numbers(electrons: usize, down: usize) -> (Vec<i64>, Vec<i64>) {
    let (n, m) = (electrons as i64, down as i64);
    let charge = (1..=n).map(|j| (2 * j - 1 - n + m).div_euclid(2)).collect();
    let spin = (1..=m).map(|l| (2 * l + n - 2 * m).div_euclid(2)).collect();
    (charge, spin)
}

/// Real solutions of the logarithmic Lieb-Wu equations
/// `k_j L = 2 pi I_j + sum_l 2 atan((l_l - sin k_j)/u)` and
/// `sum_j 2 atan((l_l - sin k_j)/u) = 2 pi J_l + sum_m 2 atan((l_l - l_m)/(2u))`,
/// with `I_j = n_j - M/2` and `J_l = m_l - (N - M + 1)/2`.
pub fn solve_liebwu(sites: usize, electrons: usize, down: usize, u: f64, charge: &[i64], spin: &[i64]) -> Result<SolveReport> {
    if 2 * down > electrons || electrons > sites {
        return domain(format!("need 2M <= N <= L, got L = {sites}, N = {electrons}, M = {down}"));
    }
    if !(u > 0.0) || !u.is_finite() {
        return domain(format!("solver needs finite u > 0, got {u}"));
    }
    if charge.len() != electrons || spin.len() != down {
        return domain("need N charge and M spin quantum numbers");
    }
    let (n, m) = (electrons, down);
    let big_i: Vec<f64> = charge.iter().map(|&q| q as f64 - m as f64 / 2.0).collect();
    let big_j: Vec<f64> = spin.iter().map(|&q| q as f64 - (n - m + 1) as f64 / 2.0).collect();
    let len = sites as f64;
    let g = |x: f64| 2.0 * u / (u * u + x * x);
    let h = |x: f64| 4.0 * u / (4.0 * u * u + x * x);
    let system = |x: &DVector<f64>| {
        let (k, l) = (x.rows(0, n), x.rows(n, m));
        let mut f = DVector::zeros(n + m);
        for j in 0..n {
            let s = k[j].sin();
            f[j] = k[j] * len - 2.0 * PI * big_i[j] - (0..m).map(|a| 2.0 * ((l[a] - s) / u).atan()).sum::<f64>();
        }
        for a in 0..m {
            let charge_sum: f64 = (0..n).map(|j| 2.0 * ((l[a] - k[j].sin()) / u).atan()).sum();
            let spin_sum: f64 = (0..m).map(|b| 2.0 * ((l[a] - l[b]) / (2.0 * u)).atan()).sum();
            f[n + a] = charge_sum - 2.0 * PI * big_j[a] - spin_sum;
        }
        f
    };
    let jacobian = |x: &DVector<f64>| {
        let (k, l) = (x.rows(0, n), x.rows(n, m));
        let mut jac = DMatrix::zeros(n + m, n + m);
        for j in 0..n {
            let (s, co) = (k[j].sin(), k[j].cos());
            jac[(j, j)] = len;
            for a in 0..m {
                let w = g(l[a] - s);
                jac[(j, j)] += w * co;
                jac[(j, n + a)] = -w;
                jac[(n + a, j)] = -w * co;
                jac[(n + a, n + a)] += w;
            }
        }
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    let w = h(l[a] - l[b]);
                    jac[(n + a, n + a)] -= w;
                    jac[(n + a, n + b)] += w;
                }
            }
        }
        jac
    };
    let k0: Vec<f64> = big_i.iter().map(|&q| 2.0 * PI * q / len).collect();
    let mean_sin = if n == 0 { 0.0 } else { k0.iter().map(|k| k.sin()).sum::<f64>() / n as f64 };
    let l0 = big_j.iter().map(|&q| mean_sin + u * (PI * q / n as f64).tan());
    let x0 = DVector::from_iterator(n + m, k0.iter().copied().chain(l0));
    let out = damped_newton(x0, system, jacobian, NewtonOptions::default());
    let roots = NestedRoots::new(
        sites,
        u,
        out.x.rows(0, n).iter().map(|&v| c(v)).collect(),
        out.x.rows(n, m).iter().map(|&v| c(v)).collect(),
    )?;
    Ok(SolveReport {
        roots: roots.to_rapidities(),
        qnums: charge.to_vec(),
        spin_qnums: Some(spin.to_vec()),
        residual: out.residual,
        iterations: out.iterations,
        converged: out.converged,
        seed: None,
    })
}

/// `E = -2 sum cos k_j + u (L - 2N)` and `P = sum k_j mod 2 pi` (real part
/// reduced into `[0, 2 pi)`).
pub fn energy_momentum(roots: &NestedRoots) -> (C64, C64) {
    let e = -2.0 * roots.k.iter().map(|k| k.cos()).sum::<C64>() + roots.u * (roots.sites as f64 - 2.0 * roots.k.len() as f64);
    let mut p: C64 = roots.k.iter().sum();
    p.re = p.re.rem_euclid(2.0 * PI);
    if (p.re - 2.0 * PI).abs() < 1e-13 {
        p.re = 0.0;
    }
    (e, p)
}
