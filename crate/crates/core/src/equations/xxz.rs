use super::{check_distinct, damped_newton, wrap_log, NewtonOptions, QuantumNumbers, SolveReport};
use crate::coordinate::{Model, RapiditySet, ROOT_EQ_TOL};
use crate::error::{domain, pole, Result};
use crate::{c, C64, I};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

fn gamma_of(roots: &RapiditySet) -> Result<f64> {
    roots.expect_model(Model::Xxz)?;
    match roots.params.gamma {
        Some(g) if g > 0.0 && g < PI => Ok(g),
        other => domain(format!("XXZ roots need 0 < gamma < pi, got {other:?}")),
    }
}

/// Max log-form mismatch in
/// `(sh(l_j - i g/2)/sh(l_j + i g/2))^L = prod_{k != j} sh(l_j - l_k - i g)/sh(l_j - l_k + i g)`,
/// with `Delta = cos g`.
pub fn bae_residual_xxz(roots: &RapiditySet) -> Result<f64> {
    let g = gamma_of(roots)?;
    let sites = roots.sites()? as f64;
    let v = &roots.values;
    check_distinct(v)?;
    let mut worst: f64 = 0.0;
    for (j, &l) in v.iter().enumerate() {
        let (num, den) = ((l - 0.5 * g * I).sinh(), (l + 0.5 * g * I).sinh());
        if num.norm() < ROOT_EQ_TOL || den.norm() < ROOT_EQ_TOL {
            return pole(format!("root {l} at a pole of the single-particle factor"));
        }
        let mut r = (num / den).ln() * sites;
        for (k, &lk) in v.iter().enumerate() {
            if k != j {
                let (a, b) = ((l - lk - g * I).sinh(), (l - lk + g * I).sinh());
                if a.norm() < ROOT_EQ_TOL || b.norm() < ROOT_EQ_TOL {
                    return pole(format!("roots {l}, {lk} at a scattering pole"));
                }
                r -= (a / b).ln();
            }
        }
        worst = worst.max(wrap_log(r).norm());
    }
    Ok(worst)
}

fn log_system(x: &[f64], n: &[i64], sites: f64, g: f64) -> DVector<f64> {
    let (a1, a2) = (1.0 / (g / 2.0).tan(), 1.0 / g.tan());
    let count = x.len() as f64;
    DVector::from_iterator(
        x.len(),
        x.iter().enumerate().map(|(j, &l)| {
            let inter: f64 = x.iter().map(|&m| (a2 * (l - m).tanh()).atan()).sum();
            (a1 * l.tanh()).atan() / PI - n[j] as f64 / sites + (count + 1.0) / (2.0 * sites) - inter / (PI * sites)
        }),
    )
}

fn datan_tanh(a: f64, x: f64) -> f64 {
    let t = x.tanh();
    a * (1.0 - t * t) / (1.0 + a * a * t * t)
}

fn log_jacobian(x: &[f64], sites: f64, g: f64) -> DMatrix<f64> {
    let (a1, a2) = (1.0 / (g / 2.0).tan(), 1.0 / g.tan());
    let n = x.len();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        jac[(j, j)] = datan_tanh(a1, x[j]) / PI;
        for k in 0..n {
            if k != j {
                let d = datan_tanh(a2, x[j] - x[k]) / (PI * sites);
                jac[(j, j)] -= d;
                jac[(j, k)] += d;
            }
        }
    }
    jac
}

/// Logarithmic XXZ equations, the `atan(2 l)` and `atan(l)` of the XXX case
/// replaced by `atan(cot(g/2) th l)` and `atan(cot g th l)`.
pub fn logbae_residual_xxz(roots: &RapiditySet, qnums: &QuantumNumbers) -> Result<f64> {
    let g = gamma_of(roots)?;
    if !roots.is_real(0.0) {
        return domain("logarithmic equations need real roots");
    }
    qnums.check(roots.len())?;
    let x: Vec<f64> = roots.values.iter().map(|z| z.re).collect();
    let f = log_system(&x, qnums.values(), roots.sites()? as f64, g);
    Ok(f.iter().fold(0.0, |a, v| a.max(v.abs())))
}

/// Newton solve of the logarithmic XXZ equations for `Delta = cos(gamma)`.
pub fn solve_logbae_xxz(sites: usize, count: usize, gamma: f64, qnums: &QuantumNumbers) -> Result<SolveReport> {
    if !(gamma > 0.0 && gamma < PI) {
        return domain(format!("gamma = {gamma} outside (0, pi)"));
    }
    super::check_even_chain(sites, count)?;
    qnums.check(count)?;
    let l = sites as f64;
    let a1 = 1.0 / (gamma / 2.0).tan();
    let n = qnums.values().to_vec();
    let x0 = DVector::from_iterator(
        count,
        n.iter().map(|&nj| {
            let t = (PI * (nj as f64 / l - (count as f64 + 1.0) / (2.0 * l))).tan() / a1;
            t.clamp(-0.999, 0.999).atanh()
        }),
    );
    let out = damped_newton(
        x0,
        |x| log_system(x.as_slice(), &n, l, gamma),
        |x| log_jacobian(x.as_slice(), l, gamma),
        NewtonOptions::default(),
    );
    Ok(SolveReport {
        roots: RapiditySet::xxz(sites, gamma, out.x.iter().map(|&v| c(v)).collect()),
        qnums: n,
        spin_qnums: None,
        residual: out.residual,
        iterations: out.iterations,
        converged: out.converged,
        seed: None,
    })
}

/// `E = -sum sin^2 g / (ch 2l - cos g)` for the XXZ chain with unit coupling.
pub fn energy_xxz(roots: &RapiditySet) -> Result<C64> {
    let g = gamma_of(roots)?;
    let mut e = C64::default();
    for l in &roots.values {
        let den = (2.0 * l).cosh() - g.cos();
        if den.norm() < ROOT_EQ_TOL {
            return pole(format!("root {l} at an energy pole"));
        }
        e -= g.sin().powi(2) / den;
    }
    Ok(e)
}
