use super::{check_distinct, damped_newton, wrap_log, NewtonOptions, QuantumNumbers, SolveReport};
use crate::coordinate::{Length, Model, ModelParams, RapiditySet};
use crate::error::{domain, Result};
use crate::{c, C64, I};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

fn coupling(roots: &RapiditySet) -> Result<f64> {
    roots.expect_model(Model::Bose)?;
    match roots.params.c {
        Some(c) if c > 0.0 => Ok(c),
        other => domain(format!("Bose gas needs c > 0, got {other:?}")),
    }
}

/// Max log-form mismatch in `e^{i k_j L} = prod_{l != j} (k_j - k_l + ic)/(k_j - k_l - ic)`.
pub fn bae_residual_bose(roots: &RapiditySet) -> Result<f64> {
    let cc = coupling(roots)?;
    let len = roots.length.value();
    let v = &roots.values;
    check_distinct(v)?;
    let mut worst: f64 = 0.0;
    for (j, &k) in v.iter().enumerate() {
        let mut r = I * k * len;
        for (l, &kl) in v.iter().enumerate() {
            if l != j {
                r -= ((k - kl + I * cc) / (k - kl - I * cc)).ln();
            }
        }
        worst = worst.max(wrap_log(r).norm());
    }
    Ok(worst)
}

/// `E = sum k_j^2`.
pub fn bose_energy(roots: &RapiditySet) -> C64 {
    roots.values.iter().map(|k| k * k).sum()
}

/// Solves `k_j L = 2 pi (n_j - (N+1)/2) - sum_l 2 atan((k_j - k_l)/c)`.
/// With this offset `n = 1` is the zero-momentum state of a single particle.
pub fn solve_bose(ring: f64, count: usize, cc: f64, qnums: &QuantumNumbers) -> Result<SolveReport> {
    if !(cc > 0.0) || !(ring > 0.0) {
        return domain(format!("need c > 0 and L > 0, got c = {cc}, L = {ring}"));
    }
    qnums.check(count)?;
    let n = qnums.values().to_vec();
    let shift = (count as f64 + 1.0) / 2.0;
    let system = |k: &DVector<f64>| {
        DVector::from_iterator(
            count,
            (0..count).map(|j| {
                let inter: f64 = (0..count).filter(|&l| l != j).map(|l| 2.0 * ((k[j] - k[l]) / cc).atan()).sum();
                k[j] * ring - 2.0 * PI * (n[j] as f64 - shift) + inter
            }),
        )
    };
    let jacobian = |k: &DVector<f64>| {
        let mut m = DMatrix::zeros(count, count);
        for j in 0..count {
            m[(j, j)] = ring;
            for l in 0..count {
                if l != j {
                    let d = k[j] - k[l];
                    let g = 2.0 * cc / (cc * cc + d * d);
                    m[(j, j)] += g;
                    m[(j, l)] -= g;
                }
            }
        }
        m
    };
    let x0 = DVector::from_iterator(count, n.iter().map(|&nj| 2.0 * PI * (nj as f64 - shift) / ring));
    let out = damped_newton(x0, system, jacobian, NewtonOptions::default());
    Ok(SolveReport {
        roots: RapiditySet {
            model: Model::Bose,
            length: Length::Ring(ring),
            values: out.x.iter().map(|&k| c(k)).collect(),
            params: ModelParams { c: Some(cc), ..Default::default() },
        },
        qnums: n,
        spin_qnums: None,
        residual: out.residual,
        iterations: out.iterations,
        converged: out.converged,
        seed: None,
    })
}
