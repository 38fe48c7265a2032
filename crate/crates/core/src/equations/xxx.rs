use super::{check_distinct, damped_newton, wrap_log, NewtonOptions, QuantumNumbers, SolveReport};
use crate::coordinate::{Model, RapiditySet, ROOT_EQ_TOL};
use crate::error::{domain, pole, Result};
use crate::{c, C64, I};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Max over `j` of the log-form mismatch in
/// `((l_j - i/2)/(l_j + i/2))^L = prod_{k != j} (l_j - l_k - i)/(l_j - l_k + i)`.
pub fn bae_residual_xxx(roots: &RapiditySet) -> Result<f64> {
    roots.expect_model(Model::Xxx)?;
    let sites = roots.sites()? as f64;
    let v = &roots.values;
    check_distinct(v)?;
    let mut worst: f64 = 0.0;
    for (j, &l) in v.iter().enumerate() {
        let (p, m) = (l + 0.5 * I, l - 0.5 * I);
        if p.norm() < ROOT_EQ_TOL || m.norm() < ROOT_EQ_TOL {
            return pole(format!("root {l} at +-i/2"));
        }
        let mut r = (m / p).ln() * sites;
        for (k, &lk) in v.iter().enumerate() {
            if k == j {
                continue;
            }
            let (num, den) = (l - lk - I, l - lk + I);
            if num.norm() < ROOT_EQ_TOL || den.norm() < ROOT_EQ_TOL {
                return pole(format!("roots {l}, {lk} differ by +-i"));
            }
            r -= (num / den).ln();
        }
        worst = worst.max(wrap_log(r).norm());
    }
    Ok(worst)
}

fn log_system(x: &[f64], n: &[i64], sites: f64) -> DVector<f64> {
    let count = x.len() as f64;
    DVector::from_iterator(
        x.len(),
        x.iter().enumerate().map(|(j, &l)| {
            let inter: f64 = x.iter().map(|&m| (l - m).atan()).sum();
            (2.0 * l).atan() / PI - n[j] as f64 / sites + (count + 1.0) / (2.0 * sites) - inter / (PI * sites)
        }),
    )
}

fn log_jacobian(x: &[f64], sites: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        jac[(j, j)] = 2.0 / (PI * (1.0 + 4.0 * x[j] * x[j]));
        for k in 0..n {
            if k != j {
                let g = 1.0 / (PI * sites * (1.0 + (x[j] - x[k]).powi(2)));
                jac[(j, j)] -= g;
                jac[(j, k)] += g;
            }
        }
    }
    jac
}

/// Max residual of the logarithmic equations
/// `(1/pi) atan(2 l_j) = n_j/L - (N+1)/(2L) + (1/(pi L)) sum_k atan(l_j - l_k)`.
pub fn logbae_residual(roots: &RapiditySet, qnums: &QuantumNumbers) -> Result<f64> {
    roots.expect_model(Model::Xxx)?;
    if !roots.is_real(0.0) {
        return domain("logarithmic equations need real roots");
    }
    qnums.check(roots.len())?;
    let x: Vec<f64> = roots.values.iter().map(|z| z.re).collect();
    let f = log_system(&x, qnums.values(), roots.sites()? as f64);
    Ok(f.iter().fold(0.0, |a, v| a.max(v.abs())))
}

/// Solves the logarithmic XXX equations with default Newton options.
pub fn solve_logbae(sites: usize, count: usize, qnums: &QuantumNumbers) -> Result<SolveReport> {
    solve_logbae_with(sites, count, qnums, NewtonOptions::default())
}

pub fn solve_logbae_with(sites: usize, count: usize, qnums: &QuantumNumbers, opts: NewtonOptions) -> Result<SolveReport> {
    super::check_even_chain(sites, count)?;
    qnums.check(count)?;
    let l = sites as f64;
    let n = qnums.values().to_vec();
    let x0 = DVector::from_iterator(
        count,
        n.iter().map(|&nj| 0.5 * (PI * (nj as f64 / l - (count as f64 + 1.0) / (2.0 * l))).tan()),
    );
    let out = damped_newton(
        x0,
        |x| log_system(x.as_slice(), &n, l),
        |x| log_jacobian(x.as_slice(), l),
        opts,
    );
    Ok(SolveReport {
        roots: RapiditySet::xxx(sites, out.x.iter().map(|&v| c(v)).collect::<Vec<C64>>()),
        qnums: n,
        spin_qnums: None,
        residual: out.residual,
        iterations: out.iterations,
        converged: out.converged,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::{energy_xxx, rapidity_to_momentum};

    #[test]
    fn free_magnon_quantization() {
        // k = 2 pi m / L  <=>  lambda = cot(k/2)/2
        for m in 1..6 {
            let k = 2.0 * PI * m as f64 / 6.0;
            let lam = 0.5 / (k / 2.0).tan();
            let r = RapiditySet::xxx_real(6, &[lam]);
            assert!(bae_residual_xxx(&r).unwrap() < 1e-12);
            assert!((rapidity_to_momentum(c(lam)).unwrap().re - (k - if k > PI { 2.0 * PI } else { 0.0 })).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_state_l8() {
        let rep = solve_logbae(8, 4, &QuantumNumbers::ground_state(4)).unwrap();
        assert!(rep.converged);
        let x: Vec<f64> = rep.roots.values.iter().map(|z| z.re).collect();
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        for j in 0..4 {
            assert!((x[j] + x[3 - j]).abs() < 1e-12);
        }
        assert!(bae_residual_xxx(&rep.roots).unwrap() < 1e-12);
        // ED ground energy of the L = 8 chain
        let e = energy_xxx(&rep.roots, 1.0).unwrap().re;
        assert!((e - -5.651093408937175).abs() < 1e-10, "{e}");
        let shifted = RapiditySet::xxx(8, rep.roots.values.iter().map(|z| z + 0.1).collect());
        assert!(logbae_residual(&shifted, &QuantumNumbers::ground_state(4)).unwrap() > 1e-3);
    }

    #[test]
    fn one_root_symmetric_case() {
        // L = 4, N = 1, n = 1: atan(2 l)/pi = 1/4 - 1/4 -> l = 0
        let rep = solve_logbae(4, 1, &QuantumNumbers(vec![1])).unwrap();
        assert!(rep.roots.values[0].norm() < 1e-14);
        assert_eq!(logbae_residual(&RapiditySet::xxx_real(4, &[0.0]), &QuantumNumbers(vec![1])).unwrap(), 0.0);
    }

    #[test]
    fn empty_sector_and_errors() {
        let rep = solve_logbae(6, 0, &QuantumNumbers(vec![])).unwrap();
        assert!(rep.converged && rep.roots.is_empty());
        assert!(solve_logbae(6, 4, &QuantumNumbers::ground_state(4)).is_err());
        assert!(bae_residual_xxx(&RapiditySet::xxx(6, vec![0.5 * I])).is_err());
        assert!(bae_residual_xxx(&RapiditySet::xxx_real(6, &[0.2, 0.2])).is_err());
        assert!(logbae_residual(&RapiditySet::xxx(6, vec![I]), &QuantumNumbers(vec![1])).is_err());
    }
}
