use super::{admissibility, bae_residual_xxx, damped_newton, solve_logbae, NewtonOptions, QuantumNumbers};
use crate::coordinate::{energy_xxx, RapiditySet};
use crate::error::{domain, Result};
use crate::{C64, I};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

const MERGE_TOL: f64 = 1e-6;
/// Converged conjugate pairs this close to `+-i/2` are the singular pair.
const SINGULAR_RADIUS: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    RealPair,
    BoundPair,
    /// `{i/2, -i/2}`: not admissible, yet it labels a genuine eigenstate with
    /// regularized energy `-J`.
    Singular,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoMagnonSolution {
    pub roots: RapiditySet,
    pub kind: PairKind,
    /// Energy at `J = 1`.
    pub energy: f64,
    /// Product-form residual; absent for the singular pair, which sits on a pole.
    pub residual: Option<f64>,
    pub qnums: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoMagnonReport {
    #[serde(rename = "L")]
    pub sites: usize,
    pub solutions: Vec<TwoMagnonSolution>,
    pub unconverged_seeds: Vec<String>,
}

impl TwoMagnonReport {
    /// Distinct energies (levels closer than `tol` merged), ascending.
    pub fn levels(&self, tol: f64) -> Vec<f64> {
        let mut e: Vec<f64> = self.solutions.iter().map(|s| s.energy).collect();
        e.sort_by(f64::total_cmp);
        crate::linalg::eigen_levels(&e, tol).into_iter().map(|l| l.0).collect()
    }

    pub fn of_kind(&self, kind: PairKind) -> impl Iterator<Item = &TwoMagnonSolution> {
        self.solutions.iter().filter(move |s| s.kind == kind)
    }
}

/// All `N = 2` solutions reachable from the real quantum-number scan and from
/// conjugate-pair seeds `x0 + 0.5 i` with `x0` on a 0.1 grid over `[-3, 3]`.
pub fn classify_two_magnon(sites: usize) -> Result<TwoMagnonReport> {
    if !sites.is_multiple_of(2) || !(4..=16).contains(&sites) {
        return domain(format!("two-magnon classification needs even 4 <= L <= 16, got {sites}"));
    }
    let mut solutions: Vec<TwoMagnonSolution> = Vec::new();
    let mut unconverged = Vec::new();
    let half = (sites / 2) as i64;
    for n1 in 3 - half..=half {
        for n2 in n1 + 1..=half {
            let q = QuantumNumbers(vec![n1, n2]);
            let rep = solve_logbae(sites, 2, &q)?;
            let v = &rep.roots.values;
            let ok = rep.converged && (v[0] - v[1]).norm() > MERGE_TOL && v.iter().all(|z| z.norm() < 1e6);
            let residual = if ok { bae_residual_xxx(&rep.roots).ok() } else { None };
            match residual {
                Some(r) if r < 1e-10 => {
                    let energy = energy_xxx(&rep.roots, 1.0)?.re;
                    push_unique(&mut solutions, TwoMagnonSolution {
                        roots: rep.roots,
                        kind: PairKind::RealPair,
                        energy,
                        residual: Some(r),
                        qnums: Some(vec![n1, n2]),
                    });
                }
                _ => unconverged.push(format!("real n = ({n1}, {n2})")),
            }
        }
    }
    for step in 0..=60 {
        let x0 = -3.0 + 0.1 * step as f64;
        match conjugate_pair(sites, x0, 0.5) {
            Some(sol) => push_unique(&mut solutions, sol),
            None => unconverged.push(format!("pair seed {x0:.1} + 0.5i")),
        }
    }
    solutions.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(TwoMagnonReport { sites, solutions, unconverged_seeds: unconverged })
}

fn push_unique(list: &mut Vec<TwoMagnonSolution>, s: TwoMagnonSolution) {
    let key = sorted(&s.roots.values);
    let dup = list.iter().any(|t| {
        let other = sorted(&t.roots.values);
        key.iter().zip(&other).all(|(a, b)| (a - b).norm() < MERGE_TOL)
    });
    if !dup {
        list.push(s);
    }
}

fn sorted(v: &[C64]) -> Vec<C64> {
    let mut v = v.to_vec();
    // partial_cmp treats -0.0 and 0.0 as equal
    v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    v
}

/// Newton on `z^L (2y + 1) = 2y - 1`, `z = (l - i/2)/(l + i/2)`, `l = x + iy`:
/// the first equation for the pair `{l, conj(l)}`; the second is its conjugate.
fn conjugate_pair(sites: usize, x0: f64, y0: f64) -> Option<TwoMagnonSolution> {
    let lf = sites as f64;
    let g = |p: &DVector<f64>| -> (C64, C64, C64) {
        let l = C64::new(p[0], p[1]);
        let den = l + 0.5 * I;
        let z = (l - 0.5 * I) / den;
        let zl = z.powf(lf);
        let y2 = 2.0 * p[1];
        let dz = I / (den * den);
        let d = lf * z.powf(lf - 1.0) * dz * (y2 + 1.0);
        (zl * (y2 + 1.0) - (y2 - 1.0), d, d * I + 2.0 * zl - 2.0)
    };
    let system = |p: &DVector<f64>| {
        let (v, _, _) = g(p);
        DVector::from_vec(vec![v.re, v.im])
    };
    let jacobian = |p: &DVector<f64>| {
        let (_, gx, gy) = g(p);
        DMatrix::from_row_slice(2, 2, &[gx.re, gy.re, gx.im, gy.im])
    };
    let out = damped_newton(
        DVector::from_vec(vec![x0, y0]),
        system,
        jacobian,
        NewtonOptions { tol: 1e-13, max_iter: 200 },
    );
    if !out.converged {
        return None;
    }
    let (x, y) = (out.x[0], out.x[1].abs());
    if y < MERGE_TOL {
        return None;
    }
    let lam = C64::new(x, y);
    if (lam - 0.5 * I).norm() < SINGULAR_RADIUS {
        return Some(TwoMagnonSolution {
            roots: RapiditySet::xxx(sites, vec![0.5 * I, -0.5 * I]),
            kind: PairKind::Singular,
            energy: -1.0,
            residual: None,
            qnums: None,
        });
    }
    let roots = RapiditySet::xxx(sites, vec![lam, lam.conj()]);
    if !admissibility(&roots).admissible {
        return None;
    }
    let r = bae_residual_xxx(&roots).ok()?;
    if r >= 1e-10 {
        return None;
    }
    let energy = energy_xxx(&roots, 1.0).ok()?;
    Some(TwoMagnonSolution { roots, kind: PairKind::BoundPair, energy: energy.re, residual: Some(r), qnums: None })
}
