use super::operator::{OperatorMatrix, Storage};
use crate::error::{LabError, Result};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest dimension for which a full spectrum is computed densely.
const FULL_SPECTRUM_LIMIT: usize = 8192;
const LANCZOS_TOL: f64 = 1e-11;

/// Which eigenpairs to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    All,
    Lowest(usize),
}

/// Ascending eigenvalues with eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DMatrix<C64>>,
}

impl Spectrum {
    /// Largest `|H v - E v| / |v|` over the returned pairs.
    pub fn max_residual(&self, m: &OperatorMatrix) -> f64 {
        let Some(vecs) = &self.eigenvectors else { return 0.0 };
        let mut worst: f64 = 0.0;
        for (k, e) in self.eigenvalues.iter().enumerate() {
            let v = vecs.column(k).into_owned();
            let r = m.apply(&v) - &v * C64::new(*e, 0.0);
            worst = worst.max(super::norm(&r) / super::norm(&v));
        }
        worst
    }

    /// Groups eigenvalues closer than `tol` into `(level, multiplicity)`.
    pub fn levels(&self, tol: f64) -> Vec<(f64, usize)> {
        group_levels(&self.eigenvalues, tol)
    }
}

pub fn group_levels(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &e in sorted {
        match out.last_mut() {
            Some((first, count)) if e - *first < tol => *count += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

fn check_hermitian(m: &OperatorMatrix) -> Result<()> {
    if m.is_hermitian() {
        return Ok(());
    }
    let dev = m.hermitian_deviation();
    if dev >= 1e-12 {
        return Err(LabError::NotHermitian(dev));
    }
    Ok(())
}

fn is_real(m: &DMatrix<C64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Eigenpairs of a Hermitian operator. Dense storage uses a full Hermitian
/// eigen-decomposition; sparse storage uses Lanczos for `Lowest(k)`.
pub fn diagonalize(m: &OperatorMatrix, which: Which) -> Result<Spectrum> {
    check_hermitian(m)?;
    let want = match which {
        Which::All => m.dim(),
        Which::Lowest(k) => k.min(m.dim()),
    };
    match (m.storage(), which) {
        (Storage::Sparse(_), Which::Lowest(k)) if k < m.dim() => lanczos_lowest(m, k),
        _ => {
            if m.dim() > FULL_SPECTRUM_LIMIT {
                return Err(LabError::Domain(format!(
                    "full spectrum requested for dimension {} (limit {FULL_SPECTRUM_LIMIT})",
                    m.dim()
                )));
            }
            let (vals, vecs) = dense_eigen(&m.to_dense());
            let mut order: Vec<usize> = (0..vals.len()).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            order.truncate(want);
            let eigenvalues = order.iter().map(|&i| vals[i]).collect();
            let eigenvectors = DMatrix::from_fn(m.dim(), order.len(), |r, c| vecs[(r, order[c])]);
            Ok(Spectrum { eigenvalues, eigenvectors: Some(eigenvectors) })
        }
    }
}

/// Ascending eigenvalues only.
pub fn eigenvalues(m: &OperatorMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    if m.dim() > FULL_SPECTRUM_LIMIT {
        return Err(LabError::Domain(format!("dimension {} too large for a full spectrum", m.dim())));
    }
    let d = m.to_dense();
    let mut vals: Vec<f64> = if is_real(&d) {
        d.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        d.symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn dense_eigen(d: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    if is_real(d) {
        let e = d.map(|z| z.re).symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let e = d.clone().symmetric_eigen();
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    }
}

/// Lanczos with full reorthogonalization and explicit restarts from the
/// current Ritz vectors. Deterministic: the start vector comes from a fixed seed.
fn lanczos_lowest(m: &OperatorMatrix, k: usize) -> Result<Spectrum> {
    let n = m.dim();
    let krylov = n.min((2 * k + 60).max(150));
    let mut rng = ChaCha8Rng::seed_from_u64(0x01a2_c705);
    let mut start = DVector::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    for _restart in 0..40 {
        let s = super::norm(&start);
        start /= C64::new(s, 0.0);
        let mut basis: Vec<DVector<C64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..krylov {
            let mut w = m.apply(&basis[j]);
            let a = basis[j].dotc(&w).re;
            alpha.push(a);
            for _ in 0..2 {
                for q in &basis {
                    let p = q.dotc(&w);
                    w.axpy(-p, q, C64::new(1.0, 0.0));
                }
            }
            let b = super::norm(&w);
            if j + 1 == krylov || b < 1e-13 {
                break;
            }
            beta.push(b);
            basis.push(w / C64::new(b, 0.0));
        }
        let size = alpha.len();
        let t = DMatrix::from_fn(size, size, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let e = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
        let take = k.min(size);
        let mut vals = Vec::with_capacity(take);
        let mut vecs = DMatrix::zeros(n, take);
        let mut worst: f64 = 0.0;
        let mut next = DVector::zeros(n);
        for (c, &idx) in order.iter().take(take).enumerate() {
            let theta = e.eigenvalues[idx];
            let mut y = DVector::zeros(n);
            for (i, q) in basis.iter().enumerate().take(size) {
                y.axpy(C64::new(e.eigenvectors[(i, idx)], 0.0), q, C64::new(1.0, 0.0));
            }
            let ny = super::norm(&y);
            y /= C64::new(ny, 0.0);
            let r = super::norm(&(m.apply(&y) - &y * C64::new(theta, 0.0)));
            worst = worst.max(r);
            next += &y;
            vals.push(theta);
            vecs.set_column(c, &y);
        }
        let spectrum = Spectrum { eigenvalues: vals, eigenvectors: Some(vecs) };
        if worst < LANCZOS_TOL && take == k {
            return Ok(spectrum);
        }
        start = next;
    }
    Err(LabError::NoConvergence(format!("Lanczos did not reach residual {LANCZOS_TOL:e} for {k} eigenpairs")))
}
