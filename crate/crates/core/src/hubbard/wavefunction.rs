use super::basis::{build_fermion_shift, build_hubbard_hamiltonian, raise_spin, FermionBasis};
use super::liebwu::{energy_momentum, NestedRoots};
use crate::error::{domain, pole, Result};
use crate::linalg::{for_each_permutation, norm, permutation_sign};
use crate::{C64, I};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// Factorial-cost guards for the double permutation sum.
pub const MAX_NESTED_ELECTRONS: usize = 6;
pub const MAX_NESTED_DOWN: usize = 2;

fn f_factor(lambda: C64, k: &[C64], y: usize, u: f64) -> Result<C64> {
    let den = |s: C64| lambda - s + I * u;
    let last = den(k[y - 1].sin());
    if last.norm() < 1e-12 {
        return pole(format!("lambda - sin k = -iu at lambda = {lambda}"));
    }
    let mut f = 2.0 * I * u / last;
    for kj in &k[..y - 1] {
        let s = kj.sin();
        f *= (lambda - s - I * u) / den(s);
    }
    Ok(f)
}

fn a_factor(lambda: &[C64], u: f64) -> Result<C64> {
    let mut a = C64::new(1.0, 0.0);
    for m in 0..lambda.len() {
        for n in m + 1..lambda.len() {
            let d = lambda[m] - lambda[n];
            if d.norm() < 1e-12 {
                return pole("coincident spin rapidities");
            }
            a *= (d - 2.0 * I * u) / d;
        }
    }
    Ok(a)
}

/// Spin amplitude `<a Q | k P, lambda>`: `spins` is the spin sequence in
/// sector order (`true` = down) and `k` the permuted momenta.
fn spin_amplitude(spins: &[bool], k: &[C64], lambda: &[C64], u: f64) -> Result<C64> {
    let y: Vec<usize> = spins.iter().enumerate().filter(|e| *e.1).map(|e| e.0 + 1).collect();
    if y.len() != lambda.len() {
        return Ok(C64::default());
    }
    let mut total = C64::default();
    let mut failure = None;
    for_each_permutation(lambda.len(), |r, _| {
        if failure.is_some() {
            return;
        }
        let permuted: Vec<C64> = r.iter().map(|&i| lambda[i]).collect();
        let term = a_factor(&permuted, u).and_then(|a| {
            permuted.iter().zip(&y).try_fold(a, |acc, (&l, &yl)| Ok(acc * f_factor(l, k, yl, u)?))
        });
        match term {
            Ok(t) => total += t,
            Err(e) => failure = Some(e),
        }
    });
    failure.map_or(Ok(total), Err)
}

/// Wavefunction in an explicitly chosen sector `q` (`x[q[0]] <= x[q[1]] <= ...`).
pub fn nested_wavefunction_in_sector(x: &[usize], a: &[bool], q: &[usize], roots: &NestedRoots) -> Result<C64> {
    let n = roots.electrons();
    if x.len() != n || a.len() != n || q.len() != n {
        return domain(format!("need {n} coordinates, spins and sector entries"));
    }
    if q.windows(2).any(|w| x[w[0]] > x[w[1]]) {
        return domain(format!("{q:?} does not order {x:?}"));
    }
    let spins: Vec<bool> = q.iter().map(|&i| a[i]).collect();
    let xq: Vec<f64> = q.iter().map(|&i| x[i] as f64).collect();
    let sign_q = permutation_sign(q);
    let mut total = C64::default();
    let mut failure = None;
    for_each_permutation(n, |p, sign_p| {
        if failure.is_some() {
            return;
        }
        let kp: Vec<C64> = p.iter().map(|&i| roots.k[i]).collect();
        match spin_amplitude(&spins, &kp, &roots.lambda, roots.u) {
            Ok(amp) => {
                let phase: C64 = kp.iter().zip(&xq).map(|(k, x)| k * x).sum();
                total += amp * (I * phase).exp() * (sign_p * sign_q);
            }
            Err(e) => failure = Some(e),
        }
    });
    failure.map_or(Ok(total), Err)
}

/// Nested Bethe wavefunction at 1-based coordinates `x` with spins `a`
/// (`true` = down). The sector is the stable sort of `x`, so tied
/// coordinates keep their input order.
pub fn nested_wavefunction(x: &[usize], a: &[bool], roots: &NestedRoots) -> Result<C64> {
    check_guards(roots)?;
    if x.iter().any(|&xi| xi < 1 || xi > roots.sites) {
        return domain(format!("coordinates {x:?} outside 1..={}", roots.sites));
    }
    let mut q: Vec<usize> = (0..x.len()).collect();
    q.sort_by_key(|&i| x[i]);
    nested_wavefunction_in_sector(x, a, &q, roots)
}

fn check_guards(roots: &NestedRoots) -> Result<()> {
    if roots.electrons() > MAX_NESTED_ELECTRONS || roots.down() > MAX_NESTED_DOWN {
        return domain(format!(
            "nested wavefunction is capped at N <= {MAX_NESTED_ELECTRONS}, M <= {MAX_NESTED_DOWN}"
        ));
    }
    Ok(())
}

/// `sum_{x,a} psi(x; a) |x, a>` on the `(N, M)` block. All `N!` orderings of
/// one occupation pattern contribute equally, so each basis coefficient is
/// `psi` at the orbital-ascending tuple (the overall `1/N!` is dropped).
pub fn assemble_state(roots: &NestedRoots) -> Result<(DVector<C64>, FermionBasis)> {
    check_guards(roots)?;
    let basis = FermionBasis::new(roots.sites, roots.electrons(), roots.down())?;
    let mut v = DVector::zeros(basis.len());
    for (i, &mask) in basis.states().iter().enumerate() {
        let (x, a): (Vec<usize>, Vec<bool>) = FermionBasis::electrons_of(mask).into_iter().unzip();
        v[i] = nested_wavefunction(&x, &a, roots)?;
    }
    Ok((v, basis))
}

/// Checks of an assembled state against the block Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedVerification {
    pub roots: NestedRoots,
    pub energy: C64,
    pub momentum: C64,
    /// `|H v - E v| / |v|`.
    pub eigen_residual: f64,
    /// `|S+ v| / |v|`.
    pub spin_raise_residual: f64,
    /// `|T^dagger v - e^{iP} v| / |v|` with `T` the translation.
    pub momentum_residual: f64,
}

pub fn verify_nested(roots: &NestedRoots) -> Result<NestedVerification> {
    let (v, basis) = assemble_state(roots)?;
    let size = norm(&v);
    if size == 0.0 {
        return domain("assembled state vanishes");
    }
    let (energy, momentum) = energy_momentum(roots);
    let h = build_hubbard_hamiltonian(roots.sites, roots.u, roots.electrons(), roots.down())?;
    let eigen_residual = norm(&(h.apply(&v) - &v * energy)) / size;
    let (raised, _) = raise_spin(&v, &basis)?;
    let shift = build_fermion_shift(&basis);
    let back = shift.adjoint().apply(&v);
    let momentum_residual = norm(&(back - &v * (I * momentum).exp())) / size;
    Ok(NestedVerification {
        roots: roots.clone(),
        energy,
        momentum,
        eigen_residual,
        spin_raise_residual: norm(&raised) / size,
        momentum_residual,
    })
}
