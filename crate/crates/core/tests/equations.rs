use bethe_lab::coordinate::energy_xxx;
use bethe_lab::equations::{
    bae_residual_bose, bae_residual_xxz, energy_xxz, logbae_residual, solve_bose, solve_logbae, solve_logbae_xxz,
    QuantumNumbers,
};
use bethe_lab::linalg::eigenvalues;
use bethe_lab::spin_chain::{build_xxz_hamiltonian, ChainSpace};
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Bose roots are real, ordered like their seeds, and solve the product form.
    #[test]
    fn bose_roots_follow_their_seeds(
        n in 1usize..=4,
        c in prop::sample::select(vec![0.1, 1.0, 10.0]),
        first in -3i64..=3,
        gaps in prop::collection::vec(1i64..=3, 3),
    ) {
        let mut q = vec![first];
        for g in gaps.iter().take(n - 1) {
            q.push(q.last().unwrap() + g);
        }
        let rep = solve_bose(1.0, n, c, &QuantumNumbers(q)).unwrap();
        prop_assert!(rep.converged);
        prop_assert!(rep.roots.is_real(1e-14));
        prop_assert!(rep.roots.values.windows(2).all(|w| w[0].re < w[1].re));
        prop_assert!(bae_residual_bose(&rep.roots).unwrap() < 1e-10);
    }

    /// XXZ solutions in the massless regime are eigenvalues of the chain.
    #[test]
    fn xxz_energies_are_in_the_spectrum(gamma in 0.3f64..2.8, n in 1usize..=3, shift in 0i64..=1) {
        let sites = 8;
        let q: Vec<i64> = (1..=n as i64).map(|j| j + if j == n as i64 { shift } else { 0 }).collect();
        let rep = solve_logbae_xxz(sites, n, gamma, &QuantumNumbers(q)).unwrap();
        prop_assume!(rep.converged);
        prop_assert!(bae_residual_xxz(&rep.roots).unwrap() < 1e-10);
        let e = energy_xxz(&rep.roots).unwrap().re;
        let h = build_xxz_hamiltonian(gamma.cos(), &ChainSpace::sector(sites, n).unwrap()).unwrap();
        let spectrum = eigenvalues(&h).unwrap();
        prop_assert!(spectrum.iter().any(|x| (x - e).abs() < 1e-8), "E = {e}");
    }
}

#[test]
fn distinct_quantum_numbers_give_distinct_roots() {
    for sites in [6, 8, 10] {
        for n in 1..=2usize {
            let mut found: Vec<Vec<f64>> = Vec::new();
            let bound = (sites / 2) as i64;
            for a in (n as i64 - bound)..=bound {
                for b in (a + 1)..=bound {
                    let q = if n == 1 { vec![a] } else { vec![a, b] };
                    if n == 1 && b > a + 1 {
                        continue;
                    }
                    let Ok(rep) = solve_logbae(sites, n, &QuantumNumbers(q.clone())) else { continue };
                    if !rep.converged || rep.roots.values.iter().any(|z| z.re.abs() > 1e6) {
                        continue;
                    }
                    assert!(logbae_residual(&rep.roots, &QuantumNumbers(q)).unwrap() < 1e-10);
                    let key: Vec<f64> = rep.roots.values.iter().map(|z| z.re).collect();
                    assert!(!found.iter().any(|f| f.iter().zip(&key).all(|(x, y)| (x - y).abs() < 1e-8)));
                    found.push(key);
                }
            }
            assert!(!found.is_empty());
        }
    }
}

#[test]
fn hard_core_limit_is_free_fermions() {
    for n in 1..=4usize {
        let rep = solve_bose(1.0, n, 1e6, &QuantumNumbers::ground_state(n)).unwrap();
        for (j, k) in rep.roots.values.iter().enumerate() {
            let free = 2.0 * PI * (j as f64 - (n as f64 - 1.0) / 2.0);
            assert!((k.re - free).abs() < 1e-4, "N = {n}: {} vs {free}", k.re);
        }
    }
}

#[test]
fn ground_energy_is_extensive() {
    let per_site: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&l| {
            let rep = solve_logbae(l, l / 2, &QuantumNumbers::ground_state(l / 2)).unwrap();
            energy_xxx(&rep.roots, 1.0).unwrap().re / l as f64
        })
        .collect();
    assert!(per_site.windows(2).all(|w| w[1] > w[0]));
    assert!((per_site[3] + 2f64.ln()).abs() < 1e-3);
}
