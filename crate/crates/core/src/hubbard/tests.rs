use super::*;
use crate::linalg::{eigenvalues, norm};
use crate::{c, C64};
use std::f64::consts::PI;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn single_site_spectrum() {
    let u = 0.7;
    let mut all = Vec::new();
    for (n, m) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
        all.extend(eigenvalues(&build_hubbard_hamiltonian(1, u, n, m).unwrap()).unwrap());
    }
    assert_eq!(sorted(all), vec![-u, -u, u, u]);
}

#[test]
fn free_fermion_block() {
    let (sites, n, m) = (5, 3, 1);
    let eps: Vec<f64> = (0..sites).map(|q| -2.0 * (2.0 * PI * q as f64 / sites as f64).cos()).collect();
    let mut expect = Vec::new();
    for ups in 0u32..1 << sites {
        if ups.count_ones() as usize != n - m {
            continue;
        }
        let up_energy: f64 = (0..sites).filter(|q| ups >> q & 1 == 1).map(|q| eps[q]).sum();
        for d in 0..sites {
            expect.push(up_energy + eps[d]);
        }
    }
    let got = eigenvalues(&build_hubbard_hamiltonian(sites, 0.0, n, m).unwrap()).unwrap();
    for (a, b) in got.iter().zip(sorted(expect)) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn two_site_block() {
    let got = eigenvalues(&build_hubbard_hamiltonian(2, 1.0, 2, 1).unwrap()).unwrap();
    let r = 20f64.sqrt();
    for (a, b) in got.iter().zip([-r, -2.0, 2.0, r]) {
        assert!((a - b).abs() < 1e-12, "{got:?}");
    }
}

#[test]
fn block_dimensions_and_signs() {
    let basis = FermionBasis::new(6, 4, 2).unwrap();
    assert_eq!(basis.len(), 15 * 15);
    let (m, s) = hop(0b0101, 0, 6).unwrap();
    assert_eq!((m, s), (0b0100_0100, -1.0));
    assert!(create(0b1, 0).is_none() && annihilate(0b10, 0).is_none());
}

#[test]
fn free_lieb_wu_states() {
    let k: Vec<C64> = [0, 1, 5].iter().map(|&q| c(2.0 * PI * q as f64 / 6.0)).collect();
    let roots = NestedRoots::new(6, 1.5, k, vec![]).unwrap();
    assert!(liebwu_residual(&roots).unwrap() < 1e-14);
    let single = solve_liebwu(7, 1, 0, 2.0, &[3], &[]).unwrap();
    assert!((single.roots.values[0].re - 2.0 * PI * 3.0 / 7.0).abs() < 1e-14);
    let empty = NestedRoots::new(4, 1.2, vec![], vec![]).unwrap();
    assert_eq!(energy_momentum(&empty), (c(4.8), c(0.0)));
}

#[test]
fn ground_states_match_ed() {
    for (u, e_ref) in [(1.0, -1.68447), (2.0, 0.40159), (4.0, 4.46117)] {
        let (n, m) = ground_quantum_numbers(2, 1);
        let rep = solve_liebwu(6, 2, 1, u, &n, &m).unwrap();
        assert!(rep.converged && rep.residual < 1e-11);
        let roots = NestedRoots::from_rapidities(&rep.roots).unwrap();
        assert!(liebwu_residual(&roots).unwrap() < 1e-10);
        let e = energy_momentum(&roots).0;
        let ed = eigenvalues(&build_hubbard_hamiltonian(6, u, 2, 1).unwrap()).unwrap()[0];
        assert!((e.re - ed).abs() < 1e-9 && e.im.abs() < 1e-12);
        assert!((ed - e_ref).abs() < 1e-5);
        let check = verify_nested(&roots).unwrap();
        assert!(check.eigen_residual < 1e-8 && check.spin_raise_residual < 1e-8 && check.momentum_residual < 1e-8);

        let mut bad = roots.clone();
        bad.k[0] += 0.3;
        assert!(liebwu_residual(&bad).unwrap() > 0.1);
    }
}

#[test]
fn strong_coupling_momenta() {
    let (n, m) = ground_quantum_numbers(2, 1);
    let rep = solve_liebwu(6, 2, 1, 1e3, &n, &m).unwrap();
    let k: Vec<f64> = rep.roots.values[..2].iter().map(|z| z.re).collect();
    assert!((k[0] + PI / 6.0).abs() < 1e-2 && (k[1] - PI / 6.0).abs() < 1e-2, "{k:?}");
}

#[test]
fn antisymmetry_and_tie_continuity() {
    let roots = NestedRoots::new(
        7,
        1.3,
        vec![C64::new(0.4, 0.1), C64::new(-1.1, 0.0), C64::new(2.0, -0.2)],
        vec![C64::new(0.3, 0.05)],
    )
    .unwrap();
    let (x, a) = ([5usize, 2, 6], [false, true, false]);
    let psi = nested_wavefunction(&x, &a, &roots).unwrap();
    let psi_swapped = nested_wavefunction(&[2, 5, 6], &[true, false, false], &roots).unwrap();
    assert!((psi + psi_swapped).norm() < 1e-12 * psi.norm());
    assert_eq!(nested_wavefunction(&x, &[true, true, false], &roots).unwrap(), C64::default());

    let (n, m) = ground_quantum_numbers(2, 1);
    let rep = solve_liebwu(6, 2, 1, 2.0, &n, &m).unwrap();
    let onshell = NestedRoots::from_rapidities(&rep.roots).unwrap();
    let x = [3usize, 3];
    let one = nested_wavefunction_in_sector(&x, &[false, true], &[0, 1], &onshell).unwrap();
    let other = nested_wavefunction_in_sector(&x, &[false, true], &[1, 0], &onshell).unwrap();
    assert!((one - other).norm() < 1e-10 * one.norm().max(1e-300), "{one} vs {other}");
}

#[test]
fn assembled_state_stays_in_block() {
    let (n, m) = ground_quantum_numbers(3, 1);
    let rep = solve_liebwu(5, 3, 1, 1.0, &n, &m).unwrap();
    let roots = NestedRoots::from_rapidities(&rep.roots).unwrap();
    let (v, basis) = assemble_state(&roots).unwrap();
    assert_eq!(v.len(), basis.len());
    assert!(basis.states().iter().all(|s| s.count_ones() == 3));
    assert!(norm(&v) > 0.0);
    assert!(rep.converged);
    assert!(verify_nested(&roots).unwrap().eigen_residual < 1e-8);
}

#[test]
fn roots_json_round_trip() {
    let roots = NestedRoots::new(6, 2.0, vec![c(0.1), c(-0.4)], vec![c(0.25)]).unwrap();
    let s = serde_json::to_string(&roots).unwrap();
    assert!(s.contains("\"N\":2") && s.contains("\"M\":1"));
    assert_eq!(serde_json::from_str::<NestedRoots>(&s).unwrap(), roots);
    assert!(NestedRoots::new(3, 1.0, vec![c(0.1)], vec![c(0.2)]).is_err());
}
