use bethe_lab::linalg::{commutator_norm, eigen_levels, eigenvalues};
use bethe_lab::spin_chain::{
    build_shift_operator, build_total_spin, build_xxx_hamiltonian, build_xxz_hamiltonian, ChainSpace, SectorBasis,
    SpinComponent,
};
use proptest::prelude::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn xxz_symmetries(sites in 2usize..=9, delta in -2.0f64..2.0) {
        let space = ChainSpace::full(sites).unwrap();
        let h = build_xxz_hamiltonian(delta, &space).unwrap();
        prop_assert!(h.is_hermitian());
        let sz = build_total_spin(SpinComponent::Z, &space).unwrap();
        let u = build_shift_operator(&space).unwrap();
        prop_assert!(commutator_norm(&h, &sz).unwrap() < 1e-12);
        prop_assert!(commutator_norm(&h, &u).unwrap() < 1e-12);
        // Block-diagonal: no entry connects different magnetizations.
        for (i, j, _) in h.triplets() {
            prop_assert_eq!((i as u32).count_ones(), (j as u32).count_ones());
        }
    }

    #[test]
    fn reversing_coupling_inverts_spectrum(sites in 2usize..=8, j in 0.1f64..3.0) {
        let space = ChainSpace::full(sites).unwrap();
        let plus = eigenvalues(&build_xxx_hamiltonian(j, &space).unwrap()).unwrap();
        let minus = eigenvalues(&build_xxx_hamiltonian(-j, &space).unwrap()).unwrap();
        let flipped = sorted(minus.iter().map(|e| -e).collect());
        for (a, b) in plus.iter().zip(&flipped) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn full_spectrum_is_union_of_sectors(sites in 2usize..=8, delta in -1.5f64..1.5) {
        let full = eigenvalues(&build_xxz_hamiltonian(delta, &ChainSpace::full(sites).unwrap()).unwrap()).unwrap();
        let mut union = Vec::new();
        for down in 0..=sites {
            let h = build_xxz_hamiltonian(delta, &ChainSpace::sector(sites, down).unwrap()).unwrap();
            prop_assert_eq!(h.dim(), SectorBasis::new(sites, down).unwrap().len());
            union.extend(eigenvalues(&h).unwrap());
        }
        for (a, b) in full.iter().zip(&sorted(union)) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}

/// At the isotropic point each level is a sum of SU(2) multiplets:
/// its multiplicity is `sum (2S + 1)` over the Casimir values found in it.
#[test]
fn multiplicities_match_casimir() {
    for sites in [4, 6, 8] {
        let space = ChainSpace::full(sites).unwrap();
        let h = build_xxx_hamiltonian(1.0, &space).unwrap();
        let casimir = build_total_spin(SpinComponent::Casimir, &space).unwrap();
        let spectrum = bethe_lab::linalg::diagonalize(&h, bethe_lab::linalg::Which::All).unwrap();
        let vecs = spectrum.eigenvectors.unwrap();
        let mut start = 0;
        for (_, mult) in eigen_levels(&spectrum.eigenvalues, 1e-8) {
            let block = vecs.columns(start, mult).into_owned();
            let projected = block.adjoint() * casimir.to_dense() * &block;
            let s2 = projected.map(|z| z.re).symmetric_eigenvalues();
            // Count states per spin value; each S must fill whole multiplets.
            let mut counts = std::collections::BTreeMap::new();
            for v in s2.iter() {
                let s = (-1.0 + (1.0 + 4.0 * v).sqrt()) / 2.0;
                let twice = (2.0 * s).round();
                assert!((2.0 * s - twice).abs() < 1e-6, "S(S+1) = {v} is not a spin value");
                *counts.entry(twice as i64).or_insert(0usize) += 1;
            }
            for (twice, n) in counts {
                assert_eq!(n % (twice as usize + 1), 0, "L = {sites}: {n} states with 2S = {twice}");
            }
            start += mult;
        }
    }
}

#[test]
fn sector_basis_counts_and_order() {
    let b = SectorBasis::new(10, 4).unwrap();
    assert_eq!(b.len(), 210);
    assert!(b.states().windows(2).all(|w| w[0] < w[1]));
    for (i, &s) in b.states().iter().enumerate() {
        assert_eq!(b.index(s), Some(i));
        assert_eq!(SectorBasis::from_positions(&SectorBasis::positions(s)), s);
    }
}
