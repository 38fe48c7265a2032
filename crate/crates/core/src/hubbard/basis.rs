use crate::error::{domain, Result};
use crate::linalg::{OperatorMatrix, Space};
use crate::spin_chain::binomial;
use crate::{c, C64};
use nalgebra::DVector;
use rayon::prelude::*;

/// Largest lattice for fermionic operators (two orbitals per site in a `u32`).
pub const MAX_HUBBARD_SITES: usize = 12;

/// Orbital index `2 (x - 1) + spin` for 1-based site `x`, spin `0` up, `1` down.
pub fn orbital(x: usize, down: bool) -> usize {
    2 * (x - 1) + down as usize
}

/// Occupation bitmasks over `2L` orbitals with `N` electrons, `M` of them down.
///
/// A mask stands for `c+_{o_N} ... c+_{o_1} |0>` with `o_1 < ... < o_N`, so
/// creating an electron in orbital `o` costs `(-1)^(occupied orbitals above o)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermionBasis {
    sites: usize,
    electrons: usize,
    down: usize,
    states: Vec<u32>,
}

impl FermionBasis {
    pub fn new(sites: usize, electrons: usize, down: usize) -> Result<Self> {
        if sites == 0 || sites > MAX_HUBBARD_SITES {
            return domain(format!("need 1 <= L <= {MAX_HUBBARD_SITES}, got {sites}"));
        }
        if down > electrons || electrons - down > sites || down > sites {
            return domain(format!("no states with N = {electrons}, M = {down} on {sites} sites"));
        }
        let patterns = |count: usize| -> Vec<u32> { (0u32..1 << sites).filter(|p| p.count_ones() as usize == count).collect() };
        let spread = |p: u32, spin: u32| -> u32 { (0..sites).filter(|&x| p >> x & 1 == 1).map(|x| 1u32 << (2 * x as u32 + spin)).sum() };
        let ups = patterns(electrons - down);
        let downs = patterns(down);
        let mut states: Vec<u32> = ups
            .iter()
            .flat_map(|&u| downs.iter().map(move |&d| spread(u, 0) | spread(d, 1)))
            .collect();
        states.sort_unstable();
        debug_assert_eq!(states.len(), binomial(sites, electrons - down) * binomial(sites, down));
        Ok(Self { sites, electrons, down, states })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn electrons(&self) -> usize {
        self.electrons
    }

    pub fn down(&self) -> usize {
        self.down
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn index(&self, mask: u32) -> Option<usize> {
        self.states.binary_search(&mask).ok()
    }

    pub fn tag(&self) -> Space {
        Space::Fermion { sites: self.sites, electrons: self.electrons, down: self.down }
    }

    /// `(x, a)` tuples of a mask in ascending orbital order; `a = true` is down.
    pub fn electrons_of(mask: u32) -> Vec<(usize, bool)> {
        (0..32).filter(|o| mask >> o & 1 == 1).map(|o| (o / 2 + 1, o % 2 == 1)).collect()
    }

    fn operator<F>(&self, action: F) -> OperatorMatrix
    where
        F: Fn(u32) -> Vec<(u32, f64)> + Sync,
    {
        let triplets: Vec<(usize, usize, C64)> = (0..self.len())
            .into_par_iter()
            .flat_map_iter(|col| {
                action(self.states[col]).into_iter().map(move |(t, v)| {
                    (self.index(t).expect("operator leaves its block"), col, c(v))
                })
            })
            .collect();
        OperatorMatrix::from_triplets(self.len(), triplets, self.tag())
    }
}

fn sign_above(mask: u32, o: usize) -> f64 {
    if (mask >> (o + 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 }
}

/// `c_o` on a mask; `None` if the orbital is empty.
pub fn annihilate(mask: u32, o: usize) -> Option<(u32, f64)> {
    (mask >> o & 1 == 1).then(|| (mask & !(1 << o), sign_above(mask, o)))
}

/// `c+_o` on a mask; `None` if the orbital is occupied.
pub fn create(mask: u32, o: usize) -> Option<(u32, f64)> {
    (mask >> o & 1 == 0).then(|| (mask | 1 << o, sign_above(mask, o)))
}

/// `c+_to c_from` on a mask.
pub fn hop(mask: u32, from: usize, to: usize) -> Option<(u32, f64)> {
    let (m, s1) = annihilate(mask, from)?;
    let (m, s2) = create(m, to)?;
    Some((m, s1 * s2))
}

/// `H = -sum_{x,a} (c+_{x,a} c_{x+1,a} + h.c.) + u sum_x (1 - 2 n_{x up})(1 - 2 n_{x down})`
/// on the block with `N` electrons and `M` down spins, periodic in `x`.
///
/// For `L = 1` there is no bond; for `L = 2` both `(1,2)` and `(2,1)` bonds
/// of the periodic sum are kept, doubling the hopping.
pub fn build_hubbard_hamiltonian(sites: usize, u: f64, electrons: usize, down: usize) -> Result<OperatorMatrix> {
    let basis = FermionBasis::new(sites, electrons, down)?;
    let bonds: Vec<(usize, usize)> = if sites == 1 { vec![] } else { (1..=sites).map(|x| (x, x % sites + 1)).collect() };
    let op = basis.operator(|mask| {
        let mut out = Vec::new();
        let mut diag = 0.0;
        for x in 1..=sites {
            let nu = (mask >> orbital(x, false) & 1) as f64;
            let nd = (mask >> orbital(x, true) & 1) as f64;
            diag += u * (1.0 - 2.0 * nu) * (1.0 - 2.0 * nd);
        }
        out.push((mask, diag));
        for &(x, y) in &bonds {
            for spin in [false, true] {
                let (ox, oy) = (orbital(x, spin), orbital(y, spin));
                for (from, to) in [(oy, ox), (ox, oy)] {
                    if let Some((m, s)) = hop(mask, from, to) {
                        out.push((m, -s));
                    }
                }
            }
        }
        out
    });
    op.checked_hermitian()
}

/// Translation `c+_{x,a} -> c+_{x+1,a}` on the block.
pub fn build_fermion_shift(basis: &FermionBasis) -> OperatorMatrix {
    let sites = basis.sites();
    basis.operator(|mask| {
        let occupied: Vec<usize> = (0..2 * sites).filter(|o| mask >> o & 1 == 1).collect();
        let moved: Vec<usize> = occupied.iter().map(|&o| (o + 2) % (2 * sites)).collect();
        let inversions = (0..moved.len())
            .flat_map(|i| (i + 1..moved.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| moved[i] > moved[j])
            .count();
        let target = moved.iter().map(|&o| 1u32 << o).sum();
        vec![(target, if inversions % 2 == 0 { 1.0 } else { -1.0 })]
    })
}

/// `S+ v` with `S+ = sum_x c+_{x up} c_{x down}`, mapping `(N, M)` to `(N, M - 1)`.
pub fn raise_spin(v: &DVector<C64>, basis: &FermionBasis) -> Result<(DVector<C64>, FermionBasis)> {
    if basis.down() == 0 {
        return Ok((DVector::zeros(0), basis.clone()));
    }
    let target = FermionBasis::new(basis.sites(), basis.electrons(), basis.down() - 1)?;
    let mut out = DVector::zeros(target.len());
    for (i, &mask) in basis.states().iter().enumerate() {
        for x in 1..=basis.sites() {
            if let Some((m, s)) = hop(mask, orbital(x, true), orbital(x, false)) {
                out[target.index(m).expect("S+ stays in the block")] += v[i] * s;
            }
        }
    }
    Ok((out, target))
}
