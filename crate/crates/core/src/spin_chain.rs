//! Exact diagonalization of periodic spin-1/2 chains.
//!
//! Configurations are `u32` words: site `j` is bit `j - 1`, a set bit is a
//! down spin. The XXX and XXZ Hamiltonians sum over all `L` bonds including
//! `(L, 1)`, so an `L = 2` chain counts its single bond twice.

use crate::error::{domain, LabError, Result};
use crate::linalg::{self, eigen_levels, OperatorMatrix, Space, Which};
use crate::{c, C64, I};
use nalgebra::DVector;
use rayon::prelude::*;

pub const MAX_SITES: usize = 24;

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Configurations with a fixed number of down spins, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorBasis {
    sites: usize,
    down: usize,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(sites: usize, down: usize) -> Result<Self> {
        if sites > MAX_SITES || down > sites {
            return domain(format!("sector (L={sites}, N={down}) outside 0 <= N <= L <= {MAX_SITES}"));
        }
        let mut states = Vec::with_capacity(binomial(sites, down));
        if down == 0 {
            states.push(0);
        } else {
            let limit = 1u64 << sites;
            let mut s: u64 = (1 << down) - 1;
            while s < limit {
                states.push(s as u32);
                // next word with the same popcount
                let low = s & s.wrapping_neg();
                let ripple = s + low;
                s = (((ripple ^ s) >> 2) / low) | ripple;
            }
        }
        Ok(Self { sites, down, states })
    }

    pub fn sites(&self) -> usize {
        self.sites
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

    pub fn state(&self, i: usize) -> u32 {
        self.states[i]
    }

    /// Rank of a configuration, via the combinatorial number system.
    pub fn index(&self, config: u32) -> Option<usize> {
        if config.count_ones() as usize != self.down || (self.sites < 32 && config >> self.sites != 0) {
            return None;
        }
        let mut rank = 0;
        let mut word = config;
        let mut i = 0;
        while word != 0 {
            let pos = word.trailing_zeros() as usize;
            i += 1;
            rank += binomial(pos, i);
            word &= word - 1;
        }
        Some(rank)
    }

    /// 1-based positions of the down spins, increasing.
    pub fn positions(config: u32) -> Vec<usize> {
        (0..32).filter(|b| config >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn from_positions(positions: &[usize]) -> u32 {
        positions.iter().fold(0, |acc, &x| acc | 1 << (x - 1))
    }
}

/// The space a chain operator acts on.
#[derive(Clone, Debug)]
pub enum ChainSpace {
    Full { sites: usize },
    Sector(SectorBasis),
}

impl ChainSpace {
    pub fn full(sites: usize) -> Result<Self> {
        if sites > MAX_SITES {
            return domain(format!("L={sites} exceeds {MAX_SITES}"));
        }
        Ok(Self::Full { sites })
    }

    pub fn sector(sites: usize, down: usize) -> Result<Self> {
        Ok(Self::Sector(SectorBasis::new(sites, down)?))
    }

    pub fn sites(&self) -> usize {
        match self {
            Self::Full { sites } => *sites,
            Self::Sector(b) => b.sites(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Full { sites } => 1 << sites,
            Self::Sector(b) => b.len(),
        }
    }

    pub fn config(&self, i: usize) -> u32 {
        match self {
            Self::Full { .. } => i as u32,
            Self::Sector(b) => b.state(i),
        }
    }

    pub fn index(&self, config: u32) -> Option<usize> {
        match self {
            Self::Full { sites } => ((config as usize) < 1 << sites).then_some(config as usize),
            Self::Sector(b) => b.index(config),
        }
    }

    pub fn tag(&self) -> Space {
        match self {
            Self::Full { sites } => Space::Full { sites: *sites },
            Self::Sector(b) => Space::Sector { sites: b.sites(), down: b.down() },
        }
    }

    /// Builds an operator from a per-configuration action returning
    /// `(target configuration, amplitude)` pairs. Targets must stay in the space.
    pub(crate) fn operator<F>(&self, action: F) -> OperatorMatrix
    where
        F: Fn(u32) -> Vec<(u32, C64)> + Sync,
    {
        let triplets: Vec<(usize, usize, C64)> = (0..self.dim())
            .into_par_iter()
            .flat_map_iter(|col| {
                action(self.config(col)).into_iter().map(move |(t, v)| {
                    let row = self.index(t).expect("operator leaves its space");
                    (row, col, v)
                })
            })
            .collect();
        OperatorMatrix::from_triplets(self.dim(), triplets, self.tag())
    }
}

fn bonds(sites: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..sites).map(move |j| (j, (j + 1) % sites))
}

/// `H = J sum_j (s_j . s_{j+1} - 1/4)`, periodic.
pub fn build_xxx_hamiltonian(j: f64, space: &ChainSpace) -> Result<OperatorMatrix> {
    build_heisenberg(j, 1.0, space)
}

/// `H = sum_j [s^x s^x + s^y s^y + delta (s^z s^z - 1/4)]`, periodic.
pub fn build_xxz_hamiltonian(delta: f64, space: &ChainSpace) -> Result<OperatorMatrix> {
    build_heisenberg(1.0, delta, space)
}

fn build_heisenberg(j: f64, delta: f64, space: &ChainSpace) -> Result<OperatorMatrix> {
    let sites = space.sites();
    if sites < 2 {
        return domain("chain needs L >= 2");
    }
    let h = space.operator(|s| {
        let mut out = Vec::new();
        let mut diag = 0.0;
        for (a, b) in bonds(sites) {
            if (s >> a & 1) != (s >> b & 1) {
                diag -= 0.5 * delta * j;
                out.push((s ^ (1 << a) ^ (1 << b), c(0.5 * j)));
            }
        }
        if diag != 0.0 {
            out.push((s, c(diag)));
        }
        out
    });
    h.checked_hermitian()
}

/// Cyclic shift `|x_1..x_N> -> |x_1+1..x_N+1>` (site `L` wraps to site 1).
pub fn build_shift_operator(space: &ChainSpace) -> Result<OperatorMatrix> {
    let sites = space.sites();
    if sites < 2 {
        return domain("shift needs L >= 2");
    }
    Ok(space.operator(|s| vec![(rotate(s, sites), c(1.0))]))
}

pub(crate) fn rotate(s: u32, sites: usize) -> u32 {
    let mask = ((1u64 << sites) - 1) as u32;
    ((s << 1) | (s >> (sites - 1))) & mask
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinComponent {
    X,
    Y,
    Z,
    Raise,
    Lower,
    Casimir,
}

/// Total spin operator on the full space, or `Z`/`Casimir` on a sector.
pub fn build_total_spin(component: SpinComponent, space: &ChainSpace) -> Result<OperatorMatrix> {
    let sites = space.sites();
    if sites < 1 {
        return domain("L >= 1 required");
    }
    if matches!(space, ChainSpace::Sector(_)) && !matches!(component, SpinComponent::Z | SpinComponent::Casimir) {
        return domain(format!("{component:?} does not preserve a fixed-N sector; use the full space"));
    }
    let flips = |s: u32, raise: bool| -> Vec<(u32, C64)> {
        (0..sites)
            .filter(|&b| (s >> b & 1 == 1) == raise)
            .map(|b| (s ^ (1 << b), c(1.0)))
            .collect()
    };
    let op = match component {
        SpinComponent::Z => space.operator(|s| vec![(s, c((sites as f64 - 2.0 * s.count_ones() as f64) / 2.0))]),
        SpinComponent::Raise => space.operator(|s| flips(s, true)),
        SpinComponent::Lower => space.operator(|s| flips(s, false)),
        SpinComponent::X => space.operator(|s| {
            (0..sites).map(|b| (s ^ (1 << b), c(0.5))).collect()
        }),
        SpinComponent::Y => space.operator(|s| {
            // s^y = (s^+ - s^-) / 2i
            (0..sites)
                .map(|b| {
                    let raise = s >> b & 1 == 1;
                    let amp = if raise { -0.5 * I } else { 0.5 * I };
                    (s ^ (1 << b), amp)
                })
                .collect()
        }),
        SpinComponent::Casimir => space.operator(|s| {
            let mut out = Vec::new();
            let mut diag = 0.75 * sites as f64;
            for a in 0..sites {
                for b in a + 1..sites {
                    if (s >> a & 1) == (s >> b & 1) {
                        diag += 0.5;
                    } else {
                        diag -= 0.5;
                        out.push((s ^ (1 << a) ^ (1 << b), c(1.0)));
                    }
                }
            }
            out.push((s, c(diag)));
            out
        }),
    };
    Ok(op)
}

/// `S^+ v` for `v` on sector `N`, returned on sector `N - 1`.
pub fn raise_vector(v: &DVector<C64>, basis: &SectorBasis) -> Result<(DVector<C64>, SectorBasis)> {
    if v.len() != basis.len() {
        return Err(LabError::DimensionMismatch { left: v.len(), right: basis.len() });
    }
    if basis.down() == 0 {
        return Ok((DVector::zeros(1), basis.clone()));
    }
    let target = SectorBasis::new(basis.sites(), basis.down() - 1)?;
    let mut out = DVector::zeros(target.len());
    for (i, &s) in basis.states().iter().enumerate() {
        let mut w = s;
        while w != 0 {
            let b = w.trailing_zeros();
            out[target.index(s ^ (1 << b)).unwrap()] += v[i];
            w &= w - 1;
        }
    }
    Ok((out, target))
}

/// `S^- v` for `v` on sector `N`, returned on sector `N + 1`.
pub fn lower_vector(v: &DVector<C64>, basis: &SectorBasis) -> Result<(DVector<C64>, SectorBasis)> {
    if v.len() != basis.len() {
        return Err(LabError::DimensionMismatch { left: v.len(), right: basis.len() });
    }
    if basis.down() == basis.sites() {
        return domain("S^- annihilates the fully flipped state");
    }
    let target = SectorBasis::new(basis.sites(), basis.down() + 1)?;
    let mut out = DVector::zeros(target.len());
    for (i, &s) in basis.states().iter().enumerate() {
        for b in 0..basis.sites() {
            if s >> b & 1 == 0 {
                out[target.index(s | (1 << b)).unwrap()] += v[i];
            }
        }
    }
    Ok((out, target))
}

/// Energy levels of highest-weight states (`S^+ v = 0`) in sector `N` of the
/// XXX chain, by multiplet subtraction: a level's highest-weight count is its
/// multiplicity in sector `N` minus that in sector `N - 1`.
pub fn highest_weight_levels(sites: usize, down: usize, j: f64, tol: f64) -> Result<Vec<(f64, usize)>> {
    if 2 * down > sites {
        return domain("highest-weight states need N <= L/2");
    }
    let levels = |n: usize| -> Result<Vec<(f64, usize)>> {
        let h = build_xxx_hamiltonian(j, &ChainSpace::sector(sites, n)?)?;
        Ok(eigen_levels(&linalg::eigenvalues(&h)?, tol))
    };
    let upper = levels(down)?;
    let lower = if down == 0 { Vec::new() } else { levels(down - 1)? };
    let mut out = Vec::new();
    for (e, m) in upper {
        let m_lower = lower.iter().find(|(f, _)| (f - e).abs() < tol).map_or(0, |x| x.1);
        if m > m_lower {
            out.push((e, m - m_lower));
        }
    }
    Ok(out)
}

/// Lowest eigenpair of a Hermitian operator.
pub fn ground_state(h: &OperatorMatrix) -> Result<(f64, DVector<C64>)> {
    let s = linalg::diagonalize(h, Which::Lowest(1))?;
    let v = s.eigenvectors.unwrap().column(0).into_owned();
    Ok((s.eigenvalues[0], v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator_norm;

    #[test]
    fn sector_sizes_and_ranks() {
        assert_eq!(SectorBasis::new(4, 0).unwrap().len(), 1);
        assert_eq!(SectorBasis::new(4, 2).unwrap().len(), 6);
        let b = SectorBasis::new(12, 6).unwrap();
        assert_eq!(b.len(), 924);
        for (i, &s) in b.states().iter().enumerate() {
            assert_eq!(b.index(s), Some(i));
        }
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        assert!(SectorBasis::new(4, 5).is_err());
        assert!(SectorBasis::new(25, 1).is_err());
        assert_eq!(b.index(0b111), None);
    }

    #[test]
    fn two_site_chain_double_counts_bond() {
        let h = build_xxx_hamiltonian(1.0, &ChainSpace::full(2).unwrap()).unwrap();
        let e = linalg::eigenvalues(&h).unwrap();
        let expected = [-2.0, 0.0, 0.0, 0.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn xx_two_site_spectrum() {
        // delta = 0: flip block [[0,1],[1,0]]
        let h = build_xxz_hamiltonian(0.0, &ChainSpace::full(2).unwrap()).unwrap();
        let e = linalg::eigenvalues(&h).unwrap();
        for (a, b) in e.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn xxz_at_isotropic_point_is_xxx() {
        let sp = ChainSpace::full(4).unwrap();
        let a = build_xxz_hamiltonian(1.0, &sp).unwrap();
        let b = build_xxx_hamiltonian(1.0, &sp).unwrap();
        assert_eq!(a.max_difference(&b).unwrap(), 0.0);
    }

    #[test]
    fn ferromagnetic_vacuum() {
        let sp = ChainSpace::full(6).unwrap();
        let h = build_xxx_hamiltonian(-1.0, &sp).unwrap();
        let e = linalg::eigenvalues(&h).unwrap();
        assert!(e[0].abs() < 1e-12);
        let mut vac = DVector::zeros(64);
        vac[0] = c(1.0);
        assert!(linalg::norm(&h.apply(&vac)) < 1e-14);
    }

    #[test]
    fn shift_is_cyclic() {
        let sp = ChainSpace::full(5).unwrap();
        let u = build_shift_operator(&sp).unwrap();
        assert_eq!(u.get(0b00010, 0b00001), c(1.0));
        assert_eq!(u.get(0b00001, 0b10000), c(1.0));
        let mut p = u.clone();
        for _ in 1..5 {
            p = p.matmul(&u).unwrap();
        }
        assert_eq!(p.max_difference(&OperatorMatrix::identity(32, sp.tag())).unwrap(), 0.0);
        let h = build_xxx_hamiltonian(1.0, &sp).unwrap();
        assert!(commutator_norm(&h, &u).unwrap() < 1e-12);
    }

    #[test]
    fn spin_algebra() {
        let sp = ChainSpace::full(4).unwrap();
        let get = |a| build_total_spin(a, &sp).unwrap();
        let (x, y, z) = (get(SpinComponent::X), get(SpinComponent::Y), get(SpinComponent::Z));
        let comm = x.matmul(&y).unwrap().combine(c(1.0), &y.matmul(&x).unwrap(), c(-1.0)).unwrap();
        assert!(comm.max_difference(&z.scale(I)).unwrap() < 1e-12);
        let cas = x.matmul(&x).unwrap()
            .combine(c(1.0), &y.matmul(&y).unwrap(), c(1.0)).unwrap()
            .combine(c(1.0), &z.matmul(&z).unwrap(), c(1.0)).unwrap();
        assert!(cas.max_difference(&get(SpinComponent::Casimir)).unwrap() < 1e-12);
        let mut vac = DVector::zeros(16);
        vac[0] = c(1.0);
        assert_eq!(linalg::norm(&get(SpinComponent::Raise).apply(&vac)), 0.0);
        let h = build_xxz_hamiltonian(0.5, &sp).unwrap();
        assert!(commutator_norm(&h, &z).unwrap() < 1e-12);
        assert!(commutator_norm(&h, &x).unwrap() > 0.1);
        let hx = build_xxx_hamiltonian(1.0, &sp).unwrap();
        assert!(commutator_norm(&hx, &x).unwrap() < 1e-12);
    }

    #[test]
    fn sector_raise_matches_full_space() {
        let basis = SectorBasis::new(5, 2).unwrap();
        let v = DVector::from_fn(basis.len(), |i, _| C64::new(i as f64, 1.0 - i as f64));
        let (r, target) = raise_vector(&v, &basis).unwrap();
        let full = build_total_spin(SpinComponent::Raise, &ChainSpace::full(5).unwrap()).unwrap();
        let mut fv = DVector::zeros(32);
        for (i, &s) in basis.states().iter().enumerate() {
            fv[s as usize] = v[i];
        }
        let fr = full.apply(&fv);
        for (i, &s) in target.states().iter().enumerate() {
            assert_eq!(fr[s as usize], r[i]);
        }
    }
}
