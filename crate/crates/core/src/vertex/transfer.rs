use super::weights::{r_matrix, VertexWeights};
use crate::error::{domain, LabError, Result};
use crate::linalg::{OperatorMatrix, Space};
use crate::spin_chain::{build_xxz_hamiltonian, ChainSpace, SectorBasis};
use crate::{c, C64};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest chain for monodromy and transfer matrices.
pub const MAX_VERTEX_SITES: usize = 14;

fn check_sites(sites: usize) -> Result<()> {
    if sites == 0 || sites > MAX_VERTEX_SITES {
        return domain(format!("need 1 <= L <= {MAX_VERTEX_SITES}, got {sites}"));
    }
    Ok(())
}

/// Pushes an auxiliary spin through sites `1..=L` in order, calling
/// `emit(aux_out, config_out, amplitude)` for every nonzero path.
pub(crate) fn propagate(aux: u32, config: u32, w: &[[C64; 3]], emit: &mut impl FnMut(u32, u32, C64)) {
    fn walk(j: usize, aux: u32, cfg: u32, amp: C64, w: &[[C64; 3]], emit: &mut impl FnMut(u32, u32, C64)) {
        if j == w.len() {
            emit(aux, cfg, amp);
            return;
        }
        let [a, b, cc] = w[j];
        let s = (cfg >> j) & 1;
        if s == aux {
            if a != C64::default() {
                walk(j + 1, aux, cfg, amp * a, w, emit);
            }
        } else {
            if b != C64::default() {
                walk(j + 1, aux, cfg, amp * b, w, emit);
            }
            if cc != C64::default() {
                walk(j + 1, s, cfg ^ (1 << j), amp * cc, w, emit);
            }
        }
    }
    walk(0, aux, config, c(1.0), w, emit);
}

/// `T_0(lambda) = R_0L(lambda - xi_L) ... R_01(lambda - xi_1)` on
/// `aux (x) chain`, index `aux * 2^L + config`.
pub fn monodromy(lambda: C64, sites: usize, weights: &VertexWeights) -> Result<OperatorMatrix> {
    check_sites(sites)?;
    let w = weights.site_weights(lambda, sites)?;
    let half = 1usize << sites;
    let mut triplets = Vec::new();
    for aux in 0..2u32 {
        for cfg in 0..half as u32 {
            let col = aux as usize * half + cfg as usize;
            propagate(aux, cfg, &w, &mut |ao, co, amp| triplets.push((ao as usize * half + co as usize, col, amp)));
        }
    }
    Ok(OperatorMatrix::from_triplets(2 * half, triplets, Space::Monodromy { sites }))
}

/// `tr_0 T_0(lambda)` restricted to the sector with `down` down spins.
pub fn transfer_block(lambda: C64, sites: usize, down: usize, weights: &VertexWeights) -> Result<OperatorMatrix> {
    check_sites(sites)?;
    let w = weights.site_weights(lambda, sites)?;
    Ok(ChainSpace::sector(sites, down)?.operator(|cfg| {
        let mut out = Vec::new();
        for aux in 0..2 {
            propagate(aux, cfg, &w, &mut |ao, co, amp| {
                if ao == aux {
                    out.push((co, amp));
                }
            });
        }
        out
    }))
}

/// Transfer matrix stored as its `S^z` blocks.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub sites: usize,
    pub lambda: C64,
    /// `blocks[n]` acts on the sector with `n` down spins.
    pub blocks: Vec<OperatorMatrix>,
}

impl TransferMatrix {
    pub fn block(&self, down: usize) -> Option<&OperatorMatrix> {
        self.blocks.get(down)
    }

    /// Assembles the `2^L x 2^L` matrix.
    pub fn full(&self) -> Result<OperatorMatrix> {
        let mut triplets = Vec::new();
        for (down, block) in self.blocks.iter().enumerate() {
            let basis = SectorBasis::new(self.sites, down)?;
            for (i, j, v) in block.triplets() {
                triplets.push((basis.state(i) as usize, basis.state(j) as usize, v));
            }
        }
        Ok(OperatorMatrix::from_triplets(1 << self.sites, triplets, Space::Full { sites: self.sites }))
    }

    /// `tr t^M`.
    pub fn trace_power(&self, power: u32) -> C64 {
        self.blocks.iter().map(|b| matrix_power(&b.to_dense(), power).trace()).sum()
    }
}

pub fn transfer(lambda: C64, sites: usize, weights: &VertexWeights) -> Result<TransferMatrix> {
    let blocks = (0..=sites).map(|n| transfer_block(lambda, sites, n, weights)).collect::<Result<_>>()?;
    Ok(TransferMatrix { sites, lambda, blocks })
}

fn matrix_power(m: &DMatrix<C64>, mut power: u32) -> DMatrix<C64> {
    let mut result = DMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while power > 0 {
        if power & 1 == 1 {
            result = &result * &base;
        }
        power >>= 1;
        if power > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Spectral parameter implied by the weights (`0` for direct weights).
fn own_lambda(weights: &VertexWeights) -> C64 {
    weights.parameterization.map_or(c(0.0), |p| p.lambda)
}

/// `Z_{L,M} = tr (t)^M` on an `L x M` torus.
pub fn partition_function(sites: usize, rows: u32, weights: &VertexWeights) -> Result<C64> {
    if sites > 12 || rows == 0 {
        return domain(format!("partition function needs L <= 12 and M >= 1, got L = {sites}, M = {rows}"));
    }
    Ok(transfer(own_lambda(weights), sites, weights)?.trace_power(rows))
}

/// Direct sum over all `2^(2LM)` edge configurations of the periodic
/// `L x M` lattice (`L M <= 12`), independent of the transfer matrix.
pub fn partition_function_bruteforce(sites: usize, rows: u32, weights: &VertexWeights) -> Result<C64> {
    let rows = rows as usize;
    if sites == 0 || rows == 0 || sites * rows > 12 {
        return domain(format!("brute-force enumeration needs 1 <= L M <= 12, got {sites} x {rows}"));
    }
    let w = weights.site_weights(own_lambda(weights), sites)?;
    let cells = sites * rows;
    let bit = |mask: u32, r: usize, j: usize| (mask >> (r * sites + j)) & 1;
    let mut total = C64::default();
    for vertical in 0u32..1 << cells {
        for horizontal in 0u32..1 << cells {
            let mut term = c(1.0);
            for r in 0..rows {
                for j in 0..sites {
                    let (aux_in, site_in) = (bit(horizontal, r, j), bit(vertical, r, j));
                    let (aux_out, site_out) = (bit(horizontal, r, (j + 1) % sites), bit(vertical, (r + 1) % rows, j));
                    if aux_in + site_in != aux_out + site_out {
                        term = C64::default();
                        break;
                    }
                    let [a, b, cc] = w[j];
                    term *= if aux_in == site_in { a } else if aux_in == aux_out { b } else { cc };
                }
                if term == C64::default() {
                    break;
                }
            }
            total += term;
        }
    }
    Ok(total)
}

/// Max entry of `R_00'(l - m) T_0(l) T_0'(m) - T_0'(m) T_0(l) R_00'(l - m)`.
pub fn rtt_residual(lambda: C64, mu: C64, sites: usize, weights: &VertexWeights) -> Result<f64> {
    if sites > 8 {
        return domain("RTT check is dense; use L <= 8");
    }
    let p = weights
        .parameterization
        .ok_or_else(|| LabError::Domain("RTT check needs parameterized weights".into()))?;
    let t_l = monodromy(lambda, sites, weights)?.to_dense();
    let t_m = monodromy(mu, sites, weights)?.to_dense();
    let r = r_matrix(lambda - mu, p.eta, p.rho);
    let half = 1usize << sites;
    let dim = 4 * half;
    let split = |i: usize| (i / (2 * half), (i / half) % 2, i % half);
    let first = DMatrix::from_fn(dim, dim, |i, j| {
        let ((a, ap, s), (b, bp, t)) = (split(i), split(j));
        if ap == bp { t_l[(a * half + s, b * half + t)] } else { c(0.0) }
    });
    let second = DMatrix::from_fn(dim, dim, |i, j| {
        let ((a, ap, s), (b, bp, t)) = (split(i), split(j));
        if a == b { t_m[(ap * half + s, bp * half + t)] } else { c(0.0) }
    });
    let rr = DMatrix::from_fn(dim, dim, |i, j| {
        let ((a, ap, s), (b, bp, t)) = (split(i), split(j));
        if s == t { r[(2 * a + ap, 2 * b + bp)] } else { c(0.0) }
    });
    let diff = &rr * &first * &second - &second * &first * &rr;
    Ok(diff.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// XXZ Hamiltonian rebuilt from `t(0)^{-1} t'(0)` of the homogeneous model.
#[derive(Clone, Debug)]
pub struct HamiltonianLink {
    pub sites: usize,
    pub eta: f64,
    pub step: f64,
    pub matrix: OperatorMatrix,
    /// Max entry deviation from the directly built Hamiltonian.
    pub deviation: f64,
}

pub const LINK_STEP: f64 = 1e-5;

pub fn hamiltonian_from_transfer(sites: usize, eta: f64, rho: f64, j: f64) -> Result<HamiltonianLink> {
    hamiltonian_from_transfer_with_step(sites, eta, rho, j, LINK_STEP)
}

/// `H = J [sh(eta)/2 * t(0)^{-1} t'(0) - ch(eta) L / 2]` with a central
/// difference of step `step` for `t'(0)`, compared against the XXZ chain
/// with `Delta = ch(eta)`.
pub fn hamiltonian_from_transfer_with_step(
    sites: usize,
    eta: f64,
    rho: f64,
    j: f64,
    step: f64,
) -> Result<HamiltonianLink> {
    if !(3..=12).contains(&sites) {
        return domain(format!("Hamiltonian link needs 3 <= L <= 12, got {sites}"));
    }
    if eta == 0.0 || rho == 0.0 || !(step > 0.0) {
        return domain("Hamiltonian link needs eta != 0, rho != 0, step > 0");
    }
    let weights = VertexWeights::parameterized(c(rho), c(0.0), c(eta));
    let scale = 0.5 * eta.sinh();
    let shift = 0.5 * eta.cosh() * sites as f64;
    let mut triplets = Vec::new();
    for down in 0..=sites {
        let basis = SectorBasis::new(sites, down)?;
        let t0 = transfer_block(c(0.0), sites, down, &weights)?.to_dense();
        let tp = transfer_block(c(step), sites, down, &weights)?.to_dense();
        let tm = transfer_block(c(-step), sites, down, &weights)?.to_dense();
        let deriv = (tp - tm) / c(2.0 * step);
        let x = t0.lu().solve(&deriv).ok_or_else(|| LabError::Singular("t(0)".into()))?;
        for r in 0..basis.len() {
            for col in 0..basis.len() {
                let mut v = x[(r, col)] * scale;
                if r == col {
                    v -= shift;
                }
                if v != C64::default() {
                    triplets.push((basis.state(r) as usize, basis.state(col) as usize, v * j));
                }
            }
        }
    }
    let space = ChainSpace::full(sites)?;
    let matrix = OperatorMatrix::from_triplets(space.dim(), triplets, space.tag());
    let direct = build_xxz_hamiltonian(eta.cosh(), &space)?.scale(c(j));
    let deviation = matrix.max_difference(&direct)?;
    Ok(HamiltonianLink { sites, eta, step, matrix, deviation })
}

/// `(1/L) ln Lambda_0` of the ice-point transfer matrix per even `L`, with
/// an extrapolation to `L = inf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IceEntropy {
    pub rows: Vec<IceRow>,
    /// `s_inf` from a least-squares fit `s_inf + b / L^2 + c / L^4` over `L >= 4`.
    pub extrapolated: f64,
    pub fit: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IceRow {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "logLambda_over_L")]
    pub log_lambda_over_l: f64,
}

/// Exact value `(3/2) ln(4/3)`.
pub fn ice_entropy_exact() -> f64 {
    1.5 * (4.0f64 / 3.0).ln()
}

/// Perron root of a nonnegative matrix with positive diagonal.
pub fn perron_root(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut value = 0.0;
    for _ in 0..20_000 {
        let y = m * &x;
        let next = y.norm();
        if next == 0.0 {
            return Err(LabError::Singular("power iteration hit the zero vector".into()));
        }
        let y = y / next;
        let moved = (&y - &x).norm();
        x = y;
        if (next - value).abs() <= 1e-15 * next && moved < 1e-12 {
            return Ok(next);
        }
        value = next;
    }
    Err(LabError::NoConvergence("power iteration for the Perron root".into()))
}

pub fn ice_entropy(l_max: usize) -> Result<IceEntropy> {
    if !(2..=MAX_VERTEX_SITES).contains(&l_max) {
        return domain(format!("ice entropy needs 2 <= L_max <= {MAX_VERTEX_SITES}"));
    }
    let weights = VertexWeights::ice();
    let mut rows = Vec::new();
    for sites in (2..=l_max).step_by(2) {
        let block = transfer_block(c(0.0), sites, sites / 2, &weights)?.to_dense().map(|z| z.re);
        let lambda0 = perron_root(&block)?;
        rows.push(IceRow { sites, log_lambda_over_l: lambda0.ln() / sites as f64 });
    }
    let (extrapolated, fit) = extrapolate(&rows);
    Ok(IceEntropy { rows, extrapolated, fit })
}

fn extrapolate(rows: &[IceRow]) -> (f64, Vec<f64>) {
    let used: Vec<&IceRow> = rows.iter().filter(|r| r.sites >= 4).collect();
    if used.is_empty() {
        let last = rows.last().map_or(f64::NAN, |r| r.log_lambda_over_l);
        return (last, vec![last]);
    }
    let terms = used.len().min(3);
    let a = DMatrix::from_fn(used.len(), terms, |i, k| (used[i].sites as f64).powi(-2 * k as i32));
    let y = DVector::from_iterator(used.len(), used.iter().map(|r| r.log_lambda_over_l));
    let coef = a.svd(true, true).solve(&y, 1e-14).expect("SVD with both factors");
    (coef[0], coef.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator_norm;
    use crate::spin_chain::{build_shift_operator, build_total_spin, SpinComponent};

    fn generic() -> VertexWeights {
        VertexWeights::parameterized(C64::new(0.8, 0.3), c(0.0), C64::new(0.7, 0.2))
    }

    #[test]
    fn single_site_monodromy_is_r() {
        let w = generic();
        let lambda = C64::new(0.4, -0.3);
        let t = monodromy(lambda, 1, &w).unwrap().to_dense();
        let p = w.parameterization.unwrap();
        let r = r_matrix(lambda, p.eta, p.rho);
        for i in 0..4 {
            for j in 0..4 {
                assert!((t[(i, j)] - r[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn two_site_transfer_matches_contraction() {
        let w = generic();
        let lambda = C64::new(0.25, 0.6);
        let [a, b, cc] = w.site_weights(lambda, 1).unwrap()[0];
        let r = crate::vertex::r_from_weights(a, b, cc);
        let t = transfer(lambda, 2, &w).unwrap().full().unwrap();
        let bit = |s: usize, j: usize| (s >> j) & 1;
        for out in 0..4 {
            for inp in 0..4 {
                let mut sum = c(0.0);
                for a0 in 0..2 {
                    for mid in 0..2 {
                        sum += r[(2 * a0 + bit(out, 1), 2 * mid + bit(inp, 1))]
                            * r[(2 * mid + bit(out, 0), 2 * a0 + bit(inp, 0))];
                    }
                }
                assert!((t.get(out, inp) - sum).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn regular_point_gives_shift() {
        let w = generic();
        let p = w.parameterization.unwrap();
        for sites in [3, 5] {
            let t = transfer(c(0.0), sites, &w).unwrap().full().unwrap();
            let u = build_shift_operator(&ChainSpace::full(sites).unwrap()).unwrap();
            let expect = u.scale((p.rho * p.eta.sinh()).powi(sites as i32));
            assert!(t.max_difference(&expect).unwrap() < 1e-13);
        }
    }

    #[test]
    fn commuting_family_and_rtt() {
        let w = generic();
        let t1 = transfer(C64::new(0.3, 0.1), 5, &w).unwrap().full().unwrap();
        let t2 = transfer(C64::new(-0.7, 0.45), 5, &w).unwrap().full().unwrap();
        assert!(commutator_norm(&t1, &t2).unwrap() < 1e-12);
        let sz = build_total_spin(SpinComponent::Z, &ChainSpace::full(5).unwrap()).unwrap();
        assert!(commutator_norm(&t1, &sz).unwrap() < 1e-13);
        let inhom = w.with_inhomogeneities(vec![C64::new(0.1, 0.2), c(-0.3), C64::new(0.5, -0.1)]).unwrap();
        assert!(rtt_residual(C64::new(0.2, 0.3), C64::new(-0.4, 0.1), 3, &inhom).unwrap() < 1e-12);
    }

    #[test]
    fn small_partition_functions() {
        let (a, b, cc) = (C64::new(1.3, 0.2), C64::new(0.7, -0.1), c(0.9));
        let z = partition_function(1, 1, &VertexWeights::direct(a, b, cc)).unwrap();
        assert!((z - (2.0 * a + 2.0 * b)).norm() < 1e-14);
        // Ice L = 2: blocks 1, [[2, 1], [1, 2]] per sector count of paths.
        let t = transfer(c(0.0), 2, &VertexWeights::ice()).unwrap();
        assert!((t.trace_power(1) - c(2.0 + 4.0 + 2.0)).norm() < 1e-13);
        let two = t.block(1).unwrap().to_dense();
        assert!((two[(0, 0)] - 2.0).norm() < 1e-14 && (two[(0, 1)] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn transfer_traces_match_enumeration() {
        let generic = VertexWeights::direct(C64::new(1.3, 0.2), C64::new(0.7, -0.1), c(0.9));
        for (l, m) in [(1, 1), (2, 1), (1, 3), (3, 2), (2, 3)] {
            for w in [&generic, &VertexWeights::ice()] {
                let z = partition_function(l, m, w).unwrap();
                let brute = partition_function_bruteforce(l, m, w).unwrap();
                assert!((z - brute).norm() < 1e-12 * brute.norm(), "{l} x {m}");
            }
        }
    }

    #[test]
    fn link_reproduces_xxz() {
        let link = hamiltonian_from_transfer(4, 0.3, 1.0, 1.0).unwrap();
        assert!(link.deviation < 1e-7, "{}", link.deviation);
        let coarse = hamiltonian_from_transfer_with_step(4, 0.3, 1.0, 1.0, 0.02).unwrap();
        let half = hamiltonian_from_transfer_with_step(4, 0.3, 1.0, 1.0, 0.01).unwrap();
        let ratio = coarse.deviation / half.deviation;
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn small_ice_values() {
        let ice = ice_entropy(6).unwrap();
        assert!((ice.rows[0].log_lambda_over_l - 0.5 * 3f64.ln()).abs() < 1e-14);
        assert!(ice.rows.windows(2).all(|w| w[0].log_lambda_over_l > w[1].log_lambda_over_l));
    }
}
