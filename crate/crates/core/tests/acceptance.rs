//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use bethe_lab::algebraic::{b_product_state, pairing_report, restrict, AbaModel};
use bethe_lab::coordinate::{energy_xxx, highest_weight_residual, offshell_vector, offshell_vector_xxz};
use bethe_lab::equations::{
    admissibility, classify_two_magnon, solve_bose, solve_logbae, solve_logbae_xxz, PairKind, QuantumNumbers,
};
use bethe_lab::hubbard::{build_hubbard_hamiltonian, ground_quantum_numbers, solve_liebwu, verify_nested, NestedRoots};
use bethe_lab::linalg::{collinearity, commutator_norm, eigenvalues, norm};
use bethe_lab::spin_chain::{build_xxx_hamiltonian, ChainSpace, SectorBasis};
use bethe_lab::thermo::{closed_form_density, gs_energy_density, solve_root_density};
use bethe_lab::vertex::{
    hamiltonian_from_transfer_with_step, ice_entropy, ice_entropy_exact, partition_function,
    partition_function_bruteforce, rtt_residual, transfer, ybe_residual, VertexWeights, LINK_STEP,
};
use bethe_lab::{Result, C64, I};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(2024);
    r.set_stream(stream);
    r
}

fn draw(r: &mut ChaCha8Rng, re: f64, im: f64) -> C64 {
    C64::new(r.random_range(-re..re), r.random_range(-im..im))
}

fn within(limit: Duration, start: Instant) -> bool {
    start.elapsed() < limit
}

/// All strictly increasing `count`-subsets of `lo..=hi`.
fn subsets(lo: i64, hi: i64, count: usize) -> Vec<Vec<i64>> {
    if count == 0 {
        return vec![vec![]];
    }
    (lo..=hi)
        .flat_map(|first| {
            subsets(first + 1, hi, count - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn xxx_ground_state_matches_ed() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for sites in [4usize, 6, 8, 10] {
        let start = Instant::now();
        let n = sites / 2;
        let rep = solve_logbae(sites, n, &QuantumNumbers::ground_state(n))?;
        let e = energy_xxx(&rep.roots, 1.0)?.re;
        let h = build_xxx_hamiltonian(1.0, &ChainSpace::sector(sites, n)?)?;
        let lowest = eigenvalues(&h)?[0];
        worst = worst.max(if rep.converged { (e - lowest).abs() } else { f64::INFINITY });
        slowest = slowest.max(start.elapsed());
    }
    let passed = worst < 1e-9 && slowest < Duration::from_secs(10);
    outcome(passed, format!("max |dE| = {worst:.2e}, slowest L {:.2} s", slowest.as_secs_f64()))
}

fn l8_solutions_are_eigenvectors() -> Result<Outcome> {
    let sites = 8;
    let (mut count_ok, mut worst_h, mut worst_raise, mut worst_level) = (0usize, 0f64, 0f64, 0f64);
    let mut check = |roots: &bethe_lab::coordinate::RapiditySet, spectrum: &[f64], h: &bethe_lab::linalg::OperatorMatrix| -> Result<()> {
        let bv = offshell_vector(roots)?;
        let v = bv.normalized();
        let e = energy_xxx(roots, 1.0)?;
        worst_h = worst_h.max(norm(&(h.apply(&v) - &v * e)));
        worst_raise = worst_raise.max(highest_weight_residual(&v, &bv.basis)?);
        worst_level = worst_level.max(spectrum.iter().map(|x| (x - e.re).abs()).fold(f64::INFINITY, f64::min));
        count_ok += 1;
        Ok(())
    };
    for count in 1..=4usize {
        let space = ChainSpace::sector(sites, count)?;
        let h = build_xxx_hamiltonian(1.0, &space)?;
        let spectrum = eigenvalues(&h)?;
        let bound = (sites / 2) as i64;
        for q in subsets(count as i64 - bound + 1, bound, count) {
            let Ok(rep) = solve_logbae(sites, count, &QuantumNumbers(q)) else { continue };
            if !rep.converged || !admissibility(&rep.roots).admissible {
                continue;
            }
            if rep.roots.values.iter().any(|z| !z.re.is_finite() || z.re.abs() > 1e6) {
                continue;
            }
            check(&rep.roots, &spectrum, &h)?;
        }
        if count == 2 {
            for s in classify_two_magnon(sites)?.of_kind(PairKind::BoundPair) {
                check(&s.roots, &spectrum, &h)?;
            }
        }
    }
    let passed = count_ok > 0 && worst_h < 1e-8 && worst_raise < 1e-8 && worst_level < 1e-8;
    outcome(
        passed,
        format!("{count_ok} solutions: |Hv - Ev| {worst_h:.2e}, |S+ v| {worst_raise:.2e}, level gap {worst_level:.2e}"),
    )
}

fn thermodynamic_limit() -> Result<Outcome> {
    let e_inf = gs_energy_density(&solve_root_density(f64::INFINITY, 256)?, 1.0);
    let energy_err = (e_inf + LN_2).abs();
    let rho = solve_root_density(4.0, 256)?;
    let pointwise = (0..=80)
        .map(|i| -4.0 + 0.1 * i as f64)
        .map(|l| (rho.evaluate(l) - closed_form_density(l)).abs())
        .fold(0.0, f64::max);
    let mut gaps = Vec::new();
    for sites in [8usize, 10, 12, 14, 16] {
        let rep = solve_logbae(sites, sites / 2, &QuantumNumbers::ground_state(sites / 2))?;
        gaps.push((energy_xxx(&rep.roots, 1.0)?.re / sites as f64 + LN_2).abs());
    }
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let passed = energy_err < 1e-8 && pointwise < 1e-3 && monotone;
    outcome(
        passed,
        format!(
            "|e + ln 2| = {energy_err:.2e}, q = 4 vs closed form {pointwise:.2e}, finite-L gaps {}",
            gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>().join(" > ")
        ),
    )
}

fn yang_baxter_and_commutation() -> Result<Outcome> {
    let start = Instant::now();
    let mut r = rng(4);
    let one = C64::new(1.0, 0.0);
    let ybe = (0..100)
        .map(|_| {
            let (l, m, n, eta) = (draw(&mut r, 1.0, 1.0), draw(&mut r, 1.0, 1.0), draw(&mut r, 1.0, 1.0), draw(&mut r, 1.0, 1.0));
            ybe_residual(l, m, n, eta, one)
        })
        .fold(0.0, f64::max);
    let eta = C64::new(0.6, 0.3);
    let weights = VertexWeights::parameterized(one, C64::default(), eta);
    let mut commutator: f64 = 0.0;
    for sites in 2..=8 {
        for _ in 0..3 {
            let (l, m) = (draw(&mut r, 0.5, 0.5), draw(&mut r, 0.5, 0.5));
            let t1 = transfer(l, sites, &weights)?.full()?;
            let t2 = transfer(m, sites, &weights)?.full()?;
            commutator = commutator.max(commutator_norm(&t1, &t2)?);
        }
    }
    let mut rtt: f64 = 0.0;
    for sites in 1..=6 {
        for _ in 0..3 {
            let (l, m) = (draw(&mut r, 0.5, 0.5), draw(&mut r, 0.5, 0.5));
            let xi = (0..sites).map(|_| draw(&mut r, 0.5, 0.5)).collect();
            rtt = rtt.max(rtt_residual(l, m, sites, &weights.clone().with_inhomogeneities(xi)?)?);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = ybe < 1e-12 && commutator < 1e-12 && rtt < 1e-12 && within(Duration::from_secs(60), start);
    outcome(passed, format!("YBE {ybe:.2e}, [t, t] {commutator:.2e} (L <= 8), RTT {rtt:.2e} (L <= 6), {elapsed:.2} s"))
}

fn hamiltonian_link() -> Result<Outcome> {
    let deviation = hamiltonian_from_transfer_with_step(4, 0.3, 1.0, 1.0, LINK_STEP)?.deviation;
    let steps: Vec<f64> = (0..4).map(|k| 0.04 / 2f64.powi(k)).collect();
    let devs: Vec<f64> = steps
        .iter()
        .map(|&s| Ok(hamiltonian_from_transfer_with_step(4, 0.3, 1.0, 1.0, s)?.deviation))
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = devs.windows(2).map(|w| w[0] / w[1]).collect();
    let quadratic = ratios.iter().all(|r| (r - 4.0).abs() < 0.5);
    let passed = deviation < 1e-6 && quadratic;
    outcome(
        passed,
        format!(
            "deviation {deviation:.2e} at step {LINK_STEP:.0e}, halving ratios {}",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn square_ice() -> Result<Outcome> {
    let start = Instant::now();
    let ice = VertexWeights::ice();
    let mut lattices = 0;
    let mut exact = true;
    for sites in 1..=12usize {
        for rows in 1..=(12 / sites) as u32 {
            let z = partition_function(sites, rows, &ice)?;
            let brute = partition_function_bruteforce(sites, rows, &ice)?;
            exact &= z == brute && z.im == 0.0 && z.re.fract() == 0.0;
            lattices += 1;
        }
    }
    let s = ice_entropy(12)?.extrapolated;
    let err = (s - ice_entropy_exact()).abs();
    let elapsed = start.elapsed().as_secs_f64();
    let passed = exact && err < 1e-2 && within(Duration::from_secs(300), start);
    outcome(
        passed,
        format!("{lattices} lattices exact: {exact}, entropy {s:.6} vs {:.6}, {elapsed:.2} s", ice_entropy_exact()),
    )
}

fn slavnov_formula() -> Result<Outcome> {
    let (sites, gamma) = (8, 0.9);
    let model = AbaModel::homogeneous(sites, I * gamma, C64::new(1.0, 0.0))?;
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    for count in 1..=3usize {
        let rep = solve_logbae_xxz(sites, count, gamma, &QuantumNumbers::ground_state(count))?;
        if !rep.converged {
            return outcome(false, format!("on-shell roots for N = {count} did not converge"));
        }
        let mut r = rng(70 + count as u64);
        for _ in 0..20 {
            let lambda: Vec<C64> =
                (0..count).map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(0.1..0.6))).collect();
            worst = worst.max(pairing_report(&model, &rep.roots.values, &lambda)?.rel_err);
            draws += 1;
        }
    }
    outcome(worst < 1e-9, format!("{draws} off-shell draws at L = {sites}, max relative error {worst:.2e}"))
}

fn algebraic_coordinate_consistency() -> Result<Outcome> {
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for eta in [I * 0.9, C64::new(0.3, 0.8)] {
        for sites in 2..=8usize {
            let model = AbaModel::homogeneous(sites, eta, C64::new(1.0, 0.0))?;
            for count in 1..=3.min(sites) {
                for _ in 0..3 {
                    let roots: Vec<C64> = (0..count).map(|_| draw(&mut r, 1.0, 0.5)).collect();
                    let algebraic = restrict(&b_product_state(&model, &roots)?, &SectorBasis::new(sites, count)?);
                    let coordinate = offshell_vector_xxz(&roots, eta, sites)?.unscaled();
                    worst = worst.max(1.0 - collinearity(&algebraic, &coordinate));
                    cases += 1;
                }
            }
        }
    }
    outcome(worst < 1e-10, format!("{cases} random root sets, max 1 - |cos| = {worst:.2e}"))
}

fn hubbard_nested() -> Result<Outcome> {
    let start = Instant::now();
    let (sites, electrons, down) = (6, 2, 1);
    let mut worst_h: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    let mut worst_level: f64 = 0.0;
    for u in [1.0, 2.0, 4.0] {
        let (charge, spin) = ground_quantum_numbers(electrons, down);
        let rep = solve_liebwu(sites, electrons, down, u, &charge, &spin)?;
        if !rep.converged {
            return outcome(false, format!("Lieb-Wu solve did not converge at u = {u}"));
        }
        let check = verify_nested(&NestedRoots::from_rapidities(&rep.roots)?)?;
        let spectrum = eigenvalues(&build_hubbard_hamiltonian(sites, u, electrons, down)?)?;
        worst_h = worst_h.max(check.eigen_residual);
        worst_p = worst_p.max(check.momentum_residual);
        worst_level = worst_level.max(spectrum.iter().map(|x| (x - check.energy.re).abs()).fold(f64::INFINITY, f64::min));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst_h < 1e-8 && worst_p < 1e-8 && worst_level < 1e-8 && within(Duration::from_secs(120), start);
    outcome(
        passed,
        format!("|Hv - Ev| {worst_h:.2e}, |T v - e^iP v| {worst_p:.2e}, E vs ED {worst_level:.2e}, {elapsed:.2} s"),
    )
}

fn bose_gas() -> Result<Outcome> {
    let mut real = true;
    let mut solved = 0;
    for c in [0.1, 1.0, 10.0] {
        for n in 1..=4usize {
            for shift in 0..=2 {
                let mut q: Vec<i64> = (1..=n as i64).collect();
                *q.last_mut().unwrap() += shift;
                let rep = solve_bose(1.0, n, c, &QuantumNumbers(q))?;
                real &= rep.converged && rep.roots.is_real(1e-12);
                solved += 1;
            }
        }
    }
    let mut hard_core: f64 = 0.0;
    for n in 1..=4usize {
        let rep = solve_bose(1.0, n, 1e6, &QuantumNumbers::ground_state(n))?;
        for (j, k) in rep.roots.values.iter().enumerate() {
            hard_core = hard_core.max((k.re - 2.0 * PI * (j as f64 - (n as f64 - 1.0) / 2.0)).abs());
        }
    }
    outcome(real && hard_core < 1e-4, format!("{solved} solves real: {real}, c = 1e6 vs free fermions {hard_core:.2e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("XXX ground state vs exact diagonalization", xxx_ground_state_matches_ed),
        ("L = 8 Bethe vectors are eigenvectors", l8_solutions_are_eigenvectors),
        ("thermodynamic limit", thermodynamic_limit),
        ("Yang-Baxter, commuting transfer matrices, RTT", yang_baxter_and_commutation),
        ("Hamiltonian from the transfer matrix", hamiltonian_link),
        ("square ice", square_ice),
        ("Slavnov determinant", slavnov_formula),
        ("algebraic vs coordinate Bethe vectors", algebraic_coordinate_consistency),
        ("Hubbard nested Bethe ansatz", hubbard_nested),
        ("Bose gas", bose_gas),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match criterion() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {name}: {detail} [{:.2} s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
