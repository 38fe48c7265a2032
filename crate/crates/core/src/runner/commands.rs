use super::{trial_rng, Check, Command, ExperimentConfig, Report, RunOutput};
use super::args::*;
use crate::algebraic::{
    b_product_state, dual_action_residual, offshell_action_residual, pairing_report, restrict, AbaModel, PairingReport,
};
use crate::coordinate::{
    energy_xxx, highest_weight_residual, momentum_xxx, offshell_vector, offshell_vector_xxz, Length, Model, ModelParams,
    RapiditySet,
};
use crate::equations::{
    admissibility, bae_residual_bose, bae_residual_xxx, bae_residual_xxz, bose_energy, classify_two_magnon, energy_xxz,
    solve_bose, solve_logbae, solve_logbae_xxz, QuantumNumbers, SolveReport,
};
use crate::error::{LabError, Result};
use crate::hubbard::{
    build_hubbard_hamiltonian, energy_momentum, ground_quantum_numbers, liebwu_residual, solve_liebwu, verify_nested,
    NestedRoots,
};
use crate::linalg::{self, collinearity, commutator_norm, diagonalize, eigen_levels, OperatorMatrix, Which};
use crate::spin_chain::{
    build_shift_operator, build_total_spin, build_xxx_hamiltonian, build_xxz_hamiltonian, highest_weight_levels,
    ChainSpace, SectorBasis, SpinComponent,
};
use crate::thermo::{closed_form_density, condensation_check, density_d, gs_energy_density, solve_root_density};
use crate::vertex::{
    hamiltonian_from_transfer_with_step, ice_entropy, ice_entropy_exact, partition_function,
    partition_function_bruteforce, rtt_residual, transfer, ybe_residual, VertexWeights,
};
use crate::{c, io, C64, I};
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::LN_2;

/// Largest dimension for which `ed` also computes eigenvectors.
const EIGENVECTOR_LIMIT: usize = 1024;

struct Run<'a> {
    config: &'a ExperimentConfig,
    checks: Vec<Check>,
    converged: bool,
    tables: Vec<(String, String)>,
    summary: Vec<String>,
}

impl<'a> Run<'a> {
    fn new(config: &'a ExperimentConfig) -> Self {
        Self { config, checks: Vec::new(), converged: true, tables: Vec::new(), summary: Vec::new() }
    }

    fn tol(&self, default: f64) -> f64 {
        self.config.tolerance.unwrap_or(default)
    }

    fn below(&mut self, name: &str, value: f64, tol: f64) {
        self.checks.push(Check::below(name, value, tol));
    }

    fn flag(&mut self, name: &str, passed: bool) {
        self.checks.push(Check::flag(name, passed));
    }

    fn note(&mut self, line: String) {
        self.summary.push(line);
    }

    fn table<T: Serialize>(&mut self, file: &str, rows: &[T]) -> Result<()> {
        let mut buf = Vec::new();
        io::write_csv_rows(&mut buf, rows)?;
        self.tables.push((file.to_string(), String::from_utf8(buf).expect("csv writes UTF-8")));
        Ok(())
    }

    fn finish(self, result: Value) -> Result<RunOutput> {
        let passed = self.converged && self.checks.iter().all(|c| c.passed);
        let mut summary = self.summary;
        for check in &self.checks {
            let status = if check.passed { "ok  " } else { "FAIL" };
            match (check.value, check.tolerance) {
                (Some(v), Some(t)) => summary.push(format!("{status} {}: {v:.3e} (bound {t:.1e})", check.name)),
                _ => summary.push(format!("{status} {}", check.name)),
            }
        }
        if !self.converged {
            summary.push("solver did not converge".into());
        }
        let report = Report {
            command: self.config.command.name(),
            seed: self.config.seed,
            converged: self.converged,
            passed,
            checks: self.checks,
            result,
        };
        Ok(RunOutput { report, tables: self.tables, summary: summary.join("\n") })
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// First value of type `T` found at the top level or below the keys
/// `result`, `report`, `roots`.
fn find<T: DeserializeOwned>(v: &Value) -> Option<T> {
    if let Ok(t) = serde_json::from_value::<T>(v.clone()) {
        return Some(t);
    }
    let Value::Object(map) = v else { return None };
    ["result", "report", "roots"].iter().filter_map(|k| map.get(*k)).find_map(find)
}

fn input_roots(config: &ExperimentConfig) -> Result<Option<RapiditySet>> {
    let Some(input) = &config.input else { return Ok(None) };
    if let Some(rep) = find::<SolveReport>(input) {
        return Ok(Some(rep.roots));
    }
    if let Some(r) = find::<RapiditySet>(input) {
        return Ok(Some(r));
    }
    if let Some(n) = find::<NestedRoots>(input) {
        return Ok(Some(n.to_rapidities()));
    }
    Err(LabError::Config("input holds no roots".into()))
}

fn input_nested(config: &ExperimentConfig) -> Result<Option<NestedRoots>> {
    let Some(input) = &config.input else { return Ok(None) };
    if let Some(n) = find::<NestedRoots>(input) {
        return Ok(Some(n));
    }
    match input_roots(config)? {
        Some(r) if r.model == Model::HubbardChargeSpin => Ok(Some(NestedRoots::from_rapidities(&r)?)),
        Some(r) => Err(LabError::Config(format!("expected Hubbard roots, got {:?}", r.model))),
        None => Ok(None),
    }
}

fn qnums_or_ground(q: &[i64], count: usize) -> QuantumNumbers {
    if q.is_empty() {
        QuantumNumbers::ground_state(count)
    } else {
        QuantumNumbers(q.to_vec())
    }
}

fn draw(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn spectrum_table(run: &mut Run, eigenvalues: &[f64]) -> Result<()> {
    let mut buf = Vec::new();
    io::write_spectrum_csv(&mut buf, eigenvalues)?;
    run.tables.push(("spectrum.csv".into(), String::from_utf8(buf).expect("csv writes UTF-8")));
    Ok(())
}

/// Distance from `e` to the nearest eigenvalue of `h`. Full spectra up to
/// the dense limit, otherwise the lowest few levels.
fn distance_to_spectrum(h: &OperatorMatrix, e: f64) -> Result<f64> {
    let values = if h.dim() <= linalg::DENSE_LIMIT {
        linalg::eigenvalues(h)?
    } else {
        diagonalize(h, Which::Lowest(6))?.eigenvalues
    };
    Ok(values.iter().map(|v| (v - e).abs()).fold(f64::INFINITY, f64::min))
}

pub(super) fn dispatch(config: &ExperimentConfig) -> Result<RunOutput> {
    let mut run = Run::new(config);
    let result = match &config.command {
        Command::Ed(a) => ed(&mut run, a)?,
        Command::BaeSolve(a) => bae_solve(&mut run, a)?,
        Command::BaeResidual(a) => bae_residual(&mut run, a)?,
        Command::BaeTwoMagnon(a) => two_magnon(&mut run, a)?,
        Command::BetheVectorBuild(a) => bethe_vector(&mut run, a, false)?,
        Command::BetheVectorVerify(a) => bethe_vector(&mut run, a, true)?,
        Command::ThermoDensity(a) => thermo_density(&mut run, a)?,
        Command::ThermoGsEnergy(a) => thermo_gs_energy(&mut run, a)?,
        Command::ThermoCondensation(a) => thermo_condensation(&mut run, a)?,
        Command::VertexYbe(a) => vertex_ybe(&mut run, a)?,
        Command::VertexTransfer(a) => vertex_transfer(&mut run, a)?,
        Command::VertexPartition(a) => vertex_partition(&mut run, a)?,
        Command::VertexIceEntropy(a) => vertex_ice(&mut run, a)?,
        Command::VertexHamiltonianLink(a) => vertex_link(&mut run, a)?,
        Command::AbaSlavnov(a) => aba_slavnov(&mut run, a)?,
        Command::AbaVerifyAction(a) => aba_action(&mut run, a)?,
        Command::HubbardEd(a) => hubbard_ed(&mut run, a)?,
        Command::HubbardLiebwu(a) => hubbard_liebwu(&mut run, a)?,
        Command::HubbardVerify(a) => hubbard_verify(&mut run, a)?,
    };
    run.finish(result)
}

fn ed(run: &mut Run, a: &EdArgs) -> Result<Value> {
    let space = match a.down {
        Some(n) => ChainSpace::sector(a.sites, n)?,
        None => ChainSpace::full(a.sites)?,
    };
    let h = match a.delta {
        Some(d) => build_xxz_hamiltonian(d, &space)?.scale(c(a.j)),
        None => build_xxx_hamiltonian(a.j, &space)?,
    };
    let tol = run.tol(1e-9);
    let eigenvalues = if h.dim() <= EIGENVECTOR_LIMIT {
        let s = diagonalize(&h, Which::All)?;
        run.below("eigenpair_residual", s.max_residual(&h), tol);
        s.eigenvalues
    } else {
        linalg::eigenvalues(&h)?
    };
    let trace: f64 = (0..h.dim()).map(|i| h.get(i, i).re).sum();
    let sum: f64 = eigenvalues.iter().sum();
    run.below("trace", (trace - sum).abs() / trace.abs().max(1.0), tol);
    let levels = eigen_levels(&eigenvalues, 1e-8);
    run.note(format!("dim {}, ground energy {:.12}, {} levels", h.dim(), eigenvalues[0], levels.len()));
    spectrum_table(run, &eigenvalues)?;
    Ok(json!({
        "L": a.sites,
        "down": a.down,
        "dim": h.dim(),
        "ground_energy": eigenvalues[0],
        "eigenvalues": eigenvalues,
        "levels": levels,
    }))
}

fn lattice_hamiltonian(model: Model, sites: usize, down: usize, gamma: Option<f64>, j: f64) -> Result<OperatorMatrix> {
    let space = ChainSpace::sector(sites, down)?;
    match model {
        Model::Xxx => build_xxx_hamiltonian(j, &space),
        Model::Xxz => Ok(build_xxz_hamiltonian(gamma.unwrap_or(0.0).cos(), &space)?.scale(c(j))),
        other => Err(LabError::Config(format!("no spin-chain Hamiltonian for {other:?}"))),
    }
}

fn roots_energy(roots: &RapiditySet, j: f64) -> Result<C64> {
    match roots.model {
        Model::Xxx => energy_xxx(roots, j),
        Model::Xxz => Ok(energy_xxz(roots)? * j),
        Model::Bose => Ok(bose_energy(roots)),
        Model::HubbardChargeSpin => Ok(energy_momentum(&NestedRoots::from_rapidities(roots)?).0),
    }
}

fn product_residual(roots: &RapiditySet) -> Result<f64> {
    match roots.model {
        Model::Xxx => bae_residual_xxx(roots),
        Model::Xxz => bae_residual_xxz(roots),
        Model::Bose => bae_residual_bose(roots),
        Model::HubbardChargeSpin => liebwu_residual(&NestedRoots::from_rapidities(roots)?),
    }
}

fn bae_solve(run: &mut Run, a: &BaeSolveArgs) -> Result<Value> {
    let count = a.n.unwrap_or(match a.model {
        BaeModel::Bose => 3,
        _ => a.sites / 2,
    });
    let q = qnums_or_ground(&a.qnums, count);
    let rep = match a.model {
        BaeModel::Xxx => solve_logbae(a.sites, count, &q)?,
        BaeModel::Xxz => solve_logbae_xxz(a.sites, count, a.gamma, &q)?,
        BaeModel::Bose => solve_bose(a.length, count, a.c, &q)?,
    };
    run.converged = rep.converged;
    let tol = run.tol(1e-9);
    run.below("log_residual", rep.residual, tol);
    let product = product_residual(&rep.roots)?;
    run.below("product_residual", product, 1e3 * tol);
    let energy = roots_energy(&rep.roots, a.j)?;
    let momentum = match a.model {
        BaeModel::Xxx => Some(momentum_xxx(&rep.roots)?),
        BaeModel::Bose => Some(rep.roots.values.iter().map(|k| k.re).sum()),
        BaeModel::Xxz => None,
    };
    let adm = (a.model != BaeModel::Bose).then(|| admissibility(&rep.roots));
    if let Some(adm) = &adm {
        run.flag("admissible", adm.admissible);
    }
    let mut ed = Value::Null;
    if a.compare_ed {
        if a.model == BaeModel::Bose {
            return Err(LabError::Config("--compare-ed needs a lattice model".into()));
        }
        let h = lattice_hamiltonian(rep.roots.model, a.sites, count, Some(a.gamma), a.j)?;
        let gap = distance_to_spectrum(&h, energy.re)?;
        let ground = crate::spin_chain::ground_state(&h)?.0;
        run.below("ed_match", gap.max(energy.im.abs()), tol);
        ed = json!({ "distance": gap, "sector_ground": ground });
    }
    run.note(format!(
        "N = {count}, energy {:.12}, {} iterations, residual {:.2e}",
        energy.re, rep.iterations, rep.residual
    ));
    Ok(json!({
        "report": to_value(&rep)?,
        "energy": to_value(&energy)?,
        "momentum": momentum,
        "product_residual": product,
        "admissibility": to_value(&adm)?,
        "ed": ed,
    }))
}

fn bae_residual(run: &mut Run, a: &BaeResidualArgs) -> Result<Value> {
    let roots = match input_roots(run.config)? {
        Some(r) => r,
        None if a.roots.is_empty() => return Err(LabError::Config("no roots: pass --roots or --json".into())),
        None => match a.model {
            BaeModel::Xxx => RapiditySet::xxx(a.sites, a.roots.clone()),
            BaeModel::Xxz => RapiditySet::xxz(a.sites, a.gamma, a.roots.clone()),
            BaeModel::Bose => RapiditySet {
                model: Model::Bose,
                length: Length::Ring(a.length),
                values: a.roots.clone(),
                params: ModelParams { c: Some(a.c), ..Default::default() },
            },
        },
    };
    let residual = product_residual(&roots)?;
    run.below("product_residual", residual, run.tol(1e-8));
    let adm = matches!(roots.model, Model::Xxx | Model::Xxz).then(|| admissibility(&roots));
    let energy = roots_energy(&roots, 1.0).ok();
    run.note(format!("{:?} with {} roots: residual {residual:.3e}", roots.model, roots.len()));
    Ok(json!({
        "roots": to_value(&roots)?,
        "residual": residual,
        "energy": to_value(&energy)?,
        "admissibility": to_value(&adm)?,
    }))
}

fn two_magnon(run: &mut Run, a: &TwoMagnonArgs) -> Result<Value> {
    let report = classify_two_magnon(a.sites)?;
    let hw = highest_weight_levels(a.sites, 2, 1.0, a.level_tol)?;
    let levels = report.levels(a.level_tol);
    let tol = run.tol(1e-8);
    let missing: Vec<f64> =
        hw.iter().map(|l| l.0).filter(|e| !levels.iter().any(|f| (f - e).abs() < tol)).collect();
    let spurious: Vec<f64> = levels.iter().copied().filter(|f| !hw.iter().any(|l| (l.0 - f).abs() < tol)).collect();
    let states: usize = hw.iter().map(|l| l.1).sum();
    run.flag("every highest-weight level found", missing.is_empty());
    run.flag("no spurious levels", spurious.is_empty());
    run.note(format!(
        "{} solutions, {} levels; {} highest-weight states in ED",
        report.solutions.len(),
        levels.len(),
        states
    ));
    Ok(json!({
        "report": to_value(&report)?,
        "highest_weight_levels": hw,
        "missing": missing,
        "spurious": spurious,
    }))
}

fn chain_roots(run: &mut Run, a: &BetheVectorArgs) -> Result<RapiditySet> {
    if let Some(r) = input_roots(run.config)? {
        return Ok(r);
    }
    if !a.roots.is_empty() {
        return Ok(match a.model {
            ChainModel::Xxx => RapiditySet::xxx(a.sites, a.roots.clone()),
            ChainModel::Xxz => RapiditySet::xxz(a.sites, a.gamma, a.roots.clone()),
        });
    }
    let count = a.n.unwrap_or(a.sites / 2);
    let q = qnums_or_ground(&a.qnums, count);
    let rep = match a.model {
        ChainModel::Xxx => solve_logbae(a.sites, count, &q)?,
        ChainModel::Xxz => solve_logbae_xxz(a.sites, count, a.gamma, &q)?,
    };
    run.converged = rep.converged;
    Ok(rep.roots)
}

fn bethe_vector(run: &mut Run, a: &BetheVectorArgs, verify: bool) -> Result<Value> {
    let roots = chain_roots(run, a)?;
    let sites = roots.sites()?;
    let bv = match roots.model {
        Model::Xxx => offshell_vector(&roots)?,
        Model::Xxz => {
            let gamma = roots.params.gamma.ok_or_else(|| LabError::Config("XXZ roots need gamma".into()))?;
            offshell_vector_xxz(&roots.values, I * gamma, sites)?
        }
        other => return Err(LabError::Config(format!("Bethe vectors are built for XXX and XXZ roots, not {other:?}"))),
    };
    let v = bv.normalized();
    if linalg::norm(&v) == 0.0 {
        return Err(LabError::Domain("Bethe vector vanishes".into()));
    }
    let energy = roots_energy(&roots, a.j)?;
    let mut result = json!({ "roots": to_value(&roots)?, "energy": to_value(&energy)? });
    if verify {
        let tol = run.tol(1e-8);
        let h = lattice_hamiltonian(roots.model, sites, roots.len(), roots.params.gamma, a.j)?;
        let eigen = linalg::norm(&(h.apply(&v) - &v * energy));
        run.below("eigen_residual", eigen, tol);
        let space = ChainSpace::sector(sites, roots.len())?;
        let back = build_shift_operator(&space)?.adjoint().apply(&v);
        let momentum = if roots.model == Model::Xxx {
            let p = momentum_xxx(&roots)?;
            let r = linalg::norm(&(&back - &v * (I * p).exp()));
            run.below("momentum_residual", r, tol);
            let hw = if roots.is_empty() { 0.0 } else { highest_weight_residual(&v, &bv.basis)? };
            run.below("highest_weight_residual", hw, tol);
            result["highest_weight_residual"] = json!(hw);
            json!({ "momentum": p, "residual": r })
        } else {
            let phase = v.dotc(&back);
            let r = linalg::norm(&(&back - &v * phase));
            run.below("translation_eigenvector", r, tol);
            json!({ "momentum": phase.arg().rem_euclid(std::f64::consts::TAU), "residual": r })
        };
        result["eigen_residual"] = json!(eigen);
        result["momentum"] = momentum;
        run.note(format!("energy {:.12}, eigen residual {eigen:.3e}", energy.re));
    } else {
        let basis: Vec<Vec<usize>> = bv.basis.states().iter().map(|&s| SectorBasis::positions(s)).collect();
        result["basis"] = json!(basis);
        result["amplitudes"] = to_value(&v.as_slice())?;
        result["log_scale"] = json!(bv.log_scale);
        run.note(format!("{} amplitudes, energy {:.12}", v.len(), energy.re));
    }
    Ok(result)
}

#[derive(Serialize)]
struct DensityRow {
    lambda: f64,
    density: f64,
    closed_form: f64,
}

fn thermo_density(run: &mut Run, a: &DensityArgs) -> Result<Value> {
    let rho = solve_root_density(a.q, a.nodes)?;
    let half = if a.q.is_finite() { a.q } else { 4.0 };
    let n = a.samples.max(2);
    let rows: Vec<DensityRow> = (0..n)
        .map(|i| {
            let lambda = -half + 2.0 * half * i as f64 / (n - 1) as f64;
            DensityRow { lambda, density: rho.evaluate(lambda), closed_form: closed_form_density(lambda) }
        })
        .collect();
    let gap = max_of(rows.iter().map(|r| (r.density - r.closed_form).abs()));
    let residual = rho.integral_residual()?;
    let tol = run.tol(1e-8);
    run.below("integral_equation_residual", residual, tol);
    match (a.closed_form_tol, a.q.is_infinite()) {
        (Some(t), _) => run.below("closed_form_gap", gap, t),
        (None, true) => run.below("closed_form_gap", gap, tol),
        (None, false) => {}
    }
    let filling = density_d(&rho);
    run.note(format!("q = {}, filling {filling:.10}, max gap to 1/(2 ch(pi l)) {gap:.3e}", a.q));
    run.table("density.csv", &rows)?;
    Ok(json!({
        "q": if a.q.is_finite() { json!(a.q) } else { json!("inf") },
        "nodes": a.nodes,
        "filling": filling,
        "energy_density": gs_energy_density(&rho, 1.0),
        "integral_residual": residual,
        "closed_form_gap": gap,
        "samples": rows.iter().map(|r| [r.lambda, r.density]).collect::<Vec<_>>(),
    }))
}

#[derive(Serialize)]
struct FiniteSizeRow {
    #[serde(rename = "L")]
    sites: usize,
    energy_per_site: f64,
    gap: f64,
}

fn thermo_gs_energy(run: &mut Run, a: &GsEnergyArgs) -> Result<Value> {
    let rho = solve_root_density(a.q, a.nodes)?;
    let e = gs_energy_density(&rho, a.j);
    let exact = -a.j * LN_2;
    let tol = run.tol(1e-8);
    if a.q.is_infinite() {
        run.below("ln2", (e - exact).abs(), tol);
    }
    let mut sizes = a.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut rows = Vec::new();
    for &l in &sizes {
        let rep = solve_logbae(l, l / 2, &QuantumNumbers::ground_state(l / 2))?;
        run.converged &= rep.converged;
        let per_site = energy_xxx(&rep.roots, a.j)?.re / l as f64;
        rows.push(FiniteSizeRow { sites: l, energy_per_site: per_site, gap: per_site - exact });
    }
    if rows.len() >= 2 {
        let same_side = rows.iter().all(|r| r.gap.signum() == rows[0].gap.signum());
        let shrinking = rows.windows(2).all(|w| w[1].gap.abs() < w[0].gap.abs());
        run.flag("finite sizes approach monotonically", same_side && shrinking);
    }
    run.note(format!("e = {e:.15} (exact {exact:.15})"));
    run.table("gs_energy.csv", &rows)?;
    Ok(json!({
        "q": if a.q.is_finite() { json!(a.q) } else { json!("inf") },
        "energy_density": e,
        "exact": exact,
        "finite_sizes": rows.iter().map(|r| json!({"L": r.sites, "energy_per_site": r.energy_per_site, "gap": r.gap})).collect::<Vec<_>>(),
    }))
}

fn thermo_condensation(run: &mut Run, a: &CondensationArgs) -> Result<Value> {
    let rows = match a.observable {
        Observable::Energy => condensation_check(&a.sizes, |l| 1.0 / (l * l + 0.25))?,
        Observable::Gaussian => condensation_check(&a.sizes, |l| (-l * l).exp())?,
    };
    let mut sorted = rows.clone();
    sorted.sort_by_key(|r| r.sites);
    if sorted.len() >= 2 {
        run.flag("sums approach the integral", sorted.windows(2).all(|w| w[1].gap.abs() < w[0].gap.abs()));
    }
    if let Some(last) = sorted.last() {
        run.note(format!("L = {}: sum {:.12}, integral {:.12}", last.sites, last.sum, last.integral));
    }
    run.table("condensation.csv", &rows)?;
    Ok(json!({ "observable": a.observable, "rows": to_value(&rows)? }))
}

fn vertex_ybe(run: &mut Run, a: &YbeArgs) -> Result<Value> {
    let seed = run.config.seed;
    let residuals: Vec<f64> = (0..a.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let (l, m, n) = (draw(&mut rng, a.scale), draw(&mut rng, a.scale), draw(&mut rng, a.scale));
            let eta = a.eta.unwrap_or_else(|| draw(&mut rng, a.scale));
            ybe_residual(l, m, n, eta, a.rho)
        })
        .collect();
    let worst = max_of(residuals.iter().copied());
    run.below("ybe_residual", worst, run.tol(1e-12));
    run.note(format!("{} draws, max residual {worst:.3e}", a.trials));
    Ok(json!({ "trials": a.trials, "max_residual": worst, "residuals": residuals }))
}

fn vertex_transfer(run: &mut Run, a: &TransferArgs) -> Result<Value> {
    let weights = VertexWeights::parameterized(a.rho, c(0.0), a.eta);
    let space = ChainSpace::full(a.sites)?;
    let sz = build_total_spin(SpinComponent::Z, &space)?;
    let shift = build_shift_operator(&space)?;
    let regular = transfer(c(0.0), a.sites, &weights)?.full()?;
    let shift_dev = regular.max_difference(&shift.scale((a.rho * a.eta.sinh()).powi(a.sites as i32)))?;
    let rtt_sites = a.sites.min(6);
    let seed = run.config.seed;
    let trials: Vec<[f64; 3]> = (0..a.trials)
        .into_par_iter()
        .map(|t| -> Result<[f64; 3]> {
            let mut rng = trial_rng(seed, t);
            let (l, m) = (draw(&mut rng, a.scale), draw(&mut rng, a.scale));
            let t1 = transfer(l, a.sites, &weights)?.full()?;
            let t2 = transfer(m, a.sites, &weights)?.full()?;
            let xi: Vec<C64> = (0..rtt_sites).map(|_| draw(&mut rng, a.scale)).collect();
            let inhom = weights.clone().with_inhomogeneities(xi)?;
            Ok([commutator_norm(&t1, &t2)?, commutator_norm(&t1, &sz)?, rtt_residual(l, m, rtt_sites, &inhom)?])
        })
        .collect::<Result<_>>()?;
    let tol = run.tol(1e-12);
    let worst = |k: usize| max_of(trials.iter().map(|t| t[k]));
    let (comm, spin, rtt) = (worst(0), worst(1), worst(2));
    run.below("commutator", comm, tol);
    run.below("sz_commutator", spin, tol);
    run.below("rtt_residual", rtt, tol);
    run.below("regular_point_shift", shift_dev, tol);
    run.note(format!("L = {}, {} pairs (RTT at L = {rtt_sites})", a.sites, a.trials));
    Ok(json!({
        "L": a.sites,
        "rtt_sites": rtt_sites,
        "max_commutator": comm,
        "max_sz_commutator": spin,
        "max_rtt_residual": rtt,
        "shift_deviation": shift_dev,
        "trials": trials,
    }))
}

#[derive(Serialize)]
struct PartitionRow {
    #[serde(rename = "L")]
    sites: usize,
    #[serde(rename = "M")]
    rows: u32,
    z_re: f64,
    z_im: f64,
    brute_re: Option<f64>,
    brute_im: Option<f64>,
}

fn vertex_partition(run: &mut Run, a: &PartitionArgs) -> Result<Value> {
    let weights = VertexWeights::direct(a.a, a.b, a.c);
    let integral = [a.a, a.b, a.c].iter().all(|w| w.im == 0.0 && w.re.fract() == 0.0);
    let tol = run.tol(if integral { 0.0 } else { 1e-12 });
    let lattices: Vec<(usize, u32)> = if a.sweep {
        (1..=12usize).flat_map(|l| (1..=(12 / l) as u32).map(move |m| (l, m))).collect()
    } else {
        vec![(a.sites, a.rows)]
    };
    let rows: Vec<PartitionRow> = lattices
        .par_iter()
        .map(|&(l, m)| -> Result<PartitionRow> {
            let z = partition_function(l, m, &weights)?;
            let brute = if l * m as usize <= 12 { Some(partition_function_bruteforce(l, m, &weights)?) } else { None };
            Ok(PartitionRow {
                sites: l,
                rows: m,
                z_re: z.re,
                z_im: z.im,
                brute_re: brute.map(|b| b.re),
                brute_im: brute.map(|b| b.im),
            })
        })
        .collect::<Result<_>>()?;
    let worst = max_of(rows.iter().filter_map(|r| {
        let b = C64::new(r.brute_re?, r.brute_im?);
        Some((C64::new(r.z_re, r.z_im) - b).norm() / b.norm().max(f64::MIN_POSITIVE))
    }));
    if rows.iter().any(|r| r.brute_re.is_some()) {
        run.below("bruteforce_relative_difference", worst, tol);
    }
    if let Some(r) = rows.last() {
        run.note(format!("Z({} x {}) = {} + {} i", r.sites, r.rows, r.z_re, r.z_im));
    }
    run.table("partition.csv", &rows)?;
    Ok(json!({ "rows": to_value(&rows)?, "max_relative_difference": worst }))
}

fn vertex_ice(run: &mut Run, a: &IceArgs) -> Result<Value> {
    let ice = ice_entropy(a.lmax)?;
    let exact = ice_entropy_exact();
    run.below("extrapolation_error", (ice.extrapolated - exact).abs(), run.tol(1e-2));
    run.note(format!("extrapolated {:.6}, exact {exact:.6}", ice.extrapolated));
    run.table("ice_entropy.csv", &ice.rows)?;
    let mut v = to_value(&ice)?;
    v["exact"] = json!(exact);
    Ok(v)
}

#[derive(Serialize)]
struct LinkRow {
    step: f64,
    deviation: f64,
    ratio: Option<f64>,
}

fn vertex_link(run: &mut Run, a: &LinkArgs) -> Result<Value> {
    let link = hamiltonian_from_transfer_with_step(a.sites, a.eta, a.rho, a.j, a.step)?;
    run.below("deviation", link.deviation, run.tol(1e-6));
    let mut rows: Vec<LinkRow> = Vec::new();
    for k in 0..a.halvings {
        let step = 0.04 / 2f64.powi(k as i32);
        let deviation = hamiltonian_from_transfer_with_step(a.sites, a.eta, a.rho, a.j, step)?.deviation;
        let ratio = rows.last().map(|r| r.deviation / deviation);
        rows.push(LinkRow { step, deviation, ratio });
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    if !ratios.is_empty() {
        let worst = max_of(ratios.iter().map(|r| (r - 4.0).abs()));
        run.below("step_halving_ratio_minus_4", worst, 0.5);
    }
    run.note(format!("L = {}, eta = {}: deviation {:.3e} at step {:.0e}", a.sites, a.eta, link.deviation, a.step));
    run.table("link.csv", &rows)?;
    Ok(json!({
        "L": a.sites,
        "eta": a.eta,
        "step": a.step,
        "deviation": link.deviation,
        "halving": rows.iter().map(|r| json!({"step": r.step, "deviation": r.deviation, "ratio": r.ratio})).collect::<Vec<_>>(),
    }))
}

#[derive(Serialize)]
struct SlavnovRow {
    #[serde(rename = "N")]
    count: usize,
    trial: usize,
    rel_err: f64,
}

fn aba_slavnov(run: &mut Run, a: &SlavnovArgs) -> Result<Value> {
    let model = AbaModel::homogeneous(a.sites, I * a.gamma, c(1.0))?;
    let seed = run.config.seed;
    let mut groups = Vec::new();
    let mut table = Vec::new();
    let mut worst: f64 = 0.0;
    for (ci, &count) in a.counts.iter().enumerate() {
        let rep = solve_logbae_xxz(a.sites, count, a.gamma, &QuantumNumbers::ground_state(count))?;
        run.converged &= rep.converged;
        let mu = rep.roots.values.clone();
        let reports: Vec<PairingReport> = (0..a.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, ci * a.trials + t);
                let lambda: Vec<C64> =
                    (0..count).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(0.1..0.6))).collect();
                pairing_report(&model, &mu, &lambda)
            })
            .collect::<Result<_>>()?;
        let max_err = max_of(reports.iter().map(|r| r.rel_err));
        worst = if worst.is_nan() || max_err.is_nan() { f64::NAN } else { worst.max(max_err) };
        table.extend(reports.iter().enumerate().map(|(trial, r)| SlavnovRow { count, trial, rel_err: r.rel_err }));
        run.note(format!("N = {count}: max relative error {max_err:.3e} over {} draws", a.trials));
        groups.push(json!({ "N": count, "mu": to_value(&mu)?, "max_rel_err": max_err, "reports": to_value(&reports)? }));
    }
    run.below("slavnov_relative_error", worst, run.tol(1e-9));
    run.table("slavnov.csv", &table)?;
    Ok(json!({ "L": a.sites, "gamma": a.gamma, "max_rel_err": worst, "groups": groups }))
}

#[derive(Serialize)]
struct ActionRow {
    #[serde(rename = "N")]
    count: usize,
    trial: usize,
    action: f64,
    dual_action: f64,
    collinearity_defect: f64,
}

fn aba_action(run: &mut Run, a: &ActionArgs) -> Result<Value> {
    let model = AbaModel::homogeneous(a.sites, a.eta, a.rho)?;
    let seed = run.config.seed;
    let jobs: Vec<(usize, usize)> = (1..=a.max_n).flat_map(|n| (0..a.trials).map(move |t| (n, t))).collect();
    let rows: Vec<ActionRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(count, trial))| -> Result<ActionRow> {
            let mut rng = trial_rng(seed, index);
            let params: Vec<C64> = (0..=count).map(|_| draw(&mut rng, 0.8)).collect();
            let mut action: f64 = 0.0;
            let mut dual: f64 = 0.0;
            for ell in 0..params.len() {
                action = action.max(offshell_action_residual(&model, &params, ell)?);
                dual = dual.max(dual_action_residual(&model, &params, ell)?);
            }
            let roots = &params[..count];
            let coord = offshell_vector_xxz(roots, model.eta, a.sites)?;
            let b = restrict(&b_product_state(&model, roots)?, &coord.basis);
            let defect = 1.0 - collinearity(&b, &coord.amplitudes);
            Ok(ActionRow { count, trial, action, dual_action: dual, collinearity_defect: defect })
        })
        .collect::<Result<_>>()?;
    let tol = run.tol(1e-10);
    let (act, dual, col) = (
        max_of(rows.iter().map(|r| r.action)),
        max_of(rows.iter().map(|r| r.dual_action)),
        max_of(rows.iter().map(|r| r.collinearity_defect)),
    );
    run.below("offshell_action", act, tol);
    run.below("dual_action", dual, tol);
    run.below("coordinate_collinearity_defect", col, tol);
    run.note(format!("L = {}, N <= {}, {} random sets", a.sites, a.max_n, rows.len()));
    run.table("action.csv", &rows)?;
    Ok(json!({ "L": a.sites, "max_action": act, "max_dual_action": dual, "max_collinearity_defect": col, "rows": to_value(&rows)? }))
}

fn hubbard_ed(run: &mut Run, a: &HubbardEdArgs) -> Result<Value> {
    let h = build_hubbard_hamiltonian(a.sites, a.u, a.electrons, a.down)?;
    let tol = run.tol(1e-9);
    let eigenvalues = if h.dim() <= EIGENVECTOR_LIMIT {
        let s = diagonalize(&h, Which::All)?;
        run.below("eigenpair_residual", s.max_residual(&h), tol);
        s.eigenvalues
    } else {
        linalg::eigenvalues(&h)?
    };
    let levels = eigen_levels(&eigenvalues, 1e-8);
    run.note(format!("dim {}, ground energy {:.12}", h.dim(), eigenvalues.first().copied().unwrap_or(f64::NAN)));
    spectrum_table(run, &eigenvalues)?;
    Ok(json!({
        "L": a.sites,
        "N": a.electrons,
        "M": a.down,
        "u": a.u,
        "dim": h.dim(),
        "ground_energy": eigenvalues.first(),
        "eigenvalues": eigenvalues,
        "levels": levels,
    }))
}

fn solve_nested(run: &mut Run, a: &LiebWuArgs) -> Result<(SolveReport, NestedRoots)> {
    let (charge, spin) = ground_quantum_numbers(a.electrons, a.down);
    let charge = if a.charge.is_empty() { charge } else { a.charge.clone() };
    let spin = if a.spin.is_empty() { spin } else { a.spin.clone() };
    let rep = solve_liebwu(a.sites, a.electrons, a.down, a.u, &charge, &spin)?;
    run.converged &= rep.converged;
    let roots = NestedRoots::from_rapidities(&rep.roots)?;
    Ok((rep, roots))
}

fn hubbard_liebwu(run: &mut Run, a: &LiebWuArgs) -> Result<Value> {
    let (rep, roots) = solve_nested(run, a)?;
    let tol = run.tol(1e-10);
    run.below("log_residual", rep.residual, tol);
    let product = liebwu_residual(&roots)?;
    run.below("product_residual", product, 1e2 * tol);
    let (e, p) = energy_momentum(&roots);
    run.note(format!("E = {:.12}, P = {:.12}, {} iterations", e.re, p.re, rep.iterations));
    Ok(json!({
        "report": to_value(&rep)?,
        "roots": to_value(&roots)?,
        "energy": to_value(&e)?,
        "momentum": to_value(&p)?,
    }))
}

fn hubbard_verify(run: &mut Run, a: &LiebWuArgs) -> Result<Value> {
    let roots = match input_nested(run.config)? {
        Some(r) => r,
        None => solve_nested(run, a)?.1,
    };
    let check = verify_nested(&roots)?;
    let tol = run.tol(1e-8);
    run.below("eigen_residual", check.eigen_residual, tol);
    run.below("spin_raise_residual", check.spin_raise_residual, tol);
    run.below("momentum_residual", check.momentum_residual, tol);
    let h = build_hubbard_hamiltonian(roots.sites, roots.u, roots.electrons(), roots.down())?;
    let gap = distance_to_spectrum(&h, check.energy.re)?.max(check.energy.im.abs());
    run.below("ed_match", gap, tol);
    run.note(format!("E = {:.12}, P = {:.12}", check.energy.re, check.momentum.re));
    let mut v = to_value(&check)?;
    v["ed_distance"] = json!(gap);
    Ok(v)
}
