use super::args::*;
use super::{exit_code_for, run, with_thread_limit, Command, ExperimentConfig, EXIT_CONFIG, EXIT_OK};
use crate::error::{LabError, Result};
use crate::io;
use clap::{Parser, Subcommand};
use serde_json::Value;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Bethe Ansatz experiments checked against exact diagonalization.
///
/// The JSON report goes to stdout, a summary to stderr. Exit codes: 0 all
/// checks pass, 2 configuration error, 3 no convergence, 4 failed check.
#[derive(Debug, Parser)]
#[command(name = "bethe-lab", version, propagate_version = true, after_help = LEAVES)]
pub struct Cli {
    /// Experiment config (a JSON file with a "command" key) or the JSON
    /// output of an earlier run to take roots from.
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Directory for the report, the config and CSV tables.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed of the random draws (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the main tolerance of the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Top,
}

const LEAVES: &str = "\
Subcommands:
  ed
  bae solve | residual | two-magnon
  bethe-vector build | verify
  thermo density | gs-energy | condensation
  vertex ybe | transfer | partition | ice-entropy | hamiltonian-link   (alias: verify)
  aba slavnov | verify-action
  hubbard ed | liebwu | verify";

#[derive(Debug, Subcommand)]
pub enum Top {
    /// Exact spectrum of the Heisenberg chain.
    Ed(EdArgs),
    /// Bethe equations.
    #[command(subcommand)]
    Bae(BaeCmd),
    /// Coordinate Bethe vectors.
    #[command(subcommand)]
    BetheVector(BetheVectorCmd),
    /// Root density and the thermodynamic limit.
    #[command(subcommand)]
    Thermo(ThermoCmd),
    /// Six-vertex model checks.
    #[command(subcommand, alias = "verify")]
    Vertex(VertexCmd),
    /// Algebraic Bethe ansatz checks.
    #[command(subcommand)]
    Aba(AbaCmd),
    /// Hubbard chain.
    #[command(subcommand)]
    Hubbard(HubbardCmd),
}

#[derive(Debug, Subcommand)]
pub enum BaeCmd {
    /// Solve the logarithmic equations for given quantum numbers.
    Solve(BaeSolveArgs),
    /// Product-form residual of given roots.
    Residual(BaeResidualArgs),
    /// Classify all two-magnon solutions against ED.
    TwoMagnon(TwoMagnonArgs),
}

#[derive(Debug, Subcommand)]
pub enum BetheVectorCmd {
    /// Amplitudes of the coordinate Bethe vector.
    Build(BetheVectorArgs),
    /// Eigenvector, momentum and highest-weight residuals.
    Verify(BetheVectorArgs),
}

#[derive(Debug, Subcommand)]
pub enum ThermoCmd {
    /// Root density for a Fermi rapidity q.
    Density(DensityArgs),
    /// Ground-state energy per site and its finite-size approach.
    GsEnergy(GsEnergyArgs),
    /// Root sums against integrals over the density.
    Condensation(CondensationArgs),
}

#[derive(Debug, Subcommand)]
pub enum VertexCmd {
    /// Yang-Baxter residual over random draws.
    Ybe(YbeArgs),
    /// Commuting transfer matrices, RTT relation and shift point.
    Transfer(TransferArgs),
    /// Partition function against brute-force enumeration.
    Partition(PartitionArgs),
    /// Residual entropy of square ice.
    IceEntropy(IceArgs),
    /// XXZ Hamiltonian from the logarithmic derivative of the transfer matrix.
    HamiltonianLink(LinkArgs),
}

#[derive(Debug, Subcommand)]
pub enum AbaCmd {
    /// Slavnov determinant against explicit pairings.
    Slavnov(SlavnovArgs),
    /// Off-shell action of the transfer matrix on B-products.
    VerifyAction(ActionArgs),
}

#[derive(Debug, Subcommand)]
pub enum HubbardCmd {
    /// Exact spectrum of an (N, M) block.
    Ed(HubbardEdArgs),
    /// Solve the Lieb-Wu equations.
    Liebwu(LiebWuArgs),
    /// Check the nested Bethe state against the Hamiltonian.
    Verify(LiebWuArgs),
}

impl Top {
    pub fn into_command(self) -> Command {
        match self {
            Top::Ed(a) => Command::Ed(a),
            Top::Bae(BaeCmd::Solve(a)) => Command::BaeSolve(a),
            Top::Bae(BaeCmd::Residual(a)) => Command::BaeResidual(a),
            Top::Bae(BaeCmd::TwoMagnon(a)) => Command::BaeTwoMagnon(a),
            Top::BetheVector(BetheVectorCmd::Build(a)) => Command::BetheVectorBuild(a),
            Top::BetheVector(BetheVectorCmd::Verify(a)) => Command::BetheVectorVerify(a),
            Top::Thermo(ThermoCmd::Density(a)) => Command::ThermoDensity(a),
            Top::Thermo(ThermoCmd::GsEnergy(a)) => Command::ThermoGsEnergy(a),
            Top::Thermo(ThermoCmd::Condensation(a)) => Command::ThermoCondensation(a),
            Top::Vertex(VertexCmd::Ybe(a)) => Command::VertexYbe(a),
            Top::Vertex(VertexCmd::Transfer(a)) => Command::VertexTransfer(a),
            Top::Vertex(VertexCmd::Partition(a)) => Command::VertexPartition(a),
            Top::Vertex(VertexCmd::IceEntropy(a)) => Command::VertexIceEntropy(a),
            Top::Vertex(VertexCmd::HamiltonianLink(a)) => Command::VertexHamiltonianLink(a),
            Top::Aba(AbaCmd::Slavnov(a)) => Command::AbaSlavnov(a),
            Top::Aba(AbaCmd::VerifyAction(a)) => Command::AbaVerifyAction(a),
            Top::Hubbard(HubbardCmd::Ed(a)) => Command::HubbardEd(a),
            Top::Hubbard(HubbardCmd::Liebwu(a)) => Command::HubbardLiebwu(a),
            Top::Hubbard(HubbardCmd::Verify(a)) => Command::HubbardVerify(a),
        }
    }
}

impl Cli {
    /// Resolves `--json`: a config file replaces the subcommand's parameters
    /// (and must name the same command), any other document becomes the
    /// run's input. `--seed`, `--tol`, `--out` on the command line win.
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let command = self.command.into_command();
        let mut config = match &self.json {
            None => ExperimentConfig::new(command),
            Some(path) => {
                let doc: Value = io::read_json(path)?;
                if doc.get("command").is_some_and(Value::is_object) {
                    let file: ExperimentConfig = serde_json::from_value(doc)?;
                    if file.command.name() != command.name() {
                        return Err(LabError::Config(format!(
                            "{} is a config for {}, not {}",
                            path.display(),
                            file.command.name(),
                            command.name()
                        )));
                    }
                    file
                } else {
                    ExperimentConfig { input: Some(doc), ..ExperimentConfig::new(command) }
                }
            }
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if self.tol.is_some() {
            config.tolerance = self.tol;
        }
        if self.out.is_some() {
            config.out = self.out;
        }
        Ok(config)
    }
}

fn write_artifacts(dir: &Path, config: &ExperimentConfig, out: &super::RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    io::write_json(&dir.join(format!("{}.json", out.report.command)), &out.report)?;
    io::write_json(&dir.join("config.json"), config)?;
    for (name, contents) in &out.tables {
        std::fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

fn execute(config: &ExperimentConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let out = with_thread_limit(|| run(config))??;
    let elapsed = start.elapsed();
    let mut json = io::to_json_string(&out.report)?;
    json.push('\n');
    stdout.write_all(json.as_bytes())?;
    if let Some(dir) = &config.out {
        write_artifacts(dir, config, &out)?;
    }
    let verdict = if out.report.passed { "PASS" } else { "FAIL" };
    writeln!(stderr, "{}\n{} {} in {:.3} s", out.summary, verdict, out.report.command, elapsed.as_secs_f64())?;
    Ok(out.report.exit_code())
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_CONFIG;
            }
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
    };
    let result = cli.into_config().and_then(|config| execute(&config, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}
