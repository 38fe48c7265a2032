//! Reproducible experiments: a serializable [`ExperimentConfig`], one
//! [`Command`] per CLI subcommand, and a [`Report`] whose JSON is
//! byte-identical for identical configs.
//!
//! Exit codes: `0` all checks pass, `2` configuration error, `3` a solver did
//! not converge, `4` a check exceeded its tolerance.

mod args;
mod cli;
mod commands;

pub use args::*;
pub use cli::{main_with_args, Cli};

use crate::error::{LabError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "BETHE_LAB_THREADS";

/// Leaf subcommands with their parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "kebab-case")]
pub enum Command {
    Ed(EdArgs),
    BaeSolve(BaeSolveArgs),
    BaeResidual(BaeResidualArgs),
    BaeTwoMagnon(TwoMagnonArgs),
    BetheVectorBuild(BetheVectorArgs),
    BetheVectorVerify(BetheVectorArgs),
    ThermoDensity(DensityArgs),
    ThermoGsEnergy(GsEnergyArgs),
    ThermoCondensation(CondensationArgs),
    VertexYbe(YbeArgs),
    VertexTransfer(TransferArgs),
    VertexPartition(PartitionArgs),
    VertexIceEntropy(IceArgs),
    VertexHamiltonianLink(LinkArgs),
    AbaSlavnov(SlavnovArgs),
    AbaVerifyAction(ActionArgs),
    HubbardEd(HubbardEdArgs),
    HubbardLiebwu(LiebWuArgs),
    HubbardVerify(LiebWuArgs),
}

impl Command {
    /// Kebab-case name, e.g. `vertex-ice-entropy`.
    pub fn name(&self) -> String {
        match serde_json::to_value(self) {
            Ok(Value::Object(map)) => map.get("name").and_then(Value::as_str).unwrap_or("").to_string(),
            _ => String::new(),
        }
    }
}

/// Everything needed to rerun an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the command's default tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Directory for the JSON report and CSV tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Piped input document (roots or a previous report).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self { command, seed: 0, tolerance: None, out: None, input: None }
    }
}

/// One pass/fail check in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= tolerance` (NaN fails).
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value: Some(value), tolerance: Some(tolerance), passed: value <= tolerance }
    }

    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), value: None, tolerance: None, passed }
    }
}

/// Machine-readable outcome of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub converged: bool,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub result: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if !self.converged {
            EXIT_NO_CONVERGENCE
        } else if !self.passed {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        }
    }
}

/// A report plus CSV tables (`file name`, contents) and a human summary.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub tables: Vec<(String, String)>,
    pub summary: String,
}

/// Maps library errors onto exit codes.
pub fn exit_code_for(err: &LabError) -> i32 {
    match err {
        LabError::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        LabError::Singular(_) | LabError::NotHermitian(_) => EXIT_CHECK_FAILED,
        _ => EXIT_CONFIG,
    }
}

/// Deterministic generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs one experiment. Pure apart from the work itself; files are written
/// by the CLI layer.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    commands::dispatch(config)
}

/// Runs `f` on a pool sized by `BETHE_LAB_THREADS` when set.
pub fn with_thread_limit<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| LabError::Config(format!("{THREADS_ENV} = {v:?} is not a thread count")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| LabError::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}
