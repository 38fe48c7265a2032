//! Parameters of each subcommand. Every field has a default, so a config
//! file only needs the fields it changes.

use crate::C64;
use clap::{Args, FromArgMatches, ValueEnum};
use serde::{Deserialize, Serialize};

fn parse_c64(s: &str) -> Result<C64, String> {
    s.trim().parse::<C64>().map_err(|e| format!("{s:?} is not a complex number ({e})"))
}

/// Defaults of an argument struct as clap would fill them in.
fn clap_defaults<T: Args + FromArgMatches>() -> T {
    let cmd = T::augment_args(clap::Command::new("defaults").no_binary_name(true));
    let matches = cmd.get_matches_from(Vec::<String>::new());
    T::from_arg_matches(&matches).expect("every argument has a default")
}

macro_rules! clap_default {
    ($($t:ty),* $(,)?) => {
        $(impl Default for $t {
            fn default() -> Self {
                clap_defaults()
            }
        })*
    };
}

clap_default!(
    EdArgs,
    BaeSolveArgs,
    BaeResidualArgs,
    TwoMagnonArgs,
    BetheVectorArgs,
    DensityArgs,
    GsEnergyArgs,
    CondensationArgs,
    YbeArgs,
    TransferArgs,
    PartitionArgs,
    IceArgs,
    LinkArgs,
    SlavnovArgs,
    ActionArgs,
    HubbardEdArgs,
    LiebWuArgs,
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainModel {
    Xxx,
    Xxz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaeModel {
    Xxx,
    Xxz,
    Bose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    /// `1 / (l^2 + 1/4)`, the energy kernel.
    Energy,
    /// `exp(-l^2)`.
    Gaussian,
}

/// Spectrum of the XXX chain, or the XXZ chain when `--delta` is given.
#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct EdArgs {
    #[arg(long, short = 'L', default_value_t = 8)]
    pub sites: usize,
    /// Number of down spins; the full space when omitted.
    #[arg(long, short = 'N')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub down: Option<usize>,
    #[arg(long, short = 'J', default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
    /// Anisotropy of the XXZ chain.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct BaeSolveArgs {
    #[arg(long, value_enum, default_value_t = BaeModel::Xxx)]
    pub model: BaeModel,
    #[arg(long, short = 'L', default_value_t = 8)]
    pub sites: usize,
    /// Number of roots; `L/2` on the lattice, 3 for the Bose gas when omitted.
    #[arg(long, short = 'N')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Quantum numbers `n_j`, comma separated; `1..N` when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub qnums: Vec<i64>,
    /// XXZ anisotropy angle, `Delta = cos(gamma)`.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Bose gas coupling.
    #[arg(long, short = 'c', default_value_t = 1.0)]
    pub c: f64,
    /// Bose gas ring length.
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, short = 'J', default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
    /// Compare the energy with exact diagonalization of the same sector.
    #[arg(long)]
    pub compare_ed: bool,
}

/// Residual of given roots; `--json` input takes precedence over `--roots`.
#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct BaeResidualArgs {
    #[arg(long, value_enum, default_value_t = BaeModel::Xxx)]
    pub model: BaeModel,
    #[arg(long, short = 'L', default_value_t = 8)]
    pub sites: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, short = 'c', default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    /// Roots such as `0.3,-0.1+0.5i`.
    #[arg(long, value_delimiter = ',', value_parser = parse_c64, allow_hyphen_values = true)]
    pub roots: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TwoMagnonArgs {
    #[arg(long, short = 'L', default_value_t = 8)]
    pub sites: usize,
    /// Energies closer than this count as one level.
    #[arg(long, default_value_t = 1e-8)]
    pub level_tol: f64,
}

/// On-shell roots are solved from quantum numbers unless `--roots` or
/// `--json` supplies them.
#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct BetheVectorArgs {
    #[arg(long, value_enum, default_value_t = ChainModel::Xxx)]
    pub model: ChainModel,
    #[arg(long, short = 'L', default_value_t = 8)]
    pub sites: usize,
    #[arg(long, short = 'N')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub qnums: Vec<i64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_c64, allow_hyphen_values = true)]
    pub roots: Vec<C64>,
    #[arg(long, short = 'J', default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DensityArgs {
    /// Fermi rapidity; `inf` for the ground state.
    #[arg(long, default_value_t = f64::INFINITY)]
    #[serde(serialize_with = "crate::thermo::write_q", deserialize_with = "crate::thermo::read_q")]
    pub q: f64,
    #[arg(long, default_value_t = crate::thermo::DEFAULT_NODES)]
    pub nodes: usize,
    /// Points of the exported density table.
    #[arg(long, default_value_t = 81)]
    pub samples: usize,
    /// Bound on the deviation from `1 / (2 ch(pi l))`; checked for `q = inf`
    /// with the run tolerance when omitted.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct GsEnergyArgs {
    #[arg(long, default_value_t = f64::INFINITY)]
    #[serde(serialize_with = "crate::thermo::write_q", deserialize_with = "crate::thermo::read_q")]
    pub q: f64,
    #[arg(long, short = 'J', default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
    #[arg(long, default_value_t = crate::thermo::DEFAULT_NODES)]
    pub nodes: usize,
    /// Even chain lengths of the finite-size sequence.
    #[arg(long, value_delimiter = ',', default_value = "8,10,12,14,16")]
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct CondensationArgs {
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Observable::Energy)]
    pub observable: Observable,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct YbeArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Crossing parameter; drawn per trial when omitted.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<C64>,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    pub rho: C64,
    /// Spectral parameters are drawn from the box `[-s, s] + i [-s, s]`.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TransferArgs {
    #[arg(long, short = 'L', default_value_t = 6)]
    pub sites: usize,
    #[arg(long, value_parser = parse_c64, default_value = "0.6+0.3i", allow_hyphen_values = true)]
    pub eta: C64,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    pub rho: C64,
    /// Random spectral-parameter pairs.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.5)]
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PartitionArgs {
    #[arg(long, short = 'L', default_value_t = 3)]
    pub sites: usize,
    #[arg(long, short = 'M', default_value_t = 4)]
    pub rows: u32,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    pub a: C64,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    pub b: C64,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    pub c: C64,
    /// Every lattice with `L M <= 12` instead of one.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct IceArgs {
    #[arg(long, default_value_t = 12)]
    pub lmax: usize,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkArgs {
    #[arg(long, short = 'L', default_value_t = 4)]
    pub sites: usize,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub rho: f64,
    #[arg(long, short = 'J', default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
    #[arg(long, default_value_t = crate::vertex::LINK_STEP)]
    pub step: f64,
    /// Coarse steps `0.04 / 2^k` of the convergence table.
    #[arg(long, default_value_t = 4)]
    pub halvings: usize,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SlavnovArgs {
    #[arg(long, short = 'L', default_value_t = 8)]
    pub sites: usize,
    /// Numbers of roots to test.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub counts: Vec<usize>,
    /// Off-shell draws per count.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// `eta = i gamma`, `Delta = cos(gamma)`.
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ActionArgs {
    #[arg(long, short = 'L', default_value_t = 6)]
    pub sites: usize,
    /// Largest number of B operators.
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    /// Random root sets per number of roots.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, value_parser = parse_c64, default_value = "0.3+0.8i", allow_hyphen_values = true)]
    pub eta: C64,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    pub rho: C64,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct HubbardEdArgs {
    #[arg(long, short = 'L', default_value_t = 6)]
    pub sites: usize,
    #[arg(long, short = 'u', default_value_t = 4.0, allow_hyphen_values = true)]
    pub u: f64,
    /// Number of electrons.
    #[arg(long, short = 'N', default_value_t = 2)]
    pub electrons: usize,
    /// Number of down spins.
    #[arg(long, short = 'M', default_value_t = 1)]
    pub down: usize,
}

/// Lieb-Wu roots from quantum numbers (ground state when omitted); `verify`
/// also accepts roots through `--json`.
#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct LiebWuArgs {
    #[arg(long, short = 'L', default_value_t = 6)]
    pub sites: usize,
    #[arg(long, short = 'u', default_value_t = 1.0)]
    pub u: f64,
    #[arg(long, short = 'N', default_value_t = 2)]
    pub electrons: usize,
    #[arg(long, short = 'M', default_value_t = 1)]
    pub down: usize,
    /// Charge quantum numbers `n_j`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub charge: Vec<i64>,
    /// Spin quantum numbers `m_l`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub spin: Vec<i64>,
}
