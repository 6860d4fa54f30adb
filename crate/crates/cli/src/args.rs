use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "jdr", version, about = "Capacity, receiver and link-budget data for coherent-state optical channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// PIE versus mean photon number for the capacity limits and envelopes (CSV).
    Limits(LimitsArgs),
    /// Spectral efficiency versus PIE for multi-mode links (CSV).
    Tradeoff(TradeoffArgs),
    /// Capacity and PIE of one code/receiver superchannel family (CSV).
    Superchannel(SuperchannelArgs),
    /// Bit error rates: uncoded, Hadamard with Dolinar detection, Hadamard with the Green Machine (CSV).
    Ber(BerArgs),
    /// Free-space link budget (JSON).
    Link(LinkArgs),
    /// Dump a codebook as text, header "n K d" then one codeword per line.
    Codebook(CodebookArgs),
}

#[derive(Args)]
pub struct GridArgs {
    /// Smallest mean photon number of the log grid.
    #[arg(long)]
    pub nbar_min: Option<f64>,
    /// Largest mean photon number of the log grid.
    #[arg(long)]
    pub nbar_max: Option<f64>,
    /// Number of log-spaced grid points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Explicit comma-separated grid; overrides the log-grid flags.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["nbar_min", "nbar_max", "points"])]
    pub nbar: Option<Vec<f64>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum LimitsFamily {
    Ultimate,
    HolevoBpsk,
    C1Dolinar,
    HadamardEnvelope,
    RmGmEnvelope,
    TwoSymbol,
}

impl LimitsFamily {
    pub const ALL: [LimitsFamily; 6] = [
        LimitsFamily::Ultimate,
        LimitsFamily::HolevoBpsk,
        LimitsFamily::C1Dolinar,
        LimitsFamily::HadamardEnvelope,
        LimitsFamily::RmGmEnvelope,
        LimitsFamily::TwoSymbol,
    ];

    pub fn column(self) -> &'static str {
        match self {
            LimitsFamily::Ultimate => "ultimate",
            LimitsFamily::HolevoBpsk => "holevo_bpsk",
            LimitsFamily::C1Dolinar => "c1_dolinar",
            LimitsFamily::HadamardEnvelope => "hadamard_envelope",
            LimitsFamily::RmGmEnvelope => "rm_gm_envelope",
            LimitsFamily::TwoSymbol => "two_symbol",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReceiverArg {
    Structured,
    Mpe,
}

#[derive(Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// PIE columns to emit, in order [default: all].
    #[arg(long, value_enum, value_delimiter = ',')]
    pub families: Vec<LimitsFamily>,
    /// Envelopes maximize over code orders 1..=m_max.
    #[arg(long, default_value_t = 16)]
    pub m_max: u32,
    /// Receiver for the two_symbol column.
    #[arg(long, value_enum, default_value_t = ReceiverArg::Structured)]
    pub receiver: ReceiverArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct TradeoffArgs {
    /// Comma-separated mode counts M.
    #[arg(long, value_delimiter = ',', default_value = "1,2,10,189")]
    pub modes_list: Vec<u32>,
    #[arg(long, default_value_t = 1e-3)]
    pub nr_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub nr_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SuperFamily {
    HadamardJdr,
    RmGm,
    RmMpe,
    TwoSymbol,
}

impl SuperFamily {
    pub fn name(self) -> &'static str {
        match self {
            SuperFamily::HadamardJdr => "hadamard_jdr",
            SuperFamily::RmGm => "rm_gm",
            SuperFamily::RmMpe => "rm_mpe",
            SuperFamily::TwoSymbol => "two_symbol",
        }
    }
}

#[derive(Args)]
pub struct SuperchannelArgs {
    #[arg(long, value_enum)]
    pub family: SuperFamily,
    /// Comma-separated code orders; several need --out-dir.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Receiver for the two_symbol family.
    #[arg(long, value_enum, default_value_t = ReceiverArg::Structured)]
    pub receiver: ReceiverArg,
    /// Re-derive every point from the physically constructed channel.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, conflicts_with = "out_dir")]
    pub out: Option<PathBuf>,
    /// Directory for one CSV (plus manifest) per code order.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    /// Mixture importance sampling; resolves very small error rates.
    Importance,
    /// Plain Monte Carlo.
    Direct,
}

impl EstimatorArg {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorArg::Importance => "importance",
            EstimatorArg::Direct => "direct",
        }
    }
}

#[derive(Args)]
pub struct BerArgs {
    /// Hadamard code order.
    #[arg(long, default_value_t = 8)]
    pub m: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Monte Carlo trials per grid point (at least 10000).
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// RNG seed; a fresh one is generated and printed to stderr if omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Importance)]
    pub estimator: EstimatorArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct Apertures {
    /// Aperture radii in meters: one value for both ends, or tx,rx.
    #[arg(long, value_delimiter = ',', num_args = 1..=2)]
    pub radii: Option<Vec<f64>>,
    /// Aperture areas in square meters: one value for both ends, or tx,rx.
    #[arg(long, value_delimiter = ',', num_args = 1..=2)]
    pub areas: Option<Vec<f64>>,
}

#[derive(Args)]
pub struct LinkArgs {
    /// Wavelength in meters.
    #[arg(long)]
    pub wavelength: f64,
    /// Link range in meters.
    #[arg(long)]
    pub range: f64,
    #[command(flatten)]
    pub apertures: Apertures,
    /// Slots per second.
    #[arg(long)]
    pub slot_rate: f64,
    /// Target photon information efficiency, bits per photon.
    #[arg(long)]
    pub pie: f64,
    /// Target spectral efficiency, bits per slot.
    #[arg(long)]
    pub se: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum CodeArg {
    /// Hadamard code including the pilot position, length 2^m.
    Hadamard,
    /// Hadamard code without the pilot, length 2^m - 1.
    HadamardPunctured,
    /// First-order Reed-Muller code RM(1,m).
    Rm1,
    /// The (2,3,1) code {00, 01, 10}.
    TwoSymbol,
}

impl CodeArg {
    pub fn name(self) -> &'static str {
        match self {
            CodeArg::Hadamard => "hadamard",
            CodeArg::HadamardPunctured => "hadamard_punctured",
            CodeArg::Rm1 => "rm1",
            CodeArg::TwoSymbol => "two_symbol",
        }
    }
}

#[derive(Args)]
pub struct CodebookArgs {
    #[arg(long, value_enum)]
    pub code: CodeArg,
    /// Code order; ignored for two_symbol.
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
