use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnc_core::circuit::{IdleSchedule, Protocol};
use qnc_core::error_models::{FidelityConvention, InitialKind};
use qnc_core::montecarlo::{DEFAULT_BATCH_SIZE, DEFAULT_MAX_TRIALS, DEFAULT_TARGET_ERROR_EVENTS};
use qnc_core::Exact;
use serde::Serialize;

/// Directory used for output files when `--out` is relative or absent.
pub const OUT_DIR_ENV: &str = "QNC_OUT_DIR";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "qnc",
    version,
    about = "Network coding vs. double entanglement swapping on the butterfly network",
    after_help = "Output goes to stdout unless --out or QNC_OUT_DIR is given.\n\
                  Exit codes: 0 success, 2 invalid arguments, 3 runtime failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file; relative paths resolve against $QNC_OUT_DIR when set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// `#` metadata header followed by CSV (plain text for `circuit`).
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Exact joint-fidelity curves for both protocols plus the x = y reference.
    Analytic(AnalyticArgs),
    /// Correlation table between the two network-coding outputs (Z errors).
    Correlate(CorrelateArgs),
    /// Input fidelity at which joint fidelity crosses 1/2.
    Threshold(ThresholdArgs),
    /// Full 4×4 distribution of final Bell states from exact enumeration.
    Enumerate(EnumerateArgs),
    /// One Monte Carlo estimate under gate errors.
    Mc(McArgs),
    /// Monte Carlo estimates over a grid of gate fidelities.
    Sweep(SweepArgs),
    /// Dump a protocol circuit with its error slots.
    Circuit(CircuitArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyticArgs {
    #[arg(long, default_value = "z", value_parser = parse_kind)]
    pub model: InitialKind,
    /// Restrict to one protocol; both by default.
    #[arg(long)]
    pub protocol: Option<Protocol>,
    #[arg(long = "f-range", default_value = "0.5:1:0.01")]
    pub f_range: FRange,
    #[arg(long, default_value = "pair")]
    pub convention: FidelityConvention,
}

#[derive(Debug, Args, Serialize)]
pub struct CorrelateArgs {
    #[arg(long, conflicts_with = "f_range")]
    pub f: Option<f64>,
    #[arg(long = "f-range")]
    pub f_range: Option<FRange>,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub protocol: Option<Protocol>,
    /// All of z, x and pauli by default. Pauli is reported under both
    /// fidelity conventions.
    #[arg(long, value_parser = parse_kind)]
    pub model: Option<InitialKind>,
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long, default_value = "qnc")]
    pub protocol: Protocol,
    #[arg(long, default_value = "pauli", value_parser = parse_kind)]
    pub model: InitialKind,
    #[arg(long, default_value = "0.9")]
    pub f: Decimal,
    #[arg(long, default_value = "pair")]
    pub convention: FidelityConvention,
    /// Also print each probability as an exact fraction.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Stopping {
    #[arg(long, default_value_t = DEFAULT_TARGET_ERROR_EVENTS)]
    pub target_errors: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIALS)]
    pub max_trials: u64,
    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    pub batch_size: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    /// JSON McConfig; replaces the model and stopping flags.
    #[arg(long, conflicts_with_all = ["initial_f", "gate_f", "memory_f", "model", "protocol"])]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "qnc")]
    pub protocol: Protocol,
    #[arg(long, default_value = "pauli", value_parser = parse_kind)]
    pub model: InitialKind,
    #[arg(long, default_value_t = 0.95)]
    pub initial_f: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gate_f: f64,
    /// Idle fidelity per slot; defaults to the gate fidelity.
    #[arg(long)]
    pub memory_f: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "pair")]
    pub convention: FidelityConvention,
    #[arg(long, default_value = "step-v1")]
    pub idle_schedule: IdleSchedule,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub stopping: Stopping,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value = "qnc")]
    pub protocol: Protocol,
    #[arg(long, default_value = "pauli", value_parser = parse_kind)]
    pub model: InitialKind,
    #[arg(long, default_value_t = 0.95)]
    pub initial_f: f64,
    #[arg(long = "gate-f-range", default_value = "0.98:1:0.001")]
    pub gate_f_range: FRange,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "pair")]
    pub convention: FidelityConvention,
    #[arg(long, default_value = "step-v1")]
    pub idle_schedule: IdleSchedule,
    #[command(flatten)]
    pub stopping: Stopping,
}

#[derive(Debug, Args, Serialize)]
pub struct CircuitArgs {
    #[arg(long, default_value = "qnc")]
    pub protocol: Protocol,
    /// Swapping cycles in a 2es dump.
    #[arg(long, default_value_t = 1)]
    pub cycles: usize,
    #[arg(long, default_value = "step-v1")]
    pub idle_schedule: IdleSchedule,
}

fn parse_kind(s: &str) -> Result<InitialKind, String> {
    match s.parse()? {
        InitialKind::None => Err("model must be z, x or pauli".into()),
        k => Ok(k),
    }
}

/// `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl FromStr for FRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("expected lo:hi:step, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a number"));
        Ok(FRange { lo: num(lo)?, hi: num(hi)?, step: num(step)? })
    }
}

/// A decimal literal that keeps its text so it can be read exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "f64")]
pub struct Decimal {
    text: String,
    value: f64,
}

impl Decimal {
    pub fn value(&self) -> f64 {
        self.value
    }

    /// `digits / 10^k`; `None` when the literal has too many digits.
    pub fn to_exact(&self) -> Option<Exact> {
        use qnc_core::Scalar;
        let (int, frac) = self.text.split_once('.').unwrap_or((&self.text, ""));
        if frac.len() > 9 {
            return None;
        }
        let n: u32 = format!("{int}{frac}").parse().ok()?;
        Some(Exact::ratio(n, 10u32.pow(frac.len() as u32)))
    }
}

impl From<Decimal> for f64 {
    fn from(d: Decimal) -> f64 {
        d.value
    }
}

impl FromStr for Decimal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let text = s.trim();
        let ok = !text.is_empty() && text.chars().all(|c| c.is_ascii_digit() || c == '.') && text.matches('.').count() <= 1;
        let value = text.parse::<f64>().ok().filter(|_| ok).ok_or_else(|| format!("{s:?} is not a decimal number"))?;
        Ok(Decimal { text: text.to_string(), value })
    }
}
