//! Reproducible Monte Carlo estimation under full gate-error models.
//!
//! Trial `i` draws from ChaCha8 keyed by the master seed on stream `i`, so a
//! trial's randomness does not depend on which worker runs it. Trials run in
//! fixed-size batches and the stopping rule is checked only between
//! batches; together this makes every estimate bit-identical for any number
//! of workers.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{build_2es_with, build_qnc_with, CircuitError, IdleSchedule, Program, Protocol, Sampled};
use crate::error_models::{ErrorModel, FidelityConvention, InitialKind, ModelError};

pub const DEFAULT_TARGET_ERROR_EVENTS: u64 = 20_000;
pub const DEFAULT_MAX_TRIALS: u64 = 100_000_000;
pub const DEFAULT_BATCH_SIZE: u64 = 16_384;
/// Trials handed to one worker at a time inside a batch.
const CHUNK: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("{protocol} joint success never drops below 0.5 for gate infidelity up to {limit}")]
    NoCrossing { protocol: Protocol, limit: f64 },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> McError {
    McError::InvalidConfig { field, reason: reason.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub protocol: Protocol,
    pub model: ErrorModel<f64>,
    pub seed: u64,
    #[serde(default = "default_target")]
    pub target_error_events: u64,
    #[serde(default = "default_max")]
    pub max_trials: u64,
    #[serde(default = "default_batch")]
    pub batch_size: u64,
    #[serde(default)]
    pub idle_schedule: IdleSchedule,
}

fn default_target() -> u64 {
    DEFAULT_TARGET_ERROR_EVENTS
}
fn default_max() -> u64 {
    DEFAULT_MAX_TRIALS
}
fn default_batch() -> u64 {
    DEFAULT_BATCH_SIZE
}

impl McConfig {
    pub fn new(protocol: Protocol, model: ErrorModel<f64>, seed: u64) -> Self {
        McConfig {
            protocol,
            model,
            seed,
            target_error_events: DEFAULT_TARGET_ERROR_EVENTS,
            max_trials: DEFAULT_MAX_TRIALS,
            batch_size: DEFAULT_BATCH_SIZE,
            idle_schedule: IdleSchedule::default(),
        }
    }

    pub fn validate(&self) -> Result<(), McError> {
        self.model.validate()?;
        if self.protocol == Protocol::Demo {
            return Err(invalid("protocol", "expected qnc or 2es"));
        }
        if self.target_error_events == 0 {
            return Err(invalid("target_error_events", "must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(invalid("batch_size", "must be at least 1"));
        }
        if self.max_trials < self.batch_size {
            return Err(invalid(
                "max_trials",
                format!("{} is smaller than batch_size {}", self.max_trials, self.batch_size),
            ));
        }
        Ok(())
    }

    /// Double swapping runs two cycles per trial; success needs both.
    fn program(&self) -> Result<Program, McError> {
        let circuit = match self.protocol {
            Protocol::Es2 => build_2es_with(2, self.idle_schedule)?,
            _ => build_qnc_with(self.idle_schedule),
        };
        Ok(Program::compile(&circuit)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub trials_run: u64,
    pub error_events: u64,
    pub joint_success_prob: f64,
    pub stderr: f64,
    /// Trials per `(first, second)` final Bell index.
    pub counts: [[u64; 4]; 4],
}

impl McEstimate {
    fn from_counts(counts: [[u64; 4]; 4]) -> Self {
        let trials_run: u64 = counts.iter().flatten().sum();
        let error_events = trials_run - counts[0][0];
        let p = if trials_run == 0 { 1.0 } else { 1.0 - error_events as f64 / trials_run as f64 };
        let stderr = if trials_run == 0 { 0.0 } else { (p * (1.0 - p) / trials_run as f64).sqrt() };
        McEstimate { trials_run, error_events, joint_success_prob: p, stderr, counts }
    }

    /// `|p̂ − expected| ≤ k·stderr`, with a small floor so an all-success run
    /// can still be compared against an exact 1.
    pub fn agrees_with(&self, expected: f64, k: f64) -> bool {
        (self.joint_success_prob - expected).abs() <= k * self.stderr.max(1e-12)
    }
}

/// An estimate plus how long it took.
#[derive(Debug, Clone)]
pub struct TimedEstimate {
    pub estimate: McEstimate,
    pub seconds: f64,
}

impl TimedEstimate {
    pub fn trials_per_second(&self) -> f64 {
        self.estimate.trials_run as f64 / self.seconds.max(1e-9)
    }
}

fn add_counts(mut a: [[u64; 4]; 4], b: [[u64; 4]; 4]) -> [[u64; 4]; 4] {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
    a
}

fn run_range(program: &Program, model: &ErrorModel<f64>, base: &ChaCha8Rng, start: u64, end: u64) -> [[u64; 4]; 4] {
    let mut counts = [[0u64; 4]; 4];
    for i in start..end {
        let mut rng = base.clone();
        rng.set_stream(i);
        let out = program.run(&mut Sampled::new(model, rng));
        let cell = out.cell();
        counts[cell / 4][cell % 4] += 1;
    }
    counts
}

fn run_batches(config: &McConfig) -> Result<McEstimate, McError> {
    config.validate()?;
    let program = config.program()?;
    let base = ChaCha8Rng::seed_from_u64(config.seed);
    let mut counts = [[0u64; 4]; 4];
    let mut trials = 0u64;
    loop {
        let size = config.batch_size.min(config.max_trials - trials);
        let chunks = size.div_ceil(CHUNK);
        let batch = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = trials + c * CHUNK;
                let end = (start + CHUNK).min(trials + size);
                run_range(&program, &config.model, &base, start, end)
            })
            .reduce(|| [[0u64; 4]; 4], add_counts);
        counts = add_counts(counts, batch);
        trials += size;
        let errors = trials - counts[0][0];
        if errors >= config.target_error_events || trials >= config.max_trials {
            break;
        }
    }
    Ok(McEstimate::from_counts(counts))
}

/// Runs on the global worker pool.
pub fn run(config: &McConfig) -> Result<McEstimate, McError> {
    run_batches(config)
}

/// Runs on a dedicated pool of `workers` threads.
pub fn run_with_workers(config: &McConfig, workers: usize) -> Result<McEstimate, McError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| McError::Pool(e.to_string()))?;
    pool.install(|| run_batches(config))
}

pub fn run_timed(config: &McConfig) -> Result<TimedEstimate, McError> {
    let start = Instant::now();
    let estimate = run(config)?;
    Ok(TimedEstimate { estimate, seconds: start.elapsed().as_secs_f64() })
}

/// Seed of the `index`-th point of a sweep.
pub fn derive_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Inclusive fidelity grid `from, from + step, …, to`.
pub fn fidelity_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, McError> {
    if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from > to {
        return Err(invalid("range", format!("{from}:{to} is not an increasing range inside [0, 1]")));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(invalid("step", format!("{step} must be positive")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((from + i as f64 * step) * 1e9).round() / 1e9).collect())
}

/// Settings shared by every point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub protocol: Protocol,
    pub initial_kind: InitialKind,
    pub initial_f: f64,
    pub convention: FidelityConvention,
    pub seed: u64,
    pub target_error_events: u64,
    pub max_trials: u64,
    pub batch_size: u64,
    pub idle_schedule: IdleSchedule,
}

impl SweepSpec {
    pub fn new(protocol: Protocol, initial_f: f64, seed: u64) -> Self {
        SweepSpec {
            protocol,
            initial_kind: InitialKind::GeneralPauli,
            initial_f,
            convention: FidelityConvention::default(),
            seed,
            target_error_events: DEFAULT_TARGET_ERROR_EVENTS,
            max_trials: DEFAULT_MAX_TRIALS,
            batch_size: DEFAULT_BATCH_SIZE,
            idle_schedule: IdleSchedule::default(),
        }
    }

    /// Config of the `index`-th point at gate fidelity `gate_f`.
    pub fn config(&self, index: usize, gate_f: f64) -> Result<McConfig, McError> {
        let model = ErrorModel::with_gates(self.initial_kind, self.initial_f, gate_f, self.convention)?;
        Ok(McConfig {
            protocol: self.protocol,
            model,
            seed: derive_seed(self.seed, index),
            target_error_events: self.target_error_events,
            max_trials: self.max_trials,
            batch_size: self.batch_size,
            idle_schedule: self.idle_schedule,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub gate_f: f64,
    pub seed: u64,
    pub estimate: McEstimate,
}

/// Independent runs over a grid of gate fidelities.
pub fn sweep_gate_fidelity(spec: &SweepSpec, from: f64, to: f64, step: f64) -> Result<Vec<SweepPoint>, McError> {
    fidelity_grid(from, to, step)?
        .into_iter()
        .enumerate()
        .map(|(i, gate_f)| {
            let config = spec.config(i, gate_f)?;
            Ok(SweepPoint { gate_f, seed: config.seed, estimate: run(&config)? })
        })
        .collect()
}

/// Gate infidelity at which the joint success estimate falls through 1/2.
///
/// Scans `1 − gate_f = 0, step, 2·step, …` up to `limit` and interpolates
/// linearly between the bracketing estimates.
pub fn gate_infidelity_crossing(spec: &SweepSpec, step: f64, limit: f64) -> Result<f64, McError> {
    let mut prev: Option<(f64, f64)> = None;
    let n = (limit / step).round() as usize;
    for i in 0..=n {
        let eps = i as f64 * step;
        let p = run(&spec.config(i, 1.0 - eps)?)?.joint_success_prob;
        if p < 0.5 {
            return Ok(match prev {
                Some((e0, p0)) => e0 + (p0 - 0.5) / (p0 - p) * (eps - e0),
                None => 0.0,
            });
        }
        prev = Some((eps, p));
    }
    Err(McError::NoCrossing { protocol: spec.protocol, limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(protocol: Protocol, model: ErrorModel<f64>, seed: u64) -> McConfig {
        McConfig { target_error_events: 2_000, batch_size: 4_096, ..McConfig::new(protocol, model, seed) }
    }

    #[test]
    fn error_free_runs_to_max_trials() {
        let mut c = McConfig::new(Protocol::Qnc, ErrorModel::null(), 1);
        c.max_trials = 10_000;
        c.batch_size = 3_000;
        let e = run(&c).unwrap();
        assert_eq!(e.trials_run, 10_000);
        assert_eq!(e.error_events, 0);
        assert_eq!(e.joint_success_prob, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn stops_at_first_batch_reaching_target() {
        let c = small(Protocol::Qnc, ErrorModel::uniform(InitialKind::ZOnly, 0.1, 0.0), 3);
        let e = run(&c).unwrap();
        assert!(e.error_events >= 2_000);
        assert_eq!(e.trials_run % 4_096, 0);
        let mut shorter = c.clone();
        shorter.max_trials = e.trials_run - 4_096;
        assert!(run(&shorter).unwrap().error_events < 2_000);
    }

    #[test]
    fn z_only_estimate_matches_closed_form() {
        let c = small(Protocol::Qnc, ErrorModel::uniform(InitialKind::ZOnly, 0.1, 0.0), 11);
        let e = run(&c).unwrap();
        let exact = crate::analytic::qnc_z_joint(0.9).unwrap().p00;
        assert!(e.agrees_with(exact, 3.0), "{} vs {exact}", e.joint_success_prob);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let c = small(Protocol::Es2, ErrorModel::uniform(InitialKind::GeneralPauli, 0.1, 0.01), 5);
        let one = run_with_workers(&c, 1).unwrap();
        let three = run_with_workers(&c, 3).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn config_errors_name_the_field() {
        let mut c = McConfig::new(Protocol::Qnc, ErrorModel::null(), 0);
        c.batch_size = 0;
        assert_eq!(run(&c).unwrap_err().to_string(), "invalid batch_size: must be at least 1");
        c.batch_size = 10;
        c.max_trials = 5;
        assert!(run(&c).unwrap_err().to_string().starts_with("invalid max_trials"));
    }

    #[test]
    fn grid_has_expected_points() {
        let g = fidelity_grid(0.98, 1.0, 0.001).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.98);
        assert_eq!(g[20], 1.0);
        assert!(fidelity_grid(1.0, 0.9, 0.01).is_err());
        assert!(fidelity_grid(0.9, 1.0, 0.0).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
