use qnc_core::analytic::{correlation_at, exact_distribution, find_threshold};
use qnc_core::circuit::{build_2es_with, build_qnc_with, Circuit, Protocol, IDLE_SCHEDULE};
use qnc_core::error_models::{ErrorModel, FidelityConvention, InitialKind};
use qnc_core::montecarlo::{self, fidelity_grid, sweep_gate_fidelity, McConfig, McEstimate, SweepSpec};
use qnc_core::pauli::BellIndex;
use qnc_core::Exact;
use serde_json::{json, Value};

use crate::args::{
    AnalyticArgs, CircuitArgs, CorrelateArgs, EnumerateArgs, FRange, Format, McArgs, Stopping, SweepArgs,
    ThresholdArgs,
};
use crate::error::CliError;
use crate::report::{pretty, Meta, Table};

const PROTOCOLS: [Protocol; 2] = [Protocol::Qnc, Protocol::Es2];

fn protocols(p: Option<Protocol>) -> Result<Vec<Protocol>, CliError> {
    match p {
        Some(Protocol::Demo) => Err(CliError::Usage("protocol must be qnc or 2es".into())),
        Some(p) => Ok(vec![p]),
        None => Ok(PROTOCOLS.to_vec()),
    }
}

fn grid(r: &FRange) -> Result<Vec<f64>, CliError> {
    Ok(fidelity_grid(r.lo, r.hi, r.step)?)
}

fn meta(command: &'static str, config: Value) -> Meta {
    Meta { command, config, seed: None, idle_schedule: IDLE_SCHEDULE, extra: Vec::new() }
}

/// Channel parameter and resulting pair fidelity at input `f`.
fn both_conventions(kind: InitialKind, f: f64, conv: FidelityConvention) -> Result<(f64, f64), CliError> {
    let p = conv.channel_p(kind, f)?;
    Ok((p, FidelityConvention::pair_fidelity(kind, p)))
}

pub fn analytic(a: &AnalyticArgs, config: Value) -> Result<Table, CliError> {
    let pauli = a.model == InitialKind::GeneralPauli;
    let mut m = meta("analytic", config);
    m.extra.push(("convention", json!(a.convention.name())));
    let mut cols = vec!["protocol", "F", "P00", "P01", "P10", "P11", "joint_fidelity"];
    if pauli {
        cols.extend(["channel_p", "pair_F"]);
    }
    let mut t = Table::new(m, &cols);
    let fs = grid(&a.f_range)?;
    for protocol in protocols(a.protocol)? {
        for &f in &fs {
            let model = ErrorModel::initial_only(a.model, f, a.convention)?;
            let d = exact_distribution(protocol, &model)?;
            let mn = d.collapse_mn();
            let mut row = vec![json!(protocol.name()), json!(f)];
            row.extend(mn.as_array().iter().map(|p| json!(p)));
            row.push(json!(d.joint_fidelity()));
            if pauli {
                let (p, pf) = both_conventions(a.model, f, a.convention)?;
                row.extend([json!(p), json!(pf)]);
            }
            t.push(row);
        }
    }
    for &f in &fs {
        let mut row = vec![json!("x=y"), json!(f), Value::Null, Value::Null, Value::Null, Value::Null, json!(f)];
        if pauli {
            row.extend([Value::Null, Value::Null]);
        }
        t.push(row);
    }
    Ok(t)
}

pub fn correlate(a: &CorrelateArgs, config: Value) -> Result<Table, CliError> {
    let fs = match (&a.f, &a.f_range) {
        (_, Some(r)) => grid(r)?,
        (Some(f), None) => vec![*f],
        (None, None) => vec![0.9],
    };
    let mut t = Table::new(meta("correlate", config), &["F", "a", "b", "c", "d", "e", "f", "g", "h", "phi"]);
    for f in fs {
        let c = correlation_at(f)?;
        let mut row = vec![json!(f)];
        row.extend([c.a, c.b, c.c, c.d, c.e, c.f, c.g, c.h, c.phi].map(|v| json!(v)));
        t.push(row);
    }
    Ok(t)
}

pub fn threshold(a: &ThresholdArgs, config: Value) -> Result<Table, CliError> {
    let kinds = match a.model {
        Some(k) => vec![k],
        None => vec![InitialKind::ZOnly, InitialKind::XOnly, InitialKind::GeneralPauli],
    };
    let mut t = Table::new(meta("threshold", config), &["protocol", "model", "convention", "threshold_F", "channel_p", "pair_F"]);
    for protocol in protocols(a.protocol)? {
        for &kind in &kinds {
            let conventions: &[FidelityConvention] = if kind == InitialKind::GeneralPauli {
                &[FidelityConvention::PairFidelity, FidelityConvention::ChannelParameter]
            } else {
                // one-sided models read F = 1 − p under either convention
                &[FidelityConvention::PairFidelity]
            };
            for &conv in conventions {
                let f = find_threshold(protocol, kind, conv)?;
                let (p, pf) = both_conventions(kind, f, conv)?;
                t.push(vec![json!(protocol.name()), json!(kind.name()), json!(conv.name()), json!(f), json!(p), json!(pf)]);
            }
        }
    }
    Ok(t)
}

pub fn enumerate(a: &EnumerateArgs, config: Value) -> Result<Table, CliError> {
    protocols(Some(a.protocol))?;
    let f = a.f.value();
    let model = ErrorModel::initial_only(a.model, f, a.convention)?;
    let d = exact_distribution(a.protocol, &model)?;
    let exact = if a.exact {
        let fx = a.f.to_exact().ok_or_else(|| CliError::Usage("--exact needs --f with at most 9 decimals".into()))?;
        let model = ErrorModel::<Exact>::initial_only(a.model, fx, a.convention)?;
        Some(exact_distribution(a.protocol, &model)?)
    } else {
        None
    };
    let mut m = meta("enumerate", config);
    m.extra.push(("pair_F", json!(model.pair_fidelity())));
    m.extra.push(("joint_fidelity", json!(d.joint_fidelity())));
    if let Some(x) = &exact {
        m.extra.push(("joint_fidelity_exact", json!(x.joint_fidelity().to_string())));
    }
    let mut cols = vec!["first", "second", "probability"];
    if a.exact {
        cols.push("exact");
    }
    let mut t = Table::new(m, &cols);
    for first in BellIndex::ALL {
        for second in BellIndex::ALL {
            let mut row = vec![json!(first.name()), json!(second.name()), json!(d.get(first, second))];
            if let Some(x) = &exact {
                row.push(json!(x.get(first, second).to_string()));
            }
            t.push(row);
        }
    }
    Ok(t)
}

const MC_COLUMNS: [&str; 8] = ["protocol", "initial_F", "gate_F", "trials", "error_events", "joint_success", "stderr", "seed"];

fn mc_row(protocol: Protocol, initial_f: f64, gate_f: f64, seed: u64, e: &McEstimate) -> Vec<Value> {
    vec![
        json!(protocol.name()),
        json!(initial_f),
        json!(gate_f),
        json!(e.trials_run),
        json!(e.error_events),
        json!(e.joint_success_prob),
        json!(e.stderr),
        json!(seed),
    ]
}

fn load_config(path: &std::path::Path) -> Result<McConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Config { path: path.into(), source })
}

fn apply_stopping(c: &mut McConfig, s: &Stopping) {
    c.target_error_events = s.target_errors;
    c.max_trials = s.max_trials;
    c.batch_size = s.batch_size;
}

pub fn mc(a: &McArgs, config: Value) -> Result<Table, CliError> {
    let (cfg, initial_f) = match &a.config {
        Some(path) => {
            let c = load_config(path)?;
            let f = c.model.pair_fidelity();
            (c, f)
        }
        None => {
            protocols(Some(a.protocol))?;
            let mut model = ErrorModel::with_gates(a.model, a.initial_f, a.gate_f, a.convention)?;
            if let Some(mf) = a.memory_f {
                model.p_memory = Some(1.0 - mf);
            }
            let mut c = McConfig::new(a.protocol, model, a.seed);
            c.idle_schedule = a.idle_schedule;
            apply_stopping(&mut c, &a.stopping);
            (c, a.initial_f)
        }
    };
    let estimate = match a.workers {
        Some(w) => montecarlo::run_with_workers(&cfg, w)?,
        None => montecarlo::run(&cfg)?,
    };
    let mut m = meta("mc", config);
    m.seed = Some(cfg.seed);
    m.idle_schedule = cfg.idle_schedule.id();
    m.extra.push(("mc_config", serde_json::to_value(&cfg).map_err(CliError::runtime)?));
    m.extra.push(("pair_F", json!(cfg.model.pair_fidelity())));
    let mut t = Table::new(m, &MC_COLUMNS);
    t.push(mc_row(cfg.protocol, initial_f, 1.0 - cfg.model.p_gate, cfg.seed, &estimate));
    Ok(t)
}

pub fn sweep(a: &SweepArgs, config: Value) -> Result<Table, CliError> {
    protocols(Some(a.protocol))?;
    let mut spec = SweepSpec::new(a.protocol, a.initial_f, a.seed);
    spec.initial_kind = a.model;
    spec.convention = a.convention;
    spec.idle_schedule = a.idle_schedule;
    spec.target_error_events = a.stopping.target_errors;
    spec.max_trials = a.stopping.max_trials;
    spec.batch_size = a.stopping.batch_size;
    let r = &a.gate_f_range;
    // validate the model before the first run
    let (_, pair_f) = both_conventions(a.model, a.initial_f, a.convention)?;
    let points = sweep_gate_fidelity(&spec, r.lo, r.hi, r.step)?;
    let mut m = meta("sweep", config);
    m.seed = Some(a.seed);
    m.idle_schedule = a.idle_schedule.id();
    m.extra.push(("pair_F", json!(pair_f)));
    let mut t = Table::new(m, &MC_COLUMNS);
    for p in &points {
        t.push(mc_row(a.protocol, a.initial_f, p.gate_f, p.seed, &p.estimate));
    }
    Ok(t)
}

/// Circuit dumps bypass [`Table`]: text format with a `#` header, or JSON.
pub fn circuit(a: &CircuitArgs, config: Value, format: Format) -> Result<Vec<u8>, CliError> {
    let circuit: Circuit = match a.protocol {
        Protocol::Qnc => build_qnc_with(a.idle_schedule),
        Protocol::Es2 => build_2es_with(a.cycles, a.idle_schedule)?,
        Protocol::Demo => return Err(CliError::Usage("protocol must be qnc or 2es".into())),
    };
    let mut m = meta("circuit", config);
    m.idle_schedule = a.idle_schedule.id();
    m.extra.push(("measurements", json!(circuit.measurement_count())));
    m.extra.push(("error_slots", json!(circuit.error_slots().len())));
    Ok(match format {
        Format::Csv => {
            let mut out = Vec::new();
            m.write_comment_header(&mut out);
            out.extend(circuit.to_text().into_bytes());
            out
        }
        Format::Json => {
            let body: Value = serde_json::from_str(&circuit.to_json()).map_err(CliError::runtime)?;
            pretty(&json!({ "meta": m.to_json(), "circuit": body }))
        }
    })
}

