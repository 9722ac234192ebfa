//! Text and JSON dumps of a [`Circuit`].
//!
//! The text form is line oriented:
//!
//! ```text
//! protocol qnc
//! cycles 1
//! registers sC sG
//! final A F
//! step 1
//! CNOT A C; ERR gate A C; ERR mem B
//! MZ C sC; ERR meas C
//! CX D sC
//! ```
//!
//! Every line after a `step k` directive is one slice; operations within a
//! slice are separated by `;`. `#` starts a comment.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::{Circuit, CircuitError, ErrorSite, GateStep, Protocol, SlotInfo, SlotTag, Slice};
use crate::pauli::QubitId;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("invalid circuit JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

#[derive(Serialize)]
struct JsonDump<'a> {
    #[serde(flatten)]
    circuit: &'a Circuit,
    error_slots: Vec<SlotInfo>,
}

impl Circuit {
    fn register_name(&self, r: usize) -> &str {
        self.registers.get(r).map_or("?", String::as_str)
    }

    fn op_text(&self, op: &GateStep) -> String {
        match op {
            GateStep::Hadamard { qubit } => format!("H {qubit}"),
            GateStep::Cnot { control, target } => format!("CNOT {control} {target}"),
            GateStep::MeasureZ { qubit, register } => format!("MZ {qubit} {}", self.register_name(*register)),
            GateStep::MeasureX { qubit, register } => format!("MX {qubit} {}", self.register_name(*register)),
            GateStep::CondX { .. } | GateStep::CondZ { .. } => {
                let (qubit, pauli, cond) = op.correction().expect("correction");
                let names: Vec<&str> = cond.iter().map(|&r| self.register_name(r)).collect();
                format!("C{} {qubit} {}", pauli.symbol(), names.join("^"))
            }
            GateStep::ErrorSlot { tag, site } => {
                let qs: Vec<String> = site.qubits().map(|q| q.to_string()).collect();
                format!("ERR {} {}", tag.name(), qs.join(" "))
            }
        }
    }

    /// Human-readable dump; [`Circuit::from_text`] parses it back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "protocol {}", self.protocol);
        let _ = writeln!(out, "cycles {}", self.cycles);
        if !self.registers.is_empty() {
            let _ = writeln!(out, "registers {}", self.registers.join(" "));
        }
        for (a, b) in &self.final_pairs {
            let _ = writeln!(out, "final {a} {b}");
        }
        let mut step = None;
        for slice in &self.slices {
            if step != Some(slice.step) {
                let _ = writeln!(out, "step {}", slice.step);
                step = Some(slice.step);
            }
            let ops: Vec<String> = slice.ops.iter().map(|op| self.op_text(op)).collect();
            let _ = writeln!(out, "{}", ops.join("; "));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let dump = JsonDump { circuit: self, error_slots: self.error_slots() };
        serde_json::to_string_pretty(&dump).expect("circuit serializes")
    }

    /// Parses and validates a JSON dump (the `error_slots` listing is ignored).
    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        let c: Circuit = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    /// Parses and validates the text form.
    pub fn from_text(s: &str) -> Result<Self, FormatError> {
        let mut protocol = None;
        let mut cycles = 1;
        let mut registers: Vec<String> = Vec::new();
        let mut final_pairs = Vec::new();
        let mut slices = Vec::new();
        let mut step: Option<u8> = None;

        for (i, raw) in s.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let rest: Vec<&str> = words.collect();
            match head {
                "protocol" => {
                    let name = rest.first().ok_or_else(|| syntax(n, "missing protocol name"))?;
                    protocol = Some(name.parse::<Protocol>().map_err(|e| syntax(n, e))?);
                }
                "cycles" => {
                    cycles = rest
                        .first()
                        .and_then(|c| c.parse().ok())
                        .ok_or_else(|| syntax(n, "cycles needs a positive integer"))?;
                }
                "registers" => registers.extend(rest.iter().map(|r| r.to_string())),
                "final" => {
                    let [a, b] = rest[..] else {
                        return Err(syntax(n, "final needs two qubits"));
                    };
                    final_pairs.push((qubit(n, a)?, qubit(n, b)?));
                }
                "step" => {
                    step = Some(
                        rest.first()
                            .and_then(|k| k.parse().ok())
                            .ok_or_else(|| syntax(n, "step needs an integer"))?,
                    );
                }
                _ => {
                    let step = step.ok_or_else(|| syntax(n, "operation before the first step directive"))?;
                    let ops = line
                        .split(';')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(|t| parse_op(n, t, &mut registers))
                        .collect::<Result<Vec<_>, _>>()?;
                    slices.push(Slice { step, ops });
                }
            }
        }
        let circuit = Circuit {
            protocol: protocol.ok_or_else(|| syntax(0, "missing protocol directive"))?,
            cycles,
            final_pairs,
            registers,
            slices,
        };
        circuit.validate()?;
        Ok(circuit)
    }
}

impl std::str::FromStr for Circuit {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Circuit::from_text(s)
    }
}

fn qubit(line: usize, s: &str) -> Result<QubitId, FormatError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => QubitId::from_label(c).ok_or_else(|| syntax(line, format!("unknown qubit {s:?}"))),
        _ => Err(syntax(line, format!("unknown qubit {s:?}"))),
    }
}

fn register(name: &str, registers: &mut Vec<String>) -> usize {
    registers.iter().position(|r| r == name).unwrap_or_else(|| {
        registers.push(name.to_string());
        registers.len() - 1
    })
}

fn parse_op(line: usize, text: &str, registers: &mut Vec<String>) -> Result<GateStep, FormatError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let arity = |k: usize| {
        if words.len() == k + 1 {
            Ok(())
        } else {
            Err(syntax(line, format!("{} takes {k} arguments: {text:?}", words[0])))
        }
    };
    Ok(match words[0].to_ascii_uppercase().as_str() {
        "H" => {
            arity(1)?;
            GateStep::Hadamard { qubit: qubit(line, words[1])? }
        }
        "CNOT" => {
            arity(2)?;
            GateStep::Cnot { control: qubit(line, words[1])?, target: qubit(line, words[2])? }
        }
        "MZ" => {
            arity(2)?;
            GateStep::MeasureZ { qubit: qubit(line, words[1])?, register: register(words[2], registers) }
        }
        "MX" => {
            arity(2)?;
            GateStep::MeasureX { qubit: qubit(line, words[1])?, register: register(words[2], registers) }
        }
        op @ ("CX" | "CZ") => {
            arity(2)?;
            let qubit = qubit(line, words[1])?;
            let condition = words[2].split('^').map(|r| register(r, registers)).collect();
            if op == "CX" {
                GateStep::CondX { qubit, condition }
            } else {
                GateStep::CondZ { qubit, condition }
            }
        }
        "ERR" => {
            let tag = match words.get(1).copied() {
                Some("init") => SlotTag::Init,
                Some("gate") => SlotTag::Gate,
                Some("meas") => SlotTag::Meas,
                Some("mem") => SlotTag::Mem,
                _ => return Err(syntax(line, format!("bad error slot {text:?}"))),
            };
            let site = match words[2..] {
                [a] => ErrorSite::One(qubit(line, a)?),
                [a, b] => ErrorSite::Two(qubit(line, a)?, qubit(line, b)?),
                _ => return Err(syntax(line, format!("error slot needs one or two qubits: {text:?}"))),
            };
            GateStep::ErrorSlot { tag, site }
        }
        other => return Err(syntax(line, format!("unknown operation {other:?}"))),
    })
}
