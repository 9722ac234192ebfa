//! Clifford circuit representation for the two protocols, its text and JSON
//! dumps, and the Pauli-frame trial executor.
//!
//! A [`Circuit`] is a list of time [`Slice`]s. Each slice holds operations
//! on disjoint qubits plus the error slots that decorate them. Error slots
//! carry only a [`SlotTag`]; what they do is decided at run time by whoever
//! drives the execution (an error model, a scripted injection, or nothing).

mod build;
mod exec;
mod format;

pub use build::{
    build_2es, build_2es_with, build_encoding_demo, build_qnc, build_qnc_with, EncodingOp, IdleSchedule, IDLE_SCHEDULE,
};
pub use exec::{
    execute, validate_branch_independence, BranchOutcomes, Injection, Program, Sampled, Scripted, SlotRef,
    TrialDriver, TrialOutcome,
};
pub use format::FormatError;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{FrameError, Pauli, QubitId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("slice {slice}: qubit {qubit} is used by more than one operation")]
    QubitReused { slice: usize, qubit: QubitId },
    #[error("slice {slice}: qubit {qubit} was already measured")]
    MeasuredQubitTouched { slice: usize, qubit: QubitId },
    #[error("slice {slice}: register {register} is read before it is written")]
    RegisterNotWritten { slice: usize, register: String },
    #[error("slice {slice}: register {register} is written twice")]
    RegisterRewritten { slice: usize, register: String },
    #[error("register index {0} is not declared")]
    UnknownRegister(usize),
    #[error("too many classical registers ({0}, at most 32)")]
    TooManyRegisters(usize),
    #[error("final pair {0}{1} does not end in the ideal Bell state")]
    FinalPairNotBell(QubitId, QubitId),
    #[error("final pair {0}{1} contains a measured qubit")]
    FinalPairMeasured(QubitId, QubitId),
    #[error("cycle count must be 1 or 2, got {0}")]
    InvalidCycles(usize),
    #[error("error slot has no qubits")]
    EmptyErrorSlot,
}

/// Which protocol a circuit realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "qnc")]
    Qnc,
    #[serde(rename = "2es")]
    Es2,
    /// Stand-alone encoding operation used for per-step fidelity checks.
    #[serde(rename = "demo")]
    Demo,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Qnc => "qnc",
            Protocol::Es2 => "2es",
            Protocol::Demo => "demo",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qnc" => Ok(Protocol::Qnc),
            "2es" | "es2" => Ok(Protocol::Es2),
            "demo" => Ok(Protocol::Demo),
            other => Err(format!("unknown protocol {other:?} (expected qnc or 2es)")),
        }
    }
}

/// What an error slot models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotTag {
    /// Imperfect Bell-pair creation (decorates the pair-creating CNOT).
    Init,
    /// CNOT or single-qubit gate.
    Gate,
    /// Readout; fires just before the measurement it decorates.
    Meas,
    /// Idle qubit for the duration of one slice.
    Mem,
}

impl SlotTag {
    pub fn name(self) -> &'static str {
        match self {
            SlotTag::Init => "init",
            SlotTag::Gate => "gate",
            SlotTag::Meas => "meas",
            SlotTag::Mem => "mem",
        }
    }
}

/// Qubits touched by one error slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ErrorSite {
    One(QubitId),
    Two(QubitId, QubitId),
}

impl ErrorSite {
    pub fn qubits(&self) -> impl Iterator<Item = QubitId> {
        let (a, b) = match *self {
            ErrorSite::One(q) => (q, None),
            ErrorSite::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }
}

/// Parity over classical registers; empty means "always false".
pub type Condition = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum GateStep {
    Hadamard { qubit: QubitId },
    Cnot { control: QubitId, target: QubitId },
    MeasureZ { qubit: QubitId, register: usize },
    MeasureX { qubit: QubitId, register: usize },
    /// `X` on `qubit` iff the XOR of the listed registers is 1.
    CondX { qubit: QubitId, condition: Condition },
    CondZ { qubit: QubitId, condition: Condition },
    ErrorSlot { tag: SlotTag, site: ErrorSite },
}

impl GateStep {
    /// Qubits the operation acts on. Error slots report their site.
    pub fn qubits(&self) -> Vec<QubitId> {
        match self {
            GateStep::Hadamard { qubit }
            | GateStep::MeasureZ { qubit, .. }
            | GateStep::MeasureX { qubit, .. }
            | GateStep::CondX { qubit, .. }
            | GateStep::CondZ { qubit, .. } => vec![*qubit],
            GateStep::Cnot { control, target } => vec![*control, *target],
            GateStep::ErrorSlot { site, .. } => site.qubits().collect(),
        }
    }

    pub fn is_error_slot(&self) -> bool {
        matches!(self, GateStep::ErrorSlot { .. })
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, GateStep::MeasureZ { .. } | GateStep::MeasureX { .. })
    }

    /// Pauli applied by a conditioned correction.
    pub fn correction(&self) -> Option<(QubitId, Pauli, &Condition)> {
        match self {
            GateStep::CondX { qubit, condition } => Some((*qubit, Pauli::X, condition)),
            GateStep::CondZ { qubit, condition } => Some((*qubit, Pauli::Z, condition)),
            _ => None,
        }
    }
}

/// One time slice, labelled with the protocol step it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub step: u8,
    pub ops: Vec<GateStep>,
}

/// A located error slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotInfo {
    pub id: usize,
    pub slice: usize,
    pub step: u8,
    pub tag: SlotTag,
    pub site: ErrorSite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub protocol: Protocol,
    /// Independent repetitions of the slice list, each starting from fresh pairs.
    pub cycles: usize,
    pub final_pairs: Vec<(QubitId, QubitId)>,
    pub registers: Vec<String>,
    pub slices: Vec<Slice>,
}

impl Circuit {
    /// Checks the structural invariants: disjoint qubits per slice, no reuse
    /// after measurement, registers written once before being read.
    pub fn validate(&self) -> Result<(), CircuitError> {
        if !(1..=2).contains(&self.cycles) {
            return Err(CircuitError::InvalidCycles(self.cycles));
        }
        if self.registers.len() > 32 {
            return Err(CircuitError::TooManyRegisters(self.registers.len()));
        }
        let mut measured: HashSet<QubitId> = HashSet::new();
        let mut written: HashSet<usize> = HashSet::new();
        for (si, slice) in self.slices.iter().enumerate() {
            let mut busy: HashSet<QubitId> = HashSet::new();
            for op in &slice.ops {
                for q in op.qubits() {
                    if measured.contains(&q) {
                        return Err(CircuitError::MeasuredQubitTouched { slice: si, qubit: q });
                    }
                }
                match op {
                    GateStep::ErrorSlot { site, .. } => {
                        if let ErrorSite::Two(a, b) = site {
                            if a == b {
                                return Err(FrameError::RepeatedQubit(*a).into());
                            }
                        }
                        continue;
                    }
                    GateStep::Cnot { control, target } if control == target => {
                        return Err(FrameError::RepeatedQubit(*control).into());
                    }
                    _ => {}
                }
                for q in op.qubits() {
                    if !busy.insert(q) {
                        return Err(CircuitError::QubitReused { slice: si, qubit: q });
                    }
                }
                match op {
                    GateStep::MeasureZ { qubit, register } | GateStep::MeasureX { qubit, register } => {
                        if *register >= self.registers.len() {
                            return Err(CircuitError::UnknownRegister(*register));
                        }
                        if !written.insert(*register) {
                            return Err(CircuitError::RegisterRewritten {
                                slice: si,
                                register: self.registers[*register].clone(),
                            });
                        }
                        measured.insert(*qubit);
                    }
                    GateStep::CondX { condition, .. } | GateStep::CondZ { condition, .. } => {
                        for &r in condition {
                            if r >= self.registers.len() {
                                return Err(CircuitError::UnknownRegister(r));
                            }
                            if !written.contains(&r) {
                                return Err(CircuitError::RegisterNotWritten {
                                    slice: si,
                                    register: self.registers[r].clone(),
                                });
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        for &(a, b) in &self.final_pairs {
            if a == b {
                return Err(FrameError::RepeatedQubit(a).into());
            }
            if measured.contains(&a) || measured.contains(&b) {
                return Err(CircuitError::FinalPairMeasured(a, b));
            }
        }
        Ok(())
    }

    /// Error slots of one cycle, numbered in execution order.
    pub fn error_slots(&self) -> Vec<SlotInfo> {
        let mut out = Vec::new();
        for (si, slice) in self.slices.iter().enumerate() {
            for op in &slice.ops {
                if let GateStep::ErrorSlot { tag, site } = op {
                    out.push(SlotInfo { id: out.len(), slice: si, step: slice.step, tag: *tag, site: *site });
                }
            }
        }
        out
    }

    /// The gate slot decorating `CNOT(control, target)`, if any.
    pub fn cnot_slot(&self, control: QubitId, target: QubitId) -> Option<SlotInfo> {
        let want = ErrorSite::Two(control, target);
        self.error_slots()
            .into_iter()
            .find(|s| matches!(s.tag, SlotTag::Gate | SlotTag::Init) && s.site == want)
    }

    /// Measurements per cycle.
    pub fn measurement_count(&self) -> usize {
        self.ops().filter(|op| op.is_measurement()).count()
    }

    /// All operations of one cycle, error slots included.
    pub fn ops(&self) -> impl Iterator<Item = &GateStep> {
        self.slices.iter().flat_map(|s| s.ops.iter())
    }

    /// Qubits touched anywhere in the circuit.
    pub fn used_qubits(&self) -> Vec<QubitId> {
        let mut seen: Vec<QubitId> = self.ops().flat_map(|op| op.qubits()).collect();
        seen.sort();
        seen.dedup();
        seen
    }

    pub fn register_index(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QubitId as Q;

    fn tiny() -> Circuit {
        Circuit {
            protocol: Protocol::Demo,
            cycles: 1,
            final_pairs: vec![],
            registers: vec!["sB".into()],
            slices: vec![
                Slice { step: 0, ops: vec![GateStep::Hadamard { qubit: Q::A }] },
                Slice { step: 0, ops: vec![GateStep::Cnot { control: Q::A, target: Q::B }] },
                Slice { step: 1, ops: vec![GateStep::MeasureZ { qubit: Q::B, register: 0 }] },
                Slice { step: 1, ops: vec![GateStep::CondX { qubit: Q::A, condition: vec![0] }] },
            ],
        }
    }

    #[test]
    fn tiny_is_valid() {
        tiny().validate().unwrap();
    }

    #[test]
    fn rejects_qubit_reuse_within_slice() {
        let mut c = tiny();
        c.slices[0].ops.push(GateStep::Cnot { control: Q::C, target: Q::A });
        assert_eq!(c.validate(), Err(CircuitError::QubitReused { slice: 0, qubit: Q::A }));
    }

    #[test]
    fn error_slots_do_not_count_as_reuse() {
        let mut c = tiny();
        c.slices[1].ops.push(GateStep::ErrorSlot { tag: SlotTag::Gate, site: ErrorSite::Two(Q::A, Q::B) });
        c.validate().unwrap();
        assert_eq!(c.error_slots().len(), 1);
        assert_eq!(c.cnot_slot(Q::A, Q::B).unwrap().slice, 1);
    }

    #[test]
    fn rejects_touching_measured_qubit() {
        let mut c = tiny();
        c.slices[3].ops.push(GateStep::Hadamard { qubit: Q::B });
        assert_eq!(c.validate(), Err(CircuitError::MeasuredQubitTouched { slice: 3, qubit: Q::B }));
    }

    #[test]
    fn rejects_unwritten_register() {
        let mut c = tiny();
        c.slices.swap(2, 3);
        assert!(matches!(c.validate(), Err(CircuitError::RegisterNotWritten { .. })));
    }

    #[test]
    fn rejects_same_qubit_cnot() {
        let mut c = tiny();
        c.slices[1].ops[0] = GateStep::Cnot { control: Q::A, target: Q::A };
        assert_eq!(c.validate(), Err(CircuitError::Frame(FrameError::RepeatedQubit(Q::A))));
    }

    #[test]
    fn rejects_bad_cycles() {
        let mut c = tiny();
        c.cycles = 3;
        assert_eq!(c.validate(), Err(CircuitError::InvalidCycles(3)));
    }
}
