//! Builders for the network-coding circuit, the double-swapping circuit and
//! the stand-alone encoding operations.
//!
//! Error-slot placement rules, shared by every builder:
//! - the pair-creating CNOT of step 0 carries an `init` slot, nothing else in
//!   step 0 is decorated;
//! - every later CNOT and every correction carries a `gate` slot right after it;
//! - every measurement is preceded by a `meas` slot on the measured qubit;
//! - idle qubits get `mem` slots according to an [`IdleSchedule`]; step 0 is
//!   never decorated with them.

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, ErrorSite, GateStep, Protocol, Slice, SlotTag};
use crate::pauli::QubitId;
use QubitId as Q;

/// When idle qubits pick up memory errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum IdleSchedule {
    /// One `mem` slot per live qubit left alone for a whole protocol step,
    /// at the end of that step.
    #[default]
    #[serde(rename = "step-v1")]
    PerStep,
    /// One `mem` slot per live qubit left alone in a time slice.
    #[serde(rename = "slice-v1")]
    PerSlice,
}

impl IdleSchedule {
    /// Identifier echoed in output metadata.
    pub fn id(self) -> &'static str {
        match self {
            IdleSchedule::PerStep => "step-v1",
            IdleSchedule::PerSlice => "slice-v1",
        }
    }
}

impl std::str::FromStr for IdleSchedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "step-v1" | "step" => Ok(IdleSchedule::PerStep),
            "slice-v1" | "slice" => Ok(IdleSchedule::PerSlice),
            other => Err(format!("unknown idle schedule {other:?} (expected step-v1 or slice-v1)")),
        }
    }
}

/// Identifier of the default idle schedule.
pub const IDLE_SCHEDULE: &str = "step-v1";

#[derive(Debug, Clone, Copy)]
enum Local {
    H(QubitId),
    PairCnot(QubitId, QubitId),
    Cnot(QubitId, QubitId),
    MeasZ(QubitId),
    MeasX(QubitId),
    CondX(QubitId, &'static [QubitId]),
    CondZ(QubitId, &'static [QubitId]),
}

struct Builder {
    slices: Vec<Slice>,
    registers: Vec<String>,
    alive: Vec<QubitId>,
    step: u8,
    schedule: IdleSchedule,
    // per-step bookkeeping for IdleSchedule::PerStep
    step_alive: Vec<QubitId>,
    step_touched: Vec<QubitId>,
}

fn register_name(q: QubitId) -> String {
    format!("s{q}")
}

impl Builder {
    fn new(pairs: &[(QubitId, QubitId)], schedule: IdleSchedule) -> Self {
        let mut alive: Vec<QubitId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        alive.sort();
        Builder {
            slices: Vec::new(),
            registers: Vec::new(),
            step_alive: alive.clone(),
            alive,
            step: 0,
            schedule,
            step_touched: Vec::new(),
        }
    }

    /// Closes the current step's idle bookkeeping.
    fn flush_step(&mut self) {
        if self.schedule == IdleSchedule::PerStep && self.step > 0 {
            if let Some(last) = self.slices.last_mut() {
                for &q in &self.step_alive {
                    if !self.step_touched.contains(&q) {
                        last.ops.push(GateStep::ErrorSlot { tag: SlotTag::Mem, site: ErrorSite::One(q) });
                    }
                }
            }
        }
        self.step_alive = self.alive.clone();
        self.step_touched.clear();
    }

    fn step(&mut self, step: u8) -> &mut Self {
        if step != self.step {
            self.flush_step();
        }
        self.step = step;
        self
    }

    fn register(&self, q: QubitId) -> usize {
        let name = register_name(q);
        self.registers.iter().position(|r| *r == name).expect("register read before its measurement")
    }

    fn slice(&mut self, locals: &[Local]) -> &mut Self {
        let mut ops = Vec::new();
        let mut touched = Vec::new();
        let mut measured = Vec::new();
        for &local in locals {
            match local {
                Local::H(q) => {
                    ops.push(GateStep::Hadamard { qubit: q });
                    if self.step > 0 {
                        ops.push(GateStep::ErrorSlot { tag: SlotTag::Gate, site: ErrorSite::One(q) });
                    }
                    touched.push(q);
                }
                Local::PairCnot(c, t) => {
                    ops.push(GateStep::Cnot { control: c, target: t });
                    ops.push(GateStep::ErrorSlot { tag: SlotTag::Init, site: ErrorSite::Two(c, t) });
                    touched.extend([c, t]);
                }
                Local::Cnot(c, t) => {
                    ops.push(GateStep::Cnot { control: c, target: t });
                    ops.push(GateStep::ErrorSlot { tag: SlotTag::Gate, site: ErrorSite::Two(c, t) });
                    touched.extend([c, t]);
                }
                Local::MeasZ(q) | Local::MeasX(q) => {
                    self.registers.push(register_name(q));
                    let register = self.registers.len() - 1;
                    ops.push(GateStep::ErrorSlot { tag: SlotTag::Meas, site: ErrorSite::One(q) });
                    ops.push(match local {
                        Local::MeasZ(_) => GateStep::MeasureZ { qubit: q, register },
                        _ => GateStep::MeasureX { qubit: q, register },
                    });
                    touched.push(q);
                    measured.push(q);
                }
                Local::CondX(q, regs) | Local::CondZ(q, regs) => {
                    let condition = regs.iter().map(|&r| self.register(r)).collect();
                    ops.push(match local {
                        Local::CondX(..) => GateStep::CondX { qubit: q, condition },
                        _ => GateStep::CondZ { qubit: q, condition },
                    });
                    ops.push(GateStep::ErrorSlot { tag: SlotTag::Gate, site: ErrorSite::One(q) });
                    touched.push(q);
                }
            }
        }
        self.step_touched.extend(&touched);
        if self.step > 0 && self.schedule == IdleSchedule::PerSlice {
            for &q in &self.alive {
                if !touched.contains(&q) {
                    ops.push(GateStep::ErrorSlot { tag: SlotTag::Mem, site: ErrorSite::One(q) });
                }
            }
        }
        self.alive.retain(|q| !measured.contains(q));
        self.slices.push(Slice { step: self.step, ops });
        self
    }

    fn create_pairs(&mut self, pairs: &[(QubitId, QubitId)]) -> &mut Self {
        self.step(0);
        let hs: Vec<Local> = pairs.iter().map(|&(a, _)| Local::H(a)).collect();
        let cnots: Vec<Local> = pairs.iter().map(|&(a, b)| Local::PairCnot(a, b)).collect();
        self.slice(&hs).slice(&cnots)
    }

    fn finish(&mut self, protocol: Protocol, cycles: usize, final_pairs: Vec<(QubitId, QubitId)>) -> Circuit {
        self.flush_step();
        Circuit {
            protocol,
            cycles,
            final_pairs,
            registers: std::mem::take(&mut self.registers),
            slices: std::mem::take(&mut self.slices),
        }
    }
}

/// The full network-coding circuit on the seven butterfly pairs, ending in
/// Bell pairs `AF` and `BE`.
///
/// Steps: 0 pair creation; 1 `Con^A_{C→D}`, `Con^E_{G→H}`; 2 `Add^{D,H}_{I→J}`;
/// 3 `Fanout^J_{K→L,M→N}`; 4 `CNOT(L,B)`, `CNOT(N,F)`; 5 `Rem_{L→J}`,
/// `Rem_{N→J}`; 6 `RemAdd_{J→D,H}`; 7 `Rem_{D→A}`, `Rem_{H→E}`.
pub fn build_qnc() -> Circuit {
    build_qnc_with(IdleSchedule::default())
}

pub fn build_qnc_with(schedule: IdleSchedule) -> Circuit {
    use Local::*;
    let pairs = crate::pauli::INITIAL_PAIRS;
    let mut b = Builder::new(&pairs, schedule);
    b.create_pairs(&pairs);

    b.step(1)
        .slice(&[Cnot(Q::A, Q::C), Cnot(Q::E, Q::G)])
        .slice(&[MeasZ(Q::C), MeasZ(Q::G)])
        .slice(&[CondX(Q::D, &[Q::C]), CondX(Q::H, &[Q::G])]);

    b.step(2)
        .slice(&[Cnot(Q::D, Q::I)])
        .slice(&[Cnot(Q::H, Q::I)])
        .slice(&[MeasZ(Q::I)])
        .slice(&[CondX(Q::J, &[Q::I])]);

    b.step(3)
        .slice(&[Cnot(Q::J, Q::K)])
        .slice(&[Cnot(Q::J, Q::M)])
        .slice(&[MeasZ(Q::K), MeasZ(Q::M)])
        .slice(&[CondX(Q::L, &[Q::K]), CondX(Q::N, &[Q::M])]);

    b.step(4).slice(&[Cnot(Q::L, Q::B), Cnot(Q::N, Q::F)]);

    b.step(5).slice(&[MeasX(Q::L), MeasX(Q::N)]).slice(&[CondZ(Q::J, &[Q::L, Q::N])]);

    b.step(6).slice(&[MeasX(Q::J)]).slice(&[CondZ(Q::D, &[Q::J]), CondZ(Q::H, &[Q::J])]);

    b.step(7).slice(&[MeasX(Q::D), MeasX(Q::H)]).slice(&[CondZ(Q::A, &[Q::D]), CondZ(Q::E, &[Q::H])]);

    b.finish(Protocol::Qnc, 1, vec![(Q::A, Q::F), (Q::B, Q::E)])
}

/// Two chained entanglement swaps over `CD`, `IJ`, `MN`, ending in `CN`.
///
/// `cycles = 2` repeats the whole procedure on fresh pairs, which is what the
/// butterfly bottleneck forces when both crossing pairs are wanted.
pub fn build_2es(cycles: usize) -> Result<Circuit, CircuitError> {
    build_2es_with(cycles, IdleSchedule::default())
}

pub fn build_2es_with(cycles: usize, schedule: IdleSchedule) -> Result<Circuit, CircuitError> {
    use Local::*;
    if !(1..=2).contains(&cycles) {
        return Err(CircuitError::InvalidCycles(cycles));
    }
    let pairs = [(Q::C, Q::D), (Q::I, Q::J), (Q::M, Q::N)];
    let mut b = Builder::new(&pairs, schedule);
    b.create_pairs(&pairs);

    // ES^{(C,D)}_{(I,J)} = Rem_{D→C} Con^D_{I→J}
    b.step(1)
        .slice(&[Cnot(Q::D, Q::I)])
        .slice(&[MeasZ(Q::I), MeasX(Q::D)])
        .slice(&[CondX(Q::J, &[Q::I]), CondZ(Q::C, &[Q::D])]);

    // ES^{(C,J)}_{(M,N)} = Rem_{J→C} Con^J_{M→N}
    b.step(2)
        .slice(&[Cnot(Q::J, Q::M)])
        .slice(&[MeasZ(Q::M), MeasX(Q::J)])
        .slice(&[CondX(Q::N, &[Q::M]), CondZ(Q::C, &[Q::J])]);

    Ok(b.finish(Protocol::Es2, cycles, vec![(Q::C, Q::N)]))
}

/// One encoding operation in isolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingOp {
    /// `Con^B_{C→D}` on pairs `AB`, `CD`.
    Connection,
    /// `Add^{F,H}_{I→J}` on pairs `EF`, `GH`, `IJ`.
    Add,
    /// `Fanout^J_{K→L,M→N}` on pairs `IJ`, `KL`, `MN`.
    Fanout,
}

impl EncodingOp {
    pub fn pairs(self) -> &'static [(QubitId, QubitId)] {
        match self {
            EncodingOp::Connection => &[(Q::A, Q::B), (Q::C, Q::D)],
            EncodingOp::Add => &[(Q::E, Q::F), (Q::G, Q::H), (Q::I, Q::J)],
            EncodingOp::Fanout => &[(Q::I, Q::J), (Q::K, Q::L), (Q::M, Q::N)],
        }
    }
}

/// Circuit for a single encoding operation. It has no final Bell pairs; its
/// output is the multi-qubit state the operation produces.
pub fn build_encoding_demo(op: EncodingOp) -> Circuit {
    use Local::*;
    let pairs = op.pairs();
    let mut b = Builder::new(pairs, IdleSchedule::default());
    b.create_pairs(pairs);
    b.step(1);
    match op {
        EncodingOp::Connection => {
            b.slice(&[Cnot(Q::B, Q::C)]).slice(&[MeasZ(Q::C)]).slice(&[CondX(Q::D, &[Q::C])]);
        }
        EncodingOp::Add => {
            b.slice(&[Cnot(Q::F, Q::I)])
                .slice(&[Cnot(Q::H, Q::I)])
                .slice(&[MeasZ(Q::I)])
                .slice(&[CondX(Q::J, &[Q::I])]);
        }
        EncodingOp::Fanout => {
            b.slice(&[Cnot(Q::J, Q::K)])
                .slice(&[Cnot(Q::J, Q::M)])
                .slice(&[MeasZ(Q::K), MeasZ(Q::M)])
                .slice(&[CondX(Q::L, &[Q::K]), CondX(Q::N, &[Q::M])]);
        }
    }
    b.finish(Protocol::Demo, 1, vec![])
}
