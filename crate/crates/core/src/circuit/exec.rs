//! Pauli-frame trial execution.
//!
//! A circuit is compiled once into a [`Program`]: the stabilizer tableau runs
//! the ideal circuit with every random measurement forced to `+1`, and each
//! measurement remembers whether it was random and which stabilizer maps its
//! `+1` branch onto its `-1` branch. A trial then only moves a 28-bit frame:
//!
//! - a measurement reports `reference ⊕ flip(frame)`; when the ideal outcome
//!   of a random measurement is drawn as `-1`, the byproduct joins the frame;
//! - a correction whose recorded parity differs from the reference parity
//!   multiplies its Pauli onto the frame;
//! - error slots multiply whatever the driver returns onto the frame.
//!
//! Final pairs are classified against the reference, which compilation checks
//! to be `|Ψ⁺⟩` on every final pair.

use arrayvec::ArrayVec;
use rand::Rng;

use super::{Circuit, CircuitError, ErrorSite, GateStep, SlotTag};
use crate::error_models::{sample_cnot_error, sample_local_error, ErrorModel, InitialKind, PairMember};
use crate::pauli::{Basis, BellIndex, Pauli, PauliFrame, QubitId, QUBIT_COUNT};
use crate::stabilizer::Tableau;

/// Most final pairs any supported circuit reports per trial.
pub const MAX_FINALS: usize = 2;

/// A slot as seen by a [`TrialDriver`].
#[derive(Debug, Clone, Copy)]
pub struct SlotRef {
    /// Index among the circuit's error slots (per cycle).
    pub id: usize,
    pub cycle: usize,
    pub tag: SlotTag,
    pub site: ErrorSite,
}

/// Supplies the randomness of a trial: ideal branches and slot errors.
pub trait TrialDriver {
    /// Ideal outcome (`true` = `-1`) of the `index`-th random measurement of the trial.
    fn branch(&mut self, index: usize) -> bool;
    /// Pauli error (as a frame) produced by `slot`.
    fn error(&mut self, slot: &SlotRef) -> PauliFrame;
}

#[derive(Debug, Clone, Copy)]
enum Op {
    H(QubitId),
    Cnot(QubitId, QubitId),
    Measure {
        qubit: QubitId,
        basis: Basis,
        register: u8,
        random: bool,
        reference: bool,
        byproduct: PauliFrame,
    },
    Correct {
        qubit: QubitId,
        pauli: Pauli,
        mask: u32,
        reference_parity: bool,
    },
    Slot {
        id: u32,
        tag: SlotTag,
        site: ErrorSite,
    },
}

/// Result of one trial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrialOutcome {
    finals: ArrayVec<BellIndex, MAX_FINALS>,
    outcome_bits: u64,
    measurements: u8,
}

impl TrialOutcome {
    /// Bell index of every final pair, in circuit order and then cycle order.
    /// For the coding circuit that is `[AF, BE]`; for two swapping cycles it is
    /// `[CN (cycle 1), CN (cycle 2)]`.
    pub fn finals(&self) -> &[BellIndex] {
        &self.finals
    }

    /// Any error on the first final pair.
    pub fn m(&self) -> bool {
        self.finals.first().is_some_and(|b| !b.is_ideal())
    }

    /// Any error on the second final pair (false if there is none).
    pub fn n(&self) -> bool {
        self.finals.get(1).is_some_and(|b| !b.is_ideal())
    }

    /// Both (all) final pairs ideal.
    pub fn joint_success(&self) -> bool {
        self.finals.iter().all(|b| b.is_ideal())
    }

    /// Recorded measurement outcomes in execution order (`true` = `-1`).
    pub fn outcome_bits(&self) -> Vec<bool> {
        (0..self.measurements).map(|i| self.outcome_bits >> i & 1 == 1).collect()
    }

    /// Flat index `4·first + second` into a 16-cell outcome table.
    pub fn cell(&self) -> usize {
        let a = self.finals.first().map_or(0, |b| b.index());
        let b = self.finals.get(1).map_or(0, |b| b.index());
        4 * a + b
    }
}

/// A compiled circuit, reusable across any number of trials and threads.
#[derive(Debug, Clone)]
pub struct Program {
    ops: Vec<Op>,
    cycles: usize,
    final_pairs: Vec<(QubitId, QubitId)>,
    random_per_cycle: usize,
    measurements_per_cycle: usize,
    output_stabilizers: Vec<PauliFrame>,
}

impl Program {
    pub fn compile(circuit: &Circuit) -> Result<Self, CircuitError> {
        circuit.validate()?;
        if circuit.final_pairs.len() * circuit.cycles > MAX_FINALS {
            return Err(CircuitError::InvalidCycles(circuit.cycles));
        }
        let mut tableau = Tableau::new(QUBIT_COUNT);
        let mut reference_regs = 0u32;
        let mut ops = Vec::new();
        let mut random_per_cycle = 0;
        let mut slot_id = 0u32;
        for op in circuit.ops() {
            match *op {
                GateStep::Hadamard { qubit } => {
                    tableau.h(qubit);
                    ops.push(Op::H(qubit));
                }
                GateStep::Cnot { control, target } => {
                    tableau.cnot(control, target);
                    ops.push(Op::Cnot(control, target));
                }
                GateStep::MeasureZ { qubit, register } | GateStep::MeasureX { qubit, register } => {
                    let basis = if matches!(op, GateStep::MeasureZ { .. }) { Basis::Z } else { Basis::X };
                    let rec = tableau.measure(qubit, basis, false);
                    if rec.outcome {
                        reference_regs |= 1 << register;
                    }
                    random_per_cycle += rec.random as usize;
                    ops.push(Op::Measure {
                        qubit,
                        basis,
                        register: register as u8,
                        random: rec.random,
                        reference: rec.outcome,
                        byproduct: rec.byproduct,
                    });
                }
                GateStep::CondX { .. } | GateStep::CondZ { .. } => {
                    let (qubit, pauli, condition) = op.correction().expect("correction step");
                    let mask = condition.iter().fold(0u32, |m, &r| m ^ (1 << r));
                    let reference_parity = (reference_regs & mask).count_ones() % 2 == 1;
                    if reference_parity {
                        tableau.pauli(qubit, pauli);
                    }
                    ops.push(Op::Correct { qubit, pauli, mask, reference_parity });
                }
                GateStep::ErrorSlot { tag, site } => {
                    ops.push(Op::Slot { id: slot_id, tag, site });
                    slot_id += 1;
                }
            }
        }
        for &(a, b) in &circuit.final_pairs {
            let xx = PauliFrame::single(a, Pauli::X).with(b, Pauli::X);
            let zz = PauliFrame::single(a, Pauli::Z).with(b, Pauli::Z);
            if tableau.expectation(xx) != Some(false) || tableau.expectation(zz) != Some(false) {
                return Err(CircuitError::FinalPairNotBell(a, b));
            }
        }
        Ok(Program {
            ops,
            cycles: circuit.cycles,
            final_pairs: circuit.final_pairs.clone(),
            random_per_cycle,
            measurements_per_cycle: circuit.measurement_count(),
            output_stabilizers: tableau.stabilizers().collect(),
        })
    }

    /// Random measurements per trial (all cycles).
    pub fn random_measurements(&self) -> usize {
        self.random_per_cycle * self.cycles
    }

    pub fn cycles(&self) -> usize {
        self.cycles
    }

    pub fn final_pairs(&self) -> &[(QubitId, QubitId)] {
        &self.final_pairs
    }

    /// Runs one cycle and returns its final frame and recorded outcomes.
    fn run_cycle<D: TrialDriver>(&self, driver: &mut D, cycle: usize, branch_base: &mut usize) -> (PauliFrame, u32) {
        let mut frame = PauliFrame::IDENTITY;
        let mut regs = 0u32;
        for op in &self.ops {
            match *op {
                Op::H(q) => frame = frame.conjugate_h(q),
                Op::Cnot(c, t) => frame = frame.cnot_unchecked(c, t),
                Op::Measure { qubit, basis, register, random, reference, byproduct } => {
                    let flip = frame.measurement_flips(qubit, basis);
                    let mut outcome = reference;
                    if random {
                        if driver.branch(*branch_base) {
                            frame ^= byproduct;
                            outcome = !outcome;
                        }
                        *branch_base += 1;
                    }
                    if outcome ^ flip {
                        regs |= 1 << register;
                    }
                    frame.clear(qubit);
                }
                Op::Correct { qubit, pauli, mask, reference_parity } => {
                    let parity = (regs & mask).count_ones() % 2 == 1;
                    if parity != reference_parity {
                        frame.apply(qubit, pauli);
                    }
                }
                Op::Slot { id, tag, site } => {
                    frame ^= driver.error(&SlotRef { id: id as usize, cycle, tag, site });
                }
            }
        }
        (frame, regs)
    }

    /// Executes one trial.
    pub fn run<D: TrialDriver>(&self, driver: &mut D) -> TrialOutcome {
        let mut finals = ArrayVec::new();
        let mut outcome_bits = 0u64;
        let mut branch_base = 0;
        let per = self.measurements_per_cycle;
        for cycle in 0..self.cycles {
            let (frame, regs) = self.run_cycle(driver, cycle, &mut branch_base);
            outcome_bits |= (regs as u64) << (cycle * per);
            for &pair in &self.final_pairs {
                finals.push(frame.classify_pair(pair));
            }
        }
        TrialOutcome { finals, outcome_bits, measurements: (per * self.cycles) as u8 }
    }

    /// Frame left after a single cycle, for circuits whose output is not a
    /// set of Bell pairs.
    pub fn final_frame<D: TrialDriver>(&self, driver: &mut D) -> PauliFrame {
        self.run_cycle(driver, 0, &mut 0).0
    }

    /// Whether `frame` leaves the ideal output state unchanged.
    pub fn acts_trivially(&self, frame: PauliFrame) -> bool {
        self.output_stabilizers.iter().all(|s| !frame.anticommutes_with(*s))
    }
}

/// Samples branches and slot errors from an [`ErrorModel`].
#[derive(Debug)]
pub struct Sampled<'m, R> {
    pub model: &'m ErrorModel<f64>,
    pub rng: R,
}

impl<'m, R: Rng> Sampled<'m, R> {
    pub fn new(model: &'m ErrorModel<f64>, rng: R) -> Self {
        Sampled { model, rng }
    }
}

fn frame_of(site: ErrorSite, first: Pauli, second: Pauli) -> PauliFrame {
    match site {
        ErrorSite::One(q) => PauliFrame::single(q, first),
        ErrorSite::Two(a, b) => PauliFrame::single(a, first).with(b, second),
    }
}

impl<R: Rng> TrialDriver for Sampled<'_, R> {
    fn branch(&mut self, _index: usize) -> bool {
        self.rng.random()
    }

    fn error(&mut self, slot: &SlotRef) -> PauliFrame {
        let m = self.model;
        match slot.tag {
            SlotTag::Init => {
                let p = m.p_init;
                if p <= 0.0 {
                    return PauliFrame::IDENTITY;
                }
                let ErrorSite::Two(control, target) = slot.site else {
                    let ErrorSite::One(q) = slot.site else { unreachable!() };
                    return PauliFrame::single(q, sample_local_error(p, &mut self.rng));
                };
                let member = match m.init_member {
                    PairMember::Control => control,
                    PairMember::Target => target,
                };
                match m.initial_kind {
                    InitialKind::None => PauliFrame::IDENTITY,
                    InitialKind::ZOnly | InitialKind::XOnly => {
                        if self.rng.random::<f64>() < p {
                            let pauli = if m.initial_kind == InitialKind::ZOnly { Pauli::Z } else { Pauli::X };
                            PauliFrame::single(member, pauli)
                        } else {
                            PauliFrame::IDENTITY
                        }
                    }
                    InitialKind::GeneralPauli => {
                        let (a, b) = sample_cnot_error(p, &mut self.rng);
                        frame_of(slot.site, a, b)
                    }
                }
            }
            SlotTag::Gate | SlotTag::Meas | SlotTag::Mem => {
                let p = if slot.tag == SlotTag::Mem { m.memory_p() } else { m.p_gate };
                if p <= 0.0 {
                    return PauliFrame::IDENTITY;
                }
                match slot.site {
                    ErrorSite::One(q) => PauliFrame::single(q, sample_local_error(p, &mut self.rng)),
                    ErrorSite::Two(..) => {
                        let (a, b) = sample_cnot_error(p, &mut self.rng);
                        frame_of(slot.site, a, b)
                    }
                }
            }
        }
    }
}

/// Deterministic errors: an initial frame spread over the `init` slots plus
/// explicit per-slot frames.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Injection {
    /// Applied at each `init` slot, restricted to that slot's qubits, so it
    /// acts as an error on the freshly created pairs.
    pub initial: PauliFrame,
    /// `(slot id, frame)` applied when that slot fires.
    pub at_slots: Vec<(usize, PauliFrame)>,
}

impl Injection {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn initial(frame: PauliFrame) -> Self {
        Injection { initial: frame, at_slots: Vec::new() }
    }

    pub fn at_slot(slot: usize, frame: PauliFrame) -> Self {
        Injection { initial: PauliFrame::IDENTITY, at_slots: vec![(slot, frame)] }
    }

    fn frame_for(&self, slot: &SlotRef) -> PauliFrame {
        let mut f = PauliFrame::IDENTITY;
        if slot.tag == SlotTag::Init {
            let qubits: Vec<QubitId> = slot.site.qubits().collect();
            f ^= self.initial.restricted_to(&qubits);
        }
        for &(id, extra) in &self.at_slots {
            if id == slot.id {
                f ^= extra;
            }
        }
        f
    }
}

/// Fixed branch bits plus an [`Injection`]; bit `i` of `branches` is the ideal
/// outcome of the `i`-th random measurement.
#[derive(Debug, Clone, Default)]
pub struct Scripted {
    pub branches: u64,
    pub injection: Injection,
}

impl Scripted {
    pub fn new(branches: u64, injection: Injection) -> Self {
        Scripted { branches, injection }
    }

    /// All ideal outcomes `+1`, no errors.
    pub fn canonical() -> Self {
        Self::default()
    }
}

impl TrialDriver for Scripted {
    fn branch(&mut self, index: usize) -> bool {
        index < 64 && self.branches >> index & 1 == 1
    }

    fn error(&mut self, slot: &SlotRef) -> PauliFrame {
        self.injection.frame_for(slot)
    }
}

/// Compiles and runs a single sampled trial.
pub fn execute<R: Rng>(circuit: &Circuit, model: &ErrorModel<f64>, rng: R) -> Result<TrialOutcome, CircuitError> {
    let program = Program::compile(circuit)?;
    Ok(program.run(&mut Sampled::new(model, rng)))
}

/// Distinct final outcomes seen over every measurement branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchOutcomes {
    pub branches: u64,
    pub distinct: Vec<Vec<BellIndex>>,
}

impl BranchOutcomes {
    pub fn independent(&self) -> bool {
        self.distinct.len() == 1
    }
}

impl Program {
    /// Runs every measurement branch with the same injection.
    pub fn branch_outcomes(&self, injection: &Injection) -> BranchOutcomes {
        let k = self.random_measurements();
        assert!(k < 32, "too many random measurements to enumerate");
        let mut distinct: Vec<Vec<BellIndex>> = Vec::new();
        for branches in 0..(1u64 << k) {
            let out = self.run(&mut Scripted::new(branches, injection.clone()));
            let finals = out.finals().to_vec();
            if !distinct.contains(&finals) {
                distinct.push(finals);
            }
        }
        BranchOutcomes { branches: 1 << k, distinct }
    }
}

/// True iff every measurement branch yields the same final Bell indices for
/// the given injected initial frame.
pub fn validate_branch_independence(circuit: &Circuit, injected: PauliFrame) -> Result<bool, CircuitError> {
    let program = Program::compile(circuit)?;
    Ok(program.branch_outcomes(&Injection::initial(injected)).independent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_2es, build_qnc};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use QubitId as Q;

    fn run_injected(c: &Circuit, inj: Injection) -> Vec<BellIndex> {
        Program::compile(c).unwrap().run(&mut Scripted::new(0, inj)).finals().to_vec()
    }

    #[test]
    fn every_qnc_measurement_is_random() {
        let p = Program::compile(&build_qnc()).unwrap();
        assert_eq!(p.random_measurements(), 10);
    }

    #[test]
    fn null_model_gives_ideal_pairs() {
        let model = ErrorModel::null();
        for seed in 0..20 {
            let out = execute(&build_qnc(), &model, ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(!out.m() && !out.n());
            assert_eq!(out.finals(), &[BellIndex::PsiPlus, BellIndex::PsiPlus]);
            assert_eq!(out.outcome_bits().len(), 10);
        }
    }

    #[test]
    fn z_on_c_lands_on_a() {
        let out = run_injected(&build_qnc(), Injection::initial(PauliFrame::single(Q::C, Pauli::Z)));
        assert_eq!(out, vec![BellIndex::PsiMinus, BellIndex::PsiPlus]);
    }

    #[test]
    fn x_on_d_lands_on_f_and_b() {
        let out = run_injected(&build_qnc(), Injection::initial(PauliFrame::single(Q::D, Pauli::X)));
        assert_eq!(out, vec![BellIndex::PhiPlus, BellIndex::PhiPlus]);
    }

    #[test]
    fn branch_independence_for_identity_and_x_on_d() {
        let c = build_qnc();
        assert!(validate_branch_independence(&c, PauliFrame::IDENTITY).unwrap());
        assert!(validate_branch_independence(&c, PauliFrame::single(Q::D, Pauli::X)).unwrap());
    }

    #[test]
    fn measured_outcomes_follow_the_branch() {
        let p = Program::compile(&build_2es(1).unwrap()).unwrap();
        assert_eq!(p.run(&mut Scripted::canonical()).outcome_bits(), vec![false; 4]);
        // later readouts also see byproducts of earlier branches, so only the
        // first one is guaranteed to equal its branch bit
        let all_minus = p.run(&mut Scripted::new(0b1111, Injection::none()));
        assert!(all_minus.outcome_bits()[0]);
        assert!(all_minus.joint_success());
        let distinct: std::collections::HashSet<Vec<bool>> =
            (0..16).map(|b| p.run(&mut Scripted::new(b, Injection::none())).outcome_bits()).collect();
        assert_eq!(distinct.len(), 16);
        // a Z error on the measured D flips its X readout only
        let inj = Injection::initial(PauliFrame::single(Q::C, Pauli::Z));
        let flipped = p.run(&mut Scripted::new(0, inj));
        assert_eq!(flipped.finals(), &[BellIndex::PsiMinus]);
    }

    #[test]
    fn two_cycles_report_two_pairs() {
        let p = Program::compile(&build_2es(2).unwrap()).unwrap();
        assert_eq!(p.random_measurements(), 8);
        let out = p.run(&mut Scripted::canonical());
        assert_eq!(out.finals().len(), 2);
        assert_eq!(out.outcome_bits().len(), 8);
    }

    #[test]
    fn broken_feedforward_is_rejected_or_detected() {
        // dropping the last Z correction leaves AF in the wrong Bell state on
        // half of the branches; the reference run still forces +1 so the
        // compile succeeds, but branch independence fails
        let mut c = build_qnc();
        let last = c.slices.len() - 1;
        c.slices[last].ops.retain(|op| !matches!(op, GateStep::CondZ { qubit, .. } if *qubit == Q::A));
        let p = Program::compile(&c).unwrap();
        assert!(!p.branch_outcomes(&Injection::none()).independent());
    }

    #[test]
    fn wrong_final_pair_is_rejected() {
        let mut c = build_qnc();
        c.final_pairs = vec![(Q::A, Q::B)];
        assert_eq!(Program::compile(&c).unwrap_err(), CircuitError::FinalPairNotBell(Q::A, Q::B));
    }

    #[test]
    fn execute_is_deterministic_for_a_seed() {
        let model = ErrorModel::uniform(InitialKind::GeneralPauli, 0.1, 0.02);
        let a = execute(&build_qnc(), &model, ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = execute(&build_qnc(), &model, ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }
}
