//! Exact output distributions by exhaustive enumeration of initial errors.
//!
//! Propagation does not depend on the fidelity, so an [`Enumerator`] runs
//! every error pattern once and keeps, per outcome cell, how many patterns
//! use each channel option how often. Evaluating at a given fidelity is then
//! a short polynomial sum, exact for rational scalars.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_fidelity, AnalyticError, JointDistribution};
use crate::circuit::{build_2es, build_encoding_demo, build_qnc, Circuit, EncodingOp, ErrorSite, Injection, Program, Protocol, Scripted, SlotTag};
use crate::error_models::{pair_menu, ErrorModel, InitialKind, PairMember};
use crate::pauli::{Pauli, PauliFrame, QubitId};
use crate::scalar::Scalar;

use super::closed::step_fidelities;

fn circuit_for(protocol: Protocol) -> Result<Circuit, AnalyticError> {
    match protocol {
        Protocol::Qnc => Ok(build_qnc()),
        Protocol::Es2 => Ok(build_2es(1)?),
        Protocol::Demo => Err(AnalyticError::NoFinalPairs(protocol)),
    }
}

/// Initial pairs of a circuit, read off its `init` slots.
pub fn initial_pairs(circuit: &Circuit) -> Vec<(QubitId, QubitId)> {
    circuit
        .error_slots()
        .into_iter()
        .filter(|s| s.tag == SlotTag::Init)
        .filter_map(|s| match s.site {
            ErrorSite::Two(c, t) => Some((c, t)),
            ErrorSite::One(_) => None,
        })
        .collect()
}

/// Mixed-radix iteration over `radix^len` option assignments.
fn assignments(radix: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = radix.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut digits = vec![0; len];
        for d in digits.iter_mut().rev() {
            *d = k % radix;
            k /= radix;
        }
        digits
    })
}

fn frame_for(pairs: &[(QubitId, QubitId)], member: PairMember, options: &[Pauli], digits: &[usize]) -> PauliFrame {
    pairs.iter().zip(digits).fold(PauliFrame::IDENTITY, |f, (&(c, t), &d)| {
        let q = if member == PairMember::Control { c } else { t };
        f.with(q, options[d])
    })
}

/// Outcome table of one protocol under one per-pair error menu.
#[derive(Debug, Clone)]
pub struct Enumerator {
    protocol: Protocol,
    options: Vec<Pauli>,
    pairs: usize,
    /// `(cell, option counts) → number of patterns`.
    terms: BTreeMap<(usize, Vec<u32>), u64>,
}

impl Enumerator {
    /// `options` are the Paulis one pair may carry on its designated member.
    pub fn new(protocol: Protocol, member: PairMember, options: &[Pauli]) -> Result<Self, AnalyticError> {
        let circuit = circuit_for(protocol)?;
        let program = Program::compile(&circuit)?;
        let pairs = initial_pairs(&circuit);
        let mut terms = BTreeMap::new();
        for digits in assignments(options.len(), pairs.len()) {
            let frame = frame_for(&pairs, member, options, &digits);
            let out = program.run(&mut Scripted::new(0, Injection::initial(frame)));
            let mut counts = vec![0u32; options.len()];
            for &d in &digits {
                counts[d] += 1;
            }
            *terms.entry((out.cell(), counts)).or_insert(0) += 1;
        }
        Ok(Enumerator { protocol, options: options.to_vec(), pairs: pairs.len(), terms })
    }

    /// For a model's initial channel.
    pub fn for_model<T: Scalar>(protocol: Protocol, model: &ErrorModel<T>) -> Result<Self, AnalyticError> {
        let menu = pair_menu(model)?;
        let options: Vec<Pauli> = menu.iter().map(|(p, _)| *p).collect();
        Self::new(protocol, model.init_member, &options)
    }

    pub fn options(&self) -> &[Pauli] {
        &self.options
    }

    pub fn pair_count(&self) -> usize {
        self.pairs
    }

    /// Number of error patterns landing in each outcome cell, grouped by how
    /// many pairs carry each option. For a two-option menu `[I, E]` the entry
    /// `(cell, [7 − w, w])` is the coefficient of `F^(7−w)(1−F)^w`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &[u32], u64)> {
        self.terms.iter().map(|((cell, counts), &n)| (*cell, counts.as_slice(), n))
    }

    /// Outcome cells weighted by per-option probabilities (same order as `options`).
    pub fn evaluate<T: Scalar>(&self, weights: &[T]) -> [T; 16] {
        assert_eq!(weights.len(), self.options.len());
        let mut cells: [T; 16] = std::array::from_fn(|_| T::zero());
        for ((cell, counts), &n) in &self.terms {
            let term = counts
                .iter()
                .zip(weights)
                .fold(T::from_u64(n).expect("pattern count fits"), |acc, (&k, w)| acc * w.powi_u(k));
            cells[*cell] = cells[*cell].clone() + term;
        }
        cells
    }

    pub fn distribution<T: Scalar>(&self, weights: &[T]) -> JointDistribution<T> {
        let cells = self.evaluate(weights);
        match self.protocol {
            // single final pair per cycle: its index sits in the first coordinate
            Protocol::Es2 => {
                let cycle: [T; 4] = std::array::from_fn(|a| cells[4 * a].clone());
                JointDistribution::from_cycle(self.protocol, cycle)
            }
            _ => JointDistribution::from_cells(self.protocol, &cells),
        }
    }
}

/// Exact distribution of the final Bell indices under initial-pair errors
/// only, propagated along the all-`+1` measurement branch.
pub fn exact_distribution<T: Scalar>(
    protocol: Protocol,
    model: &ErrorModel<T>,
) -> Result<JointDistribution<T>, AnalyticError> {
    model.validate()?;
    if model.has_local_errors() {
        return Err(AnalyticError::GateErrorsPresent);
    }
    if protocol == Protocol::Demo {
        return Err(AnalyticError::NoFinalPairs(protocol));
    }
    if model.initial_kind == InitialKind::None {
        return Ok(JointDistribution::ideal(protocol));
    }
    let menu = pair_menu(model)?;
    let weights: Vec<T> = menu.iter().map(|(_, w)| w.clone()).collect();
    Ok(Enumerator::for_model(protocol, model)?.distribution(&weights))
}

/// One of the 128 one-sided Z error patterns of the network-coding circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZPattern {
    /// Bit 6 is pair `AB`, bit 0 is pair `MN`; the string form reads left to right.
    pub bits: u8,
    pub af_error: bool,
    pub be_error: bool,
}

impl ZPattern {
    pub fn bit_string(&self) -> String {
        format!("{:07b}", self.bits)
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }
}

/// Classifies every Z error pattern on the seven initial pairs.
pub fn z_error_patterns() -> Result<Vec<ZPattern>, AnalyticError> {
    let circuit = build_qnc();
    let program = Program::compile(&circuit)?;
    let pairs = initial_pairs(&circuit);
    Ok((0u8..128)
        .map(|bits| {
            let digits: Vec<usize> = (0..7).map(|i| (bits >> (6 - i) & 1) as usize).collect();
            let frame = frame_for(&pairs, PairMember::Control, &[Pauli::I, Pauli::Z], &digits);
            let out = program.run(&mut Scripted::new(0, Injection::initial(frame)));
            ZPattern { bits, af_error: out.m(), be_error: out.n() }
        })
        .collect())
}

/// Probability that an encoding operation's output is error free when each
/// input pair independently carries `error` (on its target) with probability
/// `1 − F`. "Error free" means the propagated frame stabilizes the ideal output.
pub fn step_fidelity_oracle<T: Scalar>(op: EncodingOp, error: Pauli, f: T) -> Result<T, AnalyticError> {
    check_fidelity(&f)?;
    let circuit = build_encoding_demo(op);
    let program = Program::compile(&circuit)?;
    let pairs = op.pairs();
    let q = T::one() - f.clone();
    let mut total = T::zero();
    for digits in assignments(2, pairs.len()) {
        let frame = frame_for(pairs, PairMember::Target, &[Pauli::I, error], &digits);
        let out = program.final_frame(&mut Scripted::new(0, Injection::initial(frame)));
        if program.acts_trivially(out) {
            let w = digits.iter().filter(|&&d| d == 1).count() as u32;
            total = total + f.powi_u(pairs.len() as u32 - w) * q.powi_u(w);
        }
    }
    Ok(total)
}

pub fn step_oracle_all<T: Scalar>(f: T) -> Result<super::StepFidelities<T>, AnalyticError> {
    Ok(super::StepFidelities {
        con_z: step_fidelity_oracle(EncodingOp::Connection, Pauli::Z, f.clone())?,
        add_z: step_fidelity_oracle(EncodingOp::Add, Pauli::Z, f.clone())?,
        fanout_z: step_fidelity_oracle(EncodingOp::Fanout, Pauli::Z, f.clone())?,
        fanout_x: step_fidelity_oracle(EncodingOp::Fanout, Pauli::X, f)?,
    })
}

/// A quoted per-step formula that disagrees with the enumeration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepDiscrepancy {
    pub name: &'static str,
    pub fidelity: f64,
    pub quoted: f64,
    pub oracle: f64,
}

/// Printed-vs-oracle comparison of the per-step formulas at `f`.
pub fn step_discrepancies(f: f64) -> Result<Vec<StepDiscrepancy>, AnalyticError> {
    let quoted = step_fidelities(f)?;
    let oracle = step_oracle_all(f)?;
    let rows = [
        ("con_z", quoted.con_z, oracle.con_z),
        ("add_z", quoted.add_z, oracle.add_z),
        ("fanout_z", quoted.fanout_z, oracle.fanout_z),
        ("fanout_x", quoted.fanout_x, oracle.fanout_x),
    ];
    Ok(rows
        .into_iter()
        .filter(|(_, p, o)| (p - o).abs() > 1e-12)
        .map(|(name, quoted, oracle)| StepDiscrepancy { name, fidelity: f, quoted, oracle })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{es2_single, qnc_z_joint};
    use num_rational::BigRational;

    #[test]
    fn z_patterns_cover_every_string() {
        let pats = z_error_patterns().unwrap();
        assert_eq!(pats.len(), 128);
        assert!(!pats[0].af_error && !pats[0].be_error);
        assert_eq!(pats[0b1000000].bit_string(), "1000000");
    }

    #[test]
    fn z_only_enumeration_matches_polynomials_exactly() {
        for k in [50, 73, 90, 99] {
            let f = BigRational::ratio(k, 100);
            let m = ErrorModel::uniform(InitialKind::ZOnly, BigRational::int(1) - f.clone(), BigRational::int(0));
            let mn = exact_distribution(Protocol::Qnc, &m).unwrap().collapse_mn();
            assert_eq!(mn, qnc_z_joint(f.clone()).unwrap());
            let es = exact_distribution(Protocol::Es2, &m).unwrap();
            let (p0, _) = es2_single(f).unwrap();
            assert_eq!(es.joint_fidelity(), p0.clone() * p0);
        }
    }

    #[test]
    fn gate_errors_are_rejected() {
        let m = ErrorModel::uniform(InitialKind::ZOnly, 0.1, 0.01);
        assert_eq!(exact_distribution(Protocol::Qnc, &m).unwrap_err(), AnalyticError::GateErrorsPresent);
    }

    #[test]
    fn no_initial_errors_is_ideal() {
        let d = exact_distribution(Protocol::Qnc, &ErrorModel::<f64>::null()).unwrap();
        assert_eq!(d.joint_fidelity(), 1.0);
    }

    #[test]
    fn connection_and_add_oracles_agree_with_formulas() {
        for k in 0..=20 {
            let f = BigRational::ratio(k, 20);
            let quoted = step_fidelities(f.clone()).unwrap();
            let oracle = step_oracle_all(f).unwrap();
            assert_eq!(quoted.con_z, oracle.con_z);
            assert_eq!(quoted.add_z, oracle.add_z);
        }
    }

    #[test]
    fn fanout_oracles() {
        // any even number of Z errors on the fanout output is a stabilizer
        let f = BigRational::ratio(9, 10);
        let q = BigRational::ratio(1, 10);
        let z = step_fidelity_oracle(EncodingOp::Fanout, Pauli::Z, f.clone()).unwrap();
        assert_eq!(z, f.powi_u(3) + BigRational::int(3) * f.clone() * q.powi_u(2));
        // no nonempty X pattern is
        let x = step_fidelity_oracle(EncodingOp::Fanout, Pauli::X, f.clone()).unwrap();
        assert_eq!(x, f.powi_u(3));
        let names: Vec<_> = step_discrepancies(0.9).unwrap().into_iter().map(|d| d.name).collect();
        assert_eq!(names, vec!["fanout_z", "fanout_x"]);
    }
}
