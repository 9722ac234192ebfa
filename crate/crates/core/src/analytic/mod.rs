//! Closed-form fidelities, exact output distributions by enumeration,
//! correlation statistics and threshold search.

mod closed;
mod enumerate;
mod threshold;

pub use closed::{correlation_at, correlation_from, es2_single, qnc_z_joint, step_fidelities, CorrelationTable, StepFidelities};
pub use enumerate::{
    exact_distribution, initial_pairs, step_discrepancies, step_fidelity_oracle, step_oracle_all, z_error_patterns,
    Enumerator, StepDiscrepancy, ZPattern,
};
pub use threshold::{find_threshold, JointCurve, THRESHOLD_TOLERANCE};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{CircuitError, Protocol};
use crate::error_models::ModelError;
use crate::pauli::BellIndex;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("fidelity must lie in [0, 1], got {0}")]
    FidelityOutOfRange(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("exact enumeration needs p_gate = p_memory = 0")]
    GateErrorsPresent,
    #[error("correlation undefined: marginal {0} is zero")]
    DegenerateMarginal(char),
    #[error("{protocol} joint fidelity under the {kind} model never crosses 0.5 in (0, 1)")]
    NoThreshold { protocol: Protocol, kind: &'static str },
    #[error("{0} has no final Bell pairs to enumerate")]
    NoFinalPairs(Protocol),
}

pub(crate) fn check_fidelity<T: Scalar>(f: &T) -> Result<(), AnalyticError> {
    if f.is_unit_interval() {
        Ok(())
    } else {
        Err(AnalyticError::FidelityOutOfRange(f.to_f64_lossy()))
    }
}

/// Probabilities of `(m, n)` where `m` (`n`) flags any error on the first
/// (second) final pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MnTable<T> {
    pub p00: T,
    pub p01: T,
    pub p10: T,
    pub p11: T,
}

impl<T: Scalar> MnTable<T> {
    pub fn total(&self) -> T {
        self.p00.clone() + self.p01.clone() + self.p10.clone() + self.p11.clone()
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.p00.clone(), self.p01.clone(), self.p10.clone(), self.p11.clone()]
    }
}

/// Distribution over the Bell indices of the two final pairs.
///
/// For the double-swapping protocol the two "pairs" are the outputs of two
/// independent cycles, so `probs[a][b] = cycle[a]·cycle[b]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution<T> {
    pub protocol: Protocol,
    /// Indexed `[first][second]` by [`BellIndex::index`].
    pub probs: [[T; 4]; 4],
    /// Single-cycle distribution (double swapping only).
    pub per_cycle: Option<[T; 4]>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn from_cells(protocol: Protocol, cells: &[T; 16]) -> Self {
        JointDistribution {
            protocol,
            probs: std::array::from_fn(|a| std::array::from_fn(|b| cells[4 * a + b].clone())),
            per_cycle: None,
        }
    }

    /// Two independent cycles of a single-pair distribution.
    pub fn from_cycle(protocol: Protocol, cycle: [T; 4]) -> Self {
        JointDistribution {
            protocol,
            probs: std::array::from_fn(|a| std::array::from_fn(|b| cycle[a].clone() * cycle[b].clone())),
            per_cycle: Some(cycle),
        }
    }

    /// All mass on the ideal outcome.
    pub fn ideal(protocol: Protocol) -> Self {
        let mut cells: [T; 16] = std::array::from_fn(|_| T::zero());
        cells[0] = T::one();
        let mut d = Self::from_cells(protocol, &cells);
        if protocol == Protocol::Es2 {
            d.per_cycle = Some(std::array::from_fn(|i| if i == 0 { T::one() } else { T::zero() }));
        }
        d
    }

    pub fn get(&self, first: BellIndex, second: BellIndex) -> T {
        self.probs[first.index()][second.index()].clone()
    }

    pub fn total(&self) -> T {
        self.probs.iter().flatten().fold(T::zero(), |acc, p| acc + p.clone())
    }

    /// Probability that both final pairs are ideal.
    pub fn joint_fidelity(&self) -> T {
        self.probs[0][0].clone()
    }

    pub fn collapse_mn(&self) -> MnTable<T> {
        let mut t = [T::zero(), T::zero(), T::zero(), T::zero()];
        for (a, row) in self.probs.iter().enumerate() {
            for (b, p) in row.iter().enumerate() {
                let k = 2 * (a != 0) as usize + (b != 0) as usize;
                t[k] = t[k].clone() + p.clone();
            }
        }
        let [p00, p01, p10, p11] = t;
        MnTable { p00, p01, p10, p11 }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> JointDistribution<U> {
        JointDistribution {
            protocol: self.protocol,
            probs: std::array::from_fn(|a| std::array::from_fn(|b| f(&self.probs[a][b]))),
            per_cycle: self.per_cycle.as_ref().map(|c| std::array::from_fn(|i| f(&c[i]))),
        }
    }
}
