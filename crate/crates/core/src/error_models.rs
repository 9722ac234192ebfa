//! Pauli error channels: initial Bell-pair errors, depolarizing gate and
//! idle errors, their samplers, and exhaustive enumerators.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::{BellIndex, Pauli, PauliFrame, QubitId, INITIAL_PAIRS};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{field} must lie in [0, 1], got {value}")]
    OutOfRange { field: &'static str, value: f64 },
    #[error("initial_kind is none: there is nothing to enumerate")]
    NothingToEnumerate,
    #[error("fidelity {fidelity} is not reachable with the {convention} convention")]
    UnreachableFidelity { fidelity: f64, convention: &'static str },
}

fn check<T: Scalar>(field: &'static str, value: &T) -> Result<(), ModelError> {
    if value.is_unit_interval() {
        Ok(())
    } else {
        Err(ModelError::OutOfRange { field, value: value.to_f64_lossy() })
    }
}

/// Channel acting on every freshly created Bell pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    #[default]
    None,
    ZOnly,
    XOnly,
    /// Two-qubit depolarizing channel on the pair-creating CNOT.
    GeneralPauli,
}

impl InitialKind {
    pub fn name(self) -> &'static str {
        match self {
            InitialKind::None => "none",
            InitialKind::ZOnly => "z",
            InitialKind::XOnly => "x",
            InitialKind::GeneralPauli => "pauli",
        }
    }
}

impl std::str::FromStr for InitialKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(InitialKind::None),
            "z" | "z_only" | "zonly" => Ok(InitialKind::ZOnly),
            "x" | "x_only" | "xonly" => Ok(InitialKind::XOnly),
            "pauli" | "general" | "general_pauli" => Ok(InitialKind::GeneralPauli),
            other => Err(format!("unknown model {other:?} (expected z, x or pauli)")),
        }
    }
}

/// Which member of each initial pair carries a one-sided (Z-only / X-only) error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PairMember {
    Control,
    #[default]
    Target,
}

/// How an input fidelity `F` is turned into the general-Pauli channel parameter.
///
/// With the two-qubit depolarizing channel of strength `p` on the
/// pair-creating CNOT, the pair ends in the ideal Bell state with probability
/// `1 − 4p/5` (a `p/15` share of the errors act trivially on the pair).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FidelityConvention {
    /// `F` is the resulting pair fidelity: `p = 5(1 − F)/4`.
    #[default]
    PairFidelity,
    /// `F = 1 − p`, the channel's own identity weight.
    ChannelParameter,
}

impl FidelityConvention {
    pub fn name(self) -> &'static str {
        match self {
            FidelityConvention::PairFidelity => "pair",
            FidelityConvention::ChannelParameter => "channel",
        }
    }

    /// Channel parameter for input fidelity `f` under `kind`.
    pub fn channel_p<T: Scalar>(self, kind: InitialKind, f: T) -> Result<T, ModelError> {
        check("fidelity", &f)?;
        let q = T::one() - f.clone();
        let p = match (kind, self) {
            (InitialKind::GeneralPauli, FidelityConvention::PairFidelity) => q * T::ratio(5, 4),
            _ => q,
        };
        if p > T::one() {
            return Err(ModelError::UnreachableFidelity { fidelity: f.to_f64_lossy(), convention: self.name() });
        }
        Ok(p)
    }

    /// Fidelity of one initial pair produced by channel parameter `p`.
    pub fn pair_fidelity<T: Scalar>(kind: InitialKind, p: T) -> T {
        match kind {
            InitialKind::GeneralPauli => T::one() - p * T::ratio(4, 5),
            InitialKind::None => T::one(),
            _ => T::one() - p,
        }
    }
}

impl std::str::FromStr for FidelityConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pair" => Ok(FidelityConvention::PairFidelity),
            "channel" => Ok(FidelityConvention::ChannelParameter),
            other => Err(format!("unknown convention {other:?} (expected pair or channel)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel<T = f64> {
    pub initial_kind: InitialKind,
    /// One-sided error probability, or the depolarizing strength for
    /// [`InitialKind::GeneralPauli`].
    pub p_init: T,
    /// Depolarizing strength of CNOTs, single-qubit gates and measurements.
    pub p_gate: T,
    /// Idle error per slice; `None` means "same as `p_gate`".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_memory: Option<T>,
    #[serde(default)]
    pub init_member: PairMember,
}

impl<T: Scalar> ErrorModel<T> {
    pub fn null() -> Self {
        ErrorModel {
            initial_kind: InitialKind::None,
            p_init: T::zero(),
            p_gate: T::zero(),
            p_memory: None,
            init_member: PairMember::Target,
        }
    }

    pub fn uniform(initial_kind: InitialKind, p_init: T, p_gate: T) -> Self {
        ErrorModel { initial_kind, p_init, p_gate, ..Self::null() }
    }

    /// Initial-pair errors only, at input fidelity `f`.
    pub fn initial_only(kind: InitialKind, f: T, convention: FidelityConvention) -> Result<Self, ModelError> {
        let p = convention.channel_p(kind, f)?;
        Ok(Self::uniform(kind, p, T::zero()))
    }

    /// Initial fidelity `f` plus gate fidelity `gate_f` (`p_gate = 1 − gate_f`).
    pub fn with_gates(kind: InitialKind, f: T, gate_f: T, convention: FidelityConvention) -> Result<Self, ModelError> {
        check("gate fidelity", &gate_f)?;
        let mut m = Self::initial_only(kind, f, convention)?;
        m.p_gate = T::one() - gate_f;
        Ok(m)
    }

    pub fn memory_p(&self) -> T {
        self.p_memory.clone().unwrap_or_else(|| self.p_gate.clone())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check("p_init", &self.p_init)?;
        check("p_gate", &self.p_gate)?;
        if let Some(p) = &self.p_memory {
            check("p_memory", p)?;
        }
        Ok(())
    }

    /// Whether any slot other than the initial ones can fire.
    pub fn has_local_errors(&self) -> bool {
        !self.p_gate.is_zero() || self.p_memory.as_ref().is_some_and(|p| !p.is_zero())
    }

    /// Fidelity of one initial pair.
    pub fn pair_fidelity(&self) -> T {
        FidelityConvention::pair_fidelity(self.initial_kind, self.p_init.clone())
    }
}

/// Probabilities of the four Bell states after an imperfect pair creation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellWeights<T> {
    pub psi_plus: T,
    pub psi_minus: T,
    pub phi_plus: T,
    pub phi_minus: T,
}

impl<T: Scalar> BellWeights<T> {
    pub fn get(&self, b: BellIndex) -> T {
        match b {
            BellIndex::PsiPlus => self.psi_plus.clone(),
            BellIndex::PsiMinus => self.psi_minus.clone(),
            BellIndex::PhiPlus => self.phi_plus.clone(),
            BellIndex::PhiMinus => self.phi_minus.clone(),
        }
    }

    pub fn sum(&self) -> T {
        BellIndex::ALL.iter().fold(T::zero(), |acc, &b| acc + self.get(b))
    }
}

/// Two-qubit depolarizing noise of strength `p` on the pair-creating CNOT,
/// reduced to the pair: `1 − 4p/5` ideal, `4p/15` for each other Bell state.
pub fn bell_pair_mixture<T: Scalar>(p: T) -> Result<BellWeights<T>, ModelError> {
    check("p", &p)?;
    let other = p.clone() * T::ratio(4, 15);
    Ok(BellWeights {
        psi_plus: T::one() - p * T::ratio(4, 5),
        psi_minus: other.clone(),
        phi_plus: other.clone(),
        phi_minus: other,
    })
}

/// A frame and its probability within an enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFrame<T> {
    pub frame: PauliFrame,
    pub probability: T,
}

/// Per-pair error menu: `(Pauli on the designated member, probability)`.
pub(crate) fn pair_menu<T: Scalar>(model: &ErrorModel<T>) -> Result<Vec<(Pauli, T)>, ModelError> {
    model.validate()?;
    let p = model.p_init.clone();
    let q = T::one() - p.clone();
    Ok(match model.initial_kind {
        InitialKind::None => return Err(ModelError::NothingToEnumerate),
        InitialKind::ZOnly => vec![(Pauli::I, q), (Pauli::Z, p)],
        InitialKind::XOnly => vec![(Pauli::I, q), (Pauli::X, p)],
        InitialKind::GeneralPauli => {
            let w = bell_pair_mixture(p)?;
            Pauli::ALL.iter().map(|&s| (s, w.get(BellIndex::from_pauli(s)))).collect()
        }
    })
}

/// Every initial-error frame over the seven butterfly pairs.
pub fn enumerate_initial<T: Scalar>(model: &ErrorModel<T>) -> Result<Vec<WeightedFrame<T>>, ModelError> {
    enumerate_initial_on(model, &INITIAL_PAIRS)
}

/// Every initial-error frame over `pairs` (`(control, target)` order).
/// Frames are listed with the first pair varying slowest.
pub fn enumerate_initial_on<T: Scalar>(
    model: &ErrorModel<T>,
    pairs: &[(QubitId, QubitId)],
) -> Result<Vec<WeightedFrame<T>>, ModelError> {
    let menu = pair_menu(model)?;
    let mut out = vec![WeightedFrame { frame: PauliFrame::IDENTITY, probability: T::one() }];
    for &(control, target) in pairs {
        let member = match model.init_member {
            PairMember::Control => control,
            PairMember::Target => target,
        };
        out = out
            .into_iter()
            .flat_map(|wf| {
                menu.iter().map(move |(pauli, w)| WeightedFrame {
                    frame: wf.frame.with(member, *pauli),
                    probability: wf.probability.clone() * w.clone(),
                })
            })
            .collect();
    }
    Ok(out)
}

/// Single-qubit depolarizing draw: `I` with probability `1 − p`, otherwise
/// `X`, `Y`, `Z` with `p/3` each.
pub fn sample_local_error<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Pauli {
    let u: f64 = rng.random();
    if u >= p {
        return Pauli::I;
    }
    let k = ((u / p * 3.0) as usize).min(2);
    Pauli::NON_IDENTITY[k]
}

/// Two-qubit depolarizing draw: `(I, I)` with probability `1 − p`, otherwise
/// one of the 15 other pairs uniformly.
pub fn sample_cnot_error<R: Rng + ?Sized>(p: f64, rng: &mut R) -> (Pauli, Pauli) {
    let u: f64 = rng.random();
    if u >= p {
        return (Pauli::I, Pauli::I);
    }
    let k = ((u / p * 15.0) as usize).min(14) + 1;
    (Pauli::ALL[k / 4], Pauli::ALL[k % 4])
}
