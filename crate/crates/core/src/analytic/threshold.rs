//! Joint-fidelity curves and the input fidelity at which they cross 1/2.

use super::{es2_single, qnc_z_joint, AnalyticError, Enumerator};
use crate::circuit::Protocol;
use crate::error_models::{bell_pair_mixture, ErrorModel, FidelityConvention, InitialKind};
use crate::pauli::{BellIndex, Pauli};

/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;

/// Joint output fidelity as a function of input fidelity for one protocol
/// and initial-error model. One-sided Z errors use the closed forms; the
/// other models reuse a single enumeration.
#[derive(Debug, Clone)]
pub struct JointCurve {
    protocol: Protocol,
    kind: InitialKind,
    convention: FidelityConvention,
    enumerator: Option<Enumerator>,
}

impl JointCurve {
    pub fn new(protocol: Protocol, kind: InitialKind, convention: FidelityConvention) -> Result<Self, AnalyticError> {
        if kind == InitialKind::None {
            return Err(AnalyticError::Model(crate::error_models::ModelError::NothingToEnumerate));
        }
        let enumerator = match kind {
            InitialKind::ZOnly => None,
            _ => {
                let model = ErrorModel::uniform(kind, 0.0, 0.0);
                Some(Enumerator::for_model(protocol, &model)?)
            }
        };
        Ok(JointCurve { protocol, kind, convention, enumerator })
    }

    /// The underlying model at input fidelity `f`.
    pub fn model_at(&self, f: f64) -> Result<ErrorModel<f64>, AnalyticError> {
        Ok(ErrorModel::initial_only(self.kind, f, self.convention)?)
    }

    pub fn at(&self, f: f64) -> Result<f64, AnalyticError> {
        let Some(en) = &self.enumerator else {
            return match self.protocol {
                Protocol::Es2 => Ok(es2_single(f)?.0.powi(2)),
                _ => Ok(qnc_z_joint(f)?.p00),
            };
        };
        let p = self.convention.channel_p(self.kind, f)?;
        let weights: Vec<f64> = match self.kind {
            InitialKind::GeneralPauli => {
                let w = bell_pair_mixture(p)?;
                en.options().iter().map(|&s| w.get(BellIndex::from_pauli(s))).collect()
            }
            _ => en.options().iter().map(|&s| if s == Pauli::I { 1.0 - p } else { p }).collect(),
        };
        Ok(en.distribution(&weights).joint_fidelity())
    }
}

/// Input fidelity at which joint fidelity crosses 1/2: a downward scan from
/// `F = 1` in steps of 0.01 brackets the crossing, bisection refines it.
pub fn find_threshold(
    protocol: Protocol,
    kind: InitialKind,
    convention: FidelityConvention,
) -> Result<f64, AnalyticError> {
    let curve = JointCurve::new(protocol, kind, convention)?;
    let no_threshold = || AnalyticError::NoThreshold { protocol, kind: kind.name() };
    let mut hi = 1.0;
    if curve.at(hi)? < 0.5 {
        return Err(no_threshold());
    }
    let mut lo = None;
    for k in (0..100).rev() {
        let f = k as f64 / 100.0;
        match curve.at(f) {
            Ok(v) if v < 0.5 => {
                lo = Some(f);
                break;
            }
            Ok(_) => hi = f,
            // fidelities the convention cannot express end the scan
            Err(AnalyticError::Model(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let mut lo = lo.ok_or_else(no_threshold)?;
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if curve.at(mid)? < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
