//! Printed closed forms, evaluated verbatim.

use num_traits::Float;
use serde::Serialize;

use super::{check_fidelity, AnalyticError, MnTable};
use crate::scalar::Scalar;

/// `Σ c_k F^(deg−k) (1−F)^k` for `k = 0..=deg`, with integer coefficients.
fn bernstein<T: Scalar>(f: &T, deg: u32, coeffs: &[u32]) -> T {
    let q = T::one() - f.clone();
    coeffs.iter().enumerate().fold(T::zero(), |acc, (k, &c)| {
        if c == 0 {
            acc
        } else {
            acc + T::int(c) * f.powi_u(deg - k as u32) * q.powi_u(k as u32)
        }
    })
}

/// Coefficients of `F^(7−k)(1−F)^k`, `k = 0..=7`, as usually quoted.
pub(crate) const QNC_P00: [u32; 8] = [1, 0, 5, 12, 7, 4, 3, 0];
pub(crate) const QNC_P01: [u32; 8] = [0, 2, 6, 8, 8, 6, 2, 0];
pub(crate) const QNC_P11: [u32; 8] = [0, 3, 4, 7, 12, 5, 0, 1];

/// Network-coding output under one-sided Z errors of probability `1 − F`
/// per initial pair: the closed-form `P_{m,n}` polynomials.
pub fn qnc_z_joint<T: Scalar>(f: T) -> Result<MnTable<T>, AnalyticError> {
    check_fidelity(&f)?;
    let p01 = bernstein(&f, 7, &QNC_P01);
    Ok(MnTable { p00: bernstein(&f, 7, &QNC_P00), p01: p01.clone(), p10: p01, p11: bernstein(&f, 7, &QNC_P11) })
}

/// One double-swapping cycle under one-sided Z errors: `(P0, P1)`.
pub fn es2_single<T: Scalar>(f: T) -> Result<(T, T), AnalyticError> {
    check_fidelity(&f)?;
    Ok((bernstein(&f, 3, &[1, 0, 3, 0]), bernstein(&f, 3, &[0, 3, 0, 1])))
}

/// Per-operation output fidelities as usually quoted for the encoding steps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFidelities<T> {
    pub con_z: T,
    pub add_z: T,
    pub fanout_z: T,
    pub fanout_x: T,
}

pub fn step_fidelities<T: Scalar>(f: T) -> Result<StepFidelities<T>, AnalyticError> {
    check_fidelity(&f)?;
    let q = T::one() - f.clone();
    Ok(StepFidelities {
        con_z: T::one() - T::int(2) * f.clone() * q.clone(),
        add_z: f.powi_u(3) + q.powi_u(3),
        fanout_z: f.powi_u(3),
        fanout_x: f.powi_u(3) - q.powi_u(3),
    })
}

/// 2×2 contingency table of "pair ok" for the two network-coding outputs.
///
/// `a` both ok, `b` only the second in error, `c` only the first in error,
/// `d` both in error; `e..h` are the row and column sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTable<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
    pub g: T,
    pub h: T,
    pub phi: T,
}

/// φ coefficient of a collapsed `(m, n)` table.
pub fn correlation_from<T: Scalar + Float>(t: &MnTable<T>) -> Result<CorrelationTable<T>, AnalyticError> {
    let (a, b, c, d) = (t.p00, t.p01, t.p10, t.p11);
    let (e, f, g, h) = (a + b, c + d, a + c, b + d);
    for (name, v) in [('e', e), ('f', f), ('g', g), ('h', h)] {
        if v <= T::zero() {
            return Err(AnalyticError::DegenerateMarginal(name));
        }
    }
    let phi = (a * d - b * c) / (e * f * g * h).sqrt();
    Ok(CorrelationTable { a, b, c, d, e, f, g, h, phi })
}

/// Correlation between the two network-coding outputs at input fidelity `f`
/// (one-sided Z errors), from the closed forms.
pub fn correlation_at<T: Scalar + Float>(f: T) -> Result<CorrelationTable<T>, AnalyticError> {
    correlation_from(&qnc_z_joint(f)?)
}
