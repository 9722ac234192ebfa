//! Numeric abstraction shared by the closed forms and the exact enumerators.
//!
//! Everything that only needs ring arithmetic (polynomials, mixtures, summing
//! weighted frames) is generic over [`Scalar`], so it runs on `f64`, `f32`
//! and on exact rationals alike. Square roots and bisection need
//! [`num_traits::Float`] on top.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A probability-like number: a commutative ring with ordering and lossy
/// conversion to and from machine floats.
pub trait Scalar: Num + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync {
    /// Small integer constant. Never fails for the ranges used in this crate.
    fn int(n: u32) -> Self {
        Self::from_u32(n).expect("small integer is representable")
    }

    /// `n / d` computed in the scalar's own arithmetic, so it is exact for rationals.
    fn ratio(n: u32, d: u32) -> Self {
        Self::int(n) / Self::int(d)
    }

    /// Integer power by repeated multiplication.
    fn powi_u(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// Lossy view used for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// True when `0 <= self <= 1`.
    fn is_unit_interval(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync {}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn ratio_is_exact_for_rationals() {
        let third = BigRational::ratio(1, 3);
        assert_eq!(third.clone() + third.clone() + third, BigRational::int(1));
    }

    #[test]
    fn powi_matches_float() {
        assert!((0.9f64.powi_u(7) - 0.9f64.powi(7)).abs() < 1e-15);
        assert_eq!(2.0f32.powi_u(0), 1.0);
    }

    #[test]
    fn unit_interval() {
        assert!(0.0f64.is_unit_interval());
        assert!(1.0f64.is_unit_interval());
        assert!(!(-1e-9f64).is_unit_interval());
        assert!(!f64::NAN.is_unit_interval());
    }
}
