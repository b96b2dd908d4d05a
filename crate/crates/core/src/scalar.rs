//! Scalar abstraction for the linear-algebra layer.
//!
//! Row reduction and the closed-form spectrum only need field operations, an
//! ordering and a way to inject small integers. Exact rationals are the
//! intended instantiation; `f64` is supported for quick numerical
//! experiments, with a small tolerance standing in for exact zero tests.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive};

/// A field element usable by [`ConstructionMatrix`](crate::spectrum::ConstructionMatrix).
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_int(value: i64) -> Self;

    /// Zero test used for pivot selection.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// `Some(n)` when the value is exactly the integer `n`.
    fn to_exact_integer(&self) -> Option<i64>;

    /// Whether the scalar type represents values exactly.
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(value)
    }

    fn to_exact_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }
}

impl Scalar for Ratio<BigInt> {
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(BigInt::from(value))
    }

    fn to_exact_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
}

const F64_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn from_int(value: i64) -> Self {
        value as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() < F64_TOLERANCE
    }

    fn to_exact_integer(&self) -> Option<i64> {
        let rounded = self.round();
        ((self - rounded).abs() < F64_TOLERANCE && rounded.abs() < i64::MAX as f64)
            .then_some(rounded as i64)
    }

    fn is_exact() -> bool {
        false
    }
}

/// `a / b` built from integers.
pub fn ratio<T: Scalar>(numer: i64, denom: i64) -> T {
    T::from_int(numer) / T::from_int(denom)
}

/// Smallest integer not below `value`.
pub fn ceil_rational(value: &Ratio<i64>) -> i64 {
    value.ceil().to_integer()
}
