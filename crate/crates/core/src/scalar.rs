//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the factorization, sampling and metric code is generic over.
///
/// Implemented for `f32` and `f64`. Random draws are produced in `f64` and
/// converted, so the same seed yields the same stream for both widths.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + ScalarOperand
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; values outside the range saturate.
    fn of(value: f64) -> Self;

    fn as_f64(self) -> f64;

    /// Significant decimal digits needed for an exact text round trip.
    const ROUND_TRIP_DIGITS: usize;
}

impl Scalar for f32 {
    #[inline]
    fn of(value: f64) -> Self {
        value as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
    const ROUND_TRIP_DIGITS: usize = 9;
}

impl Scalar for f64 {
    #[inline]
    fn of(value: f64) -> Self {
        value
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
    const ROUND_TRIP_DIGITS: usize = 17;
}
