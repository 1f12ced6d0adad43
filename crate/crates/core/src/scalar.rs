//! Scalar abstraction for the numerical kernels.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the kernels are generic over: `f32` or `f64`.
///
/// Everything in this crate is elementary-function and recurrence math, so a
/// plain `Float` bound suffices; the extra supertraits cover π-constants,
/// literal conversion, complex arithmetic, and diagnostics in error messages.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for converting an `f64` literal into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy view as `f64`, for error diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
