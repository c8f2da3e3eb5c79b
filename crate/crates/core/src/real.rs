//! Floating-point abstraction shared by the single- and double-precision paths.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst};

/// Scalar type an evaluation pipeline runs in. Implemented for `f32` and `f64` only.
pub trait Real:
    Float + FloatConst + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Significant decimal digits needed for an exact text round trip.
    const DIGITS: usize;

    /// Converts a double-precision constant into this precision (rounding for `f32`).
    fn lit(v: f64) -> Self;

    fn to_f64(self) -> f64;

    fn from_usize(n: usize) -> Self;
}

impl Real for f64 {
    const DIGITS: usize = 17;

    #[inline(always)]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline(always)]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline(always)]
    fn from_usize(n: usize) -> Self {
        n as f64
    }
}

impl Real for f32 {
    const DIGITS: usize = 9;

    #[inline(always)]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline(always)]
    fn to_f64(self) -> f64 {
        self as f64
    }

    #[inline(always)]
    fn from_usize(n: usize) -> Self {
        n as f32
    }
}

/// Dot product with a fixed four-lane reduction tree.
///
/// The association order depends only on the slice length, so the result is
/// identical no matter which thread or batch the call belongs to.
#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut lanes = [T::zero(); 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        lanes[0] = lanes[0] + x[0] * y[0];
        lanes[1] = lanes[1] + x[1] * y[1];
        lanes[2] = lanes[2] + x[2] * y[2];
        lanes[3] = lanes[3] + x[3] * y[3];
    }
    let mut tail = T::zero();
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        tail = tail + *x * *y;
    }
    ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail
}
