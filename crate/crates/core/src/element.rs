use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Sub};

/// Scalar types the kernels operate on.
///
/// Implemented for `f32` and `f64`. Every buffer passed to one kernel call
/// shares the same element type.
pub trait Element:
    Copy
    + Send
    + Sync
    + Debug
    + Default
    + PartialEq
    + PartialOrd
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
{
    const ZERO: Self;
    const ONE: Self;
    /// Short name used in reports ("single" / "double").
    const NAME: &'static str;
    /// Relative tolerance used when comparing kernel output with the
    /// double-precision oracle.
    const TOLERANCE: f64;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Complex conjugate; the identity for real types.
    fn conj(self) -> Self;
}

impl Element for f32 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const NAME: &'static str = "single";
    const TOLERANCE: f64 = 1e-5;

    #[inline(always)]
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline(always)]
    fn conj(self) -> Self {
        self
    }
}

impl Element for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const NAME: &'static str = "double";
    const TOLERANCE: f64 = 1e-12;

    #[inline(always)]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline(always)]
    fn conj(self) -> Self {
        self
    }
}
