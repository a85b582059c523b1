//! Scalar types a [`DensityFunction`](crate::fourier::DensityFunction) can carry.
//!
//! [`Scalar`] is the ring interface used by convolution and correlation.
//! [`RealScalar`] adds an ordered field structure, which is what the
//! balanced function, the `E_k` norms and the inequality checks need.
//! Integer and rational scalars are exact; floating scalars are not.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;
}

pub trait RealScalar: Scalar + PartialOrd + std::ops::Div<Output = Self> {
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for i64 {
    const EXACT: bool = true;
    fn from_i64(value: i64) -> Self {
        value
    }
}

impl Scalar for i128 {
    const EXACT: bool = true;
    fn from_i64(value: i64) -> Self {
        value as i128
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn from_i64(value: i64) -> Self {
        value as f32
    }
}

impl RealScalar for f32 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f32 / denom as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_i64(value: i64) -> Self {
        value as f64
    }
}

impl RealScalar for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(BigInt::from(value))
    }
}

impl RealScalar for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(BigInt::from(numer), BigInt::from(denom))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(value)
    }
}

impl RealScalar for Ratio<i64> {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl<F: Float + Debug + Send + Sync + Scalar> Scalar for Complex<F> {
    const EXACT: bool = false;
    fn from_i64(value: i64) -> Self {
        Complex::new(F::from_i64(value), F::zero())
    }
}

/// Lossy conversion that survives numerators and denominators beyond `f64` range.
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = value.numer().bits().max(value.denom().bits()) as i64 - 900;
            let shift = shift.max(0) as u64;
            let n = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn big_ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> BigRational {
    Ratio::new(numer.into(), denom.into())
}
