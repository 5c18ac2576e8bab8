use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::gaussian::GaussianRational;

/// Commutative ring with unit, enough structure for truncated series arithmetic.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_gaussian(c: &GaussianRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_i64(n))
    }

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A field of complex numbers: exact Gaussian rationals or double precision.
pub trait Scalar: Ring + Div<Output = Self> {
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow_u(e as u32)
        } else {
            self.inv().pow_u((-e) as u32)
        }
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_gaussian(c: &GaussianRational) -> Self {
        c.to_c64()
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Scalar for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}
