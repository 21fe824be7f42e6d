//! Overflow-safe numbers `mantissa * e^{log_scale}` over real or complex scalars.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Field operations shared by `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + 'static
{
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    /// Principal square root.
    fn principal_sqrt(self) -> Self;
    fn real_part(self) -> f64;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn principal_sqrt(self) -> Self {
        // real part of the principal root; the imaginary part is irrelevant for
        // the growth scale of real arguments
        self.max(0.0).sqrt()
    }
    fn real_part(self) -> f64 {
        self
    }
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn principal_sqrt(self) -> Self {
        self.sqrt()
    }
    fn real_part(self) -> f64 {
        self.re
    }
}

/// `mantissa * e^{log_scale}` with `1 <= |mantissa| < e` (or zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue<T: Scalar = f64> {
    pub mantissa: T,
    pub log_scale: f64,
}

impl<T: Scalar> ScaledValue<T> {
    pub fn new(mantissa: T, log_scale: f64) -> Self {
        let modulus = mantissa.modulus();
        if modulus == 0.0 || !modulus.is_finite() {
            return ScaledValue {
                mantissa,
                log_scale: if modulus == 0.0 { 0.0 } else { log_scale },
            };
        }
        let shift = modulus.ln().floor();
        ScaledValue {
            mantissa: mantissa * (-shift).exp(),
            log_scale: log_scale + shift,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.modulus() == 0.0
    }

    /// `ln |value|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.modulus().ln() + self.log_scale
    }

    /// The represented number; may overflow to infinity.
    pub fn value(&self) -> T {
        self.mantissa * self.log_scale.exp()
    }

    /// `self / other` with the scales cancelled before exponentiation.
    pub fn ratio(&self, other: &Self) -> T {
        (self.mantissa / other.mantissa) * (self.log_scale - other.log_scale).exp()
    }

    pub fn recip(&self) -> Self {
        Self::new(T::from_real(1.0) / self.mantissa, -self.log_scale)
    }
}

impl<T: Scalar> Mul for ScaledValue<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}
