use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic abstraction shared by plain f64 and the reverse-mode tape
/// scalar, so residual formulas are written once and reused for both loss
/// evaluation and parameter gradients.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(self) -> f64;
    /// c * self
    fn scale(self, c: f64) -> Self;
    /// self + c
    fn shift(self, c: f64) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: i32) -> Self;
    /// self^p for a fixed exponent
    fn powf_const(self, p: f64) -> Self;
    fn tanh(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Scalar for f64 {
    fn constant(c: f64) -> f64 {
        c
    }
    fn value(self) -> f64 {
        self
    }
    fn scale(self, c: f64) -> f64 {
        c * self
    }
    fn shift(self, c: f64) -> f64 {
        self + c
    }
    fn recip(self) -> f64 {
        1.0 / self
    }
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
    fn powf_const(self, p: f64) -> f64 {
        f64::powf(self, p)
    }
    fn tanh(self) -> f64 {
        f64::tanh(self)
    }
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn sin(self) -> f64 {
        f64::sin(self)
    }
    fn cos(self) -> f64 {
        f64::cos(self)
    }
}
