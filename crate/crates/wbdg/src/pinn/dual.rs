use super::scalar::Scalar;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Second-order forward dual: value and first/second derivatives with
/// respect to one input coordinate. Generic over the underlying scalar so
/// the same formulas serve plain evaluation (R = f64) and parameter
/// gradients (R = Rev).
#[derive(Clone, Copy, Debug)]
pub struct Dual2<R> {
    pub v: R,
    pub d1: R,
    pub d2: R,
}

impl<R: Scalar> Dual2<R> {
    pub fn new(v: R, d1: R, d2: R) -> Self {
        Dual2 { v, d1, d2 }
    }

    pub fn constant(c: f64) -> Self {
        Dual2 {
            v: R::constant(c),
            d1: R::constant(0.0),
            d2: R::constant(0.0),
        }
    }

    /// The coordinate itself: value x, unit first derivative.
    pub fn var(x: f64) -> Self {
        Dual2 {
            v: R::constant(x),
            d1: R::constant(1.0),
            d2: R::constant(0.0),
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Dual2 {
            v: self.v.scale(c),
            d1: self.d1.scale(c),
            d2: self.d2.scale(c),
        }
    }

    pub fn shift(self, c: f64) -> Self {
        Dual2 {
            v: self.v.shift(c),
            d1: self.d1,
            d2: self.d2,
        }
    }

    fn chain(self, f: R, df: R, d2f: R) -> Self {
        Dual2 {
            v: f,
            d1: df * self.d1,
            d2: d2f * self.d1 * self.d1 + df * self.d2,
        }
    }

    pub fn recip(self) -> Self {
        let inv = self.v.recip();
        let inv2 = inv * inv;
        self.chain(inv, -inv2, (inv2 * inv).scale(2.0))
    }

    pub fn powi(self, n: i32) -> Self {
        let f = self.v.powi(n);
        let df = if n == 0 {
            R::constant(0.0)
        } else {
            self.v.powi(n - 1).scale(n as f64)
        };
        let d2f = if n == 0 || n == 1 {
            R::constant(0.0)
        } else {
            self.v.powi(n - 2).scale((n * (n - 1)) as f64)
        };
        self.chain(f, df, d2f)
    }

    pub fn powf_const(self, p: f64) -> Self {
        let f = self.v.powf_const(p);
        let df = self.v.powf_const(p - 1.0).scale(p);
        let d2f = self.v.powf_const(p - 2.0).scale(p * (p - 1.0));
        self.chain(f, df, d2f)
    }

    pub fn tanh(self) -> Self {
        let t = self.v.tanh();
        let s = -(t * t).shift(-1.0);
        let d2f = (t * s).scale(-2.0);
        self.chain(t, s, d2f)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let inv = self.v.recip();
        self.chain(self.v.ln(), inv, -(inv * inv))
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let df = s.recip().scale(0.5);
        let d2f = (s * self.v).recip().scale(-0.25);
        self.chain(s, df, d2f)
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }
}

impl Dual2<f64> {
    /// Re-embed an f64 triple as constants of another scalar type, for
    /// known functions of the coordinate inside a taped residual.
    pub fn lift<R: Scalar>(self) -> Dual2<R> {
        Dual2 {
            v: R::constant(self.v),
            d1: R::constant(self.d1),
            d2: R::constant(self.d2),
        }
    }
}

impl<R: Scalar> Add for Dual2<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual2 {
            v: self.v + rhs.v,
            d1: self.d1 + rhs.d1,
            d2: self.d2 + rhs.d2,
        }
    }
}

impl<R: Scalar> Sub for Dual2<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual2 {
            v: self.v - rhs.v,
            d1: self.d1 - rhs.d1,
            d2: self.d2 - rhs.d2,
        }
    }
}

impl<R: Scalar> Mul for Dual2<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual2 {
            v: self.v * rhs.v,
            d1: self.v * rhs.d1 + self.d1 * rhs.v,
            d2: self.v * rhs.d2 + (self.d1 * rhs.d1).scale(2.0) + self.d2 * rhs.v,
        }
    }
}

impl<R: Scalar> Div for Dual2<R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let v = self.v / rhs.v;
        let d1 = (self.d1 - v * rhs.d1) / rhs.v;
        let d2 = (self.d2 - (d1 * rhs.d1).scale(2.0) - v * rhs.d2) / rhs.v;
        Dual2 { v, d1, d2 }
    }
}

impl<R: Scalar> Neg for Dual2<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual2 {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

/// First-order forward dual in two coordinates: value and both partials.
#[derive(Clone, Copy, Debug)]
pub struct Grad2<R> {
    pub v: R,
    pub gx: R,
    pub gy: R,
}

impl<R: Scalar> Grad2<R> {
    pub fn new(v: R, gx: R, gy: R) -> Self {
        Grad2 { v, gx, gy }
    }

    pub fn constant(c: f64) -> Self {
        Grad2 {
            v: R::constant(c),
            gx: R::constant(0.0),
            gy: R::constant(0.0),
        }
    }

    pub fn var_x(x: f64) -> Self {
        Grad2 {
            v: R::constant(x),
            gx: R::constant(1.0),
            gy: R::constant(0.0),
        }
    }

    pub fn var_y(y: f64) -> Self {
        Grad2 {
            v: R::constant(y),
            gx: R::constant(0.0),
            gy: R::constant(1.0),
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Grad2 {
            v: self.v.scale(c),
            gx: self.gx.scale(c),
            gy: self.gy.scale(c),
        }
    }

    pub fn shift(self, c: f64) -> Self {
        Grad2 {
            v: self.v.shift(c),
            gx: self.gx,
            gy: self.gy,
        }
    }

    fn chain(self, f: R, df: R) -> Self {
        Grad2 {
            v: f,
            gx: df * self.gx,
            gy: df * self.gy,
        }
    }

    pub fn recip(self) -> Self {
        let inv = self.v.recip();
        self.chain(inv, -(inv * inv))
    }

    pub fn powi(self, n: i32) -> Self {
        let df = if n == 0 {
            R::constant(0.0)
        } else {
            self.v.powi(n - 1).scale(n as f64)
        };
        self.chain(self.v.powi(n), df)
    }

    pub fn powf_const(self, p: f64) -> Self {
        self.chain(self.v.powf_const(p), self.v.powf_const(p - 1.0).scale(p))
    }

    pub fn tanh(self) -> Self {
        let t = self.v.tanh();
        self.chain(t, -(t * t).shift(-1.0))
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, s.recip().scale(0.5))
    }

    pub fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }

    pub fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
}

impl Grad2<f64> {
    pub fn lift<R: Scalar>(self) -> Grad2<R> {
        Grad2 {
            v: R::constant(self.v),
            gx: R::constant(self.gx),
            gy: R::constant(self.gy),
        }
    }
}

impl<R: Scalar> Add for Grad2<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Grad2 {
            v: self.v + rhs.v,
            gx: self.gx + rhs.gx,
            gy: self.gy + rhs.gy,
        }
    }
}

impl<R: Scalar> Sub for Grad2<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Grad2 {
            v: self.v - rhs.v,
            gx: self.gx - rhs.gx,
            gy: self.gy - rhs.gy,
        }
    }
}

impl<R: Scalar> Mul for Grad2<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Grad2 {
            v: self.v * rhs.v,
            gx: self.v * rhs.gx + self.gx * rhs.v,
            gy: self.v * rhs.gy + self.gy * rhs.v,
        }
    }
}

impl<R: Scalar> Div for Grad2<R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let v = self.v / rhs.v;
        Grad2 {
            v,
            gx: (self.gx - v * rhs.gx) / rhs.v,
            gy: (self.gy - v * rhs.gy) / rhs.v,
        }
    }
}

impl<R: Scalar> Neg for Grad2<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Grad2 {
            v: -self.v,
            gx: -self.gx,
            gy: -self.gy,
        }
    }
}
