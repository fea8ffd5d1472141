//! Second-order forward-mode jets in up to [`MAX_COORDS`] fiber coordinates.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const MAX_COORDS: usize = 6;

/// A value with its gradient and Hessian. `order` counts how many more
/// exterior derivatives the stored partials support; constants never run out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; MAX_COORDS],
    pub hess: [[f64; MAX_COORDS]; MAX_COORDS],
    pub order: u8,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Jet { value, grad: [0.0; MAX_COORDS], hess: [[0.0; MAX_COORDS]; MAX_COORDS], order: u8::MAX }
    }

    /// The coordinate function `x_index` at `value`.
    pub fn variable(index: usize, value: f64) -> Self {
        let mut j = Jet::constant(value);
        j.grad[index] = 1.0;
        j.order = 2;
        j
    }

    /// A bare value with no usable partials.
    pub fn value_only(value: f64) -> Self {
        Jet { order: 0, ..Jet::constant(value) }
    }

    /// The partial `∂f/∂x_index` as a jet one order lower.
    pub fn partial(&self, index: usize) -> Result<Jet> {
        if self.order == 0 {
            return Err(Error::MissingPartials);
        }
        let mut grad = [0.0; MAX_COORDS];
        grad.copy_from_slice(&self.hess[index]);
        Ok(Jet {
            value: self.grad[index],
            grad,
            hess: [[0.0; MAX_COORDS]; MAX_COORDS],
            order: if self.order == u8::MAX { u8::MAX } else { self.order - 1 },
        })
    }

    pub fn recip(self) -> Jet {
        let v = self.value;
        let mut out = Jet::constant(1.0 / v);
        out.order = self.order;
        let v2 = v * v;
        let v3 = v2 * v;
        for i in 0..MAX_COORDS {
            out.grad[i] = -self.grad[i] / v2;
            for k in 0..MAX_COORDS {
                out.hess[i][k] = -self.hess[i][k] / v2 + 2.0 * self.grad[i] * self.grad[k] / v3;
            }
        }
        out
    }

    pub fn powi(self, n: u32) -> Jet {
        (0..n).fold(Jet::constant(1.0), |acc, _| acc * self)
    }

    pub fn scale(self, s: f64) -> Jet {
        let mut out = self;
        out.value *= s;
        for i in 0..MAX_COORDS {
            out.grad[i] *= s;
            for k in 0..MAX_COORDS {
                out.hess[i][k] *= s;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0
            && self.grad.iter().all(|g| *g == 0.0)
            && self.hess.iter().flatten().all(|h| *h == 0.0)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut out = self;
        out.value += o.value;
        for i in 0..MAX_COORDS {
            out.grad[i] += o.grad[i];
            for k in 0..MAX_COORDS {
                out.hess[i][k] += o.hess[i][k];
            }
        }
        out.order = self.order.min(o.order);
        out
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::constant(self.value * o.value);
        for i in 0..MAX_COORDS {
            out.grad[i] = self.value * o.grad[i] + o.value * self.grad[i];
            for k in 0..MAX_COORDS {
                out.hess[i][k] = self.value * o.hess[i][k]
                    + o.value * self.hess[i][k]
                    + self.grad[i] * o.grad[k]
                    + o.grad[i] * self.grad[k];
            }
        }
        out.order = self.order.min(o.order);
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $f(self, o: f64) -> Jet { $tr::$f(self, Jet::constant(o)) }
        }
        impl $tr<Jet> for f64 {
            type Output = Jet;
            fn $f(self, o: Jet) -> Jet { $tr::$f(Jet::constant(self), o) }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_function_partials() {
        // f = x²y / (1 + y) at (x, y) = (1.5, 0.5)
        let (x, y) = (Jet::variable(0, 1.5), Jet::variable(1, 0.5));
        let f = x * x * y / (1.0 + y);
        let (xv, yv) = (1.5, 0.5);
        assert!((f.value - xv * xv * yv / (1.0 + yv)).abs() < 1e-15);
        assert!((f.grad[0] - 2.0 * xv * yv / (1.0 + yv)).abs() < 1e-15);
        assert!((f.grad[1] - xv * xv / (1.0 + yv).powi(2)).abs() < 1e-15);
        assert!((f.hess[0][1] - 2.0 * xv / (1.0 + yv).powi(2)).abs() < 1e-14);
        assert!((f.hess[1][1] + 2.0 * xv * xv / (1.0 + yv).powi(3)).abs() < 1e-14);
        assert_eq!(f.hess[0][1], f.hess[1][0]);
    }

    #[test]
    fn partial_lowers_order() {
        let x = Jet::variable(0, 2.0);
        let p = x.powi(3).partial(0).unwrap();
        assert_eq!((p.value, p.grad[0], p.order), (12.0, 12.0, 1));
        let pp = p.partial(0).unwrap();
        assert_eq!(pp.order, 0);
        assert!(pp.partial(0).is_err());
        assert_eq!(Jet::constant(3.0).partial(2).unwrap().value, 0.0);
    }
}
