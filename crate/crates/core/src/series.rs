//! Truncated power series in one variable.
//!
//! Coefficients beyond [`ORDER`] are assumed to vanish. Every operation
//! truncates its result to the same order, so products and quotients only
//! keep the terms that can be determined from the retained coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Highest retained power.
pub const ORDER: usize = 10;

/// Number of stored coefficients (`ORDER + 1`).
pub const LEN: usize = ORDER + 1;

/// `c[0] + c[1] x + ... + c[ORDER] x^ORDER`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Series {
    pub coef: [f64; LEN],
}

impl Default for Series {
    fn default() -> Self {
        Self::zero()
    }
}

impl Series {
    pub const fn zero() -> Self {
        Self { coef: [0.0; LEN] }
    }

    pub fn constant(c: f64) -> Self {
        let mut s = Self::zero();
        s.coef[0] = c;
        s
    }

    pub fn new(coef: [f64; LEN]) -> Self {
        Self { coef }
    }

    /// Builds an even series from the coefficients of `x^0, x^2, ..., x^ORDER`.
    pub fn from_even(even: &[f64; LEN / 2 + 1]) -> Self {
        let mut s = Self::zero();
        for (k, c) in even.iter().enumerate() {
            s.coef[2 * k] = *c;
        }
        s
    }

    /// The coefficients of `x^0, x^2, ..., x^ORDER`.
    pub fn even_part(&self) -> [f64; LEN / 2 + 1] {
        let mut out = [0.0; LEN / 2 + 1];
        for (k, c) in out.iter_mut().enumerate() {
            *c = self.coef[2 * k];
        }
        out
    }

    pub fn constant_term(&self) -> f64 {
        self.coef[0]
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut s = *self;
        s.coef.iter_mut().for_each(|c| *c *= a);
        s
    }

    /// Term-by-term derivative. The top coefficient becomes zero since the
    /// `x^(ORDER+1)` term is not known.
    pub fn derivative(&self) -> Self {
        let mut s = Self::zero();
        for k in 1..LEN {
            s.coef[k - 1] = k as f64 * self.coef[k];
        }
        s
    }

    /// Quotient by recursive solution of `q * d = self`.
    pub fn div(&self, d: &Series) -> Result<Series> {
        let d0 = d.coef[0];
        if d0 == 0.0 || !d0.is_finite() {
            return Err(Error::SeriesDivision(d0));
        }
        let mut q = Self::zero();
        for k in 0..LEN {
            let mut acc = self.coef[k];
            for j in 0..k {
                acc -= q.coef[j] * d.coef[k - j];
            }
            q.coef[k] = acc / d0;
        }
        Ok(q)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn is_finite(&self) -> bool {
        self.coef.iter().all(|c| c.is_finite())
    }

    /// Largest absolute coefficient of an odd power.
    pub fn max_odd(&self) -> f64 {
        self.coef
            .iter()
            .skip(1)
            .step_by(2)
            .fold(0.0, |acc, c| acc.max(c.abs()))
    }
}

impl Add for Series {
    type Output = Series;
    fn add(mut self, rhs: Series) -> Series {
        for (a, b) in self.coef.iter_mut().zip(rhs.coef) {
            *a += b;
        }
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(mut self, rhs: Series) -> Series {
        for (a, b) in self.coef.iter_mut().zip(rhs.coef) {
            *a -= b;
        }
        self
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let mut out = Series::zero();
        for i in 0..LEN {
            if self.coef[i] == 0.0 {
                continue;
            }
            for j in 0..LEN - i {
                out.coef[i + j] += self.coef[i] * rhs.coef[j];
            }
        }
        out
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(self, rhs: f64) -> Series {
        self.scale(rhs)
    }
}
