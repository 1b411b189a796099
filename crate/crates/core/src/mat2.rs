//! Real 2×2 matrices: the ambient four-dimensional vector space of the
//! Anti-de Sitter model. Row-major entries `[[a, b], [c, d]]`.

use crate::scalar::Real;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2<F> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Real> Mat2<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(F::one(), F::zero(), F::zero(), F::one())
    }

    pub fn zero() -> Self {
        Self::new(F::zero(), F::zero(), F::zero(), F::zero())
    }

    pub fn det(&self) -> F {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> F {
        self.a + self.d
    }

    /// Adjugate: `adj([[a,b],[c,d]]) = [[d,-b],[-c,a]]`.
    pub fn adj(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn scale(&self, s: F) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> F {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn entries(&self) -> [F; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest absolute entry difference.
    pub fn dist(&self, other: &Self) -> F {
        let mut m = F::zero();
        for (x, y) in self.entries().iter().zip(other.entries().iter()) {
            m = m.max((*x - *y).abs());
        }
        m
    }

    /// Matrix applied to a column vector.
    pub fn apply_vec(&self, u: F, v: F) -> (F, F) {
        (self.a * u + self.b * v, self.c * u + self.d * v)
    }

    /// Rescale so the first entry of `(a, b, c, d)` with `|entry| > eps`
    /// becomes positive. Projectively this is a no-op.
    pub fn canonical_sign(&self, eps: F) -> Self {
        for e in self.entries() {
            if e.abs() > eps {
                return if e < F::zero() { -*self } else { *self };
            }
        }
        *self
    }
}

impl<F: Real> Mul for Mat2<F> {
    type Output = Mat2<F>;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl<F: Real> Add for Mat2<F> {
    type Output = Mat2<F>;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl<F: Real> Sub for Mat2<F> {
    type Output = Mat2<F>;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl<F: Real> Neg for Mat2<F> {
    type Output = Mat2<F>;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}
