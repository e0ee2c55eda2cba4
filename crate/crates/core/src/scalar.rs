//! Scalar abstraction shared by the linear-algebra and polynomial layers.
//!
//! Three coefficient domains appear in this crate: exact complex rationals
//! (equivariant models, Koszul data), complex doubles (A-infinity tensors)
//! and Novikov scalars (everything downstream of a critical-point solve).
//! [`Scalar`] is the least common interface the generic code needs.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

/// Field-like coefficients for matrices, polynomials and jet spaces.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for (effective) zero.
    fn inverse(&self) -> Option<Self>;
    /// Effective-zero test; exact domains test exactly, floating domains
    /// use their zero tolerance.
    fn is_zero(&self) -> bool;
    /// Pivot preference during elimination; any positive value marks a
    /// usable pivot and larger values are preferred.
    fn pivot_weight(&self) -> f64;
    /// Magnitude reported in residual tables.
    fn residual_norm(&self) -> f64;
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CRat {
    pub re: Rational64,
    pub im: Rational64,
}

impl CRat {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        CRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        CRat {
            re: Rational64::from_integer(n),
            im: Rational64::zero(),
        }
    }

    pub fn from_rational(re: Rational64) -> Self {
        CRat {
            re,
            im: Rational64::zero(),
        }
    }

    pub fn i() -> Self {
        CRat {
            re: Rational64::zero(),
            im: Rational64::one(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            *self.re.numer() as f64 / *self.re.denom() as f64,
            *self.im.numer() as f64 / *self.im.denom() as f64,
        )
    }
}

impl Scalar for CRat {
    fn zero() -> Self {
        CRat::from_int(0)
    }
    fn one() -> Self {
        CRat::from_int(1)
    }
    fn add(&self, rhs: &Self) -> Self {
        CRat::new(self.re + rhs.re, self.im + rhs.im)
    }
    fn sub(&self, rhs: &Self) -> Self {
        CRat::new(self.re - rhs.re, self.im - rhs.im)
    }
    fn mul(&self, rhs: &Self) -> Self {
        CRat::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
    fn neg(&self) -> Self {
        CRat::new(-self.re, -self.im)
    }
    fn inverse(&self) -> Option<Self> {
        let n = self.re * self.re + self.im * self.im;
        if n.is_zero() {
            return None;
        }
        Some(CRat::new(self.re / n, -self.im / n))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Prefer entries with small denominators to limit growth.
        let d = (*self.re.denom()).abs() + (*self.im.denom()).abs();
        1.0 / (1.0 + d as f64)
    }
    fn residual_norm(&self) -> f64 {
        self.to_complex().norm()
    }
}

/// Zero tolerance used by the floating scalar implementations.
pub const FLOAT_ZERO_TOLERANCE: f64 = 1e-9;

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn is_zero(&self) -> bool {
        self.norm() <= FLOAT_ZERO_TOLERANCE
    }
    fn pivot_weight(&self) -> f64 {
        if Scalar::is_zero(self) {
            0.0
        } else {
            self.norm()
        }
    }
    fn residual_norm(&self) -> f64 {
        self.norm()
    }
}

/// Formats a rational as `n/d` (or `n` when integral).
pub fn fmt_rational(q: Rational64) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crat_field_ops() {
        let a = CRat::new(Rational64::new(1, 2), Rational64::new(-3, 4));
        let b = CRat::new(Rational64::new(2, 3), Rational64::new(1, 5));
        let prod = a.mul(&b);
        let back = prod.mul(&b.inverse().unwrap());
        assert_eq!(back, a);
        assert!(CRat::zero().inverse().is_none());
    }

    #[test]
    fn crat_i_squares_to_minus_one() {
        let i = CRat::i();
        assert_eq!(i.mul(&i), CRat::from_int(-1));
    }
}
