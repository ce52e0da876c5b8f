use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{tolerance, Scalar};

/// Double-precision complex number; equality is tolerance based.
#[derive(Clone, Copy, Default, Serialize, Deserialize)]
pub struct ApproxComplex {
    re: f64,
    im: f64,
}

impl ApproxComplex {
    pub const fn new(re: f64, im: f64) -> Self {
        ApproxComplex { re, im }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn abs(&self) -> f64 {
        self.c().norm()
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Complex64::from_polar(r, theta).into()
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Argument in `[0, 2π)`.
    pub fn principal_arg(&self) -> f64 {
        let t = self.im.atan2(self.re);
        if t < 0.0 {
            t + 2.0 * std::f64::consts::PI
        } else {
            t
        }
    }
}

impl From<Complex64> for ApproxComplex {
    fn from(c: Complex64) -> Self {
        ApproxComplex::new(c.re, c.im)
    }
}

impl PartialEq for ApproxComplex {
    fn eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        let eps = tolerance() * scale;
        (self.re - other.re).abs() <= eps && (self.im - other.im).abs() <= eps
    }
}

impl Scalar for ApproxComplex {
    const EXACT: bool = false;
    const BACKEND: &'static str = "approx";

    fn zero() -> Self {
        ApproxComplex::new(0.0, 0.0)
    }

    fn one() -> Self {
        ApproxComplex::new(1.0, 0.0)
    }

    fn from_i64(n: i64) -> Self {
        ApproxComplex::new(n as f64, 0.0)
    }

    fn from_f64(x: f64) -> Self {
        ApproxComplex::new(x, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.abs() <= tolerance()
    }

    fn add(&self, other: &Self) -> Self {
        (self.c() + other.c()).into()
    }

    fn sub(&self, other: &Self) -> Self {
        (self.c() - other.c()).into()
    }

    fn mul(&self, other: &Self) -> Self {
        (self.c() * other.c()).into()
    }

    fn neg(&self) -> Self {
        ApproxComplex::new(-self.re, -self.im)
    }

    fn inv(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(self.c().inv().into())
        }
    }

    fn conj(&self) -> Self {
        ApproxComplex::new(self.re, -self.im)
    }

    fn to_approx(&self) -> ApproxComplex {
        *self
    }

    fn pivot_cost(&self) -> f64 {
        -self.abs()
    }

    fn inv_principal_root(&self, n: u32) -> Option<Self> {
        if n == 0 || self.is_zero() {
            return None;
        }
        let n = n as f64;
        let r = self.abs().powf(-1.0 / n);
        Some(ApproxComplex::from_polar(r, -self.principal_arg() / n))
    }

    fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as f64;
        ApproxComplex::from_polar(1.0, 2.0 * std::f64::consts::PI * k / n as f64)
    }
}

impl fmt::Debug for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}{:+.12}i", self.re, self.im)
    }
}

impl Add for ApproxComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Scalar::add(&self, &rhs)
    }
}

impl Sub for ApproxComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Scalar::sub(&self, &rhs)
    }
}

impl Mul for ApproxComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Scalar::mul(&self, &rhs)
    }
}

impl Neg for ApproxComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Scalar::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerant_equality() {
        let a = ApproxComplex::new(1.0, 0.0);
        assert_eq!(a, ApproxComplex::new(1.0 + 1e-12, -1e-12));
        assert_ne!(a, ApproxComplex::new(1.0 + 1e-6, 0.0));
        // relative at large magnitude
        assert_eq!(ApproxComplex::new(1e6, 0.0), ApproxComplex::new(1e6 + 1e-4, 0.0));
    }

    #[test]
    fn principal_root() {
        let minus_one = ApproxComplex::new(-1.0, 0.0);
        let chi = minus_one.inv_principal_root(2).unwrap();
        assert_eq!(chi, ApproxComplex::new(0.0, -1.0));
        let two = ApproxComplex::new(-2.0, 0.0);
        let chi = two.inv_principal_root(2).unwrap();
        assert_eq!(Scalar::mul(&chi.pow(2), &two), ApproxComplex::one());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&ApproxComplex::new(0.5, -2.0)).unwrap();
        assert_eq!(s, r#"{"re":0.5,"im":-2.0}"#);
    }
}
