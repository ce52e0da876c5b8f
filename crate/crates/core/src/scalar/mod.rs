//! Scalar backends.
//!
//! Two fields implement [`Scalar`]: [`Cyclo`], exact elements of a cyclotomic
//! field `Q(ζ_N)` with rational coefficients (the default), and
//! [`ApproxComplex`], double-precision complex numbers compared under a global
//! tolerance.

mod approx;
mod cyclo;

use std::fmt::{self, Debug};
use std::sync::atomic::{AtomicU64, Ordering};

pub use approx::ApproxComplex;
pub use cyclo::{cyclotomic_polynomial, euler_phi, Cyclo, Rational};

/// Default tolerance of the approximate backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0);

/// Current tolerance used by [`ApproxComplex`] comparisons.
pub fn tolerance() -> f64 {
    let bits = TOLERANCE_BITS.load(Ordering::Relaxed);
    if bits == 0 {
        DEFAULT_TOLERANCE
    } else {
        f64::from_bits(bits)
    }
}

/// Sets the global tolerance. Non-positive or non-finite values restore the default.
pub fn set_tolerance(eps: f64) {
    let bits = if eps.is_finite() && eps > 0.0 {
        eps.to_bits()
    } else {
        0
    };
    TOLERANCE_BITS.store(bits, Ordering::Relaxed);
}

/// Field operations shared by the exact and approximate backends.
pub trait Scalar: Clone + Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// `true` for backends with exact equality.
    const EXACT: bool;
    /// Backend tag used in JSON documents.
    const BACKEND: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Real value; exact backends convert the binary fraction exactly.
    fn from_f64(x: f64) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Complex conjugation.
    fn conj(&self) -> Self;

    /// Numerical value at the standard embedding into ℂ.
    fn to_approx(&self) -> ApproxComplex;

    /// Heuristic size used to pick pivots: smaller is preferred.
    fn pivot_cost(&self) -> f64;

    /// `1 / z^{1/n}` on the principal branch (`arg z ∈ [0, 2π)`), when the
    /// backend can represent it.
    fn inv_principal_root(&self, n: u32) -> Option<Self>;

    /// `ζ_n^k = e^{2πik/n}`.
    fn root_of_unity(n: u64, k: i64) -> Self;

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// `z · conj(z)`.
    fn norm_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }
}
