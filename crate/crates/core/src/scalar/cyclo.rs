//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored as its coefficient vector in the power basis
//! `1, ζ_N, …, ζ_N^{φ(N)-1}`, i.e. reduced modulo the cyclotomic polynomial
//! `Φ_N`. Operands with different conductors are lifted to the least common
//! conductor before combining.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ApproxComplex, Scalar};

/// Arbitrary-precision rational; always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

type PolyCache = RwLock<HashMap<u64, Arc<Vec<i64>>>>;

fn poly_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients of `Φ_n`, lowest degree first.
///
/// Computed as `X^n - 1` divided by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = poly_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let div = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &div);
    }
    let result = Arc::new(num);
    poly_cache()
        .write()
        .unwrap()
        .insert(n, result.clone());
    result
}

fn exact_div_monic(num: &[i64], div: &[i64]) -> Vec<i64> {
    let dn = div.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in div.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Reduces a polynomial in `ζ_n` (any degree) to canonical coefficients.
fn reduce(poly: Vec<Rational>, n: u64) -> Vec<Rational> {
    let n_us = n as usize;
    let mut p = if poly.len() > n_us {
        let mut folded = vec![Rational::zero(); n_us];
        for (i, c) in poly.into_iter().enumerate() {
            if !c.is_zero() {
                folded[i % n_us] += c;
            }
        }
        folded
    } else {
        poly
    };
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if p.len() < deg {
        p.resize(deg, Rational::zero());
        return p;
    }
    for top in (deg..p.len()).rev() {
        let c = std::mem::take(&mut p[top]);
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi.iter().take(deg).enumerate() {
            if pj != 0 {
                p[top - deg + j] -= &c * Rational::from_integer(BigInt::from(pj));
            }
        }
    }
    p.truncate(deg);
    p
}

/// Exact element of `Q(ζ_N)`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "CycloRepr", into = "CycloRepr")]
pub struct Cyclo {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclo {
    /// Builds an element from its canonical coefficient vector.
    pub fn from_coeffs(conductor: u64, coeffs: Vec<Rational>) -> Result<Self, String> {
        if conductor == 0 {
            return Err("conductor must be positive".into());
        }
        let phi = euler_phi(conductor) as usize;
        if coeffs.len() != phi {
            return Err(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            ));
        }
        Ok(Cyclo { conductor, coeffs })
    }

    /// Builds `Σ c_i ζ_N^i` for an arbitrary-length polynomial, reducing it.
    pub fn from_poly(conductor: u64, poly: Vec<Rational>) -> Self {
        Cyclo {
            conductor,
            coeffs: reduce(poly, conductor),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclo {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `ζ_n^k`, stored at the smallest conductor `n / gcd(n, k)`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as u64;
        let g = if k == 0 { n } else { n.gcd(&k) };
        let (n, k) = (n / g, k / g);
        let mut poly = vec![Rational::zero(); k as usize + 1];
        poly[k as usize] = Rational::one();
        Self::from_poly(n, poly)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Coefficients after embedding into `Q(ζ_l)`; `l` must be a multiple of the conductor.
    fn lifted(&self, l: u64) -> Vec<Rational> {
        if l == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert_eq!(l % self.conductor, 0);
        let step = (l / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); l as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * step] = c.clone();
            }
        }
        reduce(poly, l)
    }

    /// This element viewed in `Q(ζ_l)`.
    pub fn lift_to(&self, l: u64) -> Self {
        assert!(l.is_multiple_of(self.conductor), "{l} is not a multiple of {}", self.conductor);
        Cyclo {
            conductor: l,
            coeffs: self.lifted(l),
        }
    }

    /// Galois automorphism `ζ ↦ ζ^j` (`j` coprime to the conductor).
    fn galois(&self, j: u64) -> Self {
        let n = self.conductor;
        let mut poly = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(i as u64 * j % n) as usize] += c;
            }
        }
        Self::from_poly(n, poly)
    }

    fn scale(&self, q: &Rational) -> Self {
        Cyclo {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let l = lcm(self.conductor, other.conductor);
        let a = self.lifted(l);
        let b = other.lifted(l);
        Cyclo {
            conductor: l,
            coeffs: a.iter().zip(&b).map(|(x, y)| f(x, y)).collect(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        if let Some(q) = self.as_rational_cheap() {
            return other.scale(&q);
        }
        if let Some(q) = other.as_rational_cheap() {
            return self.scale(&q);
        }
        let l = lcm(self.conductor, other.conductor);
        let a = self.lifted(l);
        let b = other.lifted(l);
        let mut poly = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Self::from_poly(l, poly)
    }

    fn as_rational_cheap(&self) -> Option<Rational> {
        if self.conductor <= 2 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational_cheap() {
            return Some(Self::from_rational(q.recip()));
        }
        // The product of the nontrivial Galois conjugates times z is the field norm.
        let n = self.conductor;
        let mut w = Self::from_int(1);
        for j in 2..n {
            if j.gcd(&n) == 1 {
                w = w.product(&self.galois(j));
            }
        }
        let norm = self.product(&w);
        let norm = norm
            .as_rational()
            .expect("field norm of a cyclotomic element is rational");
        Some(w.scale(&norm.recip()))
    }

    fn coeff_size(&self) -> f64 {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| (c.numer().bits() + c.denom().bits()) as f64 + 1.0)
            .sum()
    }
}

fn rational_root(q: &Rational, n: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer().nth_root(n);
    let den = q.denom().nth_root(n);
    if num.pow(n) == *q.numer() && den.pow(n) == *q.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let l = lcm(self.conductor, other.conductor);
        self.lifted(l) == other.lifted(l)
    }
}

impl Eq for Cyclo {}

impl Scalar for Cyclo {
    const EXACT: bool = true;
    const BACKEND: &'static str = "cyclo";

    fn zero() -> Self {
        Self::from_int(0)
    }

    fn one() -> Self {
        Self::from_int(1)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }

    fn from_f64(x: f64) -> Self {
        Self::from_rational(Rational::from_float(x).unwrap_or_else(Rational::zero))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn mul(&self, other: &Self) -> Self {
        self.product(other)
    }

    fn neg(&self) -> Self {
        Cyclo {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn inv(&self) -> Option<Self> {
        self.inverse()
    }

    fn conj(&self) -> Self {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
    }

    fn to_approx(&self) -> ApproxComplex {
        let n = self.conductor as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        ApproxComplex::new(re, im)
    }

    fn pivot_cost(&self) -> f64 {
        self.coeff_size()
    }

    fn inv_principal_root(&self, n: u32) -> Option<Self> {
        if self.is_zero() || n == 0 {
            return None;
        }
        // Every root of unity in Q(ζ_N) is a power of ζ_M with M = lcm(2, N).
        let m = lcm(2, self.conductor);
        for j in 0..m {
            let w = self.product(&Self::root_of_unity(m, -(j as i64)));
            let Some(q) = w.as_rational() else { continue };
            if !q.is_positive() {
                continue;
            }
            // z = q e^{2πi j/m}, principal root q^{1/n} e^{2πi j/(m n)}.
            let r = rational_root(&q, n)?;
            let root_inv = Self::root_of_unity(m * n as u64, -(j as i64));
            return Some(root_inv.scale(&r.recip()));
        }
        None
    }

    fn root_of_unity(n: u64, k: i64) -> Self {
        Cyclo::root_of_unity(n, k)
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo({self})")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.conductor)?;
                    } else {
                        write!(f, "z{}^{i}", self.conductor)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                Scalar::$call(self, rhs)
            }
        }
        impl $tr for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                Scalar::$call(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Scalar::neg(&self)
    }
}

impl From<i64> for Cyclo {
    fn from(n: i64) -> Self {
        Cyclo::from_int(n)
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    #[serde(rename = "N")]
    n: u64,
    coeffs: Vec<(String, String)>,
}

impl From<Cyclo> for CycloRepr {
    fn from(z: Cyclo) -> Self {
        CycloRepr {
            n: z.conductor,
            coeffs: z
                .coeffs
                .iter()
                .map(|c| (c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }
}

impl TryFrom<CycloRepr> for Cyclo {
    type Error = String;

    fn try_from(r: CycloRepr) -> Result<Self, String> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|(num, den)| {
                let num: BigInt = num.parse().map_err(|_| format!("bad numerator {num:?}"))?;
                let den: BigInt = den.parse().map_err(|_| format!("bad denominator {den:?}"))?;
                if den.is_zero() {
                    return Err("zero denominator".to_string());
                }
                Ok(Rational::new(num, den))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cyclo::from_coeffs(r.n, coeffs)
    }
}
