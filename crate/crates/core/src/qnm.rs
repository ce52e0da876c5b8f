//! The quandles `Q_{n,m}` and their irreducible representations `ρ_{α,λ,β}`.
//!
//! `Q_{n,m}` has elements `x_1..x_n` (indices `0..n`) and `y_1..y_m` (indices
//! `n..n+m`), with `x_i ▷ y_j = y_{j+1}`, `y_i ▷ x_j = x_{j+1}` and elements of
//! the same kind acting trivially on each other.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::quandle::Quandle;
use crate::rep::{RepError, Representation};
use crate::scalar::{Cyclo, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QnmError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("structure check ({clause}) failed: {detail}")]
    StructureViolation { clause: Clause, detail: String },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// The three structural identities satisfied by `ρ_{α,λ,β}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `ρ(y₁)ρ(x₁)ρ(y₁)⁻¹ = α·ρ(x₁)`.
    Commutation,
    /// `ρ(y₁)^d = λ·I`.
    PowerScalar,
    /// `v, ρ(y₁)v, …, ρ(y₁)^{d−1}v` is an eigenbasis of `ρ(x₁)` with eigenvalues `β/αⁱ`.
    EigenBasis,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Clause::Commutation => "commutation",
            Clause::PowerScalar => "power-scalar",
            Clause::EigenBasis => "eigenbasis",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnmParams {
    pub n: usize,
    pub m: usize,
}

impl QnmParams {
    pub fn new(n: usize, m: usize) -> Result<Self, QnmError> {
        if n == 0 || m == 0 {
            return Err(QnmError::InvalidParams(format!("n = {n}, m = {m} must be positive")));
        }
        Ok(QnmParams { n, m })
    }

    pub fn x(&self, i: usize) -> usize {
        i - 1
    }

    pub fn y(&self, j: usize) -> usize {
        self.n + j - 1
    }
}

/// `d`, `α = ζ_d^k`, `λ`, `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct IrrepParams<S: Scalar = Cyclo> {
    pub d: usize,
    pub k: u64,
    pub lambda: S,
    pub beta: S,
}

impl<S: Scalar> IrrepParams<S> {
    pub fn new(d: usize, k: u64, lambda: S, beta: S) -> Self {
        IrrepParams { d, k, lambda, beta }
    }

    pub fn alpha(&self) -> S {
        S::root_of_unity(self.d as u64, self.k as i64)
    }

    pub fn validate(&self, p: &QnmParams) -> Result<(), QnmError> {
        let d = self.d;
        if d < 2 || !p.n.is_multiple_of(d) || !p.m.is_multiple_of(d) {
            return Err(QnmError::InvalidParams(format!(
                "d = {d} must exceed 1 and divide gcd({}, {}) = {}",
                p.n,
                p.m,
                p.n.gcd(&p.m)
            )));
        }
        if (self.k % d as u64).gcd(&(d as u64)) != 1 {
            return Err(QnmError::InvalidParams(format!(
                "α = ζ_{d}^{} is not a primitive {d}-th root of unity",
                self.k
            )));
        }
        if self.lambda.is_zero() || self.beta.is_zero() {
            return Err(QnmError::InvalidParams("λ and β must be nonzero".into()));
        }
        Ok(())
    }
}

pub fn build_qnm(n: usize, m: usize) -> Result<Quandle, QnmError> {
    let p = QnmParams::new(n, m)?;
    let size = n + m;
    let table = (0..size)
        .map(|a| {
            (0..size)
                .map(|b| match (a < n, b < n) {
                    (true, false) => p.y((b - n + 1) % m + 1),
                    (false, true) => p.x((b + 1) % n + 1),
                    _ => b,
                })
                .collect()
        })
        .collect();
    let labels = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=m).map(|j| format!("y{j}")))
        .collect();
    let q = Quandle::new(table).and_then(|q| q.with_labels(labels));
    Ok(q.expect("Q_{n,m} satisfies the quandle axioms"))
}

/// `ρ(x₁) = diag(β, β/α, …, β/α^{d−1})`, `ρ(y₁)` the cyclic matrix with ones on
/// the subdiagonal and `λ` in the top-right corner, `ρ(x_i) = α^{i−1}ρ(x₁)` and
/// `ρ(y_j) = α^{1−j}ρ(y₁)`.
pub fn rho_alb<S: Scalar>(p: &QnmParams, ip: &IrrepParams<S>) -> Result<Representation<S>, QnmError> {
    ip.validate(p)?;
    let d = ip.d;
    let alpha = ip.alpha();
    let alpha_inv = alpha.inv().expect("root of unity");
    let a = Matrix::diagonal((0..d).map(|i| ip.beta.mul(&alpha_inv.pow(i as u64))).collect());
    let mut b = Matrix::zeros(d, d);
    for i in 0..d - 1 {
        b[(i + 1, i)] = S::one();
    }
    b[(0, d - 1)] = ip.lambda.clone();
    let images = (1..=p.n)
        .map(|i| a.scale(&alpha.pow((i - 1) as u64)))
        .chain((1..=p.m).map(|j| b.scale(&alpha_inv.pow((j - 1) as u64))))
        .collect();
    Ok(Representation::new(build_qnm(p.n, p.m)?, images)?)
}

fn violation(clause: Clause, detail: impl Into<String>) -> QnmError {
    QnmError::StructureViolation {
        clause,
        detail: detail.into(),
    }
}

/// Checks the commutation relation, `ρ(y₁)^d = λ·I`, and the cyclic eigenbasis.
pub fn verify_structure<S: Scalar>(
    p: &QnmParams,
    ip: &IrrepParams<S>,
    rep: &Representation<S>,
) -> Result<(), QnmError> {
    ip.validate(p)?;
    let d = ip.d;
    if rep.dim() != d || rep.quandle().size() != p.n + p.m {
        return Err(QnmError::InvalidParams("representation does not match parameters".into()));
    }
    let alpha = ip.alpha();
    let a = rep.image(p.x(1));
    let b = rep.image(p.y(1));
    let b_inv = rep.inverse_image(p.y(1));

    if &(b * a) * b_inv != a.scale(&alpha) {
        return Err(violation(Clause::Commutation, "ρ(y₁)ρ(x₁)ρ(y₁)⁻¹ ≠ α·ρ(x₁)"));
    }
    if b.pow(d as u64) != Matrix::scalar(d, ip.lambda.clone()) {
        return Err(violation(Clause::PowerScalar, format!("ρ(y₁)^{d} ≠ λ·I")));
    }
    let mut v: Vec<S> = vec![S::zero(); d];
    v[0] = S::one();
    let alpha_inv = alpha.inv().expect("root of unity");
    let mut family = Vec::with_capacity(d);
    for i in 0..d {
        let eigen = ip.beta.mul(&alpha_inv.pow(i as u64));
        let expected: Vec<S> = v.iter().map(|c| c.mul(&eigen)).collect();
        if a.mul_vec(&v) != expected {
            return Err(violation(
                Clause::EigenBasis,
                format!("ρ(y₁)^{i}e₁ is not an eigenvector for β/α^{i}"),
            ));
        }
        family.push(v.clone());
        v = b.mul_vec(&v);
    }
    if Matrix::from_columns(d, &family).det().map_err(RepError::from)?.is_zero() {
        return Err(violation(Clause::EigenBasis, "cyclic family is not a basis"));
    }
    Ok(())
}

/// One family `ρ_{α,λ,β}` for fixed `d` and `α = ζ_d^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrrepFamily {
    pub d: usize,
    pub k: u64,
    /// `(λ, β) ∈ (ℂ^×)²`, with `β` taken modulo multiplication by powers of `α`.
    pub parameters: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub n: usize,
    pub m: usize,
    /// One-dimensional representations are the characters: one nonzero value per
    /// orbit (`{x_i}` and `{y_j}`), since in dimension one conjugation is trivial
    /// and `ρ(y_{j+1}) = ρ(x_i)ρ(y_j)ρ(x_i)⁻¹ = ρ(y_j)`.
    pub one_dimensional: String,
    pub families: Vec<IrrepFamily>,
}

pub fn classify_irreducibles(n: usize, m: usize) -> Result<Classification, QnmError> {
    QnmParams::new(n, m)?;
    let g = n.gcd(&m);
    let families = (2..=g)
        .filter(|d| g.is_multiple_of(*d))
        .flat_map(|d| {
            (1..d as u64)
                .filter(move |k| k.gcd(&(d as u64)) == 1)
                .map(move |k| IrrepFamily {
                    d,
                    k,
                    parameters: "lambda, beta nonzero; beta ~ beta*alpha^i".into(),
                })
        })
        .collect();
    Ok(Classification {
        n,
        m,
        one_dimensional: "x_i -> a, y_j -> b with (a, b) nonzero".into(),
        families,
    })
}

/// `α = α'`, `λ = λ'` and `β = β'αⁱ` for some `i`.
pub fn qnm_equivalent<S: Scalar>(
    p: &QnmParams,
    a: &IrrepParams<S>,
    b: &IrrepParams<S>,
) -> Result<bool, QnmError> {
    a.validate(p)?;
    b.validate(p)?;
    if a.d != b.d || a.k % a.d as u64 != b.k % b.d as u64 || a.lambda != b.lambda {
        return Ok(false);
    }
    let alpha = b.alpha();
    Ok((0..a.d as u64).any(|i| a.beta == b.beta.mul(&alpha.pow(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envgroup::{word_image, Letter, Word};
    use crate::rep::{are_equivalent, is_irreducible};

    fn c(v: i64) -> Cyclo {
        Cyclo::from_int(v)
    }

    fn params(d: usize, k: u64, l: i64, b: i64) -> IrrepParams {
        IrrepParams::new(d, k, c(l), c(b))
    }

    #[test]
    fn tables() {
        let q = build_qnm(1, 1).unwrap();
        assert!(q.is_trivial());
        let q = build_qnm(2, 2).unwrap();
        assert_eq!(q.table(), &[vec![0, 1, 3, 2], vec![0, 1, 3, 2], vec![1, 0, 2, 3], vec![1, 0, 2, 3]]);
        assert_eq!(q.orbits(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(q.label(2), "y1");
        for n in 1..=5 {
            for m in 1..=5 {
                let q = build_qnm(n, m).unwrap();
                assert!(Quandle::new(q.table().to_vec()).is_ok());
            }
        }
        assert!(build_qnm(0, 2).is_err());
    }

    #[test]
    fn displayed_matrices() {
        let p = QnmParams::new(2, 2).unwrap();
        let r = rho_alb(&p, &params(2, 1, 1, 1)).unwrap();
        let a = Matrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
        let b = Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(r.image(0), &a);
        assert_eq!(r.image(2), &b);
        assert_eq!(r.image(1), &a.scale(&c(-1)));
        assert_eq!(r.image(3), &b.scale(&c(-1)));
        let comm = &(&(r.image(2) * r.image(0)) * r.inverse_image(2)) * r.inverse_image(0);
        assert_eq!(comm, Matrix::scalar(2, c(-1)));
        let w = Word::new(vec![Letter::new(2, false), Letter::new(0, false), Letter::new(2, true)]);
        assert_eq!(word_image(&r, &w).unwrap(), r.image(0).scale(&c(-1)));
        assert!(matches!(rho_alb(&p, &params(3, 1, 1, 1)), Err(QnmError::InvalidParams(_))));
        assert!(matches!(rho_alb(&p, &params(2, 2, 1, 1)), Err(QnmError::InvalidParams(_))));
        assert!(matches!(rho_alb(&p, &params(2, 1, 0, 1)), Err(QnmError::InvalidParams(_))));
    }

    #[test]
    fn structure_checks() {
        let p = QnmParams::new(2, 2).unwrap();
        let ip = params(2, 1, 1, 1);
        let r = rho_alb(&p, &ip).unwrap();
        verify_structure(&p, &ip, &r).unwrap();

        let p3 = QnmParams::new(3, 3).unwrap();
        let z3 = Cyclo::root_of_unity(3, 1);
        let ip3 = IrrepParams::new(3, 1, c(1), z3);
        let r3 = rho_alb(&p3, &ip3).unwrap();
        verify_structure(&p3, &ip3, &r3).unwrap();
        assert_eq!(r3.image(p3.y(1)).pow(3), Matrix::identity(3));

        let mut images = r.images().to_vec();
        images[2][(0, 1)] = c(2);
        images[3][(0, 1)] = c(-2);
        let corrupted = Representation::new(r.quandle().clone(), images).unwrap();
        let err = verify_structure(&p, &ip, &corrupted).unwrap_err();
        assert!(matches!(err, QnmError::StructureViolation { clause: Clause::PowerScalar, .. }));
    }

    #[test]
    fn conjugating_n_times_returns() {
        let p = QnmParams::new(4, 4).unwrap();
        let r = rho_alb(&p, &IrrepParams::new(4, 1, c(1), c(1))).unwrap();
        let (a, b, bi) = (r.image(0), r.image(p.y(1)), r.inverse_image(p.y(1)));
        let mut m = a.clone();
        for _ in 0..p.n {
            m = &(b * &m) * bi;
        }
        assert_eq!(&m, a);
    }

    #[test]
    fn classification() {
        assert!(classify_irreducibles(1, 4).unwrap().families.is_empty());
        let c22 = classify_irreducibles(2, 2).unwrap();
        assert_eq!(c22.families.len(), 1);
        assert_eq!((c22.families[0].d, c22.families[0].k), (2, 1));
        let c46 = classify_irreducibles(4, 6).unwrap();
        assert_eq!(c46.families.iter().map(|f| f.d).collect::<Vec<_>>(), vec![2]);
        let c66 = classify_irreducibles(6, 6).unwrap();
        let ds: Vec<(usize, u64)> = c66.families.iter().map(|f| (f.d, f.k)).collect();
        assert_eq!(ds, vec![(2, 1), (3, 1), (3, 2), (6, 1), (6, 5)]);
    }

    #[test]
    fn equivalence_rule_matches_intertwiners() {
        let p = QnmParams::new(2, 2).unwrap();
        assert!(qnm_equivalent(&p, &params(2, 1, 1, 1), &params(2, 1, 1, -1)).unwrap());
        assert!(!qnm_equivalent(&p, &params(2, 1, 1, 1), &params(2, 1, -1, 1)).unwrap());
        let grid: Vec<IrrepParams> = [1, -1, 2]
            .iter()
            .flat_map(|&l| [1, -1, 3].iter().map(move |&b| params(2, 1, l, b)))
            .collect();
        for a in &grid {
            assert!(is_irreducible(&rho_alb(&p, a).unwrap()));
            for b in &grid {
                let ra = rho_alb(&p, a).unwrap();
                let rb = rho_alb(&p, b).unwrap();
                assert_eq!(qnm_equivalent(&p, a, b).unwrap(), are_equivalent(&ra, &rb).unwrap());
            }
        }
    }
}
