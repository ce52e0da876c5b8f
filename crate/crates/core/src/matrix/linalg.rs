use std::collections::VecDeque;
use std::ops::Range;

use super::{Matrix, MatrixError, Polynomial};
use crate::scalar::{tolerance, Scalar};

/// Index of the preferred pivot row for `col` among `rows`, skipping entries
/// that are zero (exact) or below `tolerance * scale` (approximate).
pub(crate) fn choose_pivot<S: Scalar>(
    a: &Matrix<S>,
    col: usize,
    rows: Range<usize>,
    scale: Option<f64>,
) -> Option<usize> {
    let cutoff = tolerance() * scale.unwrap_or(1.0);
    rows.filter(|&r| {
        let v = &a[(r, col)];
        if S::EXACT {
            !v.is_zero()
        } else {
            v.to_approx().abs() > cutoff
        }
    })
    .min_by(|&r, &s| {
        a[(r, col)]
            .pivot_cost()
            .total_cmp(&a[(s, col)].pivot_cost())
    })
}

/// Reduced row echelon form with rank and a nullspace basis.
#[derive(Debug, Clone)]
pub struct RowReduction<S: Scalar> {
    pub rank: usize,
    /// Pivot column of each nonzero row of `reduced`.
    pub pivots: Vec<usize>,
    pub reduced: Matrix<S>,
    /// One basis vector per free column.
    pub nullspace: Vec<Vec<S>>,
}

/// Gauss–Jordan elimination. Exact backends pick the pivot with the smallest
/// coefficient size; the approximate backend uses partial pivoting with a
/// tolerance relative to the largest entry.
pub fn row_reduce<S: Scalar>(m: &Matrix<S>) -> RowReduction<S> {
    let (rows, cols) = (m.rows(), m.cols());
    let scale = if S::EXACT { 1.0 } else { m.max_abs().max(f64::MIN_POSITIVE) };
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = choose_pivot(&a, col, r..rows, Some(scale)) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a[(r, col)].inv().expect("pivot is nonzero");
        a.scale_row(r, &inv);
        a[(r, col)] = S::one();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[(i, col)].clone();
            if !f.is_zero() {
                a.sub_row_multiple(i, r, &f);
            }
            a[(i, col)] = S::zero();
        }
        pivots.push(col);
        r += 1;
    }
    if !S::EXACT {
        for i in r..rows {
            for j in 0..cols {
                a[(i, j)] = S::zero();
            }
        }
    }
    let nullspace = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = a[(ri, free)].neg();
            }
            v
        })
        .collect();
    RowReduction {
        rank: pivots.len(),
        pivots,
        reduced: a,
        nullspace,
    }
}

/// Incrementally maintained semi-echelon basis of a subspace of `S^len`.
///
/// Each stored row has a unit pivot and is zero at the pivots of earlier rows,
/// so reducing against the rows in insertion order is exact.
#[derive(Debug, Clone)]
pub struct Echelon<S: Scalar> {
    len: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(len: usize) -> Self {
        Echelon { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn normalize(v: &mut [S]) -> bool {
        if S::EXACT {
            return !v.iter().all(S::is_zero);
        }
        let m = v.iter().map(|x| x.to_approx().abs()).fold(0.0, f64::max);
        if m <= f64::MIN_POSITIVE {
            return false;
        }
        let inv = S::from_f64(1.0 / m);
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        true
    }

    fn reduce(&self, v: &mut [S]) {
        for (p, row) in &self.rows {
            let c = v[*p].clone();
            if c.is_zero() {
                v[*p] = S::zero();
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
            v[*p] = S::zero();
        }
    }

    /// Inserts `v` if it is independent of the current rows.
    pub fn insert(&mut self, mut v: Vec<S>) -> bool {
        assert_eq!(v.len(), self.len);
        if !Self::normalize(&mut v) {
            return false;
        }
        self.reduce(&mut v);
        let pivot = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .min_by(|a, b| a.1.pivot_cost().total_cmp(&b.1.pivot_cost()))
            .map(|(i, _)| i);
        let Some(p) = pivot else { return false };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = if x.is_zero() { S::zero() } else { x.mul(&inv) };
        }
        v[p] = S::one();
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let mut v = v.to_vec();
        if !Self::normalize(&mut v) {
            return true;
        }
        self.reduce(&mut v);
        v.iter().all(S::is_zero)
    }
}

/// Monic minimal polynomial: the first linear dependency among the
/// vectorized powers `I, M, M², …`.
pub fn minimal_polynomial<S: Scalar>(m: &Matrix<S>) -> Result<Polynomial<S>, MatrixError> {
    let n = m.require_square()?;
    // Each row: (pivot, vector, combination of powers producing it).
    let mut rows: Vec<(usize, Vec<S>, Vec<S>)> = Vec::new();
    let mut power = Matrix::identity(n);
    for k in 0..=n {
        let mut v: Vec<S> = power.entries().to_vec();
        let mut combo = vec![S::zero(); n + 1];
        combo[k] = S::one();
        if !S::EXACT {
            let scale = power.max_abs().max(f64::MIN_POSITIVE);
            let inv: S = S::from_f64(1.0 / scale);
            v.iter_mut().for_each(|x| *x = x.mul(&inv));
            combo[k] = inv;
        }
        for (p, row, rc) in &rows {
            let c = v[*p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.sub(&c.mul(r));
            }
            for (x, r) in combo.iter_mut().zip(rc) {
                *x = x.sub(&c.mul(r));
            }
        }
        if v.iter().all(S::is_zero) {
            return Ok(Polynomial::new(combo).monic());
        }
        let p = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .min_by(|a, b| a.1.pivot_cost().total_cmp(&b.1.pivot_cost()))
            .map(|(i, _)| i)
            .unwrap();
        let inv = v[p].inv().unwrap();
        v.iter_mut().for_each(|x| *x = x.mul(&inv));
        combo.iter_mut().for_each(|x| *x = x.mul(&inv));
        rows.push((p, v, combo));
        power = &power * m;
    }
    unreachable!("Cayley–Hamilton bounds the minimal polynomial degree by n")
}

/// `det(X·I - M)` by the Faddeev–LeVerrier recurrence.
pub fn characteristic_polynomial<S: Scalar>(m: &Matrix<S>) -> Result<Polynomial<S>, MatrixError> {
    let n = m.require_square()?;
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        aux = (m * &aux).add(&Matrix::scalar(n, coeffs[n - k + 1].clone()));
        let t = (m * &aux).trace();
        let kinv = S::from_i64(k as i64).inv().unwrap();
        coeffs[n - k] = t.mul(&kinv).neg();
    }
    Ok(Polynomial::new(coeffs))
}

/// Diagonalizable over ℂ iff the minimal polynomial is squarefree.
pub fn is_diagonalizable<S: Scalar>(m: &Matrix<S>) -> Result<bool, MatrixError> {
    Ok(minimal_polynomial(m)?.is_squarefree())
}

/// Unital associative algebra spanned by products of the generators.
#[derive(Debug, Clone)]
pub struct AlgebraClosure<S: Scalar> {
    pub dimension: usize,
    pub basis: Vec<Matrix<S>>,
    /// Side length of the matrices.
    pub size: usize,
}

impl<S: Scalar> AlgebraClosure<S> {
    /// Burnside: the generators act irreducibly iff the algebra is all of `M_d`.
    pub fn is_full(&self) -> bool {
        self.dimension == self.size * self.size
    }
}

/// Worklist closure: starting from the identity, multiply each new basis
/// element by every generator on both sides and keep products that enlarge
/// the span, until nothing new appears or the span is all of `M_d`.
pub fn algebra_closure<S: Scalar>(gens: &[Matrix<S>]) -> Result<AlgebraClosure<S>, MatrixError> {
    let d = gens.first().ok_or(MatrixError::Empty)?.require_square()?;
    if let Some(g) = gens.iter().find(|g| g.rows() != d || g.cols() != d) {
        return Err(MatrixError::DimensionMismatch(format!(
            "generator is {}x{}, expected {d}x{d}",
            g.rows(),
            g.cols()
        )));
    }
    let full = d * d;
    let mut span = Echelon::new(full);
    let mut basis = Vec::new();
    let id = Matrix::identity(d);
    span.insert(id.entries().to_vec());
    basis.push(id);
    let mut queue = VecDeque::from([0usize]);
    'outer: while let Some(idx) = queue.pop_front() {
        for g in gens {
            for prod in [g * &basis[idx], &basis[idx] * g] {
                if span.dim() == full {
                    break 'outer;
                }
                if span.insert(prod.entries().to_vec()) {
                    basis.push(prod);
                    queue.push_back(basis.len() - 1);
                }
            }
        }
    }
    Ok(AlgebraClosure {
        dimension: span.dim(),
        basis,
        size: d,
    })
}

/// Basis of `{T (e×d) : T·A_i = B_i·T for all i}`.
pub fn solve_intertwiners<S: Scalar>(
    a: &[Matrix<S>],
    b: &[Matrix<S>],
) -> Result<Vec<Matrix<S>>, MatrixError> {
    if a.len() != b.len() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{} source images vs {} target images",
            a.len(),
            b.len()
        )));
    }
    let d = match a.first() {
        Some(m) => m.require_square()?,
        None => return Err(MatrixError::Empty),
    };
    let e = b[0].require_square()?;
    if a.iter().any(|m| m.rows() != d || m.cols() != d) || b.iter().any(|m| m.rows() != e || m.cols() != e) {
        return Err(MatrixError::DimensionMismatch("images of unequal size".into()));
    }
    let unknowns = e * d;
    let var = |r: usize, s: usize| r * d + s;
    let mut system: Matrix<S> = Matrix::zeros(a.len() * unknowns, unknowns);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        for r in 0..e {
            for c in 0..d {
                let row = i * unknowns + r * d + c;
                // (T A)_{rc} = Σ_s T_{rs} A_{sc}
                for s in 0..d {
                    let v = system[(row, var(r, s))].add(&ai[(s, c)]);
                    system[(row, var(r, s))] = v;
                }
                // (B T)_{rc} = Σ_s B_{rs} T_{sc}
                for s in 0..e {
                    let v = system[(row, var(s, c))].sub(&bi[(r, s)]);
                    system[(row, var(s, c))] = v;
                }
            }
        }
    }
    let rr = row_reduce(&system);
    Ok(rr
        .nullspace
        .into_iter()
        .map(|v| Matrix::new(e, d, v).expect("nullspace vector has e·d entries"))
        .collect())
}
