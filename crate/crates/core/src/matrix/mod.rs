//! Dense matrices over a [`Scalar`] field and the linear algebra built on them.

mod linalg;
mod poly;

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{ApproxComplex, Scalar};

pub use linalg::{
    algebra_closure, characteristic_polynomial, is_diagonalizable, minimal_polynomial,
    row_reduce, solve_intertwiners, AlgebraClosure, Echelon, RowReduction,
};
pub use poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{rows}x{cols} matrix needs {expected} entries, got {got}")]
    BadEntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("empty generator list")]
    Empty,
    #[error("backend mismatch: document says {found:?}, expected {expected:?}")]
    Backend { found: String, expected: String },
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::BadEntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// Builds from a list of rows.
    ///
    /// # Panics
    /// If the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn scalar(n: usize, s: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diagonal(diag: Vec<S>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(S::is_zero)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cell = &mut out.entries[i * other.cols + j];
                        *cell = cell.add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, j| acc.add(&self[(i, j)].mul(&v[j])))
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, S::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, S::sub)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.mul(s))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_approx(&self) -> Matrix<ApproxComplex> {
        self.map(S::to_approx)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Self {
        self.transpose().map(S::conj)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<S, MatrixError> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = linalg::choose_pivot(&a, col, col..n, None) else {
                return Ok(S::zero());
            };
            if p != col {
                a.swap_rows(p, col);
                det = det.neg();
            }
            let pivot = a[(col, col)].clone();
            det = det.mul(&pivot);
            let pinv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = a[(r, col)].mul(&pinv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a[(r, c)].sub(&f.mul(&a[(col, c)]));
                    a[(r, c)] = v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.require_square().ok()?;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = linalg::choose_pivot(&a, col, col..n, None)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = a[(col, col)].inv()?;
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                a.sub_row_multiple(r, col, &f);
                inv.sub_row_multiple(r, col, &f);
            }
        }
        Some(inv)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, s: &S) {
        for j in 0..self.cols {
            let v = self[(r, j)].mul(s);
            self[(r, j)] = v;
        }
    }

    /// `row[target] -= f * row[source]`.
    pub(crate) fn sub_row_multiple(&mut self, target: usize, source: usize, f: &S) {
        for j in 0..self.cols {
            let s = &self.entries[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = self.entries[target * self.cols + j].sub(&f.mul(s));
            self.entries[target * self.cols + j] = v;
        }
    }

    /// Largest entry magnitude under the embedding.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.to_approx().abs())
            .fold(0.0, f64::max)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.entries[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.entries[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    /// # Panics
    /// On incompatible shapes; use [`Matrix::try_mul`] to get an error instead.
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.try_mul(rhs).unwrap()
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr<S> {
    rows: usize,
    cols: usize,
    backend: String,
    entries: Vec<S>,
}

impl<S: Scalar + Serialize> Serialize for Matrix<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            backend: S::BACKEND.to_string(),
            entries: self.entries.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Matrix<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::<S>::deserialize(deserializer)?;
        if repr.backend != S::BACKEND {
            return Err(serde::de::Error::custom(MatrixError::Backend {
                found: repr.backend,
                expected: S::BACKEND.to_string(),
            }));
        }
        Matrix::new(repr.rows, repr.cols, repr.entries).map_err(serde::de::Error::custom)
    }
}
