//! Quandle representations `ρ: Q → GL(V)` with `ρ(x▷y) = ρ(x)ρ(y)ρ(x)⁻¹`.

mod character;
mod decompose;
mod equivalence;
mod unitary;

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use character::{character_from_element_values, character_from_orbit_values, det_character, twist, Character};
pub use decompose::{decompose, Block};
pub use equivalence::{are_equivalent, equivalence_witness};
pub use unitary::{is_unitarizable, is_unitary, unitarize, Gram, UnitarizeOptions};

use crate::envgroup::EnvGroupError;
use crate::matrix::{algebra_closure, is_diagonalizable, Matrix, MatrixError};
use crate::quandle::Quandle;
use crate::scalar::{ApproxComplex, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("expected {expected} images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("image of element {0} is not invertible")]
    NotInvertible(usize),
    #[error("relation ρ(x▷y)ρ(x) = ρ(x)ρ(y) fails for x = {0}, y = {1}")]
    RelationViolation(usize, usize),
    #[error("subset is not a union of orbits: element {0} leaves it")]
    NotOrbitClosed(usize),
    #[error("representation is not irreducible")]
    NotIrreducible,
    #[error("det of the image of element {0} does not have modulus 1")]
    NotUnitarizable(usize),
    #[error("image of element {0} is not diagonalizable")]
    NotCompletelyReducible(usize),
    #[error("det-character value at element {0} is not exactly representable")]
    NotExactlyRepresentable(usize),
    #[error("representations are over different quandles")]
    QuandleMismatch,
    #[error("character value for orbit {0} is zero")]
    ZeroValue(usize),
    #[error("values at elements {0} and {1} differ within one orbit")]
    NotConstantOnOrbit(usize, usize),
    #[error("expected {expected} values, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("not a Gram matrix: {0}")]
    NotAGram(String),
    #[error("averaged form is not invariant")]
    AveragingFailed,
    #[error("numerical tolerance failure: {0}")]
    ToleranceFailure(String),
    #[error(transparent)]
    EnvGroup(#[from] EnvGroupError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A validated finite-dimensional representation of a quandle.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<S: Scalar> {
    quandle: Quandle,
    dim: usize,
    images: Vec<Matrix<S>>,
    inverses: Vec<Matrix<S>>,
}

impl<S: Scalar> Representation<S> {
    /// Validates dimensions, invertibility and the defining relation, checked
    /// in the inverse-free form `ρ(x▷y)ρ(x) = ρ(x)ρ(y)`.
    pub fn new(quandle: Quandle, images: Vec<Matrix<S>>) -> Result<Self, RepError> {
        let n = quandle.size();
        if images.len() != n {
            return Err(RepError::ImageCount {
                expected: n,
                found: images.len(),
            });
        }
        let dim = images[0].rows();
        if dim == 0 {
            return Err(RepError::DimensionMismatch("zero-dimensional image".into()));
        }
        if let Some(x) = images.iter().position(|m| m.rows() != dim || m.cols() != dim) {
            return Err(RepError::DimensionMismatch(format!(
                "image of element {x} is {}x{}, expected {dim}x{dim}",
                images[x].rows(),
                images[x].cols()
            )));
        }
        let mut inverses = Vec::with_capacity(n);
        for (x, m) in images.iter().enumerate() {
            inverses.push(m.inverse().ok_or(RepError::NotInvertible(x))?);
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = &images[quandle.op(x, y)] * &images[x];
                let rhs = &images[x] * &images[y];
                if lhs != rhs {
                    return Err(RepError::RelationViolation(x, y));
                }
            }
        }
        Ok(Representation {
            quandle,
            dim,
            images,
            inverses,
        })
    }

    /// Every element mapped to the same invertible matrix.
    pub fn constant(quandle: Quandle, m: Matrix<S>) -> Result<Self, RepError> {
        let images = vec![m; quandle.size()];
        Self::new(quandle, images)
    }

    pub fn quandle(&self) -> &Quandle {
        &self.quandle
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Matrix<S>] {
        &self.images
    }

    pub fn image(&self, x: usize) -> &Matrix<S> {
        &self.images[x]
    }

    pub fn inverse_image(&self, x: usize) -> &Matrix<S> {
        &self.inverses[x]
    }

    pub fn to_approx(&self) -> Representation<ApproxComplex> {
        Representation {
            quandle: self.quandle.clone(),
            dim: self.dim,
            images: self.images.iter().map(Matrix::to_approx).collect(),
            inverses: self.inverses.iter().map(Matrix::to_approx).collect(),
        }
    }

    /// `x ↦ ρ(x) ⊕ σ(x)`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, RepError> {
        if self.quandle != other.quandle {
            return Err(RepError::QuandleMismatch);
        }
        let zip = |a: &[Matrix<S>], b: &[Matrix<S>]| -> Vec<Matrix<S>> {
            a.iter().zip(b).map(|(m, n)| m.direct_sum(n)).collect()
        };
        Ok(Representation {
            quandle: self.quandle.clone(),
            dim: self.dim + other.dim,
            images: zip(&self.images, &other.images),
            inverses: zip(&self.inverses, &other.inverses),
        })
    }

    /// `x ↦ T ρ(x) T⁻¹`.
    pub fn conjugate(&self, t: &Matrix<S>) -> Result<Self, RepError> {
        if t.rows() != self.dim || t.cols() != self.dim {
            return Err(RepError::DimensionMismatch("conjugator size".into()));
        }
        let t_inv = t.inverse().ok_or_else(|| {
            RepError::DimensionMismatch("conjugating matrix is singular".into())
        })?;
        let conj = |m: &Matrix<S>| &(t * m) * &t_inv;
        Ok(Representation {
            quandle: self.quandle.clone(),
            dim: self.dim,
            images: self.images.iter().map(conj).collect(),
            inverses: self.inverses.iter().map(conj).collect(),
        })
    }
}

/// Permutation representation on `ℂR`: `ρ_R(x) e_r = e_{x▷r}`.
pub fn permutation_rep<S: Scalar>(q: &Quandle, subset: &[usize]) -> Result<Representation<S>, RepError> {
    let mut r: Vec<usize> = subset.to_vec();
    r.sort_unstable();
    r.dedup();
    if r.is_empty() {
        return Err(RepError::DimensionMismatch("empty subset".into()));
    }
    if let Some(&bad) = r.iter().find(|&&v| v >= q.size()) {
        return Err(RepError::NotOrbitClosed(bad));
    }
    if let Some(x) = q.closed_subset_witness(&r) {
        return Err(RepError::NotOrbitClosed(x));
    }
    let pos = |v: usize| r.binary_search(&v).expect("subset closed under translations");
    let images = (0..q.size())
        .map(|x| {
            let mut m = Matrix::zeros(r.len(), r.len());
            for (j, &v) in r.iter().enumerate() {
                m[(pos(q.op(x, v)), j)] = S::one();
            }
            m
        })
        .collect();
    Representation::new(q.clone(), images)
}

/// Burnside criterion: the images generate all of `M_d`.
pub fn is_irreducible<S: Scalar>(rep: &Representation<S>) -> bool {
    algebra_closure(rep.images())
        .expect("images are square of equal size")
        .is_full()
}

/// First orbit representative whose image is not diagonalizable. Images within an
/// orbit are conjugate, so one element per orbit decides all of them.
pub fn non_diagonalizable_element<S: Scalar>(rep: &Representation<S>) -> Option<usize> {
    rep.quandle()
        .orbits()
        .iter()
        .map(|orbit| orbit[0])
        .find(|&x| !is_diagonalizable(rep.image(x)).expect("images are square"))
}

/// For finite quandles: completely reducible iff every image is diagonalizable.
pub fn is_completely_reducible<S: Scalar>(rep: &Representation<S>) -> bool {
    non_diagonalizable_element(rep).is_none()
}

impl<S: Scalar + Serialize> Serialize for Representation<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        struct Images<'a, S: Scalar>(&'a [Matrix<S>]);
        impl<S: Scalar + Serialize> Serialize for Images<'_, S> {
            fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (i, m) in self.0.iter().enumerate() {
                    map.serialize_entry(&i.to_string(), m)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("quandle", &self.quandle)?;
        map.serialize_entry("dim", &self.dim)?;
        map.serialize_entry("images", &Images(&self.images))?;
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(bound = "S: Scalar + Deserialize<'de>")]
struct RepresentationRepr<S: Scalar> {
    quandle: Quandle,
    dim: usize,
    images: BTreeMap<String, Matrix<S>>,
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Representation<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = RepresentationRepr::<S>::deserialize(d)?;
        let q = repr.quandle;
        let mut slots: Vec<Option<Matrix<S>>> = vec![None; q.size()];
        for (key, m) in repr.images {
            let idx = key
                .parse::<usize>()
                .ok()
                .or_else(|| q.labels().and_then(|ls| ls.iter().position(|l| *l == key)))
                .filter(|&i| i < q.size())
                .ok_or_else(|| D::Error::custom(format!("unknown element key {key:?}")))?;
            if slots[idx].replace(m).is_some() {
                return Err(D::Error::custom(format!("duplicate image for element {idx}")));
            }
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| D::Error::custom(format!("missing image for element {i}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let rep = Representation::new(q, images).map_err(D::Error::custom)?;
        if rep.dim != repr.dim {
            return Err(D::Error::custom(format!(
                "declared dim {} but images are {}x{}",
                repr.dim, rep.dim, rep.dim
            )));
        }
        Ok(rep)
    }
}
