use serde::{Deserialize, Serialize};

use super::{RepError, Representation};
use crate::matrix::Matrix;
use crate::quandle::Quandle;
use crate::scalar::Scalar;

/// A nonzero function on `Q` constant on orbits, i.e. a one-dimensional representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct Character<S: Scalar> {
    /// Value per orbit, orbits ordered by their least element.
    pub orbit_values: Vec<S>,
    #[serde(skip)]
    orbit_of: Vec<usize>,
}

impl<S: Scalar> Character<S> {
    pub fn value(&self, x: usize) -> &S {
        &self.orbit_values[self.orbit_of[x]]
    }

    pub fn orbit_of(&self) -> &[usize] {
        &self.orbit_of
    }

    /// Re-attaches a deserialized character to its quandle.
    pub fn bind(self, q: &Quandle) -> Result<Self, RepError> {
        character_from_orbit_values(q, self.orbit_values)
    }

    pub fn is_trivial(&self) -> bool {
        self.orbit_values.iter().all(S::is_one)
    }

    /// The character as a one-dimensional representation.
    pub fn to_representation(&self, q: &Quandle) -> Result<Representation<S>, RepError> {
        let images = (0..q.size())
            .map(|x| Matrix::scalar(1, self.value(x).clone()))
            .collect();
        Representation::new(q.clone(), images)
    }
}

pub fn character_from_orbit_values<S: Scalar>(q: &Quandle, values: Vec<S>) -> Result<Character<S>, RepError> {
    let orbit_of = q.orbit_index();
    let rank = q.orbits().len();
    if values.len() != rank {
        return Err(RepError::ValueCount {
            expected: rank,
            found: values.len(),
        });
    }
    if let Some(o) = values.iter().position(S::is_zero) {
        return Err(RepError::ZeroValue(o));
    }
    Ok(Character {
        orbit_values: values,
        orbit_of,
    })
}

/// Accepts one value per element; rejects values that vary within an orbit.
pub fn character_from_element_values<S: Scalar>(q: &Quandle, values: Vec<S>) -> Result<Character<S>, RepError> {
    if values.len() != q.size() {
        return Err(RepError::ValueCount {
            expected: q.size(),
            found: values.len(),
        });
    }
    let orbits = q.orbits();
    let mut per_orbit = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        let first = orbit[0];
        if let Some(&y) = orbit.iter().find(|&&y| values[y] != values[first]) {
            return Err(RepError::NotConstantOnOrbit(first, y));
        }
        per_orbit.push(values[first].clone());
    }
    character_from_orbit_values(q, per_orbit)
}

/// `χ(x) = 1 / det(ρ(x))^{1/d}` on the principal branch `arg ∈ [0, 2π)`.
pub fn det_character<S: Scalar>(rep: &Representation<S>) -> Result<Character<S>, RepError> {
    let q = rep.quandle();
    let d = rep.dim() as u32;
    let dets = rep
        .images()
        .iter()
        .map(|m| m.det())
        .collect::<Result<Vec<S>, _>>()?;
    let mut values = Vec::new();
    for orbit in q.orbits() {
        let x = orbit[0];
        if let Some(&y) = orbit.iter().find(|&&y| dets[y] != dets[x]) {
            return Err(RepError::NotConstantOnOrbit(x, y));
        }
        values.push(dets[x].inv_principal_root(d).ok_or(RepError::NotExactlyRepresentable(x))?);
    }
    character_from_orbit_values(q, values)
}

/// `x ↦ χ(x)·ρ(x)`.
pub fn twist<S: Scalar>(rep: &Representation<S>, chi: &Character<S>) -> Result<Representation<S>, RepError> {
    if chi.orbit_of() != rep.quandle().orbit_index().as_slice() {
        return Err(RepError::QuandleMismatch);
    }
    let images = rep
        .images()
        .iter()
        .enumerate()
        .map(|(x, m)| m.scale(chi.value(x)))
        .collect();
    Representation::new(rep.quandle().clone(), images)
}
