use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{is_irreducible, RepError, Representation};
use crate::envgroup::{central_exponents, coset_enumerate, word_image, ExponentMode, DEFAULT_MAX_COSETS};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A conjugate-symmetric positive-definite form `⟨v, w⟩ = v* G w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram<S: Scalar>(Matrix<S>);

impl<S: Scalar> Gram<S> {
    /// Checks `G* = G` and positive-definiteness through numerical Hermitian eigenvalues.
    pub fn new(m: Matrix<S>) -> Result<Self, RepError> {
        if !m.is_square() {
            return Err(RepError::NotAGram("not square".into()));
        }
        if m.adjoint() != m {
            return Err(RepError::NotAGram("not conjugate-symmetric".into()));
        }
        let n = m.rows();
        let approx = m.to_approx();
        let dm = DMatrix::from_fn(n, n, |i, j| approx[(i, j)].c());
        // Hermitian part only; the check above guarantees symmetry up to rounding.
        let herm = (&dm + dm.adjoint()).scale(0.5);
        let min = herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min.is_nan() || min <= crate::scalar::tolerance() * approx.max_abs().max(1.0) {
            return Err(RepError::NotAGram("not positive-definite".into()));
        }
        Ok(Gram(m))
    }

    pub fn identity(n: usize) -> Self {
        Gram(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.0
    }
}

impl<S: Scalar + Serialize> Serialize for Gram<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        self.0.serialize(s)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Gram<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = Matrix::<S>::deserialize(d)?;
        Gram::new(m).map_err(serde::de::Error::custom)
    }
}

/// `ρ(x)*·G·ρ(x) = G` for every `x`.
pub fn is_unitary<S: Scalar>(rep: &Representation<S>, g: &Gram<S>) -> Result<bool, RepError> {
    let g = g.matrix();
    if g.rows() != rep.dim() {
        return Err(RepError::DimensionMismatch(format!(
            "Gram is {}x{}, representation has dimension {}",
            g.rows(),
            g.cols(),
            rep.dim()
        )));
    }
    Ok(rep.images().iter().all(|m| &(&m.adjoint() * g) * m == *g))
}

/// For irreducible representations: unitarizable iff every `|det ρ(x)| = 1`.
pub fn is_unitarizable<S: Scalar>(rep: &Representation<S>) -> Result<bool, RepError> {
    Ok(unitarizability_witness(rep)?.is_none())
}

/// First element whose determinant does not have modulus one.
fn unitarizability_witness<S: Scalar>(rep: &Representation<S>) -> Result<Option<usize>, RepError> {
    if !is_irreducible(rep) {
        return Err(RepError::NotIrreducible);
    }
    for (x, m) in rep.images().iter().enumerate() {
        if !m.det()?.norm_sq().is_one() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy)]
pub struct UnitarizeOptions {
    pub mode: ExponentMode,
    pub max_cosets: usize,
}

impl Default for UnitarizeOptions {
    fn default() -> Self {
        UnitarizeOptions {
            mode: ExponentMode::PerGenerator,
            max_cosets: DEFAULT_MAX_COSETS,
        }
    }
}

/// Averages the standard form over the finite quotient `H`:
/// `G = Σ_h M_h* M_h` with `M_h` the image of the section word of `h`.
/// The sum is not normalized.
pub fn unitarize<S: Scalar>(rep: &Representation<S>, opts: &UnitarizeOptions) -> Result<Gram<S>, RepError> {
    if let Some(x) = unitarizability_witness(rep)? {
        return Err(RepError::NotUnitarizable(x));
    }
    let q = rep.quandle();
    let e = central_exponents(q, opts.mode);
    let h = coset_enumerate(q, &e, opts.max_cosets)?;
    let mut g = Matrix::zeros(rep.dim(), rep.dim());
    for w in h.sections() {
        let m = word_image(rep, w)?;
        g = g.add(&(&m.adjoint() * &m));
    }
    let gram = Gram::new(g)?;
    if !is_unitary(rep, &gram)? {
        return Err(RepError::AveragingFailed);
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnm::build_qnm;
    use crate::quandle::Quandle;
    use crate::rep::permutation_rep;
    use crate::rep::tests::{rho, unipotent};
    use crate::scalar::Cyclo;

    #[test]
    fn unitary_examples() {
        let q = build_qnm(2, 2).unwrap();
        let perm: Representation<Cyclo> = permutation_rep(&q, &[0, 1, 2, 3]).unwrap();
        assert!(is_unitary(&perm, &Gram::identity(4)).unwrap());
        let eight = Gram::new(Matrix::scalar(4, Cyclo::from_int(8))).unwrap();
        assert!(is_unitary(&perm, &eight).unwrap());
        let uni = Representation::constant(q, unipotent()).unwrap();
        assert!(!is_unitary(&uni, &Gram::identity(2)).unwrap());
        assert!(is_unitary(&uni, &Gram::identity(3)).is_err());
    }

    #[test]
    fn gram_validation() {
        let not_sym = Matrix::<Cyclo>::from_i64_rows(&[&[2, 1], &[0, 2]]);
        assert!(Gram::new(not_sym).is_err());
        let indefinite = Matrix::<Cyclo>::from_i64_rows(&[&[1, 2], &[2, 1]]);
        assert!(Gram::new(indefinite).is_err());
        let z4 = Cyclo::root_of_unity(4, 1);
        let herm = Matrix::from_rows(vec![
            vec![Cyclo::from_int(2), z4.clone()],
            vec![z4.conj(), Cyclo::from_int(2)],
        ]);
        assert!(Gram::new(herm).is_ok());
    }

    #[test]
    fn unitarizability() {
        assert!(is_unitarizable(&rho(2, 1, 1, 1)).unwrap());
        assert!(!is_unitarizable(&rho(2, 1, 2, 1)).unwrap());
        let q = Quandle::trivial(1);
        let z8 = Representation::new(q, vec![Matrix::scalar(1, Cyclo::root_of_unity(8, 1))]).unwrap();
        assert!(is_unitarizable(&z8).unwrap());
        let perm: Representation<Cyclo> = permutation_rep(&build_qnm(2, 2).unwrap(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(is_unitarizable(&perm), Err(RepError::NotIrreducible));
    }

    #[test]
    fn averaging_examples() {
        let r = rho(2, 1, 1, 1);
        let g = unitarize(&r, &UnitarizeOptions::default()).unwrap();
        assert_eq!(g.matrix(), &Matrix::scalar(2, Cyclo::from_int(8)));

        let q = Quandle::trivial(1);
        let z4 = Representation::new(q, vec![Matrix::scalar(1, Cyclo::root_of_unity(4, 1))]).unwrap();
        let g = unitarize(&z4, &UnitarizeOptions::default()).unwrap();
        assert_eq!(g.matrix(), &Matrix::scalar(1, Cyclo::from_int(1)));

        let c = r.conjugate(&unipotent()).unwrap();
        let g = unitarize(&c, &UnitarizeOptions::default()).unwrap();
        let off_diagonal = &g.matrix()[(0, 1)];
        assert!(!off_diagonal.is_zero());
        assert!(is_unitary(&c, &g).unwrap());
        assert_eq!(
            unitarize(&rho(2, 1, 2, 1), &UnitarizeOptions::default()),
            Err(RepError::NotUnitarizable(2))
        );
    }

    #[test]
    fn uniform_exponents_also_average() {
        let r = rho(2, 1, 1, 1);
        let opts = UnitarizeOptions {
            mode: ExponentMode::Uniform,
            ..Default::default()
        };
        let g = unitarize(&r, &opts).unwrap();
        assert!(is_unitary(&r, &g).unwrap());
    }
}
