//! Numerical splitting into irreducible blocks along eigenspaces of a generic
//! commutant element.

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{non_diagonalizable_element, RepError, Representation};
use crate::matrix::Matrix;
use crate::quandle::Quandle;
use crate::scalar::{tolerance, ApproxComplex, Scalar};

type CMat = DMatrix<Complex64>;

/// An invariant irreducible subspace: its basis (as columns) and the restricted images.
#[derive(Debug, Clone)]
pub struct Block {
    quandle: Quandle,
    basis: Matrix<ApproxComplex>,
    images: Vec<Matrix<ApproxComplex>>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `d × k` matrix whose columns span the block.
    pub fn basis(&self) -> &Matrix<ApproxComplex> {
        &self.basis
    }

    /// Matrices `R_x` with `ρ(x)·V = V·R_x`.
    pub fn images(&self) -> &[Matrix<ApproxComplex>] {
        &self.images
    }

    pub fn into_representation(self) -> Representation<ApproxComplex> {
        Representation::new(self.quandle, self.images).expect("restriction of a representation")
    }
}

fn to_na(m: &Matrix<ApproxComplex>) -> CMat {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].c())
}

fn from_na(m: &CMat) -> Matrix<ApproxComplex> {
    let rows = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| ApproxComplex::from(m[(i, j)])).collect())
        .collect();
    Matrix::from_rows(rows)
}

/// Threshold below which singular values count as zero.
fn rank_tol(scale: f64) -> f64 {
    (tolerance() * 1e3).max(1e-12) * scale.max(1.0)
}

/// Orthonormal right-singular vectors for the `k` smallest singular values, with
/// the largest of those and the next one up (if any).
fn smallest_singular_space(m: &CMat, k: usize) -> (CMat, f64, f64) {
    let n = m.ncols();
    // Pad to at least n rows so that all n singular values are produced.
    let padded = if m.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut basis = CMat::zeros(n, k);
    for (col, &i) in order.iter().take(k).enumerate() {
        for r in 0..n {
            basis[(r, col)] = v_t[(i, r)].conj();
        }
    }
    let within = if k == 0 { 0.0 } else { svd.singular_values[order[k - 1]] };
    let next = order.get(k).map_or(f64::INFINITY, |&i| svd.singular_values[i]);
    (basis, within, next)
}

/// Commutant `{C : C A_x = A_x C}` as a basis of matrices, via the SVD null space.
fn commutant(images: &[CMat]) -> Vec<CMat> {
    let d = images[0].nrows();
    let n = d * d;
    let mut system = CMat::zeros(images.len() * n, n);
    let scale = images.iter().map(|a| a.camax()).fold(1.0, f64::max);
    for (i, a) in images.iter().enumerate() {
        for r in 0..d {
            for c in 0..d {
                let row = i * n + r * d + c;
                for s in 0..d {
                    system[(row, r * d + s)] += a[(s, c)];
                    system[(row, s * d + c)] -= a[(r, s)];
                }
            }
        }
    }
    let svd = SVD::new(system, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let tol = rank_tol(scale);
    (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol)
        .map(|i| CMat::from_fn(d, d, |r, c| v_t[(i, r * d + c)].conj()))
        .collect()
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Returns `(V, R)` pairs: columns of `V` span an irreducible invariant block with images `R`.
fn split(images: &[CMat], rng: &mut ChaCha8Rng) -> Result<Vec<(CMat, Vec<CMat>)>, RepError> {
    let d = images[0].nrows();
    let comm = commutant(images);
    if comm.is_empty() {
        return Err(RepError::ToleranceFailure("commutant lost the identity".into()));
    }
    if comm.len() == 1 || d == 1 {
        return Ok(vec![(CMat::identity(d, d), images.to_vec())]);
    }
    let mut c = CMat::zeros(d, d);
    for b in &comm {
        c += b * random_complex(rng);
    }
    let scale = c.camax().max(1.0);
    let eig = Schur::new(c.clone())
        .eigenvalues()
        .ok_or_else(|| RepError::ToleranceFailure("Schur form did not converge".into()))?;

    // Cluster eigenvalues; each cluster is one eigenspace of the generic element.
    let cluster_tol = tolerance().sqrt() * scale;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &mu in eig.iter() {
        match clusters.iter_mut().find(|(c, _)| (c - mu).norm() <= cluster_tol) {
            Some((_, k)) => *k += 1,
            None => clusters.push((mu, 1)),
        }
    }
    if clusters.len() == 1 {
        return Err(RepError::ToleranceFailure(
            "commutant element has a single eigenvalue; eigenspaces are not separated".into(),
        ));
    }

    let tol = rank_tol(scale);
    let mut blocks = Vec::new();
    let mut all_columns = Vec::new();
    for (mu, k) in clusters {
        let shifted = &c - CMat::identity(d, d) * mu;
        let (v, within, next) = smallest_singular_space(&shifted, k);
        if within > cluster_tol || next <= tol {
            return Err(RepError::ToleranceFailure(format!(
                "eigenspace separation below tolerance (singular values {within:.3e}, {next:.3e})"
            )));
        }
        let restricted: Vec<CMat> = images.iter().map(|a| v.adjoint() * a * &v).collect();
        for (a, r) in images.iter().zip(&restricted) {
            let residual = (a * &v - &v * r).camax();
            if residual > cluster_tol * a.camax().max(1.0) {
                return Err(RepError::ToleranceFailure(format!(
                    "eigenspace is not invariant (residual {residual:.3e})"
                )));
            }
        }
        all_columns.push(v.clone());
        for (w, r) in split(&restricted, rng)? {
            blocks.push((&v * w, r));
        }
    }
    let joined = CMat::from_columns(
        &all_columns
            .iter()
            .flat_map(|v| v.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    let (_, smallest, _) = smallest_singular_space(&joined, 1);
    if smallest <= tol {
        return Err(RepError::ToleranceFailure("eigenspaces are not complementary".into()));
    }
    Ok(blocks)
}

/// Splits a completely reducible representation into irreducible invariant
/// subspaces. Runs on the approximate backend; randomness is seeded.
pub fn decompose<S: Scalar>(rep: &Representation<S>, seed: u64) -> Result<Vec<Block>, RepError> {
    if let Some(x) = non_diagonalizable_element(rep) {
        return Err(RepError::NotCompletelyReducible(x));
    }
    let approx = rep.to_approx();
    let images: Vec<CMat> = approx.images().iter().map(to_na).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = split(&images, &mut rng)?;
    Ok(blocks
        .into_iter()
        .map(|(v, r)| Block {
            quandle: rep.quandle().clone(),
            basis: from_na(&v),
            images: r.iter().map(from_na).collect(),
        })
        .collect())
}
