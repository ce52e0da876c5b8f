use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_irreducible, RepError, Representation};
use crate::matrix::{characteristic_polynomial, solve_intertwiners, Matrix};
use crate::scalar::Scalar;

const PROBES: usize = 8;

/// Whether some invertible `T` satisfies `T ρ_a(x) = ρ_b(x) T` for all `x`.
pub fn are_equivalent<S: Scalar>(a: &Representation<S>, b: &Representation<S>) -> Result<bool, RepError> {
    Ok(equivalence_witness(a, b)?.is_some())
}

/// An invertible intertwiner `T` with `T ρ_a(x) = ρ_b(x) T`, if one exists.
///
/// Irreducible pairs need only a nonzero intertwiner. Otherwise `det(Σ cᵢTᵢ)` over
/// an intertwiner basis is a homogeneous polynomial of degree `d`; it is
/// identically zero iff it vanishes on every `c ∈ ℕᵏ` with `Σ cᵢ = d`.
pub fn equivalence_witness<S: Scalar>(
    a: &Representation<S>,
    b: &Representation<S>,
) -> Result<Option<Matrix<S>>, RepError> {
    if a.quandle() != b.quandle() {
        return Err(RepError::QuandleMismatch);
    }
    let d = a.dim();
    if d != b.dim() {
        return Ok(None);
    }
    for (ma, mb) in a.images().iter().zip(b.images()) {
        if characteristic_polynomial(ma)? != characteristic_polynomial(mb)? {
            return Ok(None);
        }
    }
    let basis = solve_intertwiners(a.images(), b.images())?;
    if basis.is_empty() {
        return Ok(None);
    }
    if is_irreducible(a) && is_irreducible(b) {
        return Ok(Some(basis[0].clone()));
    }

    let combine = |c: &[u64]| -> Matrix<S> {
        let mut t = Matrix::zeros(d, d);
        for (ci, ti) in c.iter().zip(&basis) {
            if *ci != 0 {
                t = t.add(&ti.scale(&S::from_i64(*ci as i64)));
            }
        }
        t
    };
    let invertible = |t: &Matrix<S>| t.det().map(|v| !v.is_zero()).unwrap_or(false);

    // Cheap deterministic probes first; a nonzero det anywhere is a certificate.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..PROBES {
        let c: Vec<u64> = (0..basis.len()).map(|_| rng.gen_range(1..=97)).collect();
        let t = combine(&c);
        if invertible(&t) {
            return Ok(Some(t));
        }
    }
    let mut found = None;
    for_each_composition(basis.len(), d as u64, &mut |c| {
        let t = combine(c);
        if invertible(&t) {
            found = Some(t);
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Visits every `c ∈ ℕᵏ` with `Σ c = total`; stops when `f` returns `true`.
fn for_each_composition(k: usize, total: u64, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    fn go(c: &mut Vec<u64>, k: usize, left: u64, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if c.len() + 1 == k {
            c.push(left);
            let stop = f(c);
            c.pop();
            return stop;
        }
        for v in (0..=left).rev() {
            c.push(v);
            let stop = go(c, k, left - v, f);
            c.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(&mut Vec::with_capacity(k), k, total, f)
}
