//! The enveloping group `G(Q) = ⟨Q | x y x⁻¹ = x▷y⟩` and its finite quotient
//! `H = G(Q)/⟨⟨x^{e_x}⟩⟩`.

mod coset;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use coset::FiniteQuotient;
pub(crate) use coset::Relator;

use crate::matrix::Matrix;
use crate::quandle::Quandle;
use crate::rep::{self, Representation};
use crate::scalar::{ApproxComplex, Scalar};

/// Default guard on the number of cosets defined during enumeration.
pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvGroupError {
    #[error("coset enumeration exceeded {0} cosets")]
    CosetLimitExceeded(usize),
    #[error("exponent vector has {found} entries, quandle has {expected} elements")]
    ExponentCount { expected: usize, found: usize },
    #[error("exponent for element {0} must be positive with L_x^e = id")]
    InvalidExponent(usize),
    #[error("word letter refers to generator {0}, out of range")]
    LetterOutOfRange(usize),
}

/// One generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    pub(crate) fn column(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub(crate) fn from_column(col: usize) -> Self {
        Letter::new(col / 2, col % 2 == 1)
    }

    /// `+(g+1)` for a generator, `-(g+1)` for its inverse.
    pub fn signed(self) -> i64 {
        let g = self.generator as i64 + 1;
        if self.inverse {
            -g
        } else {
            g
        }
    }

    pub fn from_signed(s: i64) -> Option<Self> {
        if s == 0 {
            return None;
        }
        Some(Letter::new((s.unsigned_abs() - 1) as usize, s < 0))
    }
}

/// An element of the free group on the quandle elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn from_signed(s: &[i64]) -> Option<Word> {
        s.iter().map(|&v| Letter::from_signed(v)).collect::<Option<_>>().map(Word)
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    /// Signed letter count per orbit.
    pub fn orbit_degrees(&self, orbit_of: &[usize], rank: usize) -> Vec<i64> {
        let mut deg = vec![0i64; rank];
        for l in &self.0 {
            deg[orbit_of[l.generator]] += if l.inverse { -1 } else { 1 };
        }
        deg
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_signed().iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for Word {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        self.to_signed().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Word::from_signed(&v).ok_or_else(|| serde::de::Error::custom("word letters must be nonzero"))
    }
}

/// Image of `G(Q)` in the free abelian group on the orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianizationData {
    pub rank: usize,
    pub orbit_of: Vec<usize>,
}

pub fn abelianization(q: &Quandle) -> AbelianizationData {
    AbelianizationData {
        rank: q.orbits().len(),
        orbit_of: q.orbit_index(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMode {
    /// `e_x = ord(L_x)`.
    #[default]
    PerGenerator,
    /// `e_x = |Inn(Q)|` for every `x`.
    Uniform,
}

/// Exponents `e_x` with `L_x^{e_x} = id`; the powers `x^{e_x}` generate a central subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    /// Checks positivity and `L_x^{e_x} = id`.
    pub fn new(q: &Quandle, e: Vec<u64>) -> Result<Self, EnvGroupError> {
        if e.len() != q.size() {
            return Err(EnvGroupError::ExponentCount {
                expected: q.size(),
                found: e.len(),
            });
        }
        for (x, &ex) in e.iter().enumerate() {
            if ex == 0 || ex % q.translation(x).order() != 0 {
                return Err(EnvGroupError::InvalidExponent(x));
            }
        }
        Ok(ExponentVector(e))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }
}

pub fn central_exponents(q: &Quandle, mode: ExponentMode) -> ExponentVector {
    let e = match mode {
        ExponentMode::PerGenerator => (0..q.size()).map(|x| q.translation(x).order()).collect(),
        ExponentMode::Uniform => vec![q.inner_group().order() as u64; q.size()],
    };
    ExponentVector(e)
}

/// Relators `x y x⁻¹ (x▷y)⁻¹` and `x^{e_x}`, freely reduced and deduplicated.
pub(crate) fn presentation(q: &Quandle, e: &ExponentVector) -> Vec<Relator> {
    let mut rels: Vec<Relator> = Vec::new();
    let mut push = |r: Relator| {
        if let Some(r) = coset::reduce_relator(r) {
            if !rels.contains(&r) {
                rels.push(r);
            }
        }
    };
    for (x, &ex) in e.values().iter().enumerate() {
        push(vec![2 * x; ex as usize]);
    }
    for x in 0..q.size() {
        for y in 0..q.size() {
            let z = q.op(x, y);
            push(vec![2 * x, 2 * y, 2 * x + 1, 2 * z + 1]);
        }
    }
    rels
}

/// Enumerates `H = G(Q)/⟨⟨x^{e_x}⟩⟩`. The returned table is checked against every relator.
pub fn coset_enumerate(
    q: &Quandle,
    e: &ExponentVector,
    max_cosets: usize,
) -> Result<FiniteQuotient, EnvGroupError> {
    if e.values().len() != q.size() {
        return Err(EnvGroupError::ExponentCount {
            expected: q.size(),
            found: e.values().len(),
        });
    }
    let rels = presentation(q, e);
    let h = coset::enumerate(q.size(), &rels, max_cosets)?;
    assert!(h.satisfies(&rels), "coset table must satisfy every relator");
    Ok(h)
}

/// Ordered product of `ρ(x)^{±1}` along the word; the empty word gives the identity.
pub fn word_image<S: Scalar>(
    rep: &Representation<S>,
    w: &Word,
) -> Result<Matrix<S>, EnvGroupError> {
    let mut acc = Matrix::identity(rep.dim());
    for l in w.letters() {
        if l.generator >= rep.quandle().size() {
            return Err(EnvGroupError::LetterOutOfRange(l.generator));
        }
        let m = if l.inverse {
            rep.inverse_image(l.generator)
        } else {
            rep.image(l.generator)
        };
        acc = &acc * m;
    }
    Ok(acc)
}

/// Evidence that `G(Q)` is nonabelian.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonAbelianWitness {
    /// Two left translations that do not commute.
    InnerGroup { x: usize, y: usize },
    /// Two generators whose images in `H` do not commute.
    FiniteQuotient { x: usize, y: usize, order: usize },
    /// An irreducible representation of dimension > 1 (a supplied one, by index).
    SuppliedIrreducible { index: usize, dim: usize },
    /// An irreducible block of dimension > 1 found in the regular representation of `H`.
    RegularBlock {
        dim: usize,
        rep: Representation<ApproxComplex>,
    },
}

impl NonAbelianWitness {
    /// Dimension of an irreducible-representation witness.
    pub fn irreducible_dim(&self) -> Option<usize> {
        match self {
            NonAbelianWitness::SuppliedIrreducible { dim, .. }
            | NonAbelianWitness::RegularBlock { dim, .. } => Some(*dim),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AbelianReport {
    NonAbelian { witnesses: Vec<NonAbelianWitness> },
    /// Only issued for trivial quandles, whose enveloping group is free abelian.
    AbelianCertified,
    /// `h_abelian` is `None` when the quotient could not be enumerated.
    Undetermined {
        h_abelian: Option<bool>,
        inn_abelian: bool,
    },
}

impl AbelianReport {
    pub fn is_nonabelian(&self) -> bool {
        matches!(self, AbelianReport::NonAbelian { .. })
    }

    pub fn witnesses(&self) -> &[NonAbelianWitness] {
        match self {
            AbelianReport::NonAbelian { witnesses } => witnesses,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub mode: ExponentMode,
    pub max_cosets: usize,
    /// Largest `|H|` for which the regular representation is decomposed.
    pub regular_limit: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            mode: ExponentMode::PerGenerator,
            max_cosets: DEFAULT_MAX_COSETS,
            regular_limit: 128,
            seed: 0,
        }
    }
}

/// Right regular representation of `H` as a representation of `Q`: `ρ(x) e_h = e_{h·x⁻¹}`.
pub fn regular_representation(
    q: &Quandle,
    h: &FiniteQuotient,
) -> Representation<ApproxComplex> {
    let n = h.order();
    let images = (0..q.size())
        .map(|x| {
            let mut m = Matrix::zeros(n, n);
            for c in 0..n {
                m[(h.act(c, Letter::new(x, true)), c)] = ApproxComplex::one();
            }
            m
        })
        .collect();
    Representation::new(q.clone(), images).expect("regular action is a representation")
}

/// Sound nonabelian detection for `G(Q)`; never claims abelian except for trivial quandles.
pub fn enveloping_abelian_report<S: Scalar>(
    q: &Quandle,
    supplied: &[Representation<S>],
    opts: &ReportOptions,
) -> AbelianReport {
    let mut witnesses = Vec::new();

    let inn = q.inner_group();
    let inn_abelian = match inn.noncommuting_generators() {
        Some((x, y)) => {
            witnesses.push(NonAbelianWitness::InnerGroup { x, y });
            false
        }
        None => true,
    };

    let e = central_exponents(q, opts.mode);
    let quotient = coset_enumerate(q, &e, opts.max_cosets).ok();
    let h_abelian = quotient.as_ref().map(|h| h.is_abelian());
    if let Some(h) = &quotient {
        if let Some((x, y, _)) = h.noncommuting_pair() {
            witnesses.push(NonAbelianWitness::FiniteQuotient {
                x,
                y,
                order: h.order(),
            });
            if h.order() <= opts.regular_limit {
                let reg = regular_representation(q, h);
                if let Ok(blocks) = rep::decompose(&reg, opts.seed) {
                    if let Some(b) = blocks.into_iter().find(|b| b.dim() > 1) {
                        witnesses.push(NonAbelianWitness::RegularBlock {
                            dim: b.dim(),
                            rep: b.into_representation(),
                        });
                    }
                }
            }
        }
    }

    for (index, r) in supplied.iter().enumerate() {
        if r.quandle() == q && r.dim() > 1 && rep::is_irreducible(r) {
            witnesses.push(NonAbelianWitness::SuppliedIrreducible { index, dim: r.dim() });
        }
    }

    if !witnesses.is_empty() {
        AbelianReport::NonAbelian { witnesses }
    } else if q.is_trivial() {
        AbelianReport::AbelianCertified
    } else {
        AbelianReport::Undetermined {
            h_abelian,
            inn_abelian,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnm::build_qnm;
    use crate::quandle::tests::s3_table;
    use crate::scalar::Cyclo;

    fn enumerate_per_gen(q: &Quandle) -> FiniteQuotient {
        let e = central_exponents(q, ExponentMode::PerGenerator);
        coset_enumerate(q, &e, DEFAULT_MAX_COSETS).unwrap()
    }

    #[test]
    fn abelianization_ranks() {
        assert_eq!(abelianization(&Quandle::trivial(4)).rank, 4);
        let q = build_qnm(2, 2).unwrap();
        let ab = abelianization(&q);
        assert_eq!(ab.rank, 2);
        assert_eq!(ab.orbit_of, vec![0, 0, 1, 1]);
        let s3 = Quandle::conjugation(&s3_table()).unwrap();
        assert_eq!(abelianization(&s3).rank, 3);
    }

    #[test]
    fn exponents() {
        let e = central_exponents(&Quandle::trivial(3), ExponentMode::PerGenerator);
        assert_eq!(e.values(), &[1, 1, 1]);
        let q = build_qnm(2, 2).unwrap();
        assert_eq!(central_exponents(&q, ExponentMode::PerGenerator).values(), &[2; 4]);
        assert_eq!(central_exponents(&q, ExponentMode::Uniform).values(), &[4; 4]);
        assert!(ExponentVector::new(&q, vec![2, 2, 2, 3]).is_err());
        assert!(ExponentVector::new(&q, vec![2, 4, 6, 2]).is_ok());
    }

    #[test]
    fn quotient_orders() {
        let h = enumerate_per_gen(&Quandle::trivial(1));
        assert_eq!(h.order(), 1);
        assert!(h.sections()[0].is_empty());

        let q12 = build_qnm(1, 2).unwrap();
        let e = central_exponents(&q12, ExponentMode::PerGenerator);
        assert_eq!(e.values(), &[2, 1, 1]);
        let h = coset_enumerate(&q12, &e, DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.is_abelian());

        let h = enumerate_per_gen(&build_qnm(2, 2).unwrap());
        assert_eq!(h.order(), 8);
        assert!(!h.is_abelian());
    }

    #[test]
    fn sections_trace_to_their_coset() {
        let h = enumerate_per_gen(&Quandle::conjugation(&s3_table()).unwrap());
        for (c, w) in h.sections().iter().enumerate() {
            assert_eq!(h.element_of(w), c);
        }
        let json = serde_json::to_value(&h).unwrap();
        assert_eq!(json["order"], h.order());
        let back: FiniteQuotient = serde_json::from_value(json).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn order_is_relabeling_invariant() {
        let q = build_qnm(2, 3).unwrap();
        let perm = [3, 0, 4, 1, 2];
        let n = q.size();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| perm[q.op(inv[a], inv[b])]).collect())
            .collect();
        let shuffled = Quandle::new(table).unwrap();
        assert_eq!(
            enumerate_per_gen(&q).order(),
            enumerate_per_gen(&shuffled).order()
        );
    }

    #[test]
    fn words_with_equal_image_have_congruent_degrees() {
        use rand::{Rng, SeedableRng};
        let q = build_qnm(2, 4).unwrap();
        let e = central_exponents(&q, ExponentMode::PerGenerator);
        let h = coset_enumerate(&q, &e, DEFAULT_MAX_COSETS).unwrap();
        let ab = abelianization(&q);
        // gcd of exponents per orbit
        let mut moduli = vec![0i64; ab.rank];
        for (x, &ex) in e.values().iter().enumerate() {
            moduli[ab.orbit_of[x]] = num_integer::gcd(moduli[ab.orbit_of[x]], ex as i64);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut seen: std::collections::HashMap<usize, Vec<i64>> = Default::default();
        for _ in 0..400 {
            let len = rng.gen_range(0..10);
            let w = Word::new(
                (0..len)
                    .map(|_| Letter::new(rng.gen_range(0..q.size()), rng.gen_bool(0.5)))
                    .collect(),
            );
            let deg: Vec<i64> = w
                .orbit_degrees(&ab.orbit_of, ab.rank)
                .iter()
                .zip(&moduli)
                .map(|(d, m)| d.rem_euclid(*m))
                .collect();
            let c = h.element_of(&w);
            if let Some(prev) = seen.get(&c) {
                assert_eq!(prev, &deg);
            } else {
                seen.insert(c, deg);
            }
        }
    }

    #[test]
    fn word_image_relations() {
        let q = build_qnm(2, 2).unwrap();
        let r = crate::qnm::rho_alb(
            &crate::qnm::QnmParams::new(2, 2).unwrap(),
            &crate::qnm::IrrepParams::new(2, 1, Cyclo::from_int(1), Cyclo::from_int(1)),
        )
        .unwrap();
        assert_eq!(word_image(&r, &Word::default()).unwrap(), Matrix::identity(2));
        for x in 0..q.size() {
            for y in 0..q.size() {
                let w = Word::new(vec![
                    Letter::new(x, false),
                    Letter::new(y, false),
                    Letter::new(x, true),
                ]);
                assert_eq!(&word_image(&r, &w).unwrap(), r.image(q.op(x, y)));
            }
        }
        assert!(word_image(&r, &Word::from_signed(&[5]).unwrap()).is_err());
    }

    #[test]
    fn word_json() {
        let w = Word::from_signed(&[1, -3, 2]).unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), "[1,-3,2]");
        assert!(serde_json::from_str::<Word>("[0]").is_err());
        assert_eq!(w.inverse().to_signed(), vec![-2, 3, -1]);
    }

    #[test]
    fn abelian_reports() {
        let none: &[Representation<Cyclo>] = &[];
        let opts = ReportOptions::default();
        let r = enveloping_abelian_report(&Quandle::trivial(3), none, &opts);
        assert!(matches!(r, AbelianReport::AbelianCertified));

        let r = enveloping_abelian_report(&build_qnm(1, 2).unwrap(), none, &opts);
        assert!(matches!(
            r,
            AbelianReport::Undetermined {
                h_abelian: Some(true),
                inn_abelian: true
            }
        ));

        let r = enveloping_abelian_report(&build_qnm(2, 2).unwrap(), none, &opts);
        assert!(r.is_nonabelian());
        assert!(r.witnesses().iter().any(|w| w.irreducible_dim() == Some(2)));
    }
}
