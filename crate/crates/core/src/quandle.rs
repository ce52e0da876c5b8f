//! Finite quandles as validated operation tables.
//!
//! Elements are `0..k`; `table[i][j]` is `i ▷ j`.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuandleError {
    #[error("operation table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("entry table[{row}][{col}] = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("idempotence fails at {0}: {0} ▷ {0} != {0}")]
    IdempotenceViolation(usize),
    #[error("left translation by {0} is not a bijection")]
    NonBijectiveTranslation(usize),
    #[error("self-distributivity fails at ({0}, {1}, {2})")]
    DistributivityViolation(usize, usize, usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// A validated finite quandle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuandleRepr", into = "QuandleRepr")]
pub struct Quandle {
    table: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Quandle {
    /// Checks the three quandle axioms, reporting the first violation found.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, QuandleError> {
        let k = table.len();
        if k == 0 {
            return Err(QuandleError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != k {
                return Err(QuandleError::NotSquare { row, len: r.len(), size: k });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= k) {
                return Err(QuandleError::EntryOutOfRange { row, col, value });
            }
        }
        if let Some(i) = (0..k).find(|&i| table[i][i] != i) {
            return Err(QuandleError::IdempotenceViolation(i));
        }
        for (i, row) in table.iter().enumerate() {
            let mut seen = vec![false; k];
            for &v in row {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(QuandleError::NonBijectiveTranslation(i));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    if table[i][table[j][l]] != table[table[i][j]][table[i][l]] {
                        return Err(QuandleError::DistributivityViolation(i, j, l));
                    }
                }
            }
        }
        Ok(Quandle { table, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, QuandleError> {
        if labels.len() != self.size() {
            return Err(QuandleError::LabelCount {
                expected: self.size(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The quandle on `0..k` with `x ▷ y = y`.
    pub fn trivial(k: usize) -> Self {
        let table = (0..k).map(|_| (0..k).collect()).collect();
        Quandle::new(table).expect("trivial quandle is valid")
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Left translation `L_x: y ↦ x ▷ y`.
    pub fn translation(&self, x: usize) -> Permutation {
        Permutation(self.table[x].clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.table
            .iter()
            .all(|row| row.iter().enumerate().all(|(j, &v)| v == j))
    }

    /// Orbits under the inner automorphism group, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let k = self.size();
        let mut orbit_of = vec![usize::MAX; k];
        let mut orbits = Vec::new();
        for start in 0..k {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut members = vec![start];
            orbit_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(j) = queue.pop_front() {
                // Forward closure suffices: each L_x has finite order.
                for next in (0..k).map(|i| self.table[i][j]) {
                    if orbit_of[next] == usize::MAX {
                        orbit_of[next] = id;
                        members.push(next);
                        queue.push_back(next);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members);
        }
        orbits
    }

    /// Map element → index of its orbit in [`Quandle::orbits`].
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut out = vec![0; self.size()];
        for (o, members) in self.orbits().iter().enumerate() {
            for &x in members {
                out[x] = o;
            }
        }
        out
    }

    /// An element of `subset` that some left translation sends outside it.
    pub fn closed_subset_witness(&self, subset: &[usize]) -> Option<usize> {
        let set: HashSet<usize> = subset.iter().copied().collect();
        for x in 0..self.size() {
            for &y in subset {
                if !set.contains(&self.table[x][y]) {
                    return Some(y);
                }
            }
        }
        None
    }

    /// Inner automorphism group, generated by the left translations.
    pub fn inner_group(&self) -> PermGroup {
        PermGroup::generate((0..self.size()).map(|x| self.translation(x)).collect())
    }

    /// The conjugation quandle `x ▷ y = x y x⁻¹` of a group given by its
    /// multiplication table.
    pub fn conjugation(mult: &[Vec<usize>]) -> Result<Self, QuandleError> {
        let inverse = check_group(mult)?;
        let n = mult.len();
        let table = (0..n)
            .map(|i| (0..n).map(|j| mult[mult[i][j]][inverse[i]]).collect())
            .collect();
        Quandle::new(table)
    }
}

/// Validates a group table, returning the inverse map.
fn check_group(mult: &[Vec<usize>]) -> Result<Vec<usize>, QuandleError> {
    let n = mult.len();
    if n == 0 {
        return Err(QuandleError::NotAGroup("empty table".into()));
    }
    for (i, row) in mult.iter().enumerate() {
        if row.len() != n {
            return Err(QuandleError::NotAGroup(format!("row {i} has wrong length")));
        }
        if row.iter().any(|&v| v >= n) {
            return Err(QuandleError::NotAGroup(format!("row {i} has an out-of-range entry")));
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
        .ok_or_else(|| QuandleError::NotAGroup("no identity element".into()))?;
    let mut inverse = vec![0; n];
    for x in 0..n {
        inverse[x] = (0..n)
            .find(|&y| mult[x][y] == e && mult[y][x] == e)
            .ok_or_else(|| QuandleError::NotAGroup(format!("element {x} has no inverse")))?;
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(QuandleError::NotAGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    Ok(inverse)
}

/// A bijection of `0..k`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn order(&self) -> u64 {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }
}

/// A permutation group with its full element list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Breadth-first closure of the generators under composition.
    ///
    /// # Panics
    /// If `generators` is empty or the degrees differ.
    pub fn generate(generators: Vec<Permutation>) -> Self {
        let k = generators.first().expect("at least one generator").degree();
        assert!(generators.iter().all(|g| g.degree() == k));
        let id = Permutation::identity(k);
        let mut seen = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &generators {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    elements.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        PermGroup { generators, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_orders(&self) -> Vec<u64> {
        self.generators.iter().map(Permutation::order).collect()
    }

    /// A pair of non-commuting generators, if any.
    pub fn noncommuting_generators(&self) -> Option<(usize, usize)> {
        let g = &self.generators;
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                if g[a].compose(&g[b]) != g[b].compose(&g[a]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.noncommuting_generators().is_none()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }
}

#[derive(Serialize, Deserialize)]
struct QuandleRepr {
    size: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl From<Quandle> for QuandleRepr {
    fn from(q: Quandle) -> Self {
        QuandleRepr {
            size: q.size(),
            table: q.table,
            labels: q.labels,
        }
    }
}

impl TryFrom<QuandleRepr> for Quandle {
    type Error = QuandleError;

    fn try_from(r: QuandleRepr) -> Result<Self, QuandleError> {
        if r.table.len() != r.size {
            return Err(QuandleError::NotSquare {
                row: r.table.len(),
                len: r.table.len(),
                size: r.size,
            });
        }
        let q = Quandle::new(r.table)?;
        match r.labels {
            Some(l) => q.with_labels(l),
            None => Ok(q),
        }
    }
}
