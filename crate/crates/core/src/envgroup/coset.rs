//! Todd–Coxeter coset enumeration (HLT strategy) over the trivial subgroup.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{EnvGroupError, Letter, Word};

/// A relator as a list of table columns (`2g` for a generator, `2g+1` for its inverse).
pub(crate) type Relator = Vec<usize>;

/// Freely and cyclically reduces a relator; `None` if it becomes trivial.
pub(crate) fn reduce_relator(mut r: Relator) -> Option<Relator> {
    let mut out: Vec<usize> = Vec::with_capacity(r.len());
    for c in r.drain(..) {
        if out.last() == Some(&(c ^ 1)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    while out.len() >= 2 && out[0] == out[out.len() - 1] ^ 1 {
        out.pop();
        out.remove(0);
    }
    (!out.is_empty()).then_some(out)
}

struct Enumerator<'a> {
    width: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    relators: &'a [Relator],
    max_cosets: usize,
}

impl<'a> Enumerator<'a> {
    fn new(generators: usize, relators: &'a [Relator], max_cosets: usize) -> Self {
        Enumerator {
            width: 2 * generators,
            table: vec![vec![None; 2 * generators]],
            parent: vec![0],
            relators,
            max_cosets,
        }
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn define(&mut self, c: usize, col: usize) -> Result<(), EnvGroupError> {
        let n = self.table.len();
        if n >= self.max_cosets {
            return Err(EnvGroupError::CosetLimitExceeded(self.max_cosets));
        }
        self.table.push(vec![None; self.width]);
        self.parent.push(n);
        self.table[c][col] = Some(n);
        self.table[n][col ^ 1] = Some(c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for col in 0..self.width {
                let Some(f) = self.table[e][col] else { continue };
                if self.table[f][col ^ 1] == Some(e) {
                    self.table[f][col ^ 1] = None;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if let Some(t) = self.table[e1][col] {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.table[f1][col ^ 1] {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][col] = Some(f1);
                    self.table[f1][col ^ 1] = Some(e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), EnvGroupError> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(next) => {
                        b = next;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn run(&mut self) -> Result<(), EnvGroupError> {
        let mut c = 0;
        while c < self.table.len() {
            if self.alive(c) {
                for r in self.relators {
                    if !self.alive(c) {
                        break;
                    }
                    self.scan_and_fill(c, r)?;
                }
                if self.alive(c) {
                    for col in 0..self.width {
                        if self.table[c][col].is_none() {
                            self.define(c, col)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }
}

/// The finite group `H` as its regular right action on itself, with section words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteQuotient {
    order: usize,
    /// `table[c][2g]` is `c·g`, `table[c][2g+1]` is `c·g⁻¹`.
    table: Vec<Vec<usize>>,
    sections: Vec<Word>,
}

impl FiniteQuotient {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_generators(&self) -> usize {
        self.table.first().map_or(0, |r| r.len() / 2)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Section word of each element; the identity (element 0) has the empty word.
    pub fn sections(&self) -> &[Word] {
        &self.sections
    }

    pub fn act(&self, c: usize, letter: Letter) -> usize {
        self.table[c][letter.column()]
    }

    pub fn trace(&self, c: usize, word: &Word) -> usize {
        word.letters().iter().fold(c, |c, &l| self.act(c, l))
    }

    /// Element represented by a word.
    pub fn element_of(&self, word: &Word) -> usize {
        self.trace(0, word)
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.trace(a, &self.sections[b])
    }

    /// Generators `(g, h)` and a coset where `g·h ≠ h·g`.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize, usize)> {
        let k = self.num_generators();
        for c in 0..self.order {
            for g in 0..k {
                for h in g + 1..k {
                    let gh = self.table[self.table[c][2 * g]][2 * h];
                    let hg = self.table[self.table[c][2 * h]][2 * g];
                    if gh != hg {
                        return Some((g, h, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    /// `true` when every relator traces a closed loop from every element.
    pub(crate) fn satisfies(&self, relators: &[Relator]) -> bool {
        (0..self.order).all(|c| {
            relators
                .iter()
                .all(|r| r.iter().fold(c, |c, &col| self.table[c][col]) == c)
        })
    }
}

/// Enumerates the cosets of the trivial subgroup of `⟨generators | relators⟩`.
pub(crate) fn enumerate(
    generators: usize,
    relators: &[Relator],
    max_cosets: usize,
) -> Result<FiniteQuotient, EnvGroupError> {
    let mut en = Enumerator::new(generators, relators, max_cosets.max(1));
    en.run()?;

    // Renumber live cosets in breadth-first order; the BFS tree gives the sections.
    let width = en.width;
    let mut index = vec![usize::MAX; en.table.len()];
    let mut order = vec![0usize];
    let mut sections = vec![Word::default()];
    index[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for col in 0..width {
            let raw = en.table[c][col].expect("complete table");
            let t = en.rep(raw);
            if index[t] == usize::MAX {
                index[t] = order.len();
                let mut w = sections[index[c]].clone();
                w.push(Letter::from_column(col));
                sections.push(w);
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut table = Vec::with_capacity(order.len());
    for &c in &order {
        let row = (0..width)
            .map(|col| {
                let t = en.table[c][col].expect("complete table");
                index[en.rep(t)]
            })
            .collect();
        table.push(row);
    }
    Ok(FiniteQuotient {
        order: order.len(),
        table,
        sections,
    })
}
