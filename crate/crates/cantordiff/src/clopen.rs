//! Clopen subsets of K_n as normalized antichains of cells.
//!
//! Every clopen subset of K_n is a finite union of cells and has a unique
//! normal form: an antichain (no cell's word is a prefix of another's)
//! with no complete sibling family (if all n children of a word are
//! present they are merged into the parent). Structural equality on
//! normal forms decides set equality.

use std::collections::BTreeSet;

use crate::address::{Address, Arity, Cell};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    arity: Arity,
    /// Sorted lexicographically; antichain; sibling-merged.
    cells: Vec<Vec<u8>>,
}

impl ClopenSet {
    pub fn empty(arity: Arity) -> Self {
        ClopenSet { arity, cells: Vec::new() }
    }

    /// All of K_n.
    pub fn full(arity: Arity) -> Self {
        ClopenSet { arity, cells: vec![Vec::new()] }
    }

    /// Normalize an arbitrary list of cells into the unique antichain
    /// normal form covering the same union.
    pub fn normalize(arity: Arity, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut words = BTreeSet::new();
        for c in cells {
            arity.check_match(c.arity())?;
            words.insert(c.word().to_vec());
        }
        Ok(Self::normalize_words(arity, words))
    }

    pub(crate) fn normalize_words(arity: Arity, words: impl IntoIterator<Item = Vec<u8>>) -> Self {
        let mut set: BTreeSet<Vec<u8>> = words.into_iter().collect();
        loop {
            // Prefix absorption: sorted order puts a prefix immediately
            // before its extensions.
            let mut kept: Vec<Vec<u8>> = Vec::with_capacity(set.len());
            for w in set.iter() {
                match kept.last() {
                    Some(prev) if w.starts_with(prev) => {}
                    _ => kept.push(w.clone()),
                }
            }
            // Complete sibling merge.
            let n = arity.get() as usize;
            let mut merged = BTreeSet::new();
            let mut changed = false;
            let mut i = 0;
            while i < kept.len() {
                let w = &kept[i];
                if !w.is_empty()
                    && *w.last().unwrap() == 0
                    && i + n <= kept.len()
                    && (1..n).all(|d| {
                        let sib = &kept[i + d];
                        sib.len() == w.len()
                            && sib[..w.len() - 1] == w[..w.len() - 1]
                            && sib[w.len() - 1] == d as u8
                    })
                {
                    merged.insert(w[..w.len() - 1].to_vec());
                    changed = true;
                    i += n;
                } else {
                    merged.insert(w.clone());
                    i += 1;
                }
            }
            if !changed && merged.len() == set.len() {
                return ClopenSet { arity, cells: merged.into_iter().collect() };
            }
            set = merged;
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cells.len() == 1 && self.cells[0].is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().map(|w| Cell::new(self.arity, w.clone()).unwrap())
    }

    pub fn cell_words(&self) -> &[Vec<u8>] {
        &self.cells
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.arity.check_match(other.arity)?;
        Ok(Self::normalize_words(
            self.arity,
            self.cells.iter().chain(other.cells.iter()).cloned(),
        ))
    }

    pub fn intersection(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.arity.check_match(other.arity)?;
        // Two cells intersect iff one word is a prefix of the other, and
        // then the intersection is the deeper cell.
        let mut out = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if a.starts_with(b) {
                    out.push(a.clone());
                } else if b.starts_with(a) {
                    out.push(b.clone());
                }
            }
        }
        Ok(Self::normalize_words(self.arity, out))
    }

    /// Complement relative to all of K_n.
    pub fn complement(&self) -> ClopenSet {
        let mut out = Vec::new();
        self.complement_rec(&mut Vec::new(), &self.cells.iter().collect::<Vec<_>>(), &mut out);
        Self::normalize_words(self.arity, out)
    }

    fn complement_rec(&self, prefix: &mut Vec<u8>, covering: &[&Vec<u8>], out: &mut Vec<Vec<u8>>) {
        if covering.iter().any(|w| w.len() == prefix.len()) {
            // prefix itself is covered
            return;
        }
        if covering.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for d in 0..self.arity.get() as u8 {
            prefix.push(d);
            let sub: Vec<&Vec<u8>> =
                covering.iter().filter(|w| w[prefix.len() - 1] == d).copied().collect();
            self.complement_rec(prefix, &sub, out);
            prefix.pop();
        }
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        self.arity.check_match(other.arity)?;
        // In normal form a cell is covered iff some cell of `other` is a
        // prefix of it.
        Ok(self
            .cells
            .iter()
            .all(|a| other.cells.iter().any(|b| a.starts_with(b.as_slice()))))
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    pub fn contains_address(&self, x: &Address) -> Result<bool> {
        self.arity.check_match(x.arity())?;
        Ok(self.cells.iter().any(|w| x.starts_with(w)))
    }

    pub fn contains_cell(&self, c: &Cell) -> Result<bool> {
        self.arity.check_match(c.arity())?;
        Ok(self.cells.iter().any(|w| c.word().starts_with(w.as_slice())))
    }
}
