//! Tree-pair diagrams with flips: the elements of diff(K_n).
//!
//! An element is a finite list of rules (domain cell, range cell, flip
//! bit) whose domain cells and range cells each form a complete prefix
//! code. Rule (u, v, e) maps every address u·s to v·σ^e(s), where σ is
//! the digitwise complement a -> n-1-a. The complement is the address
//! action of the orientation-reversing affine flip of a cell: K_n is
//! invariant under the reflection of each cell, and the reflection
//! permutes the kept subintervals by a -> n-1-a.
//!
//! Elements with every flip bit 0 form the Higman-Thompson group V_n.
//!
//! Elements are kept in reduced form: no complete sibling rule family is
//! mergeable, and rules are sorted by domain word. Two elements represent
//! the same map iff their reduced forms are identical; the engine asserts
//! this for the sibling-merge system and defends it with confluence
//! property tests.

use std::fmt;

use crate::address::{Address, Arity, Cell};
use crate::clopen::ClopenSet;
use crate::error::{Error, Result};

/// Default bound on cell depth during composition and powering.
pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub domain: Vec<u8>,
    pub range: Vec<u8>,
    pub flip: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    arity: Arity,
    /// Sorted by domain word; reduced.
    rules: Vec<Rule>,
}

fn complement_word(arity: Arity, w: &[u8]) -> Vec<u8> {
    w.iter().map(|&d| arity.complement_digit(d)).collect()
}

/// Check that a list of words is a complete prefix code: an antichain
/// whose union is all of K_n.
fn check_prefix_code(arity: Arity, words: &[&[u8]], side: &'static str) -> Result<()> {
    let mut sorted: Vec<&[u8]> = words.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[1].starts_with(pair[0]) {
            return Err(Error::IncompletePrefixCode {
                side,
                detail: format!(
                    "cell {} overlaps cell {}",
                    format_word(pair[0]),
                    format_word(pair[1])
                ),
            });
        }
    }
    let covered =
        ClopenSet::normalize_words(arity, sorted.iter().map(|w| w.to_vec()));
    if !covered.is_full() {
        let missing = covered.complement();
        let word = missing
            .cell_words()
            .first()
            .map(|w| format_word(w))
            .unwrap_or_default();
        return Err(Error::IncompletePrefixCode {
            side,
            detail: format!("missing {}", word),
        });
    }
    Ok(())
}

pub(crate) fn format_word(w: &[u8]) -> String {
    if w.is_empty() {
        "*".to_string()
    } else {
        w.iter().map(|d| char::from_digit(*d as u32, 36).unwrap()).collect()
    }
}

impl Element {
    /// Build an element from rules, validating both prefix codes and
    /// returning the reduced form.
    pub fn new(arity: Arity, rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            arity.check_word(&r.domain)?;
            arity.check_word(&r.range)?;
        }
        let domains: Vec<&[u8]> = rules.iter().map(|r| r.domain.as_slice()).collect();
        let ranges: Vec<&[u8]> = rules.iter().map(|r| r.range.as_slice()).collect();
        check_prefix_code(arity, &domains, "domain")?;
        check_prefix_code(arity, &ranges, "range")?;
        let mut e = Element { arity, rules };
        e.reduce_in_place();
        Ok(e)
    }

    pub fn identity(arity: Arity) -> Self {
        Element {
            arity,
            rules: vec![Rule { domain: vec![], range: vec![], flip: false }],
        }
    }

    /// The global flip: digitwise complement of every address.
    pub fn global_flip(arity: Arity) -> Self {
        Element {
            arity,
            rules: vec![Rule { domain: vec![], range: vec![], flip: true }],
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_identity(&self) -> bool {
        self.rules.len() == 1
            && self.rules[0].domain.is_empty()
            && self.rules[0].range.is_empty()
            && !self.rules[0].flip
    }

    pub fn max_depth(&self) -> usize {
        self.rules
            .iter()
            .map(|r| r.domain.len().max(r.range.len()))
            .max()
            .unwrap_or(0)
    }

    /// The unique rule whose domain cell contains the address.
    pub fn covering_rule(&self, x: &Address) -> Result<&Rule> {
        self.arity.check_match(x.arity())?;
        Ok(self
            .rules
            .iter()
            .find(|r| x.starts_with(&r.domain))
            .expect("complete prefix code covers every address"))
    }

    /// Apply the element to a point.
    pub fn apply(&self, x: &Address) -> Result<Address> {
        let rule = self.covering_rule(x)?;
        let suffix = x.shift(rule.domain.len());
        let suffix = if rule.flip { suffix.complement() } else { suffix };
        Ok(suffix.prepend(&rule.range))
    }

    /// g.compose(f) is "g after f": apply(g.compose(f), x) = g(f(x)).
    pub fn compose(&self, f: &Element) -> Result<Element> {
        self.compose_with_depth(f, DEFAULT_MAX_DEPTH)
    }

    pub fn compose_with_depth(&self, f: &Element, max_depth: usize) -> Result<Element> {
        self.arity.check_match(f.arity)?;
        let mut rules = Vec::new();
        for rf in &f.rules {
            for rg in &self.rules {
                if rg.domain.starts_with(&rf.range) {
                    // g's domain u' = v·s sits inside f's range cell: the
                    // composite acts on f's preimage of u'.
                    let s = &rg.domain[rf.range.len()..];
                    let s_dom = if rf.flip {
                        complement_word(self.arity, s)
                    } else {
                        s.to_vec()
                    };
                    let mut domain = rf.domain.clone();
                    domain.extend_from_slice(&s_dom);
                    rules.push(Rule {
                        domain,
                        range: rg.range.clone(),
                        flip: rf.flip ^ rg.flip,
                    });
                } else if rf.range.starts_with(&rg.domain) && rf.range.len() > rg.domain.len() {
                    // f's range cell v = u'·s sits strictly inside g's
                    // domain cell.
                    let s = &rf.range[rg.domain.len()..];
                    let s_ran = if rg.flip {
                        complement_word(self.arity, s)
                    } else {
                        s.to_vec()
                    };
                    let mut range = rg.range.clone();
                    range.extend_from_slice(&s_ran);
                    rules.push(Rule {
                        domain: rf.domain.clone(),
                        range,
                        flip: rf.flip ^ rg.flip,
                    });
                }
            }
        }
        for r in &rules {
            let depth = r.domain.len().max(r.range.len());
            if depth > max_depth {
                return Err(Error::DepthExceeded { depth, max: max_depth });
            }
        }
        let mut e = Element { arity: self.arity, rules };
        e.reduce_in_place();
        Ok(e)
    }

    pub fn inverse(&self) -> Element {
        let rules = self
            .rules
            .iter()
            .map(|r| Rule { domain: r.range.clone(), range: r.domain.clone(), flip: r.flip })
            .collect();
        let mut e = Element { arity: self.arity, rules };
        e.reduce_in_place();
        e
    }

    /// Reduced form: merge complete sibling rule families to a fixed
    /// point and sort by domain word. {(u·a -> v·a, 0)} merges to
    /// (u -> v, 0); {(u·a -> v·(n-1-a), 1)} merges to (u -> v, 1).
    pub fn reduce(&self) -> Element {
        let mut e = self.clone();
        e.reduce_in_place();
        e
    }

    fn reduce_in_place(&mut self) {
        let n = self.arity.get() as usize;
        loop {
            self.rules.sort();
            let mut merged: Vec<Rule> = Vec::with_capacity(self.rules.len());
            let mut changed = false;
            let mut i = 0;
            while i < self.rules.len() {
                if let Some(parent) = self.try_merge_family(i, n) {
                    merged.push(parent);
                    changed = true;
                    i += n;
                } else {
                    merged.push(self.rules[i].clone());
                    i += 1;
                }
            }
            self.rules = merged;
            if !changed {
                return;
            }
        }
    }

    fn try_merge_family(&self, i: usize, n: usize) -> Option<Rule> {
        if i + n > self.rules.len() {
            return None;
        }
        let first = &self.rules[i];
        let dlen = first.domain.len();
        let rlen = first.range.len();
        if dlen == 0 || rlen == 0 || *first.domain.last().unwrap() != 0 {
            return None;
        }
        let flip = first.flip;
        let expected_first_range_digit = if flip { (n - 1) as u8 } else { 0 };
        if *first.range.last().unwrap() != expected_first_range_digit {
            return None;
        }
        let du = &first.domain[..dlen - 1];
        let rv = &first.range[..rlen - 1];
        for a in 0..n {
            let r = &self.rules[i + a];
            let expected_range_digit = if flip { (n - 1 - a) as u8 } else { a as u8 };
            if r.flip != flip
                || r.domain.len() != dlen
                || r.range.len() != rlen
                || &r.domain[..dlen - 1] != du
                || r.domain[dlen - 1] != a as u8
                || &r.range[..rlen - 1] != rv
                || r.range[rlen - 1] != expected_range_digit
            {
                return None;
            }
        }
        Some(Rule { domain: du.to_vec(), range: rv.to_vec(), flip })
    }

    /// Replace one rule by its n children; the represented map is
    /// unchanged. Inverse of one reduce step.
    pub fn expand(&self, rule_index: usize) -> Result<Element> {
        if rule_index >= self.rules.len() {
            return Err(Error::RuleIndexOutOfRange { index: rule_index, len: self.rules.len() });
        }
        let n = self.arity.get() as u8;
        let mut rules: Vec<Rule> = Vec::with_capacity(self.rules.len() + n as usize - 1);
        for (i, r) in self.rules.iter().enumerate() {
            if i != rule_index {
                rules.push(r.clone());
                continue;
            }
            for a in 0..n {
                let mut domain = r.domain.clone();
                domain.push(a);
                let mut range = r.range.clone();
                range.push(if r.flip { self.arity.complement_digit(a) } else { a });
                rules.push(Rule { domain, range, flip: r.flip });
            }
        }
        rules.sort();
        // Deliberately not reduced: expand is the inverse of a reduce step.
        Ok(Element { arity: self.arity, rules })
    }

    /// Exact image of a clopen set.
    pub fn image(&self, set: &ClopenSet) -> Result<ClopenSet> {
        self.arity.check_match(set.arity())?;
        let mut out = Vec::new();
        for w in set.cell_words() {
            for r in &self.rules {
                if w.starts_with(&r.domain) {
                    // Cell at or below rule depth: maps to v·σ^e(s).
                    let s = &w[r.domain.len()..];
                    let mut img = r.range.clone();
                    if r.flip {
                        img.extend(complement_word(self.arity, s));
                    } else {
                        img.extend_from_slice(s);
                    }
                    out.push(img);
                } else if r.domain.starts_with(w.as_slice()) && r.domain.len() > w.len() {
                    // Rule strictly deeper: the whole range cell is hit.
                    out.push(r.range.clone());
                }
            }
        }
        Ok(ClopenSet::normalize_words(self.arity, out))
    }

    /// Power by repeated squaring, reducing at each step.
    pub fn pow(&self, exp: u64) -> Result<Element> {
        self.pow_with_depth(exp, DEFAULT_MAX_DEPTH)
    }

    pub fn pow_with_depth(&self, exp: u64, max_depth: usize) -> Result<Element> {
        let mut result = Element::identity(self.arity);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose_with_depth(&base, max_depth)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_with_depth(&base, max_depth)?;
            }
        }
        Ok(result)
    }

    /// Corner addresses of both prefix codes: a separating family for
    /// semantic equality of two elements of comparable depth.
    pub fn corner_addresses(&self) -> Vec<Address> {
        let mut out = Vec::new();
        for r in &self.rules {
            let c = Cell::new(self.arity, r.domain.clone()).unwrap();
            out.push(c.floor_address());
            out.push(c.ceil_address());
        }
        out
    }
}

impl fmt::Display for Element {
    /// Canonical text form, e.g. `n=2; 0->00, 10->01, 11->1` with `~`
    /// marking a flip and `*` the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; ", self.arity)?;
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}->{}{}",
                format_word(&r.domain),
                format_word(&r.range),
                if r.flip { "~" } else { "" }
            )?;
        }
        Ok(())
    }
}
