//! Finitely generated subgroup procedures: closure enumeration, orbits,
//! commutators, crossed-pair detection and ping-pong freeness
//! certificates.
//!
//! Freeness of a subsemigroup is certified only through exact ping-pong
//! inclusions on clopen sets; word-distinctness enumeration corroborates
//! a certificate but never replaces one.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use crate::address::{Address, Arity};
use crate::clopen::ClopenSet;
use crate::dynamics::fixed_points;
use crate::element::{Element, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};

/// A finite symmetric-closure-ready generating set: duplicates and the
/// identity are dropped on construction.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    arity: Arity,
    generators: Vec<Element>,
}

impl GeneratingSet {
    pub fn new(arity: Arity, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut generators: Vec<Element> = Vec::new();
        for e in elements {
            arity.check_match(e.arity())?;
            if !e.is_identity() && !generators.contains(&e) {
                generators.push(e);
            }
        }
        Ok(GeneratingSet { arity, generators })
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Generators and their inverses, deduplicated, sorted by canonical
    /// serialization for deterministic search order.
    pub fn letters(&self) -> Vec<Element> {
        let mut letters = self.generators.clone();
        for g in &self.generators {
            let inv = g.inverse();
            if !letters.contains(&inv) {
                letters.push(inv);
            }
        }
        letters.sort_by_key(|e| e.to_string());
        letters
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureResult {
    Finite { elements: Vec<Element>, multiplication_closed: bool },
    Exceeded { cap: usize, count_reached: usize },
}

/// BFS closure of the identity under right multiplication by generators
/// and inverses, deduplicating by reduced form.
pub fn enumerate_group(gens: &GeneratingSet, cap: usize) -> Result<ClosureResult> {
    enumerate_group_with_depth(gens, cap, DEFAULT_MAX_DEPTH)
}

pub fn enumerate_group_with_depth(
    gens: &GeneratingSet,
    cap: usize,
    max_depth: usize,
) -> Result<ClosureResult> {
    let letters = gens.letters();
    let mut seen: HashSet<Element> = HashSet::new();
    let mut elements: Vec<Element> = Vec::new();
    let mut queue: VecDeque<Element> = VecDeque::new();
    let id = Element::identity(gens.arity);
    seen.insert(id.clone());
    elements.push(id.clone());
    queue.push_back(id);
    while let Some(e) = queue.pop_front() {
        for s in &letters {
            let next = e.compose_with_depth(s, max_depth)?;
            if seen.insert(next.clone()) {
                if elements.len() >= cap {
                    return Ok(ClosureResult::Exceeded { cap, count_reached: cap });
                }
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(ClosureResult::Finite { elements, multiplication_closed: true })
}

/// The commutator g h g^{-1} h^{-1}, reduced.
pub fn commutator(g: &Element, h: &Element) -> Result<Element> {
    g.compose(h)?.compose(&g.inverse())?.compose(&h.inverse())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitResult {
    Finite(Vec<Address>),
    Exceeded { cap: usize, count_reached: usize },
}

/// BFS closure of a point under the generators and their inverses.
pub fn orbit(x: &Address, gens: &GeneratingSet, cap: usize) -> Result<OrbitResult> {
    gens.arity.check_match(x.arity())?;
    let letters = gens.letters();
    let mut seen: HashSet<Address> = HashSet::new();
    let mut points: Vec<Address> = Vec::new();
    let mut queue: VecDeque<Address> = VecDeque::new();
    seen.insert(x.clone());
    points.push(x.clone());
    queue.push_back(x.clone());
    while let Some(p) = queue.pop_front() {
        for s in &letters {
            let next = s.apply(&p)?;
            if seen.insert(next.clone()) {
                if points.len() >= cap {
                    return Ok(OrbitResult::Exceeded { cap, count_reached: cap });
                }
                points.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    points.sort_by(|a, b| a.compare(b).unwrap());
    Ok(OrbitResult::Finite(points))
}

/// Exact positive ping-pong certificate: A, B nonempty and disjoint with
/// h1(A ∪ B) ⊆ A and h2(A ∪ B) ⊆ B. A true result certifies that the
/// subsemigroup generated by h1 and h2 is free.
pub fn pingpong_verify(
    h1: &Element,
    h2: &Element,
    a: &ClopenSet,
    b: &ClopenSet,
) -> Result<bool> {
    h1.arity().check_match(h2.arity())?;
    h1.arity().check_match(a.arity())?;
    h1.arity().check_match(b.arity())?;
    if a.is_empty() || b.is_empty() || !a.is_disjoint(b)? {
        return Ok(false);
    }
    let ab = a.union(b)?;
    Ok(h1.image(&ab)?.is_subset(a)? && h2.image(&ab)?.is_subset(b)?)
}

/// Check that all positive words of length <= max_len in {f1, f2} have
/// pairwise distinct reduced forms. Necessary for freeness of the
/// subsemigroup, not sufficient; the certificate is `pingpong_verify`.
pub fn distinct_words_check(f1: &Element, f2: &Element, max_len: u32) -> Result<bool> {
    distinct_words_check_with_depth(f1, f2, max_len, DEFAULT_MAX_DEPTH)
}

pub fn distinct_words_check_with_depth(
    f1: &Element,
    f2: &Element,
    max_len: u32,
    max_depth: usize,
) -> Result<bool> {
    f1.arity().check_match(f2.arity())?;
    let mut seen: HashSet<Element> = HashSet::new();
    let mut layer = vec![Element::identity(f1.arity())];
    for _ in 0..max_len {
        let mut next_layer = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for letter in [f1, f2] {
                let next = w.compose_with_depth(letter, max_depth)?;
                if !seen.insert(next.clone()) {
                    return Ok(false);
                }
                next_layer.push(next);
            }
        }
        layer = next_layer;
    }
    Ok(true)
}

/// A machine-checked witness that the subgroup generated by the input
/// set contains a free subsemigroup on two generators: a crossed pair
/// (g, h) with fixed points p1 < p2 of g, together with ping-pong data
/// (f1, f2, A, B) built from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedWitness {
    pub g: Element,
    pub h: Element,
    pub p1: Address,
    pub p2: Address,
    pub power: u64,
    pub f1: Element,
    pub f2: Element,
    pub a: ClopenSet,
    pub b: ClopenSet,
}

impl CrossedWitness {
    /// Re-verify every invariant of the witness from scratch.
    pub fn verify(&self) -> Result<bool> {
        if self.p1.compare(&self.p2)? != Ordering::Less {
            return Ok(false);
        }
        if self.g.apply(&self.p1)? != self.p1 || self.g.apply(&self.p2)? != self.p2 {
            return Ok(false);
        }
        let fs = fixed_points(&self.g);
        for q in fs.sample_points() {
            if self.p1.compare(&q)? == Ordering::Less && q.compare(&self.p2)? == Ordering::Less {
                return Ok(false);
            }
        }
        if !increasing_on(&self.g, &self.p1, &self.p2)?
            || !increasing_on(&self.h, &self.p1, &self.p2)?
        {
            return Ok(false);
        }
        let h1 = self.h.apply(&self.p1)?;
        let h2 = self.h.apply(&self.p2)?;
        let strictly_between = |q: &Address| -> Result<bool> {
            Ok(self.p1.compare(q)? == Ordering::Less && q.compare(&self.p2)? == Ordering::Less)
        };
        if !(strictly_between(&h1)? || strictly_between(&h2)?) {
            return Ok(false);
        }
        pingpong_verify(&self.f1, &self.f2, &self.a, &self.b)
    }
}

/// All rules of g whose domain cell meets the closed interval [p1, p2]
/// have flip 0: in the affine model this is "g is increasing on
/// [p1, p2]".
fn increasing_on(g: &Element, p1: &Address, p2: &Address) -> Result<bool> {
    let c1 = p1.coordinate();
    let c2 = p2.coordinate();
    for rule in g.rules() {
        let cell = crate::address::Cell::new(g.arity(), rule.domain.clone())?;
        let (l, r) = cell.endpoints();
        if r >= c1 && l <= c2 && rule.flip {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search products of the generators up to the given length for a
/// crossed pair and construct a verified free-subsemigroup witness from
/// the first pair found.
pub fn find_crossed(gens: &GeneratingSet, search_depth: u32) -> Result<Option<CrossedWitness>> {
    find_crossed_with_depth(gens, search_depth, DEFAULT_MAX_DEPTH)
}

pub fn find_crossed_with_depth(
    gens: &GeneratingSet,
    search_depth: u32,
    max_depth: usize,
) -> Result<Option<CrossedWitness>> {
    let ball = generator_ball(gens, search_depth, max_depth)?;
    for g in &ball {
        if g.is_identity() {
            continue;
        }
        let pairs = adjacent_fixed_pairs(g)?;
        for (p1, p2) in &pairs {
            if !increasing_on(g, p1, p2)? {
                continue;
            }
            for h in &ball {
                if h.is_identity() || !increasing_on(h, p1, p2)? {
                    continue;
                }
                let moved_p1 = strictly_inside(&h.apply(p1)?, p1, p2)?;
                let moved_p2 = strictly_inside(&h.apply(p2)?, p1, p2)?;
                if !moved_p1 && !moved_p2 {
                    continue;
                }
                let endpoint = if moved_p1 { p1 } else { p2 };
                if let Some(w) =
                    build_witness(g, h, p1, p2, endpoint, search_depth, max_depth)?
                {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

fn strictly_inside(q: &Address, p1: &Address, p2: &Address) -> Result<bool> {
    Ok(p1.compare(q)? == Ordering::Less && q.compare(p2)? == Ordering::Less)
}

/// The ball of radius `depth` in the generators and their inverses, in
/// breadth-first length-lexicographic order.
fn generator_ball(
    gens: &GeneratingSet,
    depth: u32,
    max_depth: usize,
) -> Result<Vec<Element>> {
    let letters = gens.letters();
    let mut seen: HashSet<Element> = HashSet::new();
    let mut ball: Vec<Element> = Vec::new();
    let id = Element::identity(gens.arity);
    seen.insert(id.clone());
    ball.push(id);
    let mut layer_start = 0;
    for _ in 0..depth {
        let layer_end = ball.len();
        for i in layer_start..layer_end {
            let e = ball[i].clone();
            for s in &letters {
                match e.compose_with_depth(s, max_depth) {
                    Ok(next) => {
                        if seen.insert(next.clone()) {
                            ball.push(next);
                        }
                    }
                    // A product blowing past the depth bound is skipped,
                    // not fatal to the search.
                    Err(Error::DepthExceeded { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        layer_start = layer_end;
    }
    Ok(ball)
}

/// Consecutive fixed points of g with no fixed point strictly between:
/// sort all isolated fixed points and clopen-cell corners, then pair
/// neighbours, skipping the interior of a single fixed cell.
fn adjacent_fixed_pairs(g: &Element) -> Result<Vec<(Address, Address)>> {
    let fs = fixed_points(g);
    // (address, id of the clopen cell it bounds, if any)
    let mut tagged: Vec<(Address, Option<usize>)> = Vec::new();
    for (p, _) in &fs.isolated {
        tagged.push((p.clone(), None));
    }
    for (i, c) in fs.clopen_part.cells().enumerate() {
        tagged.push((c.floor_address(), Some(i)));
        tagged.push((c.ceil_address(), Some(i)));
    }
    tagged.sort_by(|(a, _), (b, _)| a.compare(b).unwrap());
    let mut pairs = Vec::new();
    for w in tagged.windows(2) {
        let (p1, t1) = &w[0];
        let (p2, t2) = &w[1];
        if t1.is_some() && t1 == t2 {
            continue; // interior of a pointwise-fixed cell
        }
        if p1 != p2 {
            pairs.push((p1.clone(), p2.clone()));
        }
    }
    Ok(pairs)
}

/// Build the ping-pong data near the endpoint that h pushes into the
/// interval: shrink a cell A around the endpoint until h(A) is disjoint
/// from A and inside the interval, flip to g^{-1} if g repels the
/// endpoint, then grow the exponent until g^n maps A ∪ h(A) into A.
fn build_witness(
    g: &Element,
    h: &Element,
    p1: &Address,
    p2: &Address,
    endpoint: &Address,
    search_depth: u32,
    max_depth: usize,
) -> Result<Option<CrossedWitness>> {
    let arity = g.arity();
    let other = if endpoint == p1 { p2 } else { p1 };
    // Direction: g must attract toward the chosen endpoint on (p1, p2).
    let probe = h.apply(endpoint)?;
    let g1 = {
        let moved = g.apply(&probe)?;
        let toward_endpoint = match endpoint.compare(other)? {
            Ordering::Less => moved.compare(&probe)? == Ordering::Less,
            _ => moved.compare(&probe)? == Ordering::Greater,
        };
        if toward_endpoint {
            g.clone()
        } else {
            g.inverse()
        }
    };
    for cell_depth in 1..=max_depth.min(24) {
        let word = endpoint.expansion_prefix(cell_depth);
        let a = ClopenSet::normalize_words(arity, vec![word]);
        if a.contains_address(other)? {
            continue;
        }
        let b = h.image(&a)?;
        if !a.is_disjoint(&b)? || b.contains_address(other)? || b.contains_address(endpoint)? {
            continue;
        }
        let ab = a.union(&b)?;
        let mut gn = Element::identity(arity);
        for n in 1..=search_depth.max(1) as u64 {
            gn = match gn.compose_with_depth(&g1, max_depth) {
                Ok(e) => e,
                Err(Error::DepthExceeded { .. }) => break,
                Err(e) => return Err(e),
            };
            if gn.image(&ab)?.is_subset(&a)? {
                let f1 = gn.clone();
                let f2 = h.compose_with_depth(&gn, max_depth)?;
                let witness = CrossedWitness {
                    g: g.clone(),
                    h: h.clone(),
                    p1: p1.clone(),
                    p2: p2.clone(),
                    power: n,
                    f1,
                    f2,
                    a: a.clone(),
                    b: b.clone(),
                };
                if witness.verify()? {
                    return Ok(Some(witness));
                }
                break;
            }
        }
    }
    Ok(None)
}
