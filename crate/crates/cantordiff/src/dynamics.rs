//! Per-element dynamics: exact derivatives, fixed and periodic points,
//! hyperbolicity, and element order.
//!
//! On a rule (u, v, e) the element acts as a ±affine map with slope
//! (-1)^e (2n-1)^{|u|-|v|}, so derivatives are exact signed rationals of
//! the form ±(2n-1)^k. A fixed point with |derivative| != 1 is
//! hyperbolic and forces infinite order.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::address::{Address, Arity};
use crate::clopen::ClopenSet;
use crate::element::{Element, Rule, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};

/// The fixed-point set of an element: a clopen pointwise-fixed part plus
/// finitely many isolated fixed points, each with its exact derivative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSet {
    pub clopen_part: ClopenSet,
    /// Sorted by position on the line.
    pub isolated: Vec<(Address, BigRational)>,
}

impl FixedSet {
    pub fn empty(arity: Arity) -> Self {
        FixedSet { clopen_part: ClopenSet::empty(arity), isolated: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.clopen_part.is_empty() && self.isolated.is_empty()
    }

    pub fn contains(&self, x: &Address) -> Result<bool> {
        Ok(self.clopen_part.contains_address(x)? || self.isolated.iter().any(|(p, _)| p == x))
    }

    /// Equality as point sets, ignoring the derivative tags (powers of an
    /// element share fixed points but not derivatives).
    pub fn same_points(&self, other: &FixedSet) -> bool {
        self.clopen_part == other.clopen_part
            && self.isolated.len() == other.isolated.len()
            && self
                .isolated
                .iter()
                .zip(&other.isolated)
                .all(|((p, _), (q, _))| p == q)
    }

    /// All fixed points as addresses: isolated points plus the corner
    /// addresses of the clopen part (a finite sample of it).
    pub fn sample_points(&self) -> Vec<Address> {
        let mut out: Vec<Address> = self.isolated.iter().map(|(p, _)| p.clone()).collect();
        for c in self.clopen_part.cells() {
            out.push(c.floor_address());
            out.push(c.ceil_address());
        }
        out
    }
}

/// Result of an order computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderResult {
    /// g^k is the identity and no smaller positive power is.
    Finite(u64),
    Infinite(InfiniteWitness),
    /// A resource bound was hit before the order could be settled.
    Unknown { reason: String },
}

/// Why an element has infinite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfiniteWitness {
    /// g^power has a fixed point with |derivative| != 1; the derivative
    /// sequence along further powers is an infinite geometric sequence.
    Hyperbolic { power: u64, point: Address, derivative: BigRational },
    /// g^power moves a point even though the periodic set has stabilized,
    /// so the point has an infinite orbit.
    NonPeriodic { power: u64, point: Address },
}

/// The periodic points of g, as the fixed set of a verified stabilizing
/// power: Per(g) = Fix(g^N) once the transition graph of g^N certifies
/// that g^N has no periodic points beyond its fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSet {
    pub stabilizing_power: u64,
    pub set: FixedSet,
    pub stabilized: bool,
}

/// Exact derivative at a point: (-1)^e (2n-1)^{|u|-|v|} for the covering
/// rule (u, v, e).
pub fn derivative_at(g: &Element, x: &Address) -> Result<BigRational> {
    let rule = g.covering_rule(x)?;
    Ok(rule_slope(g.arity(), rule))
}

fn rule_slope(arity: Arity, rule: &Rule) -> BigRational {
    let b = BigInt::from(arity.base());
    let (dlen, rlen) = (rule.domain.len(), rule.range.len());
    let mut slope = if dlen >= rlen {
        BigRational::from(num_traits::pow::pow(b, dlen - rlen))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow::pow(b, rlen - dlen))
    };
    if rule.flip {
        slope = -slope;
    }
    slope
}

/// Exact fixed-point set of a reduced element, rule by rule. Each rule is
/// ±affine on its domain cell, so it contributes either the whole cell
/// (identity rule), one isolated point, or nothing.
pub fn fixed_points(g: &Element) -> FixedSet {
    let arity = g.arity();
    let mut clopen_cells: Vec<Vec<u8>> = Vec::new();
    let mut isolated: Vec<(Address, BigRational)> = Vec::new();
    for rule in g.rules() {
        let u = &rule.domain;
        let v = &rule.range;
        if u == v {
            if !rule.flip {
                clopen_cells.push(u.clone());
            } else if arity.get() % 2 == 1 {
                // The flip of a cell fixes only its center; the center
                // address m^inf exists in K_n only for odd n.
                let m = ((arity.get() - 1) / 2) as u8;
                let p = Address::new(arity, u.clone(), vec![m]).unwrap();
                isolated.push((p.clone(), rule_slope(arity, rule)));
            }
        } else if v.starts_with(u.as_slice()) {
            // Contracting rule: v = u·t, one attracting fixed point.
            let t = &v[u.len()..];
            let period: Vec<u8> = if rule.flip {
                t.iter()
                    .copied()
                    .chain(t.iter().map(|&d| arity.complement_digit(d)))
                    .collect()
            } else {
                t.to_vec()
            };
            let p = Address::new(arity, u.clone(), period).unwrap();
            isolated.push((p, rule_slope(arity, rule)));
        } else if u.starts_with(v.as_slice()) {
            // Expanding rule: u = v·t, the mirror repelling point.
            let t = &u[v.len()..];
            let period: Vec<u8> = if rule.flip {
                t.iter()
                    .copied()
                    .chain(t.iter().map(|&d| arity.complement_digit(d)))
                    .collect()
            } else {
                t.to_vec()
            };
            let p = Address::new(arity, v.clone(), period).unwrap();
            isolated.push((p, rule_slope(arity, rule)));
        }
        // Prefix-incomparable u, v: the rule moves its whole cell away.
    }
    isolated.sort_by(|(a, _), (b, _)| a.compare(b).unwrap());
    FixedSet {
        clopen_part: ClopenSet::normalize_words(arity, clopen_cells),
        isolated,
    }
}

/// Rule-transition graph of g: edge i -> j when some point of rule i's
/// range cell lies in rule j's domain cell, i.e. the two words are
/// prefix-comparable. The itinerary of any orbit is a walk here.
fn transition_graph(g: &Element) -> Vec<Vec<usize>> {
    let rules = g.rules();
    let m = rules.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, r) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            let v = &r.range;
            let u2 = &r2.domain;
            if v.starts_with(u2.as_slice()) || u2.starts_with(v.as_slice()) {
                adj[i].push(j);
            }
        }
    }
    adj
}

/// Lengths of simple cycles in the transition graph. A cycle whose rules
/// carry an odd number of flips is counted at twice its length: the
/// first return reverses orientation, so only the second return can fix
/// points.
fn cycle_lengths(g: &Element) -> BTreeSet<usize> {
    let rules = g.rules();
    let adj = transition_graph(g);
    let mut lengths = BTreeSet::new();
    // DFS over simple paths from each start node; abort the enumeration
    // past a step budget. Missed cycles only delay the certificate in
    // periodic_points, they never make it unsound.
    let mut budget: usize = 100_000;
    for start in 0..rules.len() {
        let mut on_path = vec![false; rules.len()];
        let parity = rules[start].flip as usize;
        dfs_cycles(start, start, parity, rules, &adj, &mut on_path, 0, &mut lengths, &mut budget);
        if budget == 0 {
            break;
        }
    }
    lengths
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    start: usize,
    node: usize,
    parity: usize,
    rules: &[Rule],
    adj: &[Vec<usize>],
    on_path: &mut [bool],
    depth: usize,
    lengths: &mut BTreeSet<usize>,
    budget: &mut usize,
) {
    if *budget == 0 {
        return;
    }
    *budget -= 1;
    on_path[node] = true;
    for &next in &adj[node] {
        if next == start {
            let len = depth + 1;
            lengths.insert(if parity % 2 == 1 { 2 * len } else { len });
        } else if next > start && !on_path[next] {
            let parity = parity + rules[next].flip as usize;
            dfs_cycles(start, next, parity, rules, adj, on_path, depth + 1, lengths, budget);
        }
    }
    on_path[node] = false;
}

/// Certificate that Per(g) = Fix(g), checked exactly on the transition
/// graph. Requires every cycle to be a self-loop and no self-loop to be
/// a flipped identity cell.
///
/// Soundness: a periodic point's itinerary is a periodic walk; in a
/// graph whose only cycles are self-loops a periodic walk is constant,
/// so the orbit stays in one rule's cell and g acts on it as a single
/// affine map. An affine map has no periodic points beyond its fixed
/// points unless it is a flipped involution of the whole cell, which the
/// second condition excludes.
fn periodicity_certified(g: &Element) -> bool {
    let rules = g.rules();
    let adj = transition_graph(g);
    for (i, out) in adj.iter().enumerate() {
        for &j in out {
            if j == i {
                let r = &rules[i];
                if r.flip && r.domain == r.range {
                    return false;
                }
            } else if reaches(&adj, j, i) {
                return false;
            }
        }
    }
    true
}

fn reaches(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if seen[v] {
            continue;
        }
        seen[v] = true;
        stack.extend(adj[v].iter().copied());
    }
    false
}

fn lcm_capped(lengths: &BTreeSet<usize>, cap: u64) -> u64 {
    let mut l: u64 = 1;
    for &len in lengths {
        let len = len as u64;
        let g = gcd(l, len);
        let next = (l / g).saturating_mul(len);
        if next > cap {
            return l;
        }
        l = next;
    }
    l
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Compute Per(g) as Fix(g^L): L starts at the lcm of the cell cycle
/// lengths of g and is escalated by the cycle structure of g^L itself
/// until `periodicity_certified` accepts g^L. The certificate gives
/// Per(g) = Per(g^L) = Fix(g^L) exactly, which in particular implies
/// Fix(g^L) = Fix(g^{2L}).
pub fn periodic_points(g: &Element, max_rounds: u32) -> Result<PeriodicSet> {
    periodic_points_with_depth(g, max_rounds, DEFAULT_MAX_DEPTH)
}

pub fn periodic_points_with_depth(
    g: &Element,
    max_rounds: u32,
    max_depth: usize,
) -> Result<PeriodicSet> {
    let mut power = lcm_capped(&cycle_lengths(g), 1 << 20).max(1);
    let mut last = None;
    for _ in 0..max_rounds.max(1) {
        let gl = g.pow_with_depth(power, max_depth)?;
        if periodicity_certified(&gl) {
            let set = fixed_points(&gl);
            return Ok(PeriodicSet { stabilizing_power: power, set, stabilized: true });
        }
        last = Some((power, fixed_points(&gl)));
        // Escalate by the cycle structure of g^L (in units of L steps);
        // flipped self-loops contribute 2 via the parity adjustment.
        let factor = lcm_capped(&cycle_lengths(&gl), 1 << 20).max(2);
        power = power.saturating_mul(factor);
    }
    let (power, set) = last.expect("at least one round runs");
    Ok(PeriodicSet { stabilizing_power: power, set, stabilized: false })
}

/// Decide the order of an element.
///
/// A hyperbolic isolated fixed point of any computed power forces
/// Infinite immediately. Otherwise the stabilized periodic set decides:
/// if g^L is the identity the order is the least divisor d of L with
/// g^d = id; if g^L is not the identity, any point it moves is
/// non-periodic and so has an infinite orbit. Resource exhaustion is
/// reported as Unknown, never silently converted.
pub fn order(g: &Element, max_rounds: u32) -> OrderResult {
    order_with_depth(g, max_rounds, DEFAULT_MAX_DEPTH)
}

pub fn order_with_depth(g: &Element, max_rounds: u32, max_depth: usize) -> OrderResult {
    if g.is_identity() {
        return OrderResult::Finite(1);
    }
    if let Some(w) = hyperbolic_point(g, 1) {
        return OrderResult::Infinite(w);
    }
    let periodic = match periodic_points_with_depth(g, max_rounds, max_depth) {
        Ok(p) => p,
        Err(Error::DepthExceeded { depth, max }) => {
            return OrderResult::Unknown {
                reason: format!("cell depth {depth} exceeded the bound {max} while powering"),
            }
        }
        Err(e) => return OrderResult::Unknown { reason: e.to_string() },
    };
    let l = periodic.stabilizing_power;
    let gl = match g.pow_with_depth(l, max_depth) {
        Ok(gl) => gl,
        Err(e) => return OrderResult::Unknown { reason: e.to_string() },
    };
    if let Some(w) = hyperbolic_point(&gl, l) {
        return OrderResult::Infinite(w);
    }
    if !periodic.stabilized {
        return OrderResult::Unknown {
            reason: format!(
                "periodic set did not stabilize within {max_rounds} rounds (last power {l})"
            ),
        };
    }
    if gl.is_identity() {
        // Least divisor d of L with g^d = id.
        let mut divisors: Vec<u64> = (1..=l).filter(|d| l % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            match g.pow_with_depth(d, max_depth) {
                Ok(gd) if gd.is_identity() => return OrderResult::Finite(d),
                Ok(_) => {}
                Err(e) => return OrderResult::Unknown { reason: e.to_string() },
            }
        }
        unreachable!("g^L is the identity, so some divisor of L works");
    }
    // Per(g) = Fix(g^L) is verified, yet g^L moves some point: that point
    // is not periodic, hence its orbit is infinite.
    let witness = gl
        .corner_addresses()
        .into_iter()
        .find(|x| gl.apply(x).unwrap() != *x)
        .expect("a non-identity element moves some corner address");
    OrderResult::Infinite(InfiniteWitness::NonPeriodic { power: l, point: witness })
}

fn hyperbolic_point(g: &Element, power: u64) -> Option<InfiniteWitness> {
    let fs = fixed_points(g);
    fs.isolated
        .into_iter()
        .find(|(_, d)| d.abs() != BigRational::one())
        .map(|(point, derivative)| InfiniteWitness::Hyperbolic { power, point, derivative })
}
