//! Points of the Cantor set K_n as eventually periodic digit words, with
//! exact rational coordinates.
//!
//! K_n is built by keeping n regularly spaced subintervals of relative
//! length 1/(2n-1) at every step. A point is an infinite word over the
//! digits {0..n-1}; the engine restricts to eventually periodic words,
//! which are exactly the points reachable from one another by tree-pair
//! elements. Digit a at depth i contributes 2a(2n-1)^{-i} to the
//! coordinate: kept subinterval a of [0,1] occupies
//! [2a/(2n-1), (2a+1)/(2n-1)].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The number of kept subintervals per construction step. The subdivision
/// base of the ambient line is 2n-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arity(u32);

impl Arity {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArity(n));
        }
        Ok(Arity(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// The subdivision base 2n-1.
    pub fn base(self) -> u32 {
        2 * self.0 - 1
    }

    /// Digitwise complement a -> n-1-a, the address-level action of the
    /// orientation-reversing flip of a cell.
    pub fn complement_digit(self, d: u8) -> u8 {
        (self.0 - 1) as u8 - d
    }

    pub fn check_digit(self, d: u8) -> Result<()> {
        if (d as u32) < self.0 {
            Ok(())
        } else {
            Err(Error::DigitOutOfRange { digit: d, arity: self.0 })
        }
    }

    pub fn check_word(self, w: &[u8]) -> Result<()> {
        w.iter().try_for_each(|&d| self.check_digit(d))
    }

    pub fn check_match(self, other: Arity) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ArityMismatch { left: self.0, right: other.0 })
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An exact coordinate in [0,1].
pub type Coordinate = BigRational;

/// A finite digit word addressing one interval ("cell") of K_n. The empty
/// word addresses all of K_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    arity: Arity,
    word: Vec<u8>,
}

impl Cell {
    pub fn new(arity: Arity, word: Vec<u8>) -> Result<Self> {
        arity.check_word(&word)?;
        Ok(Cell { arity, word })
    }

    /// The root cell: all of K_n.
    pub fn root(arity: Arity) -> Self {
        Cell { arity, word: Vec::new() }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn child(&self, d: u8) -> Result<Self> {
        self.arity.check_digit(d)?;
        let mut word = self.word.clone();
        word.push(d);
        Ok(Cell { arity: self.arity, word })
    }

    /// Endpoints of the cell as a closed interval of the line; the right
    /// endpoint minus the left is (2n-1)^{-depth}.
    pub fn endpoints(&self) -> (Coordinate, Coordinate) {
        let b = BigInt::from(self.arity.base());
        let mut left = BigRational::zero();
        let mut scale = BigRational::one();
        for &d in &self.word {
            scale /= BigRational::from(b.clone());
            left += BigRational::from(BigInt::from(2 * d as u32)) * scale.clone();
        }
        let right = left.clone() + scale;
        (left, right)
    }

    /// The address of the left endpoint, word followed by zeros.
    pub fn floor_address(&self) -> Address {
        Address::new(self.arity, self.word.clone(), vec![0]).unwrap()
    }

    /// The address of the right endpoint, word followed by (n-1)s.
    pub fn ceil_address(&self) -> Address {
        let top = (self.arity.get() - 1) as u8;
        Address::new(self.arity, self.word.clone(), vec![top]).unwrap()
    }
}

/// An eventually periodic point of K_n, stored in canonical form: the
/// period is primitive and the preperiod is minimal (its last digit
/// differs from the last digit of the period). Structural equality then
/// decides point equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Address {
    arity: Arity,
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

/// Smallest primitive root of a word: the shortest prefix w with
/// word = w^k.
fn primitive_root(word: &[u8]) -> &[u8] {
    let len = word.len();
    for d in 1..len {
        if len % d == 0 && word.chunks(d).all(|c| c == &word[..d]) {
            return &word[..d];
        }
    }
    word
}

impl Address {
    pub fn new(arity: Arity, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        arity.check_word(&preperiod)?;
        arity.check_word(&period)?;
        let mut a = Address { arity, preperiod, period };
        a.canonicalize();
        Ok(a)
    }

    fn canonicalize(&mut self) {
        let root_len = primitive_root(&self.period).len();
        self.period.truncate(root_len);
        // Absorb preperiod digits that match the tail of the period:
        // u·a·(t'·a)^inf = u·(a·t')^inf, rotating the period right.
        while self.preperiod.last() == self.period.last() {
            if self.preperiod.pop().is_none() {
                break;
            }
            let last = self.period.pop().unwrap();
            self.period.insert(0, last);
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Digit at position i (0-based) of the infinite expansion.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn expansion_prefix(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.digit(i)).collect()
    }

    pub fn starts_with(&self, word: &[u8]) -> bool {
        word.iter().enumerate().all(|(i, &d)| self.digit(i) == d)
    }

    /// Drop the first k digits of the expansion.
    pub fn shift(&self, k: usize) -> Address {
        if k <= self.preperiod.len() {
            Address::new(self.arity, self.preperiod[k..].to_vec(), self.period.clone()).unwrap()
        } else {
            let j = (k - self.preperiod.len()) % self.period.len();
            let mut period = self.period[j..].to_vec();
            period.extend_from_slice(&self.period[..j]);
            Address::new(self.arity, Vec::new(), period).unwrap()
        }
    }

    /// Prepend a finite word to the expansion.
    pub fn prepend(&self, word: &[u8]) -> Address {
        let mut preperiod = word.to_vec();
        preperiod.extend_from_slice(&self.preperiod);
        Address::new(self.arity, preperiod, self.period.clone()).unwrap()
    }

    /// Digitwise complement of the whole expansion.
    pub fn complement(&self) -> Address {
        let n = self.arity;
        Address::new(
            n,
            self.preperiod.iter().map(|&d| n.complement_digit(d)).collect(),
            self.period.iter().map(|&d| n.complement_digit(d)).collect(),
        )
        .unwrap()
    }

    /// Exact coordinate in [0,1]: sum over positions i of
    /// 2 a_i (2n-1)^{-(i+1)}, with the periodic tail summed in closed form.
    pub fn coordinate(&self) -> Coordinate {
        let b = BigInt::from(self.arity.base());
        let mut value = BigRational::zero();
        let mut scale = BigRational::one();
        for &d in &self.preperiod {
            scale /= BigRational::from(b.clone());
            value += BigRational::from(BigInt::from(2 * d as u32)) * scale.clone();
        }
        // Periodic part: S / (b^m - 1) scaled past the preperiod, where
        // S is the period read as a base-b integer with digits doubled.
        let mut s = BigInt::zero();
        for &d in &self.period {
            s = s * &b + BigInt::from(2 * d as u32);
        }
        let bm = num_traits::pow::pow(b, self.period.len());
        value += scale * BigRational::new(s, bm - BigInt::one());
        value
    }

    /// Lexicographic order of the infinite expansions; agrees with the
    /// order of coordinates.
    pub fn compare(&self, other: &Address) -> Result<Ordering> {
        self.arity.check_match(other.arity)?;
        let tail = self.period.len().lcm(&other.period.len());
        let bound = self.preperiod.len().max(other.preperiod.len()) + tail;
        for i in 0..bound {
            match self.digit(i).cmp(&other.digit(i)) {
                Ordering::Equal => continue,
                ord => return Ok(ord),
            }
        }
        Ok(Ordering::Equal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn n2() -> Arity {
        Arity::new(2).unwrap()
    }

    fn addr(pre: &[u8], per: &[u8]) -> Address {
        Address::new(n2(), pre.to_vec(), per.to_vec()).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn arity_rejects_small_values() {
        assert!(Arity::new(0).is_err());
        assert!(Arity::new(1).is_err());
        assert!(Arity::new(2).is_ok());
    }

    #[test]
    fn coordinate_of_zero_address() {
        assert_eq!(addr(&[], &[0]).coordinate(), rat(0, 1));
    }

    #[test]
    fn coordinate_of_one_third() {
        // 0(1): right endpoint of the first construction interval.
        assert_eq!(addr(&[0], &[1]).coordinate(), rat(1, 3));
    }

    #[test]
    fn coordinate_of_periodic_10() {
        // Oracle: partial sums of 2*3^{-1} + 2*3^{-3} + ... converge to 3/4.
        let a = addr(&[], &[1, 0]);
        assert_eq!(a.coordinate(), rat(3, 4));
        let mut partial = BigRational::zero();
        let mut scale = BigRational::one();
        for i in 0..30 {
            scale /= BigRational::from(BigInt::from(3));
            partial += BigRational::from(BigInt::from(2 * a.digit(i) as u32)) * scale.clone();
        }
        let err = (a.coordinate() - partial).to_f64().unwrap();
        assert!(err.abs() < 1e-13);
    }

    #[test]
    fn all_top_digit_address_is_one() {
        for n in 2..7 {
            let arity = Arity::new(n).unwrap();
            let a = Address::new(arity, vec![], vec![(n - 1) as u8]).unwrap();
            assert_eq!(a.coordinate(), rat(1, 1));
        }
    }

    #[test]
    fn compare_agrees_with_examples() {
        let a = addr(&[0], &[1]);
        let b = addr(&[], &[1, 0]);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Less);
        assert_eq!(a.compare(&a).unwrap(), Ordering::Equal);
        let top = addr(&[], &[1]);
        assert_eq!(top.compare(&a).unwrap(), Ordering::Greater);
    }

    #[test]
    fn compare_arity_mismatch() {
        let a = addr(&[], &[0]);
        let b = Address::new(Arity::new(3).unwrap(), vec![], vec![0]).unwrap();
        assert!(a.compare(&b).is_err());
    }

    #[test]
    fn cell_endpoints_match_construction() {
        let c = Cell::new(n2(), vec![0, 0]).unwrap();
        assert_eq!(c.endpoints(), (rat(0, 1), rat(1, 9)));
        let c = Cell::new(n2(), vec![0, 1]).unwrap();
        assert_eq!(c.endpoints(), (rat(2, 9), rat(1, 3)));
        let c = Cell::root(n2());
        assert_eq!(c.endpoints(), (rat(0, 1), rat(1, 1)));
    }

    #[test]
    fn canonical_form_absorbs_preperiod() {
        // Different spellings of the same infinite word are equal after
        // canonicalization; a genuinely different word stays distinct.
        let a = addr(&[0, 1], &[1, 0]);
        let b = addr(&[0], &[1, 1, 0, 1]);
        let c = addr(&[0, 1, 1, 0], &[1, 0]);
        assert_eq!(a, c);
        assert_ne!(a, b);
    }

    #[test]
    fn shift_and_prepend_roundtrip() {
        let a = addr(&[0, 1, 1], &[1, 0]);
        let s = a.shift(2);
        assert_eq!(s.prepend(&a.expansion_prefix(2)), a);
        // Shift deep into the period.
        let s = a.shift(6);
        assert_eq!(s.prepend(&a.expansion_prefix(6)), a);
    }

    proptest! {
        #[test]
        fn canonicalization_is_representation_independent(
            pre in proptest::collection::vec(0u8..2, 0..6),
            per in proptest::collection::vec(0u8..2, 1..5),
            rot in 0usize..5,
            ext in 1usize..4,
            reps in 1usize..3,
        ) {
            let a = Address::new(n2(), pre.clone(), per.clone()).unwrap();
            // Same infinite word: extend preperiod by `ext` digits of the
            // period, rotate the period, repeat the period `reps` times.
            let mut pre2 = pre.clone();
            let mut per2: Vec<u8> = per.clone();
            for _ in 0..ext {
                let d = per2.remove(0);
                pre2.push(d);
                per2.push(d);
            }
            let r = rot % per2.len();
            let mut per3 = per2[r..].to_vec();
            per3.extend_from_slice(&per2[..r]);
            let mut pre3 = pre2.clone();
            pre3.extend_from_slice(&per2[..r]);
            let mut per4 = Vec::new();
            for _ in 0..reps {
                per4.extend_from_slice(&per3);
            }
            let b = Address::new(n2(), pre3, per4).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn compare_matches_coordinate_order(
            pre1 in proptest::collection::vec(0u8..2, 0..5),
            per1 in proptest::collection::vec(0u8..2, 1..4),
            pre2 in proptest::collection::vec(0u8..2, 0..5),
            per2 in proptest::collection::vec(0u8..2, 1..4),
        ) {
            let a = Address::new(n2(), pre1, per1).unwrap();
            let b = Address::new(n2(), pre2, per2).unwrap();
            let by_digits = a.compare(&b).unwrap();
            let by_coords = a.coordinate().cmp(&b.coordinate());
            prop_assert_eq!(by_digits, by_coords);
            prop_assert_eq!(by_digits == Ordering::Equal, a == b);
        }

        #[test]
        fn cell_brackets_its_addresses(
            word in proptest::collection::vec(0u8..2, 0..5),
            tail_pre in proptest::collection::vec(0u8..2, 0..4),
            tail_per in proptest::collection::vec(0u8..2, 1..4),
        ) {
            let c = Cell::new(n2(), word.clone()).unwrap();
            let tail = Address::new(n2(), tail_pre, tail_per).unwrap();
            let a = tail.prepend(&word);
            let (l, r) = c.endpoints();
            let x = a.coordinate();
            prop_assert!(l <= x && x <= r);
        }
    }
}
