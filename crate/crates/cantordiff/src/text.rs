//! Textual grammars.
//!
//! Element: `n=<arity>; <dom>-><ran>[~](, <dom>-><ran>[~])*` where `~`
//! marks a flip and `*` is the empty word, e.g. `n=2; 0->00, 10->01,
//! 11->1` and `n=2; *->*~`.
//!
//! Address: `<preperiod>(<period>)`, e.g. `0(1)` for 0·(1)^inf and
//! `(10)` for the purely periodic point.
//!
//! Clopen set: `{00, 01, 1}`; `{}` is the empty set and `{*}` is all of
//! K_n.

use crate::address::{Address, Arity, Cell};
use crate::clopen::ClopenSet;
use crate::element::{format_word, Element, Rule};
use crate::error::{Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { bytes: text.as_bytes(), pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Vec<u8> {
        let mut out = Vec::new();
        while let Some(b @ b'0'..=b'9') = self.peek() {
            out.push(b - b'0');
            self.pos += 1;
        }
        out
    }

    /// A cell word: either `*` (empty) or a run of digits.
    fn word(&mut self) -> Result<Vec<u8>> {
        if self.eat("*") {
            return Ok(Vec::new());
        }
        let ds = self.digits();
        if ds.is_empty() {
            return Err(self.err("expected a digit word or `*`"));
        }
        Ok(ds)
    }

    fn integer(&mut self) -> Result<u64> {
        let ds = self.digits();
        if ds.is_empty() {
            return Err(self.err("expected an integer"));
        }
        let mut v: u64 = 0;
        for d in ds {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| self.err("integer too large"))?;
        }
        Ok(v)
    }

    fn done(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }
}

/// Parse an element and return its reduced form.
pub fn parse_element(text: &str) -> Result<Element> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    c.expect("n")?;
    c.skip_ws();
    c.expect("=")?;
    c.skip_ws();
    let n = c.integer()?;
    if n < 2 || n > 10 {
        return Err(c.err(format!("arity {n} out of supported range 2..=10")));
    }
    let arity = Arity::new(n as u32)?;
    c.skip_ws();
    c.expect(";")?;
    let mut rules = Vec::new();
    loop {
        c.skip_ws();
        let domain = c.word()?;
        c.skip_ws();
        c.expect("->")?;
        c.skip_ws();
        let range = c.word()?;
        let flip = c.eat("~");
        rules.push(Rule { domain, range, flip });
        c.skip_ws();
        if !c.eat(",") {
            break;
        }
    }
    c.done()?;
    Element::new(arity, rules)
}

/// Canonical element text; inverse of `parse_element` on reduced forms.
pub fn format_element(g: &Element) -> String {
    g.to_string()
}

/// Parse an address `<preperiod>(<period>)` for a known arity.
pub fn parse_address(text: &str, arity: Arity) -> Result<Address> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    let preperiod = c.digits();
    c.expect("(")?;
    let period = c.digits();
    if period.is_empty() {
        return Err(c.err("period must be nonempty"));
    }
    c.expect(")")?;
    c.done()?;
    Address::new(arity, preperiod, period)
}

pub fn format_address(a: &Address) -> String {
    let show = |w: &[u8]| -> String {
        w.iter().map(|d| char::from(b'0' + d)).collect()
    };
    format!("{}({})", show(a.preperiod()), show(a.period()))
}

/// Parse a clopen set `{w, w, ...}`; `{}` empty, `{*}` full.
pub fn parse_clopen(text: &str, arity: Arity) -> Result<ClopenSet> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    c.expect("{")?;
    c.skip_ws();
    if c.eat("}") {
        c.done()?;
        return Ok(ClopenSet::empty(arity));
    }
    let mut cells = Vec::new();
    loop {
        c.skip_ws();
        let w = c.word()?;
        cells.push(Cell::new(arity, w)?);
        c.skip_ws();
        if !c.eat(",") {
            break;
        }
    }
    c.expect("}")?;
    c.done()?;
    ClopenSet::normalize(arity, cells)
}

pub fn format_clopen(s: &ClopenSet) -> String {
    if s.is_empty() {
        return "{}".to_string();
    }
    let words: Vec<String> = s.cell_words().iter().map(|w| format_word(w)).collect();
    format!("{{{}}}", words.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::test_support::{el2, shift_like};
    use proptest::prelude::*;

    fn n2() -> Arity {
        Arity::new(2).unwrap()
    }

    #[test]
    fn parse_shift_like() {
        let g = parse_element("n=2; 0->00, 10->01, 11->1").unwrap();
        assert_eq!(g, shift_like());
        assert_eq!(format_element(&g), "n=2; 0->00, 10->01, 11->1");
    }

    #[test]
    fn parse_global_flip() {
        let r = parse_element("n=2; *->*~").unwrap();
        assert_eq!(r, Element::global_flip(n2()));
        assert_eq!(format_element(&r), "n=2; *->*~");
    }

    #[test]
    fn parse_reduces() {
        let g = parse_element("n=2; 00->00, 01->01, 1->1").unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn parse_reports_missing_range_cell() {
        let err = parse_element("n=2; 0->00, 1->01").unwrap_err();
        match err {
            Error::IncompletePrefixCode { side: "range", detail } => {
                assert!(detail.contains("missing 1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_syntax_error_has_position() {
        let err = parse_element("n=2; 0->").unwrap_err();
        assert!(matches!(err, Error::Parse { position: 8, .. }));
    }

    #[test]
    fn address_roundtrip() {
        let a = parse_address("0(1)", n2()).unwrap();
        assert_eq!(format_address(&a), "0(1)");
        let b = parse_address("(10)", n2()).unwrap();
        assert_eq!(format_address(&b), "(10)");
        assert!(parse_address("01()", n2()).is_err());
        assert!(parse_address("2(0)", n2()).is_err());
    }

    #[test]
    fn clopen_roundtrip() {
        let s = parse_clopen("{00, 01, 1}", n2()).unwrap();
        // Normalizes to everything.
        assert!(s.is_full());
        assert_eq!(format_clopen(&s), "{*}");
        assert_eq!(format_clopen(&parse_clopen("{}", n2()).unwrap()), "{}");
        assert_eq!(format_clopen(&parse_clopen("{*}", n2()).unwrap()), "{*}");
        assert_eq!(format_clopen(&parse_clopen("{10, 00}", n2()).unwrap()), "{00, 10}");
    }

    proptest! {
        #[test]
        fn element_roundtrip(g in crate::element::test_support::arb_element(2, 6)) {
            let text = format_element(&g);
            prop_assert_eq!(parse_element(&text).unwrap(), g);
        }

        #[test]
        fn address_text_roundtrip(
            pre in proptest::collection::vec(0u8..2, 0..5),
            per in proptest::collection::vec(0u8..2, 1..4),
        ) {
            let a = Address::new(n2(), pre, per).unwrap();
            prop_assert_eq!(parse_address(&format_address(&a), n2()).unwrap(), a);
        }
    }

    #[test]
    fn format_element_helper_matches_display() {
        let g = el2(&[("0", "1", false), ("1", "0", false)]);
        assert_eq!(format_element(&g), g.to_string());
    }
}
