//! Word-spec mini-language and number literals.
//!
//! Grammar (tokens may be separated by whitespace):
//!
//! ```text
//! spec    := item* atom
//! item    := literal | run | 'T' ['^' NUMBER] | 'D' | 'N'
//! literal := DIGITS                      finite prefix, e.g. 011
//! run     := DIGIT '^' (NUMBER | 'inf')  a^l prefix or constant stream a^inf
//! atom    := 'c(' quad ')'
//!          | 'mech(' quad ',' quad ',' ('floor'|'ceil') ')'
//!          | 'S(' DIGIT ',' NUMBER ',' spec ')'
//!          | 'D(' DIGIT ',' NUMBER ',' spec ')'
//!          | 'C011(' quad ')' | 'C100(' quad ')'
//!          | 'cf(' cfexpr ')'
//!          | run-to-infinity
//! quad    := '(' INT (('+'|'-') NUMBER '*' 'sqrt(' NUMBER ')')? ')' ['/' NUMBER]
//!          | INT ['/' NUMBER]
//! cfexpr  := '[' INT ';' NUMBER,* ['(' NUMBER,+ ')'] ']'
//! ```
//!
//! Items are read left to right and applied right to left: `1^3 D c(t)` is
//! the run 1^3 prepended to the doubling of the characteristic word. Unknown
//! tokens are hard errors with a byte offset.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::cf::CfExpansion;
use crate::exact::quadratic::QuadraticReal;
use crate::exact::rational::Rat;
use crate::sturmian::{
    build_class, c_representative, characteristic, characteristic_directive, mechanical,
    CVariant, ClassSpec, MechanicalSpec, WordClass,
};
use crate::words::{FiniteWord, Letter, Rounding, WordStream};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek_raw()
            .map(|c| c.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if !self
            .peek_raw()
            .map(|c| c.is_ascii_alphabetic())
            .unwrap_or(false)
        {
            return None;
        }
        while self
            .peek_raw()
            .map(|c| c.is_ascii_alphanumeric())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        Some(&self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<u64> {
        let d = self.digits().ok_or_else(|| self.err("expected a number"))?;
        d.parse().map_err(|_| self.err("number too large"))
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let neg = self.eat(b'-');
        if !neg {
            let _ = self.eat(b'+');
        }
        let d = self.digits().ok_or_else(|| self.err("expected an integer"))?;
        let v: BigInt = d.parse().expect("digit string");
        Ok(if neg { -v } else { v })
    }
}

// ---------------------------------------------------------------------------
// numbers

fn quad_inner(c: &mut Cursor) -> Result<QuadraticReal> {
    if c.eat(b'(') {
        let p = c.signed_int()?;
        let mut q = BigInt::from(0);
        let mut d = 1u64;
        c.skip_ws();
        if c.peek() == Some(b'+') || c.peek() == Some(b'-') {
            let neg = c.peek() == Some(b'-');
            c.pos += 1;
            let mag = c.signed_int()?;
            q = if neg { -mag } else { mag };
            c.expect(b'*')?;
            match c.ident() {
                Some("sqrt") => {}
                _ => return Err(c.err("expected sqrt")),
            }
            c.expect(b'(')?;
            d = c.number()?;
            c.expect(b')')?;
        }
        c.expect(b')')?;
        let s = if c.eat(b'/') { BigInt::from(c.number()? as i64) } else { BigInt::from(1) };
        QuadraticReal::new(p, q, s, d)
    } else if c.peek() == Some(b's') {
        // allow bare sqrt(d) [/ s]
        match c.ident() {
            Some("sqrt") => {}
            _ => return Err(c.err("expected sqrt")),
        }
        c.expect(b'(')?;
        let d = c.number()?;
        c.expect(b')')?;
        let s = if c.eat(b'/') { BigInt::from(c.number()? as i64) } else { BigInt::from(1) };
        QuadraticReal::new(0, 1, s, d)
    } else {
        let p = c.signed_int()?;
        let s = if c.eat(b'/') { BigInt::from(c.number()? as i64) } else { BigInt::from(1) };
        QuadraticReal::new(p, 0, s, 1)
    }
}

/// Parse `(p+q*sqrt(d))/s`, `a/b`, `a`, or `sqrt(d)/s`.
pub fn parse_quadratic(input: &str) -> Result<QuadraticReal> {
    let mut c = Cursor::new(input);
    let v = quad_inner(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after number"));
    }
    Ok(v)
}

/// Parse `a/b` or `a` (signs allowed).
pub fn parse_rational(input: &str) -> Result<Rat> {
    let mut c = Cursor::new(input);
    let p = c.signed_int()?;
    let q = if c.eat(b'/') { c.signed_int()? } else { BigInt::from(1) };
    if !c.at_end() {
        return Err(c.err("trailing input after rational"));
    }
    if q == BigInt::from(0) {
        return Err(c.err("zero denominator"));
    }
    Ok(Rat::new(p, q))
}

/// Parse `[a0;a1,a2,(p1,p2)]`.
pub fn parse_cf(input: &str) -> Result<CfExpansion> {
    let mut c = Cursor::new(input);
    let e = cf_inner(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after expansion"));
    }
    Ok(e)
}

fn cf_inner(c: &mut Cursor) -> Result<CfExpansion> {
    c.expect(b'[')?;
    let mut pre = vec![c.signed_int()?];
    c.expect(b';')?;
    let mut period = Vec::new();
    loop {
        if c.eat(b'(') {
            loop {
                period.push(c.signed_int()?);
                if !c.eat(b',') {
                    break;
                }
            }
            c.expect(b')')?;
            break;
        }
        pre.push(c.signed_int()?);
        if !c.eat(b',') {
            break;
        }
    }
    c.expect(b']')?;
    if period.is_empty() {
        return Err(c.err("expansion needs a (period): rationals have no infinite expansion"));
    }
    Ok(CfExpansion { pre, period })
}

// ---------------------------------------------------------------------------
// word specs

enum Item {
    Literal(Vec<Letter>),
    Shift(usize),
    Double,
    AltNegate,
    Atom(WordStream),
}

fn parse_atom_call(c: &mut Cursor, name: &str) -> Result<WordStream> {
    c.expect(b'(')?;
    let out = match name {
        "c" => {
            let theta = quad_inner(c)?;
            characteristic(&theta)?
        }
        "mech" => {
            let theta = quad_inner(c)?;
            c.expect(b',')?;
            let rho = quad_inner(c)?;
            c.expect(b',')?;
            let variant = match c.ident() {
                Some("floor") => Rounding::Floor,
                Some("ceil") => Rounding::Ceil,
                _ => return Err(c.err("expected floor or ceil")),
            };
            mechanical(&MechanicalSpec { theta, rho, variant })?
        }
        "S" | "D" => {
            let letter = c.number()? as Letter;
            c.expect(b',')?;
            let run = c.number()? as usize;
            c.expect(b',')?;
            let inner = parse_spec_items(c)?;
            build_class(&ClassSpec {
                letter,
                run,
                inner,
                class: if name == "S" { WordClass::S } else { WordClass::D },
            })?
        }
        "C011" => c_representative(CVariant::E011, &quad_inner(c)?)?,
        "C100" => c_representative(CVariant::E100, &quad_inner(c)?)?,
        "cf" => {
            let e = cf_inner(c)?;
            characteristic_directive(e)
        }
        other => return Err(c.err(format!("unknown constructor '{other}'"))),
    };
    c.expect(b')')?;
    Ok(out)
}

fn parse_spec_items(c: &mut Cursor) -> Result<WordStream> {
    let mut items: Vec<Item> = Vec::new();
    let mut atom_seen = false;
    loop {
        c.skip_ws();
        let Some(ch) = c.peek() else { break };
        if ch == b')' || ch == b',' {
            break;
        }
        if atom_seen {
            return Err(c.err("nothing may follow the stream constructor"));
        }
        if ch.is_ascii_digit() {
            let run = c.digits().expect("digit");
            if c.peek_raw() == Some(b'^') {
                if run.len() != 1 {
                    return Err(c.err("run syntax takes a single letter, like 0^3"));
                }
                let letter = (run.as_bytes()[0] - b'0') as Letter;
                c.pos += 1;
                c.skip_ws();
                if c.peek_raw().map(|b| b.is_ascii_alphabetic()).unwrap_or(false) {
                    match c.ident() {
                        Some("inf") => {
                            items.push(Item::Atom(WordStream::constant(letter)));
                            atom_seen = true;
                        }
                        _ => return Err(c.err("expected a run length or inf")),
                    }
                } else {
                    let l = c.number()? as usize;
                    items.push(Item::Literal(vec![letter; l]));
                }
            } else {
                let letters = FiniteWord::from_digits(run).expect("digits");
                items.push(Item::Literal(letters.letters().to_vec()));
            }
            continue;
        }
        let start = c.pos;
        let Some(name) = c.ident() else {
            return Err(c.err(format!("unexpected character '{}'", ch as char)));
        };
        match name {
            "T" => {
                let by = if c.peek_raw() == Some(b'^') {
                    c.pos += 1;
                    c.number()? as usize
                } else {
                    1
                };
                items.push(Item::Shift(by));
            }
            "N" => items.push(Item::AltNegate),
            "D" if c.peek() != Some(b'(') => items.push(Item::Double),
            _ => {
                c.pos = start;
                let name = c.ident().expect("ident");
                items.push(Item::Atom(parse_atom_call(c, name)?));
                atom_seen = true;
            }
        }
    }
    // fold right-to-left onto the atom
    let Some(Item::Atom(mut stream)) = items.pop() else {
        return Err(c.err("spec must end with a stream constructor or a^inf"));
    };
    for item in items.into_iter().rev() {
        stream = match item {
            Item::Literal(letters) => stream.prepend(&FiniteWord::new(letters)),
            Item::Shift(by) => stream.shift(by),
            Item::Double => stream.double(),
            Item::AltNegate => stream.alt_negate(),
            Item::Atom(_) => return Err(c.err("only one stream constructor allowed")),
        };
    }
    Ok(stream)
}

/// Parse a full word spec, e.g. `011 D c((3-1*sqrt(5))/2)`.
pub fn parse_word_spec(input: &str) -> Result<WordStream> {
    let mut c = Cursor::new(input);
    let w = parse_spec_items(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after word spec"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;
    use crate::exact::rational::rat;

    #[test]
    fn quad_literals() {
        assert_eq!(parse_quadratic("(3-1*sqrt(5))/2").unwrap(), golden_slope());
        assert_eq!(parse_quadratic("1/2").unwrap().to_rational().unwrap(), rat(1, 2));
        assert_eq!(parse_quadratic("-3").unwrap().to_rational().unwrap(), rat(-3, 1));
        assert_eq!(
            parse_quadratic("sqrt(2)").unwrap(),
            QuadraticReal::sqrt_of(2)
        );
        assert!(parse_quadratic("(3-1*sqrt(5))/2 junk").is_err());
    }

    #[test]
    fn rationals_and_cf() {
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        let e = parse_cf("[0;2,(1)]").unwrap();
        assert_eq!(e.to_string(), "[0;2,(1)]");
        assert!(parse_cf("[1;2]").is_err());
    }

    #[test]
    fn word_specs() {
        let theta = "(3-1*sqrt(5))/2";
        let w = parse_word_spec(&format!("D c({theta})")).unwrap();
        assert_eq!(w.prefix(10).to_string(), "0011000011");
        let w = parse_word_spec(&format!("011 D c({theta})")).unwrap();
        assert_eq!(w.prefix(13).to_string(), "0110011000011");
        let w = parse_word_spec(&format!("C011({theta})")).unwrap();
        assert_eq!(w.prefix(13).to_string(), "0110011000011");
        let w = parse_word_spec(&format!("1^3 D c({theta})")).unwrap();
        assert_eq!(w.prefix(5).to_string(), "11100");
        let w = parse_word_spec(&format!("T^2 D c({theta})")).unwrap();
        assert_eq!(w.prefix(4).to_string(), "1100");
        let w = parse_word_spec("0^inf").unwrap();
        assert_eq!(w.prefix(4).to_string(), "0000");
        let w = parse_word_spec(&format!("S(1, 2, c({theta}))")).unwrap();
        assert_eq!(w.prefix(5).to_string(), "11010");
        let w = parse_word_spec(&format!("D(0, 1, mech({theta}, 1/3, floor))")).unwrap();
        assert!(w.built_class().is_d_class());
        let w = parse_word_spec("cf([0;2,(1)])").unwrap();
        assert_eq!(w.prefix(13).to_string(), "0100101001001");
        let w = parse_word_spec("N 1^inf").unwrap();
        assert_eq!(w.prefix(4).letters(), &[-1, 1, -1, 1]);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse_word_spec("011") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_word_spec("q(1/2)").is_err());
        assert!(parse_word_spec("c(1/2)").is_err()); // rational slope rejected
    }
}
