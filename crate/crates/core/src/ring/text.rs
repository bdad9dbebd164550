//! Canonical text form and the expression parser.
//!
//! Terms are printed in descending graded-lex order, factors in variable
//! order, e.g. `3*hbar^-1*a1^2 - a2 + 1/2`. The parser accepts any
//! expression built from numbers, variable names, `+ - * / ^` and
//! parentheses; exponents are integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{LaurentPoly, Monomial, Q};
use super::ratfunc::RationalFunction;
use super::vars::idx;
use crate::error::{Error, Result};

const FIXED: [&str; 7] = ["hbar", "z", "q", "u", "eps", "t1", "t2"];

pub fn var_name(i: usize) -> String {
    if i < idx::A0 {
        FIXED[i].to_string()
    } else {
        format!("a{}", i - idx::A0 + 1)
    }
}

pub fn var_index(name: &str) -> Option<usize> {
    if let Some(p) = FIXED.iter().position(|&n| n == name) {
        return Some(p);
    }
    let rest = name.strip_prefix('a')?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: usize = rest.parse().ok()?;
    if i == 0 || i > 4096 {
        return None;
    }
    Some(idx::a(i))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", var_name(i))?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_q(f: &mut fmt::Formatter<'_>, c: &Q) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Q)> = self.terms().collect();
        terms.sort_by(|a, b| b.0.cmp_grlex(a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write_q(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_q(f, &abs)?;
                    write!(f, "*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_poly() {
            return write!(f, "{p}");
        }
        write!(f, "({})/({})", self.num(), self.den())
    }
}

// ---------------------------------------------------------------------------
// Parser

const MAX_DEPTH: usize = 64;
const MAX_EXP: i64 = 256;
const MAX_POLY_EXP: i64 = 16;
const MAX_DIGITS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str, line0: usize) -> Result<Vec<(Tok, usize, usize)>> {
    let mut toks = Vec::new();
    let mut line = line0;
    let mut col = 1;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = col;
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j - i > MAX_DIGITS {
                return Err(Error::parse(line, start, "number too long"));
            }
            let s: String = chars[i..j].iter().collect();
            toks.push((Tok::Num(s.parse().unwrap()), line, start));
            col += j - i;
            i = j;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            toks.push((Tok::Ident(s), line, start));
            col += j - i;
            i = j;
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), line, start));
            col += 1;
            i += 1;
        } else if c == '\u{2212}' {
            // Unicode minus sign.
            toks.push((Tok::Op('-'), line, start));
            col += 1;
            i += 1;
        } else {
            return Err(Error::parse(line, start, format!("unexpected character '{c}'")));
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    depth: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::parse(l, c, msg))
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let (l, c) = self.here();
                let d = self.unary()?;
                acc = acc
                    .checked_div(&d)
                    .map_err(|_| Error::parse(l, c, "division by zero"))?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        self.enter()?;
        let out = if self.eat('-') {
            -self.unary()?
        } else if self.eat('+') {
            self.unary()?
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (l, c) = self.here();
        let e = self.exponent()?;
        let limit = if base.num().is_monomial() && base.den().is_monomial() {
            MAX_EXP
        } else {
            MAX_POLY_EXP
        };
        if e.abs() > limit {
            return Err(Error::parse(l, c, format!("exponent {e} out of range")));
        }
        base.pow(e as i32)
            .map_err(|_| Error::parse(l, c, "negative power of zero"))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let v = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                match i64::try_from(n) {
                    Ok(v) if v <= 1 << 20 => v,
                    _ => return self.err("exponent out of range"),
                }
            }
            _ => return self.err("expected integer exponent"),
        };
        if paren && !self.eat(')') {
            return self.err("expected ')'");
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => match var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(RationalFunction::var(i))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn end_position(src: &str, line0: usize) -> (usize, usize) {
    let mut line = line0;
    let mut col = 1;
    for c in src.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Parse a rational-function expression. Positions in errors are reported
/// relative to `line0` (1 for standalone input).
pub fn parse_ratfunc_at(src: &str, line0: usize) -> Result<RationalFunction> {
    let toks = lex(src, line0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
        end: end_position(src, line0),
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

pub fn parse_ratfunc(src: &str) -> Result<RationalFunction> {
    parse_ratfunc_at(src, 1)
}

/// Parse an expression that must reduce to a Laurent polynomial.
pub fn parse_poly(src: &str) -> Result<LaurentPoly> {
    let f = parse_ratfunc(src)?;
    f.as_poly().ok_or_else(|| {
        let (l, c) = end_position(src, 1);
        Error::parse(l, c, "expression is not a Laurent polynomial")
    })
}

impl std::str::FromStr for LaurentPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl std::str::FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratfunc(s)
    }
}

// ---------------------------------------------------------------------------
// Serde: polynomials as strings, rational functions as {num, den}.

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_poly(&s).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RfRepr {
    num: String,
    den: String,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RfRepr {
            num: self.num().to_string(),
            den: self.den().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RfRepr::deserialize(d)?;
        let num = parse_poly(&r.num).map_err(de::Error::custom)?;
        let den = parse_poly(&r.den).map_err(de::Error::custom)?;
        RationalFunction::new(num, den).map_err(de::Error::custom)
    }
}

/// Decode the `{num, den}` JSON form.
pub fn ratfunc_from_json(text: &str) -> Result<RationalFunction> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
}

pub fn ratfunc_to_json(f: &RationalFunction) -> String {
    serde_json::to_string(f).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::{q, qr};

    fn a(i: usize) -> LaurentPoly {
        LaurentPoly::var(idx::a(i))
    }
    fn hbar() -> LaurentPoly {
        LaurentPoly::var(idx::HBAR)
    }

    #[test]
    fn canonical_order_and_signs() {
        let p = &(&hbar() - &a(1)) + &a(2);
        assert_eq!(p.to_string(), "hbar - a1 + a2");
        let p = (&a(1) * &a(1)).scale(&q(3)).mul_monomial(&Monomial::var(idx::HBAR, -1));
        assert_eq!(p.to_string(), "3*hbar^-1*a1^2");
        let p = &a(2).scale(&qr(-3, 2)) + &LaurentPoly::constant(qr(1, 2));
        assert_eq!(p.to_string(), "-3/2*a2 + 1/2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["hbar - a1 + a2", "3*hbar^-1*a1^2", "-3/2*a2 + 1/2", "0", "z^2 - 2*z + 1"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn parse_general_expressions() {
        let p = parse_poly("(a1 - a2)^2 - (a1^2 - 2*a1*a2)").unwrap();
        assert_eq!(p, &a(2) * &a(2));
        let f = parse_ratfunc("(1 - z^2)/(1 - z)").unwrap();
        assert_eq!(f.to_string(), "z + 1");
        let f = parse_ratfunc("hbar/(hbar + a1)").unwrap();
        assert_eq!(f.to_string(), "(hbar)/(hbar + a1)");
        assert_eq!(parse_poly("a1^(-2)").unwrap(), LaurentPoly::var_pow(idx::a(1), -2));
        assert_eq!(parse_poly("2 \u{2212} hbar").unwrap().to_string(), "-hbar + 2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_poly("hbar + * a1") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("{other:?}"),
        }
        match parse_poly("hbar +\n  x") {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (2, 3));
                assert!(message.contains("'x'"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("").is_err());
        assert!(parse_poly("1/(a1 - a1)").is_err());
        assert!(parse_poly("1/(1 + a1)").is_err());
        assert!(parse_poly("(1+a1)^100").is_err());
        assert!(parse_poly(&"(".repeat(500)).is_err());
        assert!(parse_poly("a0").is_err());
    }

    #[test]
    fn json_form() {
        let f = parse_ratfunc("hbar/(hbar + a1)").unwrap();
        let j = ratfunc_to_json(&f);
        assert_eq!(j, r#"{"num":"hbar","den":"hbar + a1"}"#);
        assert_eq!(ratfunc_from_json(&j).unwrap(), f);
        assert!(ratfunc_from_json(r#"{"num":"1","den":"0"}"#).is_err());
        assert!(ratfunc_from_json(r#"{"num":"1"}"#).is_err());
    }
}
