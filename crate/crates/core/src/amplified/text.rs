//! Text form of amplified-ring polynomials.
//!
//! Symbols are written `t^j Q[k1 k2 ...] x` (`t` stands for `θ`; either part
//! may be omitted), factors are separated by whitespace or `*`, and
//! coefficients may use integers, `a`, `a^k` and parentheses, e.g.
//! `2 a t x * y - (t Q[1] x)^2 + 3`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{AmpPoly, Gen, BASE_NAMES};
use crate::error::{Error, Result};
use crate::poly::PolyA;
use crate::ring::{Algebra, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(char),
    Word(Vec<u8>),
    Caret,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'Q' => {
                if cs.get(i + 1) != Some(&'[') {
                    return Err(Error::Parse(format!(
                        "expected 'Q[' at offset {i} in {s:?}"
                    )));
                }
                let close = cs[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| Error::Parse(format!("unclosed 'Q[' in {s:?}")))?;
                let body: String = cs[i + 2..i + close].iter().collect();
                let mut word = Vec::new();
                for t in body
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                {
                    match t {
                        "1" => word.push(1),
                        "2" => word.push(2),
                        _ => {
                            return Err(Error::Parse(format!(
                                "word letters must be 1 or 2, got {t:?}"
                            )))
                        }
                    }
                }
                out.push(Tok::Word(word));
                i += close + 1;
            }
            'a' | 't' | 'x' | 'y' | 'z' | 'w' => {
                out.push(Tok::Ident(c));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = cs[start..i].iter().collect();
                out.push(Tok::Int(lit.parse().expect("digits")));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in {s:?}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn int(&mut self) -> Result<u32> {
        match self.next() {
            Some(Tok::Int(n)) => {
                u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))
            }
            other => Err(Error::Parse(format!("expected an integer, got {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<AmpPoly> {
        let mut acc = AmpPoly::zero();
        let mut sign = 1i64;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale_int(sign));
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AmpPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::Word(_) | Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<AmpPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.int()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<AmpPoly> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(AmpPoly::from_int(&n)),
            Some(Tok::Ident('a')) => Ok(AmpPoly::from_poly(&PolyA::a())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    other => Err(Error::Parse(format!("expected ')', got {other:?}"))),
                }
            }
            Some(Tok::Ident('t')) => {
                let mut theta = 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    theta = self.int()?;
                }
                let word = match self.peek() {
                    Some(Tok::Word(_)) => match self.next() {
                        Some(Tok::Word(w)) => w,
                        _ => unreachable!(),
                    },
                    _ => Vec::new(),
                };
                let base = self.base()?;
                Ok(AmpPoly::var(Gen::new(base, theta, word)))
            }
            Some(Tok::Word(w)) => {
                let base = self.base()?;
                Ok(AmpPoly::var(Gen::new(base, 0, w)))
            }
            Some(Tok::Ident(c)) => Ok(AmpPoly::var(Gen::base(base_index(c)?))),
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn base(&mut self) -> Result<u8> {
        match self.next() {
            Some(Tok::Ident(c)) if c != 'a' && c != 't' => base_index(c),
            other => Err(Error::Parse(format!(
                "expected a generator name, got {other:?}"
            ))),
        }
    }
}

fn base_index(c: char) -> Result<u8> {
    BASE_NAMES
        .iter()
        .position(|n| n.starts_with(c))
        .map(|k| k as u8)
        .ok_or_else(|| Error::Parse(format!("unknown generator {c:?}")))
}

/// Parses the text form described in the module documentation.
pub fn parse_amp(s: &str) -> Result<AmpPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

/// Renders in the canonical monomial order; `parse_amp` reads it back.
pub fn render_amp(p: &AmpPoly) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (mono, c) in p.terms() {
        let mut factors: Vec<String> = Vec::new();
        let (neg, coeff) = match c.coeffs() {
            [n] => (
                n.is_negative(),
                (!n.abs().is_one() || mono.is_empty()).then(|| n.abs().to_string()),
            ),
            _ => (false, Some(format!("({c})"))),
        };
        factors.extend(coeff);
        for (g, e) in mono {
            let s = g.to_string();
            let simple = !s.contains(' ');
            factors.push(match (*e, simple) {
                (1, _) => s,
                (e, true) => format!("{s}^{e}"),
                (e, false) => format!("({s})^{e}"),
            });
        }
        parts.push((neg, factors.join(" * ")));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in parts.into_iter().enumerate() {
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_symbols() {
        let p = parse_amp("t^2 Q[1 2] x").unwrap();
        assert_eq!(p, AmpPoly::var(Gen::new(0, 2, vec![1, 2])));
        let q = parse_amp("2 a t x * y - (t Q[1] x)^2 + 3").unwrap();
        assert_eq!(q.num_terms(), 3);
    }

    #[test]
    fn round_trip() {
        for s in [
            "x^2 + 2 * t x",
            "-(a^2 - 1) * Q[1] x * y + 4",
            "(t Q[2] y)^3 - a * x",
        ] {
            let p = parse_amp(s).unwrap();
            assert_eq!(parse_amp(&render_amp(&p)).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "Q[3] x", "t", "x +", "(x", "b"] {
            assert!(parse_amp(s).is_err(), "{s:?}");
        }
    }
}
