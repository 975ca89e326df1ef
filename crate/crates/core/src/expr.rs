//! Text input for ground-ring elements.
//!
//! Expressions are built from integers, `a`, `D` (for `a^3 - 27`),
//! parentheses, `+`, `-`, `*` (or juxtaposition) and `^`. Negative
//! exponents are accepted on anything that is a unit of `S`, e.g.
//! `-D^-2 * (a^3 - 27)^3`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::local::SElem;
use crate::poly::PolyA;
use crate::ring::{Algebra, Ring, TryInverse};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    A,
    D,
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
        let tok = match cs[i] {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = cs[start..i].iter().collect();
                out.push(Tok::Int(lit.parse().expect("digits")));
                continue;
            }
            'a' => Tok::A,
            'D' => Tok::D,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in {s:?}"
                )))
            }
        };
        out.push(tok);
        i += 1;
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

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<SElem> {
        let mut acc = SElem::zero();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<SElem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Int(_) | Tok::A | Tok::D | Tok::LParen) => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => {
                let e = i64::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?;
                Ok(if neg { -e } else { e })
            }
            other => Err(Error::Parse(format!("expected an exponent, got {other:?}"))),
        }
    }

    fn factor(&mut self) -> Result<SElem> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        base.try_inverse()
            .map(|inv| inv.pow((-e) as u32))
            .ok_or_else(|| Error::NotAUnit(format!("{base} has no inverse in S")))
    }

    fn atom(&mut self) -> Result<SElem> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(SElem::from_int(&n)),
            Some(Tok::A) => Ok(SElem::a()),
            Some(Tok::D) => Ok(SElem::from_poly(&PolyA::disc())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    other => Err(Error::Parse(format!("expected ')', got {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an element of `S = Z[a][1/D]`.
pub fn parse_s(s: &str) -> Result<SElem> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(out)
}

/// Parses an element of `R = Z[a]`; `D` may appear but the value must be
/// a polynomial.
pub fn parse_poly(s: &str) -> Result<PolyA> {
    parse_s(s)?
        .to_poly()
        .ok_or_else(|| Error::Parse(format!("{s:?} is not an element of Z[a]")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly("a^3 - 27").unwrap(), PolyA::disc());
        assert_eq!(parse_poly("(a-3)(a^2+3a+9)").unwrap(), PolyA::disc());
        assert_eq!(parse_poly("-2a + 1").unwrap(), PolyA::from_i64s(&[1, -2]));
        assert_eq!(parse_poly("D").unwrap(), PolyA::disc());
    }

    #[test]
    fn localized() {
        let x = parse_s("D^-2").unwrap();
        assert_eq!(x, SElem::new(PolyA::one(), 2));
        assert_eq!(parse_s("-D^-1 * D").unwrap(), SElem::from_i64(-1));
        assert!(parse_s("a^-1").is_err());
        assert!(parse_poly("D^-1").is_err());
    }

    #[test]
    fn malformed() {
        for s in ["", "a +", "(a", "b", "a^"] {
            assert!(parse_s(s).is_err(), "{s:?}");
        }
    }
}
