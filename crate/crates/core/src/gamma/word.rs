//! Unreduced input: integer combinations of words in `a, Q0, Q1, Q2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    A,
    Q(u8),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A => write!(f, "a"),
            Letter::Q(i) => write!(f, "Q{i}"),
        }
    }
}

/// A finite list of `(integer coefficient, word)` summands.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FreeWord {
    summands: Vec<(BigInt, Vec<Letter>)>,
}

#[derive(Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Letter(Letter),
    Caret,
    Plus,
    Minus,
    Star,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
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
            '*' | '\u{00b7}' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            'a' => {
                out.push(Tok::Letter(Letter::A));
                i += 1;
            }
            'Q' | 'q' => {
                let k = cs.get(i + 1).and_then(|d| d.to_digit(10));
                match k {
                    Some(k @ 0..=2) => out.push(Tok::Letter(Letter::Q(k as u8))),
                    _ => {
                        return Err(Error::Parse(format!(
                            "expected Q0, Q1 or Q2 at offset {i} in {s:?}"
                        )))
                    }
                }
                i += 2;
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

impl FreeWord {
    pub fn new(summands: Vec<(BigInt, Vec<Letter>)>) -> Self {
        FreeWord { summands }
    }

    pub fn word(letters: Vec<Letter>) -> Self {
        FreeWord::new(vec![(BigInt::one(), letters)])
    }

    pub fn summands(&self) -> &[(BigInt, Vec<Letter>)] {
        &self.summands
    }

    /// Parses text such as `3 Q0 a Q1 - 2 Q2` or `a^2 Q0 + Q1 Q0`.
    ///
    /// Tokens: non-negative integers (multiplied into the summand's
    /// coefficient), `a`, `a^k`, `Q0`, `Q1`, `Q2`, an optional `*`, and
    /// `+`/`-` between summands.
    pub fn parse(s: &str) -> Result<Self> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut summands = Vec::new();
        let mut i = 0;
        let mut sign = BigInt::one();
        let mut expect_term = true;
        let mut coeff = BigInt::one();
        let mut letters: Vec<Letter> = Vec::new();
        let mut have_factor = false;
        let flush = |summands: &mut Vec<(BigInt, Vec<Letter>)>,
                     sign: &BigInt,
                     coeff: &mut BigInt,
                     letters: &mut Vec<Letter>| {
            summands.push((sign * &*coeff, std::mem::take(letters)));
            *coeff = BigInt::one();
        };
        while i < toks.len() {
            match &toks[i] {
                Tok::Plus | Tok::Minus => {
                    let neg = toks[i] == Tok::Minus;
                    if have_factor {
                        flush(&mut summands, &sign, &mut coeff, &mut letters);
                        have_factor = false;
                        sign = BigInt::one();
                    } else if !expect_term {
                        return Err(Error::Parse(format!("dangling operator in {s:?}")));
                    }
                    if neg {
                        sign = -sign;
                    }
                    expect_term = true;
                }
                Tok::Star => {
                    if !have_factor {
                        return Err(Error::Parse(format!("'*' without a left factor in {s:?}")));
                    }
                }
                Tok::Int(n) => {
                    coeff *= n;
                    have_factor = true;
                    expect_term = false;
                }
                Tok::Letter(l) => {
                    let mut reps = 1usize;
                    if toks.get(i + 1) == Some(&Tok::Caret) {
                        match toks.get(i + 2) {
                            Some(Tok::Int(k)) => {
                                reps = usize::try_from(k.clone()).map_err(|_| {
                                    Error::Parse(format!("exponent too large in {s:?}"))
                                })?;
                                i += 2;
                            }
                            _ => {
                                return Err(Error::Parse(format!(
                                    "'^' must be followed by an integer in {s:?}"
                                )))
                            }
                        }
                    }
                    letters.extend(std::iter::repeat_n(*l, reps));
                    have_factor = true;
                    expect_term = false;
                }
                Tok::Caret => return Err(Error::Parse(format!("unexpected '^' in {s:?}"))),
            }
            i += 1;
        }
        if !have_factor {
            return Err(Error::Parse(format!(
                "expression ends with an operator: {s:?}"
            )));
        }
        flush(&mut summands, &sign, &mut coeff, &mut letters);
        Ok(FreeWord { summands })
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, w)) in self.summands.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mut toks: Vec<String> = Vec::new();
            if !mag.is_one() || w.is_empty() {
                toks.push(mag.to_string());
            }
            toks.extend(w.iter().map(Letter::to_string));
            write!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

impl FreeWord {
    /// Drops summands whose coefficient is zero.
    pub fn prune(mut self) -> Self {
        self.summands.retain(|(c, _)| !c.is_zero());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn parses_basic_forms() {
        let w = FreeWord::parse("3 Q0 a Q1 - 2 Q2").unwrap();
        assert_eq!(
            w.summands(),
            &[
                (BigInt::from(3), vec![Q(0), A, Q(1)]),
                (BigInt::from(-2), vec![Q(2)]),
            ]
        );
        let w = FreeWord::parse("-a^2 Q0 + Q1Q0").unwrap();
        assert_eq!(
            w.summands(),
            &[
                (BigInt::from(-1), vec![A, A, Q(0)]),
                (BigInt::from(1), vec![Q(1), Q(0)]),
            ]
        );
        assert_eq!(
            FreeWord::parse("7").unwrap().summands(),
            &[(BigInt::from(7), vec![])]
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "Q3", "a +", "x", "2 ^ 3", "+ * Q1"] {
            assert!(FreeWord::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn display_round_trip() {
        let w = FreeWord::parse("3 Q0 a Q1 - 2 Q2 + 5").unwrap();
        assert_eq!(w.to_string(), "3 Q0 a Q1 - 2 Q2 + 5");
        assert_eq!(FreeWord::parse(&w.to_string()).unwrap(), w);
    }
}
