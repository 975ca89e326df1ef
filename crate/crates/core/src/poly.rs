//! The ground ring `R = Z[a]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ring::{Algebra, Ring, TryInverse};

/// A polynomial in `a` with integer coefficients.
///
/// `coeffs[k]` is the coefficient of `a^k`. Trailing zeros are never stored,
/// so the zero polynomial is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyA {
    coeffs: Vec<BigInt>,
}

impl PolyA {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyA { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * a^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn a() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    /// `D = a^3 - 27`.
    pub fn disc() -> Self {
        Self::from_i64s(&[-27, 0, 0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (one more than the degree).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `a^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyA { coeffs }
    }

    /// Drops every term of degree `>= n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn divisible_by_int(&self, n: &BigInt) -> bool {
        self.coeffs.iter().all(|c| c.is_multiple_of(n))
    }

    pub fn div_int_exact(&self, n: &BigInt) -> Option<Self> {
        if !self.divisible_by_int(n) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().map(|c| c / n).collect()))
    }

    /// Exact division in `Z[a]`; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &PolyA) -> Option<PolyA> {
        let (q, r) = self.div_rem_checked(divisor)?;
        r.is_empty().then_some(q)
    }

    /// Long division that only succeeds when every step divides exactly
    /// over `Z`. Always succeeds for monic divisors.
    fn div_rem_checked(&self, divisor: &PolyA) -> Option<(PolyA, PolyA)> {
        let dlead = divisor.leading()?;
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return Some((PolyA::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - ddeg];
        for k in (ddeg..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let (q, r) = rem[k].div_rem(dlead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k - ddeg + i] -= &q * dc;
            }
            quot[k - ddeg] = q;
        }
        Some((PolyA::new(quot), PolyA::new(rem)))
    }

    /// Reduces every coefficient into `[0, n)`.
    pub fn mod_int(&self, n: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(n)).collect())
    }
}

impl Ring for PolyA {
    fn zero() -> Self {
        PolyA { coeffs: Vec::new() }
    }
    fn one() -> Self {
        PolyA::constant(BigInt::one())
    }
    fn from_int(n: &BigInt) -> Self {
        PolyA::constant(n.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        PolyA::new(coeffs)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return PolyA::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        PolyA::new(out)
    }
    fn neg(&self) -> Self {
        PolyA {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Algebra for PolyA {
    fn from_poly(p: &PolyA) -> Self {
        p.clone()
    }
}

impl TryInverse for PolyA {
    fn try_inverse(&self) -> Option<Self> {
        match self.coeffs.as_slice() {
            [c] if c.abs().is_one() => Some(self.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for PolyA {
    /// Descending powers, e.g. `a^3 - 27`, `-2 a + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "a")?,
                (1, false) => write!(f, "{mag} a")?,
                (_, true) => write!(f, "a^{k}")?,
                (_, false) => write!(f, "{mag} a^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyA({self})")
    }
}

/// JSON form: array of decimal strings, little-endian in the `a`-degree.
impl Serialize for PolyA {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyA {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyA::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> PolyA {
        PolyA::from_i64s(cs)
    }

    #[test]
    fn cancellation_and_factorization() {
        assert_eq!(PolyA::disc().add(&p(&[27])), p(&[0, 0, 0, 1]));
        assert_eq!(p(&[-3, 1]).mul(&p(&[9, 3, 1])), PolyA::disc());
        assert!(PolyA::a().mul(&PolyA::zero()).is_zero());
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 1]).sub(&p(&[0, 1])), p(&[1]));
    }

    #[test]
    fn exact_division() {
        let d = PolyA::disc();
        let x = d.mul(&p(&[5, -1, 2]));
        assert_eq!(x.div_exact(&d), Some(p(&[5, -1, 2])));
        assert_eq!(p(&[1, 1]).div_exact(&d), None);
        assert_eq!(p(&[4, 6]).div_exact(&p(&[2])), Some(p(&[2, 3])));
        assert_eq!(p(&[4, 5]).div_exact(&p(&[2])), None);
    }

    #[test]
    fn display() {
        assert_eq!(PolyA::disc().to_string(), "a^3 - 27");
        assert_eq!(p(&[1, -2]).to_string(), "-2 a + 1");
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[0, -1]).to_string(), "-a");
    }

    #[test]
    fn json_round_trip() {
        let x = p(&[-27, 0, 0, 1]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"["-27","0","0","1"]"#);
        assert_eq!(serde_json::from_str::<PolyA>(&s).unwrap(), x);
    }
}
