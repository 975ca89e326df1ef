//! Localizations of `R` at a single element: `S = R[1/D]` with
//! `D = a^3 - 27`, and `R[1/2]`, used as an intermediate when a genuine
//! inverse of `d` is needed in the tower.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::poly::PolyA;
use crate::ring::{Algebra, Ring, TryInverse};

/// Chooses the element being inverted.
pub trait Denominator: Clone + PartialEq + fmt::Debug {
    fn base() -> PolyA;
    const NAME: &'static str;
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct DiscDen;

impl Denominator for DiscDen {
    fn base() -> PolyA {
        PolyA::disc()
    }
    const NAME: &'static str = "D";
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct TwoDen;

impl Denominator for TwoDen {
    fn base() -> PolyA {
        PolyA::from_i64s(&[2])
    }
    const NAME: &'static str = "2";
}

/// `num / base^exp`, stored with the minimal exponent.
///
/// Since the base is a non-zero-divisor in `Z[a]`, two elements are equal iff
/// their minimal forms agree, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Local<L> {
    num: PolyA,
    exp: u32,
    _den: PhantomData<L>,
}

/// The localization `S = Z[a, 1/D]`.
pub type SElem = Local<DiscDen>;
/// `Z[a, 1/2]`.
pub type Half = Local<TwoDen>;

impl<L: Denominator> Local<L> {
    pub fn new(num: PolyA, exp: u32) -> Self {
        let mut out = Local {
            num,
            exp,
            _den: PhantomData,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let base = L::base();
        while self.exp > 0 {
            match self.num.div_exact(&base) {
                Some(q) => {
                    self.num = q;
                    self.exp -= 1;
                }
                None => break,
            }
        }
    }

    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// The underlying polynomial when there is no denominator.
    pub fn to_poly(&self) -> Option<PolyA> {
        (self.exp == 0).then(|| self.num.clone())
    }

    /// `base^k` for any integer `k`.
    pub fn base_pow(k: i64) -> Self {
        if k >= 0 {
            Self::new(L::base().pow(k as u32), 0)
        } else {
            Self::new(PolyA::one(), (-k) as u32)
        }
    }

    /// Divides by 2 when the result stays in the same ring.
    pub fn halve(&self) -> Option<Self> {
        if L::base() == PolyA::from_i64s(&[2]) {
            return Some(Self::new(self.num.clone(), self.exp + 1));
        }
        // 2 is prime in Z[a] and coprime to a primitive base, so 2 | num/base^e iff 2 | num.
        let two = BigInt::from(2);
        self.num.div_int_exact(&two).map(|q| Self::new(q, self.exp))
    }
}

impl<L: Denominator> Ring for Local<L> {
    fn zero() -> Self {
        Self::new(PolyA::zero(), 0)
    }
    fn one() -> Self {
        Self::new(PolyA::one(), 0)
    }
    fn from_int(n: &BigInt) -> Self {
        Self::new(PolyA::constant(n.clone()), 0)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        let base = L::base();
        let e = self.exp.max(other.exp);
        let x = self.num.mul(&base.pow(e - self.exp));
        let y = other.num.mul(&base.pow(e - other.exp));
        Self::new(x.add(&y), e)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.exp + other.exp)
    }
    fn neg(&self) -> Self {
        Local {
            num: self.num.neg(),
            exp: self.exp,
            _den: PhantomData,
        }
    }
}

impl<L: Denominator> Algebra for Local<L> {
    fn from_poly(p: &PolyA) -> Self {
        Self::new(p.clone(), 0)
    }
}

impl<L: Denominator> TryInverse for Local<L> {
    /// Units are exactly `±base^k`.
    fn try_inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let base = L::base();
        let mut rest = self.num.clone();
        let mut k = 0u32;
        while let Some(q) = rest.div_exact(&base) {
            rest = q;
            k += 1;
        }
        match rest.coeffs() {
            [c] if c.abs().is_one() => {
                let sign = PolyA::constant(c.clone());
                Some(Self::new(sign.mul(&base.pow(self.exp)), k))
            }
            _ => None,
        }
    }
}

impl<L: Denominator> Default for Local<L> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<L: Denominator> From<PolyA> for Local<L> {
    fn from(p: PolyA) -> Self {
        Self::new(p, 0)
    }
}

impl<L: Denominator> fmt::Display for Local<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({}) / {}", self.num, L::NAME),
            e => write!(f, "({}) / {}^{e}", self.num, L::NAME),
        }
    }
}

impl<L: Denominator> fmt::Debug for Local<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Local({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_exponent() {
        let d = PolyA::disc();
        let x = SElem::new(d.mul(&PolyA::a()), 3);
        assert_eq!(x.exp(), 2);
        assert_eq!(x.num(), &PolyA::a());
        assert_eq!(SElem::new(PolyA::zero(), 5).exp(), 0);
    }

    #[test]
    fn units_of_s() {
        let d = SElem::base_pow(1);
        let dinv = d.try_inverse().unwrap();
        assert_eq!(dinv, SElem::base_pow(-1));
        assert!(d.mul(&dinv).is_one());
        assert!(SElem::from_i64(-1).try_inverse().is_some());
        assert!(SElem::from(PolyA::a()).try_inverse().is_none());
        assert!(SElem::from_i64(2).try_inverse().is_none());
        let x = SElem::base_pow(-2).neg();
        assert!(x.mul(&x.try_inverse().unwrap()).is_one());
    }

    #[test]
    fn zero_iff_numerator_zero() {
        let x = SElem::new(PolyA::a(), 2);
        assert!(x.sub(&x).is_zero());
        let y = SElem::new(PolyA::disc().mul(&PolyA::a()), 3);
        assert!(x.sub(&y).is_zero());
    }

    #[test]
    fn halves() {
        let h = Half::from_i64(3).halve().unwrap();
        assert_eq!(h.add(&h), Half::from_i64(3));
        assert!(SElem::from_i64(3).halve().is_none());
        assert_eq!(
            SElem::new(PolyA::from_i64s(&[2, 4]), 1).halve(),
            Some(SElem::new(PolyA::from_i64s(&[1, 2]), 1))
        );
    }
}
