//! Minimal ring traits shared by every coefficient type in the crate.
//!
//! Arithmetic is by reference so that big-integer backed values are not
//! cloned on every operation.

use std::fmt::Debug;

use num_bigint::BigInt;

use crate::poly::PolyA;

/// A commutative ring with unit.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_int(&BigInt::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_i64(n))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }
}

/// A commutative algebra over the ground ring `R = Z[a]`.
pub trait Algebra: Ring {
    fn from_poly(p: &PolyA) -> Self;

    fn a() -> Self {
        Self::from_poly(&PolyA::a())
    }
}

/// Rings in which some elements can be inverted.
pub trait TryInverse: Ring {
    /// Returns the inverse when `self` is a unit.
    fn try_inverse(&self) -> Option<Self>;
}

/// Sums an iterator of ring elements.
pub fn sum<'a, T: Ring + 'a>(items: impl IntoIterator<Item = &'a T>) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc.add(x))
}
