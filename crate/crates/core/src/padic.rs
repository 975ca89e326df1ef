//! Truncated elements of the completion `Z_2[[a]]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyA;

/// Default 2-adic precision (residues mod `2^20`).
pub const DEFAULT_PREC2: u32 = 20;
/// Default `a`-adic precision (terms of degree `< 16`).
pub const DEFAULT_PREC_A: usize = 16;

/// An element of `Z_2[[a]]` known modulo `2^prec2` and modulo `a^prec_a`.
///
/// `coeffs` always has exactly `prec_a` entries, each in `[0, 2^prec2)`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicElem {
    #[serde(with = "decimal_vec")]
    coeffs: Vec<BigInt>,
    prec2: u32,
    #[serde(rename = "precA")]
    prec_a: usize,
}

mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n
}

/// 2-adic valuation of a non-zero integer.
pub fn val2(n: &BigInt) -> Option<u64> {
    n.trailing_zeros()
}

impl PadicElem {
    pub fn new(coeffs: Vec<BigInt>, prec2: u32, prec_a: usize) -> Self {
        let m = pow2(prec2);
        let mut coeffs: Vec<BigInt> = coeffs
            .into_iter()
            .take(prec_a)
            .map(|c| c.mod_floor(&m))
            .collect();
        coeffs.resize(prec_a, BigInt::zero());
        PadicElem {
            coeffs,
            prec2,
            prec_a,
        }
    }

    pub fn from_poly(p: &PolyA, prec2: u32, prec_a: usize) -> Self {
        Self::new(p.coeffs().to_vec(), prec2, prec_a)
    }

    pub fn from_int(n: i64, prec2: u32, prec_a: usize) -> Self {
        Self::new(vec![BigInt::from(n)], prec2, prec_a)
    }

    pub fn zero(prec2: u32, prec_a: usize) -> Self {
        Self::new(Vec::new(), prec2, prec_a)
    }

    pub fn prec2(&self) -> u32 {
        self.prec2
    }

    pub fn prec_a(&self) -> usize {
        self.prec_a
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The canonical representative as a polynomial in `Z[a]`.
    pub fn to_poly(&self) -> PolyA {
        PolyA::new(self.coeffs.clone())
    }

    /// Reduces to a coarser precision; never increases it.
    pub fn with_prec(&self, prec2: u32, prec_a: usize) -> Self {
        Self::new(
            self.coeffs.clone(),
            prec2.min(self.prec2),
            prec_a.min(self.prec_a),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn joint(&self, other: &Self) -> (u32, usize) {
        (self.prec2.min(other.prec2), self.prec_a.min(other.prec_a))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (n, m) = self.joint(other);
        let c = (0..m).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Self::new(c, n, m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (n, m) = self.joint(other);
        let c = (0..m).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Self::new(c, n, m)
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| -c).collect(),
            self.prec2,
            self.prec_a,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, m) = self.joint(other);
        let modulus = pow2(n);
        let mut out = vec![BigInt::zero(); m];
        for i in 0..m {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..m - i {
                out[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        for c in out.iter_mut() {
            *c = c.mod_floor(&modulus);
        }
        Self::new(out, n, m)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| c * k).collect(),
            self.prec2,
            self.prec_a,
        )
    }

    /// Units of `Z_2[[a]]` are the series with odd constant term.
    pub fn is_unit(&self) -> bool {
        self.prec2 > 0 && self.coeffs.first().is_some_and(|c| c.is_odd())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self} has even constant term")));
        }
        let modulus = pow2(self.prec2);
        let b0 = self.coeffs[0]
            .modinv(&modulus)
            .expect("odd residues are invertible mod 2^N");
        let mut out: Vec<BigInt> = Vec::with_capacity(self.prec_a);
        out.push(b0.clone());
        for n in 1..self.prec_a {
            let mut s = BigInt::zero();
            for k in 1..=n {
                s += &self.coeffs[k] * &out[n - k];
            }
            out.push((-(&b0 * s)).mod_floor(&modulus));
        }
        Ok(Self::new(out, self.prec2, self.prec_a))
    }

    /// Exact division by 2; the result is known to one fewer bit.
    pub fn halve(&self) -> Result<Self> {
        if self.prec2 == 0 {
            return Err(Error::PrecisionExhausted {
                requested: 1,
                available: 0,
            });
        }
        if self.coeffs.iter().any(|c| c.is_odd()) {
            return Err(Error::Inconsistent(format!("{self} is not divisible by 2")));
        }
        Ok(Self::new(
            self.coeffs.iter().map(|c| c >> 1u32).collect(),
            self.prec2 - 1,
            self.prec_a,
        ))
    }

    /// Residues as signed integers in `(-2^(N-1), 2^(N-1)]`.
    pub fn symmetric_coeffs(&self) -> Vec<BigInt> {
        let m = pow2(self.prec2);
        let half = &m >> 1u32;
        self.coeffs
            .iter()
            .map(|c| if c > &half { c - &m } else { c.clone() })
            .collect()
    }
}

/// `sum_{k>=1} (-1)^(k-1) 2^(k-1) x^k / k`, i.e. `log(1 + 2x) / 2`, to
/// 2-adic precision `prec2`.
///
/// Every omitted term has 2-adic valuation `>= prec2`: the term for `k` has
/// valuation at least `k - 1 - v_2(k)`, which is non-decreasing in `k`.
pub fn padic_log1p(x: &PadicElem, prec2: u32) -> Result<PadicElem> {
    if prec2 > x.prec2() {
        return Err(Error::PrecisionExhausted {
            requested: prec2,
            available: x.prec2(),
        });
    }
    let x = x.with_prec(prec2, x.prec_a());
    let modulus = pow2(prec2);
    let mut acc = PadicElem::zero(prec2, x.prec_a());
    let mut xk = x.clone();
    let mut k: u64 = 1;
    loop {
        let v = k.trailing_zeros();
        let floor_log = 63 - k.leading_zeros();
        if k - 1 - floor_log as u64 >= prec2 as u64 {
            break;
        }
        let odd = BigInt::from(k >> v);
        let shift = (k - 1 - v as u64) as u32;
        let inv = odd.modinv(&modulus).expect("odd");
        let mut coef = (BigInt::one() << shift) * inv;
        if k.is_multiple_of(2) {
            coef = -coef;
        }
        acc = acc.add(&xk.mul_int(&coef));
        xk = xk.mul(&x);
        k += 1;
    }
    Ok(acc)
}

impl fmt::Display for PadicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.symmetric_coeffs();
        let body = PolyA::new(sym);
        write!(f, "{body} + O(2^{}, a^{})", self.prec2, self.prec_a)
    }
}

impl fmt::Debug for PadicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicElem({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn unit_poly(cs: &[i64]) -> PadicElem {
        PadicElem::from_poly(&PolyA::from_i64s(cs), 20, 8)
    }

    /// Independent oracle: exact rational partial sums, then reduction of the
    /// rational (odd denominator) modulo `2^n`.
    fn rational_half_log(x: i64, n: u32, terms: u64) -> BigInt {
        let mut s = BigRational::zero();
        let xb = BigRational::from_integer(BigInt::from(x));
        let mut xk = BigRational::one();
        for k in 1..=terms {
            xk = &xk * &xb;
            let t = BigRational::new(BigInt::one() << (k - 1), BigInt::from(k)) * &xk;
            if k % 2 == 1 {
                s += t;
            } else {
                s -= t;
            }
        }
        let m = BigInt::one() << n;
        let inv = s.denom().modinv(&m).unwrap();
        (s.numer() * inv).mod_floor(&m)
    }

    #[test]
    fn log_of_zero_is_zero() {
        let z = PadicElem::zero(20, 4);
        assert!(padic_log1p(&z, 20).unwrap().is_zero());
    }

    #[test]
    fn half_log_minus_one_vanishes() {
        let x = PadicElem::from_int(-1, 20, 4);
        assert!(padic_log1p(&x, 20).unwrap().is_zero());
    }

    #[test]
    fn half_log_three_matches_rational_oracle() {
        let x = PadicElem::from_int(1, 12, 1);
        let got = padic_log1p(&x, 12).unwrap();
        // Terms past k = 40 have valuation far above 12.
        let expect = rational_half_log(1, 12, 40);
        assert_eq!(got.coeffs()[0], expect);
    }

    #[test]
    fn precision_exhausted() {
        let x = PadicElem::from_int(1, 8, 1);
        assert!(matches!(
            padic_log1p(&x, 12),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn inverse_series() {
        let x = unit_poly(&[-27, 0, 0, 1]);
        let y = x.inverse().unwrap();
        assert_eq!(x.mul(&y), PadicElem::from_int(1, 20, 8));
        assert!(unit_poly(&[2, 1]).inverse().is_err());
    }

    #[test]
    fn halving_loses_a_bit() {
        let x = PadicElem::from_int(6, 10, 2);
        let h = x.halve().unwrap();
        assert_eq!(h.prec2(), 9);
        assert_eq!(h.coeffs()[0], BigInt::from(3));
    }

    #[test]
    fn json_shape() {
        let x = PadicElem::from_int(-1, 4, 2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"coeffs":["15","0"],"prec2":4,"precA":2}"#);
    }
}
