//! Euclidean domains used as homology coefficients: `Z`, `Q[a]` and
//! `F2[a]`, with Smith normal form and homology of finite complexes.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::poly::PolyA;

/// A Euclidean domain with a canonical representative of each associate
/// class.
pub trait Euclid: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn e_zero() -> Self;
    fn e_one() -> Self;
    fn e_is_zero(&self) -> bool;
    fn e_add(&self, o: &Self) -> Self;
    fn e_sub(&self, o: &Self) -> Self;
    fn e_mul(&self, o: &Self) -> Self;
    /// Euclidean size of a non-zero element.
    fn size(&self) -> usize;
    /// `(q, r)` with `self = q o + r` and `r = 0` or `size(r) < size(o)`.
    fn div_rem(&self, o: &Self) -> (Self, Self);
    fn is_unit(&self) -> bool;
    /// The canonical associate (positive integer, monic polynomial).
    fn normalize(&self) -> Self;
    /// Name of the ring, e.g. `Z`, `Q[a]`.
    fn ring_name() -> &'static str;
}

/// Integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Zint(pub BigInt);

impl fmt::Display for Zint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Euclid for Zint {
    fn e_zero() -> Self {
        Zint(BigInt::zero())
    }
    fn e_one() -> Self {
        Zint(BigInt::one())
    }
    fn e_is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn e_add(&self, o: &Self) -> Self {
        Zint(&self.0 + &o.0)
    }
    fn e_sub(&self, o: &Self) -> Self {
        Zint(&self.0 - &o.0)
    }
    fn e_mul(&self, o: &Self) -> Self {
        Zint(&self.0 * &o.0)
    }
    fn size(&self) -> usize {
        self.0.bits() as usize
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        let (q, r) = self.0.div_mod_floor(&o.0);
        (Zint(q), Zint(r))
    }
    fn is_unit(&self) -> bool {
        self.0.abs().is_one()
    }
    fn normalize(&self) -> Self {
        Zint(self.0.abs())
    }
    fn ring_name() -> &'static str {
        "Z"
    }
}

/// Polynomials in `a` over the rationals, dense, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut cs: Vec<BigRational>) -> Self {
        while cs.last().is_some_and(|c| c.is_zero()) {
            cs.pop();
        }
        QPoly(cs)
    }

    pub fn from_poly(p: &PolyA) -> Self {
        QPoly::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("non-zero")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, self.0.iter().map(|c| c.to_string()).collect(), |c| {
            c.starts_with('-')
        })
    }
}

fn fmt_poly(
    f: &mut fmt::Formatter<'_>,
    cs: Vec<String>,
    neg: impl Fn(&str) -> bool,
) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in cs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (sign, body) = if neg(c) {
            ("-", &c[1..])
        } else {
            ("+", c.as_str())
        };
        let mono = match k {
            0 => body.to_string(),
            1 if body == "1" => "a".to_string(),
            1 => format!("{body} a"),
            _ if body == "1" => format!("a^{k}"),
            _ => format!("{body} a^{k}"),
        };
        parts.push(format!("{sign} {mono}"));
    }
    if parts.is_empty() {
        return write!(f, "0");
    }
    let joined = parts.join(" ");
    let s = joined
        .strip_prefix("+ ")
        .map(str::to_string)
        .unwrap_or_else(|| format!("-{}", &joined[2..]));
    write!(f, "{s}")
}

impl Euclid for QPoly {
    fn e_zero() -> Self {
        QPoly(Vec::new())
    }
    fn e_one() -> Self {
        QPoly(vec![BigRational::one()])
    }
    fn e_is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn e_add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) + o.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }
    fn e_sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) - o.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }
    fn e_mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Self::e_zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        QPoly::new(out)
    }
    fn size(&self) -> usize {
        self.degree()
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        let mut r = self.0.clone();
        let d = o.degree();
        if r.len() <= d {
            return (Self::e_zero(), self.clone());
        }
        let inv = o.lead().recip();
        let mut q = vec![BigRational::zero(); r.len() - d];
        for k in (d..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] * &inv;
            for (j, oc) in o.0.iter().enumerate() {
                r[k - d + j] -= &c * oc;
            }
            q[k - d] = c;
        }
        (QPoly::new(q), QPoly::new(r))
    }
    fn is_unit(&self) -> bool {
        self.0.len() == 1
    }
    fn normalize(&self) -> Self {
        if self.0.is_empty() {
            return self.clone();
        }
        let inv = self.lead().recip();
        QPoly::new(self.0.iter().map(|c| c * &inv).collect())
    }
    fn ring_name() -> &'static str {
        "Q[a]"
    }
}

/// Polynomials in `a` over `F2`; bit `k` is the coefficient of `a^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Poly(BigUint);

impl F2Poly {
    pub fn from_poly(p: &PolyA) -> Self {
        let mut bits = BigUint::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_odd() {
                bits.set_bit(k as u64, true);
            }
        }
        F2Poly(bits)
    }

    fn degree(&self) -> usize {
        (self.0.bits() as usize).saturating_sub(1)
    }
}

impl fmt::Display for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = (0..self.0.bits())
            .map(|k| {
                if self.0.bit(k) {
                    "1".into()
                } else {
                    "0".into()
                }
            })
            .collect();
        fmt_poly(f, cs, |_| false)
    }
}

impl Euclid for F2Poly {
    fn e_zero() -> Self {
        F2Poly(BigUint::zero())
    }
    fn e_one() -> Self {
        F2Poly(BigUint::one())
    }
    fn e_is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn e_add(&self, o: &Self) -> Self {
        F2Poly(&self.0 ^ &o.0)
    }
    fn e_sub(&self, o: &Self) -> Self {
        self.e_add(o)
    }
    fn e_mul(&self, o: &Self) -> Self {
        let mut out = BigUint::zero();
        for k in 0..o.0.bits() {
            if o.0.bit(k) {
                out ^= &self.0 << k;
            }
        }
        F2Poly(out)
    }
    fn size(&self) -> usize {
        self.degree()
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        let d = o.degree();
        let mut r = self.0.clone();
        let mut q = BigUint::zero();
        while !r.is_zero() && r.bits() as usize > d {
            let shift = r.bits() as usize - 1 - d;
            q.set_bit(shift as u64, true);
            r ^= &o.0 << shift;
        }
        (F2Poly(q), F2Poly(r))
    }
    fn is_unit(&self) -> bool {
        self.0.is_one()
    }
    fn normalize(&self) -> Self {
        self.clone()
    }
    fn ring_name() -> &'static str {
        "F2[a]"
    }
}

/// A dense matrix over a Euclidean domain, `rows × cols`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<E>>,
}

impl<E: Euclid> Matrix<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![E::e_zero(); cols]; rows],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> E) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows)
                .map(|i| (0..cols).map(|j| f(i, j)).collect())
                .collect(),
        }
    }

    /// Invariant factors (normalized, non-zero, each dividing the next).
    pub fn invariant_factors(&self) -> Vec<E> {
        smith_diagonal(self.data.clone(), self.rows, self.cols)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn smith_diagonal<E: Euclid>(mut m: Vec<Vec<E>>, rows: usize, cols: usize) -> Vec<E> {
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, e) in row.iter().enumerate().skip(t) {
                if !e.e_is_zero() && best.is_none_or(|(_, _, s)| e.size() < s) {
                    best = Some((i, j, e.size()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].e_is_zero() {
                    continue;
                }
                let (q, r) = m[i][t].div_rem(&m[t][t]);
                let pivot = m[t].clone();
                for (x, p) in m[i][t..].iter_mut().zip(&pivot[t..]) {
                    *x = x.e_sub(&q.e_mul(p));
                }
                if !r.e_is_zero() {
                    m.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].e_is_zero() {
                    continue;
                }
                let (q, r) = m[t][j].div_rem(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = row[j].e_sub(&q.e_mul(&row[t]));
                    row[j] = v;
                }
                if !r.e_is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !m[i][j].div_rem(&m[t][t]).1.e_is_zero()));
            match bad {
                Some(i) => {
                    let other = m[i].clone();
                    for (x, o) in m[t][t..].iter_mut().zip(&other[t..]) {
                        *x = x.e_add(o);
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].normalize());
        t += 1;
    }
    diag
}

/// A finitely generated module over a PID: `E^free ⊕ ⨁ E/(t_i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PidModule {
    pub ring: String,
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl PidModule {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for PidModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(self.ring.clone()),
            n => parts.push(format!("{}^{n}", self.ring)),
        }
        for t in &self.torsion {
            if t.contains(' ') {
                parts.push(format!("{}/({t})", self.ring));
            } else {
                parts.push(format!("{}/{t}", self.ring));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology at `C_q` of `C_{q+1} --d_in--> C_q --d_out--> C_{q-1}`, where
/// `dim` is the rank of `C_q` and a missing map is zero.
pub fn homology<E: Euclid>(
    dim: usize,
    d_out: Option<&Matrix<E>>,
    d_in: Option<&Matrix<E>>,
) -> PidModule {
    let rank_out = d_out.map_or(0, |m| m.rank());
    let factors = d_in.map_or_else(Vec::new, |m| m.invariant_factors());
    PidModule {
        ring: E::ring_name().to_string(),
        free_rank: dim - rank_out - factors.len(),
        torsion: factors
            .iter()
            .filter(|f| !f.is_unit())
            .map(|f| f.to_string())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> Matrix<Zint> {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| {
            Zint(BigInt::from(rows[i][j]))
        })
    }

    #[test]
    fn integer_smith_form() {
        let m = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let f: Vec<String> = m
            .invariant_factors()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(f, ["2", "6", "12"]);
    }

    #[test]
    fn qpoly_smith_form() {
        let p = |cs: &[i64]| QPoly::from_poly(&PolyA::from_i64s(cs));
        // diag(a, a^2) after mixing
        let m = Matrix {
            rows: 2,
            cols: 2,
            data: vec![
                vec![p(&[0, 1]), p(&[0, 1])],
                vec![p(&[0, 1]), p(&[0, 1, 1])],
            ],
        };
        let f: Vec<String> = m
            .invariant_factors()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(f, ["a", "a^2"]);
    }

    #[test]
    fn f2_arithmetic() {
        let p = |cs: &[i64]| F2Poly::from_poly(&PolyA::from_i64s(cs));
        let x = p(&[1, 1]);
        assert_eq!(x.e_mul(&x), p(&[1, 0, 1]));
        let (q, r) = p(&[1, 0, 1]).div_rem(&x);
        assert_eq!(q, x);
        assert!(r.e_is_zero());
        assert_eq!(p(&[2, 4]), F2Poly::e_zero());
    }

    #[test]
    fn homology_of_multiplication_by_two() {
        let d = z(&[&[2]]);
        let h = homology(1, None, Some(&d));
        assert_eq!(h.to_string(), "Z/2");
        let h0 = homology(1, Some(&d), None);
        assert!(h0.is_zero());
    }
}
