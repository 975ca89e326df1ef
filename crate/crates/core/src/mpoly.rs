//! Sparse commutative polynomials in named variables over an `R`-algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::poly::PolyA;
use crate::ring::{Algebra, Ring};

/// Exponent vector, kept sorted by variable with no zero exponents.
pub type Mono<V> = Vec<(V, u32)>;

fn mono_mul<V: Ord + Clone>(x: &Mono<V>, y: &Mono<V>) -> Mono<V> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => {
                out.push(x[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(y[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((x[i].0.clone(), x[i].1 + y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<V: Ord, C> {
    terms: BTreeMap<Mono<V>, C>,
}

impl<V: Ord + Clone + fmt::Debug, C: Algebra> MPoly<V, C> {
    pub fn var(v: V) -> Self {
        Self::term(C::one(), vec![(v, 1)])
    }

    pub fn term(c: C, m: Mono<V>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono<V>, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff(&self, m: &Mono<V>) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> C {
        self.coeff(&Vec::new())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = BTreeMap::new();
        for (m, x) in &self.terms {
            let y = x.mul(c);
            if !y.is_zero() {
                out.insert(m.clone(), y);
            }
        }
        MPoly { terms: out }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<D: Algebra>(&self, f: impl Fn(&C) -> D) -> MPoly<V, D> {
        let mut out = BTreeMap::new();
        for (m, x) in &self.terms {
            let y = f(x);
            if !y.is_zero() {
                out.insert(m.clone(), y);
            }
        }
        MPoly { terms: out }
    }

    /// Coefficient-wise partial map; `None` if any coefficient fails.
    pub fn try_map_coeffs<D: Algebra>(&self, f: impl Fn(&C) -> Option<D>) -> Option<MPoly<V, D>> {
        let mut out = BTreeMap::new();
        for (m, x) in &self.terms {
            let y = f(x)?;
            if !y.is_zero() {
                out.insert(m.clone(), y);
            }
        }
        Some(MPoly { terms: out })
    }

    /// Ring homomorphism determined by images of the variables and of the
    /// coefficients.
    pub fn eval<T: Ring>(&self, coeff: impl Fn(&C) -> T, var: impl Fn(&V) -> T) -> T {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (v, e) in m {
                t = t.mul(&var(v).pow(*e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Total degree in the variables (0 for constants and for zero).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn insert_add(terms: &mut BTreeMap<Mono<V>, C>, m: Mono<V>, c: C) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

impl<V: Ord + Clone + fmt::Debug, C: Algebra> Ring for MPoly<V, C> {
    fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn from_int(n: &BigInt) -> Self {
        Self::constant(C::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        MPoly { terms }
    }
    fn sub(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            Self::insert_add(&mut terms, m.clone(), c.neg());
        }
        MPoly { terms }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                Self::insert_add(&mut terms, mono_mul(m1, m2), c1.mul(c2));
            }
        }
        MPoly { terms }
    }
    fn neg(&self) -> Self {
        self.map_coeffs(Ring::neg)
    }
}

impl<V: Ord + Clone + fmt::Debug, C: Algebra> Algebra for MPoly<V, C> {
    fn from_poly(p: &PolyA) -> Self {
        Self::constant(C::from_poly(p))
    }
}

impl<V: Ord + Clone + fmt::Debug, C: Algebra + fmt::Display> MPoly<V, C> {
    /// Renders with a caller-supplied variable printer.
    pub fn render(&self, var: impl Fn(&V) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .map(|(v, e)| {
                        if *e == 1 {
                            var(v)
                        } else {
                            format!("({})^{e}", var(v))
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", vars.join(" "))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<V: Ord + Clone + fmt::Debug, C: Algebra> fmt::Debug for MPoly<V, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = MPoly<u8, PolyA>;

    #[test]
    fn binomial_square() {
        let x = P::var(0);
        let y = P::var(1);
        let s = x.add(&y).square();
        let expect = x.square().add(&x.mul(&y).scale_int(2)).add(&y.square());
        assert_eq!(s, expect);
        assert_eq!(s.total_degree(), 2);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = P::var(0).scale(&PolyA::a());
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.add(&P::one()).num_terms(), 2);
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let x = P::var(0);
        let f = x.square().add(&P::from_poly(&PolyA::a()));
        let v = f.eval(|c| c.clone(), |_| PolyA::from_i64s(&[1, 1]));
        assert_eq!(v, PolyA::from_i64s(&[1, 3, 1]));
    }
}
