//! The ring `Γ`: generated over `R = Z[a]` by `Q0, Q1, Q2` subject to the
//! commutation relations
//!
//! ```text
//! Q0 a = a^2 Q0 - 2a Q1 + 6 Q2
//! Q1 a = 3 Q0 + a Q2
//! Q2 a = -a Q0 + 3 Q1
//! ```
//!
//! and the Adem relations
//!
//! ```text
//! Q1 Q0 = 2 Q2 Q1 - 2 Q0 Q2
//! Q2 Q0 = Q0 Q1 + a Q0 Q2 - 2 Q1 Q2
//! ```
//!
//! Elements are stored in the admissible basis `Q0^j Q_{k1} ... Q_{kr}`
//! (`k_i ∈ {1, 2}`) with polynomial coefficients on the left.

mod rewrite;
mod word;

pub use rewrite::{
    check_confluence, ConfluenceReport, CriticalPair, Divergence, Strategy, WordRewriter,
};
pub use word::{FreeWord, Letter};

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyA;
use crate::ring::Ring;

/// Default cap on the Γ-degree of enumerations.
pub const DEFAULT_DEGREE_CAP: usize = 12;

/// An admissible monomial `Q0^j Q_{w[0]} ... Q_{w[r-1]}` with `w[i] ∈ {1, 2}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AdmMono {
    pub j: u32,
    pub word: Vec<u8>,
}

impl AdmMono {
    pub fn new(j: u32, word: Vec<u8>) -> Self {
        debug_assert!(word.iter().all(|&k| k == 1 || k == 2));
        AdmMono { j, word }
    }

    pub fn identity() -> Self {
        AdmMono::new(0, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.j as usize + self.word.len()
    }

    /// The generator indices from left to right.
    pub fn letters(&self) -> impl DoubleEndedIterator<Item = u8> + '_ {
        std::iter::repeat_n(0u8, self.j as usize).chain(self.word.iter().copied())
    }
}

impl Ord for AdmMono {
    /// Degree, then `j` descending, then the word lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.j.cmp(&self.j))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for AdmMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AdmMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters().map(|k| format!("Q{k}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// All admissible monomials of degree `k`, in the canonical order.
pub fn basis_of_degree(k: usize) -> Vec<AdmMono> {
    let mut out = Vec::new();
    for j in (0..=k).rev() {
        let r = k - j;
        for bits in 0..(1usize << r) {
            // Most significant bit first gives lexicographic order with 1 < 2.
            let word = (0..r)
                .map(|i| if bits >> (r - 1 - i) & 1 == 1 { 2 } else { 1 })
                .collect();
            out.push(AdmMono::new(j as u32, word));
        }
    }
    out
}

/// All admissible monomials of degree `<= k`.
pub fn basis_up_to(k: usize) -> Vec<AdmMono> {
    (0..=k).flat_map(basis_of_degree).collect()
}

/// Row `i` of `M^k`, where `Q_i a = sum_l M[i][l] Q_l`; so
/// `Q_i p(a) = sum_l commute_poly(i, p)[l] Q_l`.
pub fn commute_poly(i: usize, p: &PolyA) -> [PolyA; 3] {
    let a = PolyA::a();
    let m: [[PolyA; 3]; 3] = [
        [
            a.square(),
            a.scale(&BigInt::from(-2)),
            PolyA::from_i64s(&[6]),
        ],
        [PolyA::from_i64s(&[3]), PolyA::zero(), a.clone()],
        [a.neg(), PolyA::from_i64s(&[3]), PolyA::zero()],
    ];
    let mut row: [PolyA; 3] =
        std::array::from_fn(|l| if l == i { PolyA::one() } else { PolyA::zero() });
    let mut acc: [PolyA; 3] = Default::default();
    for c in p.coeffs() {
        if !c.is_zero() {
            for l in 0..3 {
                acc[l] = acc[l].add(&row[l].scale(c));
            }
        }
        row = std::array::from_fn(|l| {
            (0..3).fold(PolyA::zero(), |s, mm| s.add(&row[mm].mul(&m[mm][l])))
        });
    }
    acc
}

/// An element of `Γ` in admissible normal form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GammaElem {
    terms: BTreeMap<AdmMono, PolyA>,
}

thread_local! {
    static GEN_TIMES_MONO: RefCell<HashMap<(u8, AdmMono), GammaElem>> = RefCell::new(HashMap::new());
}

impl GammaElem {
    pub fn zero() -> Self {
        GammaElem::default()
    }

    pub fn one() -> Self {
        Self::from_poly(PolyA::one())
    }

    /// The image of `p` under `η: R -> Γ`.
    pub fn from_poly(p: PolyA) -> Self {
        Self::term(p, AdmMono::identity())
    }

    pub fn term(c: PolyA, m: AdmMono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GammaElem { terms }
    }

    pub fn mono(m: AdmMono) -> Self {
        Self::term(PolyA::one(), m)
    }

    /// The generator `Q_i`.
    pub fn q(i: u8) -> Self {
        match i {
            0 => Self::mono(AdmMono::new(1, vec![])),
            1 | 2 => Self::mono(AdmMono::new(0, vec![i])),
            _ => panic!("generator index out of range: {i}"),
        }
    }

    pub fn a() -> Self {
        Self::from_poly(PolyA::a())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AdmMono, &PolyA)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &AdmMono) -> PolyA {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest degree of a monomial with non-zero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(AdmMono::degree).max()
    }

    /// `Some(k)` if every term has degree `k`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(AdmMono::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn add_term(&mut self, m: AdmMono, c: PolyA) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
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

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        GammaElem {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    /// Left multiplication by a ground-ring element.
    pub fn scale_left(&self, p: &PolyA) -> Self {
        let mut out = GammaElem::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), p.mul(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale_left(&PolyA::from_i64s(&[n]))
    }

    /// `Q_i * self`.
    pub fn lmul_q(&self, i: u8) -> Self {
        let mut out = GammaElem::zero();
        for (m, c) in &self.terms {
            let row = commute_poly(i as usize, c);
            for (l, coef) in row.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let prod = gen_times_mono(l as u8, m);
                for (m2, c2) in &prod.terms {
                    out.add_term(m2.clone(), coef.mul(c2));
                }
            }
        }
        out
    }

    /// Left multiplication by a single letter of the free alphabet.
    pub fn lmul_letter(&self, l: Letter) -> Self {
        match l {
            Letter::A => self.scale_left(&PolyA::a()),
            Letter::Q(i) => self.lmul_q(i),
        }
    }

    /// `self * o` in normal form.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = GammaElem::zero();
        for (m, c) in &self.terms {
            let mut acc = o.clone();
            for k in m.letters().rev() {
                acc = acc.lmul_q(k);
            }
            for (m2, c2) in acc.terms {
                out.add_term(m2, c.mul(&c2));
            }
        }
        out
    }

    /// `self * p(a)`.
    pub fn mul_poly(&self, p: &PolyA) -> Self {
        self.mul(&GammaElem::from_poly(p.clone()))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Expanded text form: one summand per `(monomial, a-power)` pair in the
    /// canonical monomial order, e.g. `-2 Q0 Q2 + 2 Q2 Q1`.
    pub fn render(&self) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (m, c) in &self.terms {
            for (k, x) in c.coeffs().iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut toks: Vec<String> = Vec::new();
                let mag = x.abs();
                let has_rest = k > 0 || m.degree() > 0;
                if !mag.is_one() || !has_rest {
                    toks.push(mag.to_string());
                }
                match k {
                    0 => {}
                    1 => toks.push("a".into()),
                    _ => toks.push(format!("a^{k}")),
                }
                if m.degree() > 0 {
                    toks.push(m.to_string());
                }
                parts.push((x.is_negative(), toks.join(" ")));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (neg, body)) in parts.iter().enumerate() {
            match (idx, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(body);
        }
        s
    }

    /// Parses the free-word text syntax and reduces it.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(normal_form(&FreeWord::parse(s)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| serde_json::json!({ "j": m.j, "word": m.word, "coeff": c }))
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct T {
            j: u32,
            word: Vec<u8>,
            coeff: PolyA,
        }
        #[derive(Deserialize)]
        struct G {
            terms: Vec<T>,
        }
        let g: G = serde_json::from_value(v.clone())?;
        let mut out = GammaElem::zero();
        for t in g.terms {
            if t.word.iter().any(|&k| k != 1 && k != 2) {
                return Err(Error::Parse(format!(
                    "word letters must be 1 or 2: {:?}",
                    t.word
                )));
            }
            out.add_term(AdmMono::new(t.j, t.word), t.coeff);
        }
        Ok(out)
    }
}

/// `Q_l * m` for a single admissible monomial, memoized per thread.
fn gen_times_mono(l: u8, m: &AdmMono) -> GammaElem {
    if l == 0 {
        return GammaElem::mono(AdmMono::new(m.j + 1, m.word.clone()));
    }
    if m.j == 0 {
        let mut word = vec![l];
        word.extend_from_slice(&m.word);
        return GammaElem::mono(AdmMono::new(0, word));
    }
    let key = (l, m.clone());
    if let Some(hit) = GEN_TIMES_MONO.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let rest = GammaElem::mono(AdmMono::new(m.j - 1, m.word.clone()));
    let out = if l == 1 {
        // Q1 Q0 = 2 Q2 Q1 - 2 Q0 Q2
        let a = rest.lmul_q(1).lmul_q(2).scale_int(2);
        let b = rest.lmul_q(2).lmul_q(0).scale_int(2);
        a.sub(&b)
    } else {
        // Q2 Q0 = Q0 Q1 + a Q0 Q2 - 2 Q1 Q2
        let q2 = rest.lmul_q(2);
        let a = rest.lmul_q(1).lmul_q(0);
        let b = q2.lmul_q(0).scale_left(&PolyA::a());
        let c = q2.lmul_q(1).scale_int(2);
        a.add(&b).sub(&c)
    };
    GEN_TIMES_MONO.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

/// Reduces a free word to the admissible basis by evaluating each summand
/// right to left (leftmost-innermost).
pub fn normal_form(w: &FreeWord) -> GammaElem {
    let mut out = GammaElem::zero();
    for (c, letters) in w.summands() {
        let mut acc = GammaElem::from_poly(PolyA::constant(c.clone()));
        for &l in letters.iter().rev() {
            acc = acc.lmul_letter(l);
        }
        out = out.add(&acc);
    }
    out
}

/// `Ψ = Q0Q0 + a Q0Q1 - 2 Q1Q1 + a^2 Q0Q2 - 2a Q1Q2 + 4 Q2Q2`.
pub fn psi() -> GammaElem {
    let a = PolyA::a();
    let terms = [
        (PolyA::one(), AdmMono::new(2, vec![])),
        (a.clone(), AdmMono::new(1, vec![1])),
        (PolyA::from_i64s(&[-2]), AdmMono::new(0, vec![1, 1])),
        (a.square(), AdmMono::new(1, vec![2])),
        (a.scale(&BigInt::from(-2)), AdmMono::new(0, vec![1, 2])),
        (PolyA::from_i64s(&[4]), AdmMono::new(0, vec![2, 2])),
    ];
    terms.into_iter().fold(GammaElem::zero(), |acc, (c, m)| {
        acc.add(&GammaElem::term(c, m))
    })
}

/// `T = 3 Q0 + 2a Q2`.
pub fn trace_element() -> GammaElem {
    GammaElem::q(0)
        .scale_int(3)
        .add(&GammaElem::q(2).scale_left(&PolyA::from_i64s(&[0, 2])))
}

impl fmt::Display for GammaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for GammaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ[{}]", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GammaElem {
        GammaElem::parse(s).unwrap()
    }

    #[test]
    fn commutation_relations() {
        assert_eq!(g("Q1 a"), g("3 Q0 + a Q2"));
        assert_eq!(g("Q0 a"), g("a a Q0 - 2 a Q1 + 6 Q2"));
        assert_eq!(g("Q2 a"), g("- a Q0 + 3 Q1"));
        assert_eq!(g("a"), GammaElem::a());
    }

    #[test]
    fn adem_relations() {
        let q = GammaElem::q;
        assert_eq!(q(1).mul(&q(0)), g("2 Q2 Q1 - 2 Q0 Q2"));
        assert_eq!(q(2).mul(&q(0)), g("Q0 Q1 + a Q0 Q2 - 2 Q1 Q2"));
        assert_eq!(q(1).mul(&q(0)).render(), "-2 Q0 Q2 + 2 Q2 Q1");
    }

    #[test]
    fn unit_law() {
        let x = g("3 Q0 a Q1 - 2 Q2 Q0");
        assert_eq!(GammaElem::one().mul(&x), x);
        assert_eq!(x.mul(&GammaElem::one()), x);
    }

    #[test]
    fn psi_shape() {
        let p = psi();
        assert_eq!(p.num_terms(), 6);
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(
            p,
            g("Q0 Q0 + a Q0 Q1 - 2 Q1 Q1 + a^2 Q0 Q2 - 2 a Q1 Q2 + 4 Q2 Q2")
        );
    }

    #[test]
    fn psi_is_central_on_generators() {
        for x in [
            GammaElem::a(),
            GammaElem::q(0),
            GammaElem::q(1),
            GammaElem::q(2),
        ] {
            assert!(psi().commutator(&x).is_zero(), "[Ψ, {x}] != 0");
        }
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(basis_of_degree(0), vec![AdmMono::identity()]);
        let b2: Vec<String> = basis_of_degree(2).iter().map(|m| m.to_string()).collect();
        assert_eq!(
            b2,
            ["Q0 Q0", "Q0 Q1", "Q0 Q2", "Q1 Q1", "Q1 Q2", "Q2 Q1", "Q2 Q2"]
        );
        for k in 0..=8 {
            assert_eq!(basis_of_degree(k).len(), (1 << (k + 1)) - 1);
        }
        assert_eq!(basis_of_degree(5).len(), 63);
    }

    #[test]
    fn commute_poly_matches_repeated_rewrite() {
        let p = PolyA::from_i64s(&[1, -2, 0, 5]);
        for i in 0..3u8 {
            let row = commute_poly(i as usize, &p);
            let direct = GammaElem::q(i).mul_poly(&p);
            let via_row = (0..3u8).fold(GammaElem::zero(), |acc, l| {
                acc.add(&GammaElem::q(l).scale_left(&row[l as usize]))
            });
            assert_eq!(direct, via_row);
        }
    }

    #[test]
    fn json_round_trip() {
        let p = psi();
        assert_eq!(GammaElem::from_json(&p.to_json()).unwrap(), p);
        let bad = serde_json::json!({"terms": [{"j": 0, "word": [3], "coeff": ["1"]}]});
        assert!(GammaElem::from_json(&bad).is_err());
    }
}
