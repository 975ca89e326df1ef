//! Γ-rings and amplified Γ-rings.
//!
//! The free amplified Γ-ring on generators `x, y, z, ...` is the polynomial
//! ring over `R` on the symbols `θ^j Q_{k1} ... Q_{kr} x` with `k_i ∈ {1, 2}`.
//! `Q0` never appears inside a symbol: `Q0 y = y^2 + 2 θ y`. The operations
//! are computed through the total operation
//! `P(y) = Q0 y + Q1 y d + Q2 y d^2`, which is multiplicative, so the Cartan
//! formulas are multiplication in `A[d]/(d^3 - a d - 2)`.

mod checks;
mod text;
mod witness;

pub use checks::{
    continuity_check, identity_suite, nonexample_check, psi_theta_check, random_window_poly,
    ContinuityReport, ContinuityViolation, IdentityResult, NonexampleReport,
};
pub use text::{parse_amp, render_amp};
pub use witness::WitnessModel;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gamma::GammaElem;
use crate::mpoly::MPoly;
use crate::poly::PolyA;
use crate::ring::Ring;
use crate::tower::S2;

/// The symbol `θ^theta Q_{word} v_base`, where `v_0 = x`, `v_1 = y`, ...
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen {
    pub base: u8,
    pub theta: u32,
    pub word: Vec<u8>,
}

impl Gen {
    pub fn new(base: u8, theta: u32, word: Vec<u8>) -> Self {
        Gen { base, theta, word }
    }

    /// The base generator `v_base` itself.
    pub fn base(base: u8) -> Self {
        Gen::new(base, 0, Vec::new())
    }

    /// Operation degree: `theta + |word|`.
    pub fn degree(&self) -> usize {
        self.theta as usize + self.word.len()
    }
}

pub const BASE_NAMES: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.theta {
            0 => {}
            1 => parts.push("t".to_string()),
            j => parts.push(format!("t^{j}")),
        }
        if !self.word.is_empty() {
            let w: Vec<String> = self.word.iter().map(u8::to_string).collect();
            parts.push(format!("Q[{}]", w.join(" ")));
        }
        let name = BASE_NAMES
            .get(self.base as usize)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("v{}", self.base));
        parts.push(name);
        write!(f, "{}", parts.join(" "))
    }
}

/// Polynomials in the generator symbols with coefficients in `R`.
pub type AmpPoly = MPoly<Gen, PolyA>;

/// Bounds on the generator symbols that may be created.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub max_theta: u32,
    pub max_word: usize,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            max_theta: 2,
            max_word: 3,
        }
    }
}

impl Window {
    pub fn new(max_theta: u32, max_word: usize) -> Self {
        Window {
            max_theta,
            max_word,
        }
    }

    pub fn contains(&self, g: &Gen) -> bool {
        g.theta <= self.max_theta && g.word.len() <= self.max_word
    }

    /// All generator symbols on the given bases inside the window.
    pub fn generators(&self, bases: u8) -> Vec<Gen> {
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..self.max_word {
            layer = layer
                .iter()
                .flat_map(|w| {
                    [1u8, 2].into_iter().map(move |k| {
                        let mut v = w.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
            words.extend(layer.iter().cloned());
        }
        let mut out = Vec::new();
        for b in 0..bases {
            for j in 0..=self.max_theta {
                for w in &words {
                    out.push(Gen::new(b, j, w.clone()));
                }
            }
        }
        out
    }
}

/// The free amplified Γ-ring truncated to a generator window.
pub struct FreeAmplified {
    window: Window,
    p_cache: RefCell<HashMap<Gen, S2<AmpPoly>>>,
}

fn two() -> PolyA {
    PolyA::from_i64s(&[2])
}

fn half_exact(p: &AmpPoly) -> Result<AmpPoly> {
    p.try_map_coeffs(|c| c.div_int_exact(&BigInt::from(2)))
        .ok_or_else(|| Error::Inconsistent(format!("{p:?} is not divisible by 2")))
}

impl FreeAmplified {
    pub fn new(window: Window) -> Self {
        FreeAmplified {
            window,
            p_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// The generator symbol as a polynomial, if it lies in the window.
    pub fn gen(&self, g: Gen) -> Result<AmpPoly> {
        if !self.window.contains(&g) {
            return Err(Error::WindowOverflow(format!(
                "{g} exceeds θ-depth {} / word length {}",
                self.window.max_theta, self.window.max_word
            )));
        }
        Ok(AmpPoly::var(g))
    }

    /// The base generator `x` (`base = 0`), `y` (`base = 1`), ...
    pub fn var(&self, base: u8) -> AmpPoly {
        AmpPoly::var(Gen::base(base))
    }

    pub fn constant(&self, c: PolyA) -> AmpPoly {
        AmpPoly::constant(c)
    }

    /// `P(p) = Q0 p + Q1 p d + Q2 p d^2`.
    pub fn total_op(&self, p: &AmpPoly) -> Result<S2<AmpPoly>> {
        let mut acc = S2::<AmpPoly>::zero();
        for (mono, c) in p.terms() {
            let mut t = S2::<AmpPoly>::total_op_of_poly(c);
            for (g, e) in mono {
                let pg = self.total_op_gen(g)?;
                t = t.mul(&pg.pow(*e));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn apply_q(&self, i: u8, p: &AmpPoly) -> Result<AmpPoly> {
        let mut t = self.total_op(p)?;
        Ok(std::mem::replace(&mut t.c[i as usize], AmpPoly::zero()))
    }

    /// The action of an arbitrary element of `Γ`.
    pub fn apply_gamma(&self, g: &GammaElem, p: &AmpPoly) -> Result<AmpPoly> {
        let mut out = AmpPoly::zero();
        for (m, c) in g.terms() {
            let mut acc = p.clone();
            for k in m.letters().rev() {
                acc = self.apply_q(k, &acc)?;
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    fn total_op_gen(&self, g: &Gen) -> Result<S2<AmpPoly>> {
        if let Some(hit) = self.p_cache.borrow().get(g) {
            return Ok(hit.clone());
        }
        let out = self.compute_total_op_gen(g)?;
        self.p_cache.borrow_mut().insert(g.clone(), out.clone());
        Ok(out)
    }

    fn compute_total_op_gen(&self, g: &Gen) -> Result<S2<AmpPoly>> {
        let y = AmpPoly::var(g.clone());
        let theta_y = self.gen(Gen::new(g.base, g.theta + 1, g.word.clone()))?;
        let q0 = y.square().add(&theta_y.scale(&two()));
        if g.theta == 0 {
            let ext = |k: u8| {
                let mut w = vec![k];
                w.extend_from_slice(&g.word);
                self.gen(Gen::new(g.base, 0, w))
            };
            return Ok(S2::new(q0, ext(1)?, ext(2)?));
        }
        // g = θ z
        let z = AmpPoly::var(Gen::new(g.base, g.theta - 1, g.word.clone()));
        let pz = self.total_op(&z)?;
        let [q0z, q1z, q2z] = &pz.c;
        let a = AmpPoly::constant(PolyA::a());
        // Q1 θz = Q2Q1z - Q0Q2z - Q0z Q1z - a Q1z Q2z - (Q2z)^2
        let q1 = self
            .apply_q(2, q1z)?
            .sub(&self.apply_q(0, q2z)?)
            .sub(&q0z.mul(q1z))
            .sub(&a.mul(q1z).mul(q2z))
            .sub(&q2z.square());
        // Q2 θz = θQ1z + a θQ2z - Q1Q2z - Q0z Q2z
        let q2 = self
            .apply_theta(q1z)?
            .add(&a.mul(&self.apply_theta(q2z)?))
            .sub(&self.apply_q(1, q2z)?)
            .sub(&q0z.mul(q2z));
        Ok(S2::new(q0, q1, q2))
    }

    /// `θ p` by structural recursion: the sum rule, the product rule,
    /// `θ(c) = (Q0 c - c^2) / 2` on ground-ring constants, and `θ` of a
    /// symbol is the next symbol.
    pub fn apply_theta(&self, p: &AmpPoly) -> Result<AmpPoly> {
        let terms: Vec<AmpPoly> = p
            .terms()
            .map(|(m, c)| AmpPoly::term(c.clone(), m.clone()))
            .collect();
        // θ(sum t_i) = sum θ t_i - e2(t), e2 = ((sum t)^2 - sum t^2) / 2
        let mut acc = AmpPoly::zero();
        let mut sq = AmpPoly::zero();
        for t in &terms {
            acc = acc.add(&self.theta_term(t)?);
            sq = sq.add(&t.square());
        }
        let e2 = half_exact(&p.square().sub(&sq))?;
        Ok(acc.sub(&e2))
    }

    fn theta_term(&self, t: &AmpPoly) -> Result<AmpPoly> {
        let (mono, c) = t.terms().next().expect("single term");
        let mut factors: Vec<AmpPoly> = Vec::new();
        for (g, e) in mono {
            for _ in 0..*e {
                factors.push(AmpPoly::var(g.clone()));
            }
        }
        let mut cur = AmpPoly::constant(c.clone());
        let mut cur_theta = AmpPoly::constant(theta_of_poly(c)?);
        for f in factors {
            let f_theta = self.gen_theta(&f)?;
            cur_theta = self.theta_product(&cur, &cur_theta, &f, &f_theta)?;
            cur = cur.mul(&f);
        }
        Ok(cur_theta)
    }

    fn gen_theta(&self, f: &AmpPoly) -> Result<AmpPoly> {
        let (mono, _) = f.terms().next().expect("generator");
        let g = &mono[0].0;
        self.gen(Gen::new(g.base, g.theta + 1, g.word.clone()))
    }

    /// `θ(xy) = x^2 θy + y^2 θx + 2 θx θy + Q1x Q2y + Q2x Q1y`.
    fn theta_product(
        &self,
        x: &AmpPoly,
        tx: &AmpPoly,
        y: &AmpPoly,
        ty: &AmpPoly,
    ) -> Result<AmpPoly> {
        let px = self.total_op(x)?;
        let py = self.total_op(y)?;
        Ok(x.square()
            .mul(ty)
            .add(&y.square().mul(tx))
            .add(&tx.mul(ty).scale(&two()))
            .add(&px.c[1].mul(&py.c[2]))
            .add(&px.c[2].mul(&py.c[1])))
    }

    /// `Q0 p - p^2 ∈ 2·A`, checked coefficientwise.
    pub fn frobenius_check(&self, p: &AmpPoly) -> Result<bool> {
        let diff = self.apply_q(0, p)?.sub(&p.square());
        let two = BigInt::from(2);
        let even = diff.terms().all(|(_, c)| c.divisible_by_int(&two));
        Ok(even)
    }
}

/// `θ c = (Q0 c - c^2) / 2` for `c ∈ R`, which is torsion free.
pub fn theta_of_poly(c: &PolyA) -> Result<PolyA> {
    let q0 = crate::gmod::standard_q(0, c);
    q0.sub(&c.square())
        .div_int_exact(&BigInt::from(2))
        .ok_or_else(|| Error::Inconsistent(format!("Q0({c}) - ({c})^2 is odd")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> FreeAmplified {
        FreeAmplified::new(Window::default())
    }

    #[test]
    fn q0_of_generator() {
        let r = ring();
        let x = r.var(0);
        let tx = r.gen(Gen::new(0, 1, vec![])).unwrap();
        assert_eq!(r.apply_q(0, &x).unwrap(), x.square().add(&tx.scale_int(2)));
    }

    #[test]
    fn constants() {
        let r = ring();
        assert!(r.apply_q(1, &AmpPoly::one()).unwrap().is_zero());
        assert!(r.apply_theta(&AmpPoly::one()).unwrap().is_zero());
        let two = AmpPoly::from_i64(2);
        assert_eq!(r.apply_theta(&two).unwrap(), AmpPoly::from_i64(-1));
        assert_eq!(
            theta_of_poly(&PolyA::from_i64s(&[5])).unwrap(),
            PolyA::from_i64s(&[-10])
        );
    }

    #[test]
    fn theta_of_sum_rule() {
        let r = ring();
        let (x, y) = (r.var(0), r.var(1));
        let lhs = r.apply_theta(&x.add(&y)).unwrap();
        let rhs = r
            .apply_theta(&x)
            .unwrap()
            .add(&r.apply_theta(&y).unwrap())
            .sub(&x.mul(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn window_overflow() {
        let r = FreeAmplified::new(Window::new(1, 1));
        let x = r.var(0);
        let q1x = r.apply_q(1, &x).unwrap();
        assert!(matches!(r.apply_q(1, &q1x), Err(Error::WindowOverflow(_))));
    }

    #[test]
    fn frobenius_on_simple_elements() {
        let r = ring();
        assert!(r.frobenius_check(&r.var(0)).unwrap());
        assert!(r.frobenius_check(&AmpPoly::one()).unwrap());
        let p = r.var(0).square().add(&AmpPoly::constant(PolyA::a()));
        assert!(r.frobenius_check(&p).unwrap());
    }

    #[test]
    fn window_generator_count() {
        // (max_theta + 1) * (2^(r+1) - 1) per base
        assert_eq!(Window::default().generators(1).len(), 3 * 15);
    }
}
