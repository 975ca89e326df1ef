//! A torsion-free model used as an independent oracle for the free
//! amplified Γ-ring.
//!
//! `B = R[1/2][h v : h admissible]` is the free Γ-ring on the bases `v`,
//! with `Q_i (h v) = (Q_i h) v` expanded in the admissible basis of `Γ`. In
//! `B` the operator `θ y = (Q0 y - y^2) / 2` is forced, and the symbol
//! `θ^j Q_w v` maps to `θ^j (Q_w v)`.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{AmpPoly, Gen};
use crate::gamma::{AdmMono, GammaElem};
use crate::local::Half;
use crate::mpoly::MPoly;
use crate::poly::PolyA;
use crate::ring::Ring;
use crate::tower::S2;

/// A symbol `h v_base` of the free Γ-ring.
pub type BGen = (u8, AdmMono);
pub type BPoly = MPoly<BGen, Half>;

#[derive(Default)]
pub struct WitnessModel {
    p_cache: RefCell<HashMap<BGen, S2<BPoly>>>,
    embed_cache: RefCell<HashMap<Gen, BPoly>>,
}

impl WitnessModel {
    pub fn new() -> Self {
        Self::default()
    }

    fn total_op_gen(&self, g: &BGen) -> S2<BPoly> {
        if let Some(hit) = self.p_cache.borrow().get(g) {
            return hit.clone();
        }
        let h = GammaElem::mono(g.1.clone());
        let out = S2 {
            c: std::array::from_fn(|i| {
                let qh = GammaElem::q(i as u8).mul(&h);
                qh.terms().fold(BPoly::zero(), |acc, (m, c)| {
                    acc.add(&BPoly::term(
                        Half::from(c.clone()),
                        vec![((g.0, m.clone()), 1)],
                    ))
                })
            }),
        };
        self.p_cache.borrow_mut().insert(g.clone(), out.clone());
        out
    }

    /// `P(y)` in `B[d]/(d^3 - a d - 2)`.
    pub fn total_op(&self, y: &BPoly) -> S2<BPoly> {
        let mut acc = S2::<BPoly>::zero();
        for (mono, c) in y.terms() {
            // P(n / 2^e) = P(n) / 2^e since P(2) = 2.
            let pc = S2::<PolyA>::total_op_of_poly(c.num())
                .map(|p| BPoly::constant(Half::new(p.clone(), c.exp())));
            let mut t = pc;
            for (g, e) in mono {
                t = t.mul(&self.total_op_gen(g).pow(*e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn apply_q(&self, i: u8, y: &BPoly) -> BPoly {
        self.total_op(y).c[i as usize].clone()
    }

    /// `θ y = (Q0 y - y^2) / 2`.
    pub fn theta(&self, y: &BPoly) -> BPoly {
        let half = BPoly::constant(Half::new(PolyA::one(), 1));
        self.apply_q(0, y).sub(&y.square()).mul(&half)
    }

    fn embed_gen(&self, g: &Gen) -> BPoly {
        if let Some(hit) = self.embed_cache.borrow().get(g) {
            return hit.clone();
        }
        let out = if g.theta == 0 {
            BPoly::var((g.base, AdmMono::new(0, g.word.clone())))
        } else {
            let inner = self.embed_gen(&Gen::new(g.base, g.theta - 1, g.word.clone()));
            self.theta(&inner)
        };
        self.embed_cache.borrow_mut().insert(g.clone(), out.clone());
        out
    }

    /// The ring map from the free amplified ring into `B`.
    pub fn embed(&self, p: &AmpPoly) -> BPoly {
        p.eval(
            |c| BPoly::constant(Half::from(c.clone())),
            |g| self.embed_gen(g),
        )
    }

    /// Whether every coefficient of `y` lies in `R` (no powers of 2 in the
    /// denominator).
    pub fn is_integral(y: &BPoly) -> bool {
        y.terms().all(|(_, c)| c.exp() == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplified::{FreeAmplified, Window};
    use crate::error::Result;

    fn agrees(model: &WitnessModel, amp: &Result<AmpPoly>, expected: &BPoly) -> bool {
        matches!(amp, Ok(p) if &model.embed(p) == expected)
    }

    #[test]
    fn theta_of_base_is_half_the_defect() {
        let m = WitnessModel::new();
        let x = BPoly::var((0, AdmMono::identity()));
        let q0x = BPoly::var((0, AdmMono::new(1, vec![])));
        let tx = m.theta(&x);
        assert_eq!(tx.scale_int(2), q0x.sub(&x.square()));
        assert!(!WitnessModel::is_integral(&tx));
        assert!(WitnessModel::is_integral(&tx.scale_int(2)));
    }

    #[test]
    fn engine_matches_model_on_generators() {
        let r = FreeAmplified::new(Window::new(2, 4));
        let m = WitnessModel::new();
        for g in Window::new(1, 2).generators(1) {
            let y = AmpPoly::var(g.clone());
            for i in 0..3u8 {
                let got = r.apply_q(i, &y);
                let want = m.apply_q(i, &m.embed(&y));
                assert!(agrees(&m, &got, &want), "Q{i} on {g}");
            }
            let got = r.apply_theta(&y);
            let want = m.theta(&m.embed(&y));
            assert!(agrees(&m, &got, &want), "θ on {g}");
        }
    }
}
