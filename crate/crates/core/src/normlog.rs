//! The trace element `T`, the multiplicative norm `N`, the operator `M`
//! and the 2-adic logarithm `ℓ`, over the hosts `R`, `S` and `Ŝ`.
//!
//! Every host supplies the total operation `P(x) = Q0x + Q1x d + Q2x d^2`;
//! the operators below only use `P`.
//!
//! * `Tx = 3 Q0x + 2a Q2x`
//! * `Nx = (Q0x)^3 + 2a (Q0x)^2 Q2x - a Q0x (Q1x)^2 + a^2 Q0x (Q2x)^2
//!   - 6 Q0x Q1x Q2x + 2 (Q1x)^3 - 2a Q1x (Q2x)^2 + 4 (Q2x)^3`
//! * `1 + 2 Mx = x^2 Ψx / Nx`
//! * `ℓx = sum_{k>=1} (-1)^(k-1) 2^(k-1) (Mx)^k / k`

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{psi, GammaElem};
use crate::local::SElem;
use crate::padic::{padic_log1p, PadicElem};
use crate::poly::PolyA;
use crate::ring::{Algebra, Ring, TryInverse};
use crate::tower::S2;

/// A ring with an action of `Γ`, presented through its total operation.
pub trait GammaHost {
    type Elem: Algebra + fmt::Display;

    fn total_op(&self, x: &Self::Elem) -> Result<S2<Self::Elem>>;

    /// `x / y` when `y` is a unit.
    fn divide(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;

    /// `x / 2` when it exists in the host.
    fn halve(&self, x: &Self::Elem) -> Result<Self::Elem>;

    /// The image in `Ŝ = Z_2[[a]]` at the given precision.
    fn to_padic(&self, x: &Self::Elem, prec2: u32, prec_a: usize) -> Result<PadicElem>;
}

/// `R = Z[a]` with its standard action.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardR;

impl GammaHost for StandardR {
    type Elem = PolyA;

    fn total_op(&self, x: &PolyA) -> Result<S2<PolyA>> {
        Ok(S2::total_op_of_poly(x))
    }

    fn divide(&self, x: &PolyA, y: &PolyA) -> Result<PolyA> {
        let inv = y
            .try_inverse()
            .ok_or_else(|| Error::NotAUnit(format!("{y} is not a unit of R")))?;
        Ok(x.mul(&inv))
    }

    fn halve(&self, x: &PolyA) -> Result<PolyA> {
        x.div_int_exact(&BigInt::from(2))
            .ok_or_else(|| Error::Inconsistent(format!("{x} is not divisible by 2 in R")))
    }

    fn to_padic(&self, x: &PolyA, prec2: u32, prec_a: usize) -> Result<PadicElem> {
        Ok(PadicElem::from_poly(x, prec2, prec_a))
    }
}

/// `S = R[1/D]`. The action extends uniquely because `P(D)` is a unit of
/// `S[d]/(d^3 - a d - 2)`: its norm is `N(D) = -D^3`.
#[derive(Clone, Debug)]
pub struct LocalizedS {
    inv_p_disc: S2<SElem>,
}

impl LocalizedS {
    pub fn new() -> Result<Self> {
        let pd = S2::<PolyA>::total_op_of_poly(&PolyA::disc()).map(SElem::from_poly);
        let inv_p_disc = pd
            .try_inverse()
            .ok_or_else(|| Error::Inconsistent("P(D) is not invertible over S".into()))?;
        Ok(LocalizedS { inv_p_disc })
    }
}

impl GammaHost for LocalizedS {
    type Elem = SElem;

    fn total_op(&self, x: &SElem) -> Result<S2<SElem>> {
        let num = S2::<PolyA>::total_op_of_poly(x.num()).map(SElem::from_poly);
        Ok(num.mul(&self.inv_p_disc.pow(x.exp())))
    }

    fn divide(&self, x: &SElem, y: &SElem) -> Result<SElem> {
        let inv = y
            .try_inverse()
            .ok_or_else(|| Error::NotAUnit(format!("{y} is not a unit of S")))?;
        Ok(x.mul(&inv))
    }

    fn halve(&self, x: &SElem) -> Result<SElem> {
        x.halve()
            .ok_or_else(|| Error::Inconsistent(format!("{x} is not divisible by 2 in S")))
    }

    fn to_padic(&self, x: &SElem, prec2: u32, prec_a: usize) -> Result<PadicElem> {
        let inv_d = PadicElem::from_poly(&PolyA::disc(), prec2, prec_a).inverse()?;
        let mut out = PadicElem::from_poly(x.num(), prec2, prec_a);
        for _ in 0..x.exp() {
            out = out.mul(&inv_d);
        }
        Ok(out)
    }
}

/// An element `re + eps·ε` of `R[ε]/(ε^2)`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Dual {
    pub re: PolyA,
    pub eps: PolyA,
}

impl Dual {
    pub fn new(re: PolyA, eps: PolyA) -> Self {
        Dual { re, eps }
    }

    pub fn epsilon(r: PolyA) -> Self {
        Dual::new(PolyA::zero(), r)
    }
}

impl Ring for Dual {
    fn zero() -> Self {
        Dual::default()
    }
    fn one() -> Self {
        Dual::new(PolyA::one(), PolyA::zero())
    }
    fn from_int(n: &BigInt) -> Self {
        Dual::new(PolyA::from_int(n), PolyA::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Dual::new(self.re.add(&o.re), self.eps.add(&o.eps))
    }
    fn sub(&self, o: &Self) -> Self {
        Dual::new(self.re.sub(&o.re), self.eps.sub(&o.eps))
    }
    fn mul(&self, o: &Self) -> Self {
        Dual::new(
            self.re.mul(&o.re),
            self.re.mul(&o.eps).add(&self.eps.mul(&o.re)),
        )
    }
    fn neg(&self) -> Self {
        Dual::new(self.re.neg(), self.eps.neg())
    }
}

impl Algebra for Dual {
    fn from_poly(p: &PolyA) -> Self {
        Dual::new(p.clone(), PolyA::zero())
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({}) ε", self.re, self.eps)
    }
}

/// `R[ε]/(ε^2)` with the action extended `ε`-linearly,
/// `Q_i(r + ε s) = Q_i r + ε Q_i s`; the quotient map to `R` is a map of
/// `Γ`-rings with square-zero kernel `(ε)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DualR;

impl GammaHost for DualR {
    type Elem = Dual;

    fn total_op(&self, x: &Dual) -> Result<S2<Dual>> {
        let re = S2::<PolyA>::total_op_of_poly(&x.re);
        let eps = S2::<PolyA>::total_op_of_poly(&x.eps);
        Ok(S2::new(
            Dual::new(re.c[0].clone(), eps.c[0].clone()),
            Dual::new(re.c[1].clone(), eps.c[1].clone()),
            Dual::new(re.c[2].clone(), eps.c[2].clone()),
        ))
    }

    fn divide(&self, x: &Dual, y: &Dual) -> Result<Dual> {
        let inv_re =
            y.re.try_inverse()
                .ok_or_else(|| Error::NotAUnit(format!("{y} is not a unit of R[ε]")))?;
        let inv = Dual::new(inv_re.clone(), y.eps.mul(&inv_re.square()).neg());
        Ok(x.mul(&inv))
    }

    fn halve(&self, x: &Dual) -> Result<Dual> {
        let two = BigInt::from(2);
        match (x.re.div_int_exact(&two), x.eps.div_int_exact(&two)) {
            (Some(re), Some(eps)) => Ok(Dual::new(re, eps)),
            _ => Err(Error::Inconsistent(format!("{x} is not divisible by 2"))),
        }
    }

    fn to_padic(&self, x: &Dual, _prec2: u32, _prec_a: usize) -> Result<PadicElem> {
        Err(Error::Inconsistent(format!(
            "{x} has no image in the 2-adic completion"
        )))
    }
}

/// `(Q0x, Q1x, Q2x)`.
pub fn q_triple<H: GammaHost>(h: &H, x: &H::Elem) -> Result<[H::Elem; 3]> {
    Ok(h.total_op(x)?.c)
}

/// `g x` for `g ∈ Γ`: each admissible monomial is applied letter by letter
/// from the right, sharing common right factors, and its left coefficient
/// multiplies the result.
pub fn act<H: GammaHost>(h: &H, g: &GammaElem, x: &H::Elem) -> Result<H::Elem> {
    let mut memo: HashMap<Vec<u8>, H::Elem> = HashMap::new();
    memo.insert(Vec::new(), x.clone());
    let mut acc = H::Elem::zero();
    for (m, c) in g.terms() {
        let letters: Vec<u8> = m.letters().collect();
        for start in (0..letters.len()).rev() {
            let suffix = letters[start..].to_vec();
            if memo.contains_key(&suffix) {
                continue;
            }
            let inner = memo[&suffix[1..]].clone();
            let p = h.total_op(&inner)?;
            for (i, q) in p.c.into_iter().enumerate() {
                let mut key = vec![i as u8];
                key.extend_from_slice(&suffix[1..]);
                memo.insert(key, q);
            }
        }
        acc = acc.add(&H::Elem::from_poly(c).mul(&memo[&letters]));
    }
    Ok(acc)
}

/// `Tx = 3 Q0x + 2a Q2x`.
pub fn trace<H: GammaHost>(h: &H, x: &H::Elem) -> Result<H::Elem> {
    let [q0, _, q2] = q_triple(h, x)?;
    Ok(q0.scale_int(3).add(&H::Elem::a().mul(&q2).scale_int(2)))
}

/// The norm as a polynomial in `Q0x, Q1x, Q2x`.
pub fn norm_formula<B: Algebra>(q0: &B, q1: &B, q2: &B) -> B {
    let a = B::a();
    let a2 = a.square();
    [
        q0.pow(3),
        a.mul(&q0.square()).mul(q2).scale_int(2),
        a.mul(q0).mul(&q1.square()).neg(),
        a2.mul(q0).mul(&q2.square()),
        q0.mul(q1).mul(q2).scale_int(-6),
        q1.pow(3).scale_int(2),
        a.mul(q1).mul(&q2.square()).scale_int(-2),
        q2.pow(3).scale_int(4),
    ]
    .iter()
    .fold(B::zero(), |acc, t| acc.add(t))
}

pub fn norm<H: GammaHost>(h: &H, x: &H::Elem) -> Result<H::Elem> {
    let [q0, q1, q2] = q_triple(h, x)?;
    Ok(norm_formula(&q0, &q1, &q2))
}

pub fn psi_act<H: GammaHost>(h: &H, x: &H::Elem) -> Result<H::Elem> {
    act(h, &psi(), x)
}

/// `x^2 Ψx / Nx`, defined when `Nx` is a unit.
pub fn log_argument<H: GammaHost>(h: &H, x: &H::Elem) -> Result<H::Elem> {
    let n = norm(h, x)?;
    let num = x.square().mul(&psi_act(h, x)?);
    h.divide(&num, &n)
        .map_err(|_| Error::NotAUnit(format!("N({x}) = {n} is not a unit")))
}

/// `Mx = (x^2 Ψx / Nx - 1) / 2`.
pub fn m_op<H: GammaHost>(h: &H, x: &H::Elem) -> Result<H::Elem> {
    let y = log_argument(h, x)?;
    h.halve(&y.sub(&H::Elem::one()))
}

/// `ℓx ∈ Ŝ` to 2-adic precision `prec2` and `a`-adic precision `prec_a`.
pub fn ell<H: GammaHost>(h: &H, x: &H::Elem, prec2: u32, prec_a: usize) -> Result<PadicElem> {
    let m = m_op(h, x)?;
    padic_log1p(&h.to_padic(&m, prec2, prec_a)?, prec2)
}

/// The whole evaluation chain for one input, rendered for reports.
#[derive(Clone, Debug, Serialize)]
pub struct NormLogReport {
    pub x: String,
    pub t: String,
    pub n: String,
    pub psi: String,
    pub m: Option<String>,
    pub ell: Option<String>,
}

/// `Q_i` on `Ŝ` through the action on a polynomial representative.
///
/// An input known modulo `(2^N, a^M)` determines `Q_i x` modulo
/// `2^N + (2, a)^m` with `m = floor(M / 3)`, because
/// `P(a)^3 ≡ d^3 ≡ 0 mod (2, a)`. The result is reported at a precision
/// `(N', M')` with `N' + M' <= m + 1`, which is contained in that ideal.
pub fn act_padic(i: u8, x: &PadicElem) -> PadicElem {
    let (prec2, prec_a) = padic_action_precision(x.prec2(), x.prec_a());
    let q = S2::<PolyA>::total_op_of_poly(&x.to_poly()).c[i as usize].clone();
    PadicElem::from_poly(&q, prec2, prec_a)
}

/// Output precision of `act_padic` for an input precision.
pub fn padic_action_precision(prec2: u32, prec_a: usize) -> (u32, usize) {
    let m = prec_a / 3;
    let n2 = (prec2 as usize).min(m.div_ceil(2).max(usize::from(m > 0)));
    let na = (m + 1).saturating_sub(n2).min(prec_a);
    (n2 as u32, na)
}

/// One sample of the pointwise kernel scan.
#[derive(Clone, Debug, Serialize)]
pub struct KernelSample {
    pub x: String,
    pub ell: String,
    pub vanishes: bool,
}

/// Evaluates `ℓ` on random units `x ∈ R` with odd constant term (units of
/// `Ŝ`) of degree `<= max_deg` and coefficients in `[-bound, bound]`.
/// This is a sampling harness only; no description of the kernel is
/// claimed.
pub fn kernel_scan(
    rng: &mut impl Rng,
    samples: usize,
    max_deg: usize,
    bound: i64,
    prec2: u32,
    prec_a: usize,
) -> Result<Vec<KernelSample>> {
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut cs: Vec<i64> = (0..=max_deg)
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        if cs[0] % 2 == 0 {
            cs[0] += 1;
        }
        let x = PolyA::from_i64s(&cs);
        let l = ell_completed(&x, prec2, prec_a)?;
        out.push(KernelSample {
            x: x.to_string(),
            vanishes: l.is_zero(),
            ell: l.to_string(),
        });
    }
    Ok(out)
}

/// `ℓ` for `x ∈ R` computed in `Ŝ`: `x` only needs to be a unit of `Ŝ`
/// (odd constant term), so `Nx` is inverted 2-adically.
pub fn ell_completed(x: &PolyA, prec2: u32, prec_a: usize) -> Result<PadicElem> {
    let h = StandardR;
    let n = h.to_padic(&norm(&h, x)?, prec2 + 1, prec_a)?;
    if !n.is_unit() {
        return Err(Error::NotAUnit(format!(
            "{x} is not a unit of the completion"
        )));
    }
    let num = h.to_padic(&x.square().mul(&psi_act(&h, x)?), prec2 + 1, prec_a)?;
    let y = num.mul(&n.inverse()?);
    let m = y.sub(&PadicElem::from_int(1, prec2 + 1, prec_a)).halve()?;
    padic_log1p(&m, prec2)
}

/// Checks `Nx - x^2 Ψx ∈ 2R`.
pub fn norm_congruence(x: &PolyA) -> Result<bool> {
    let h = StandardR;
    let diff = norm(&h, x)?.sub(&x.square().mul(&psi_act(&h, x)?));
    Ok(diff.divisible_by_int(&BigInt::from(2)))
}

/// The `ε`-coefficient of `N(1 + εr)`, to be compared with `Tr`.
pub fn linearization(r: &PolyA) -> Result<(Dual, PolyA)> {
    let n = norm(&DualR, &Dual::new(PolyA::one(), r.clone()))?;
    Ok((n, trace(&StandardR, r)?))
}

/// Hosts selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HostRing {
    R,
    S,
    Shat,
}

impl std::str::FromStr for HostRing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(HostRing::R),
            "S" | "s" => Ok(HostRing::S),
            "Shat" | "shat" | "Ŝ" => Ok(HostRing::Shat),
            other => Err(Error::Parse(format!(
                "unknown ring {other:?}; expected R, S or Shat"
            ))),
        }
    }
}

/// Operators selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormOp {
    T,
    N,
    M,
    Ell,
    Psi,
}

impl std::str::FromStr for NormOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" | "trace" => Ok(NormOp::T),
            "N" | "n" | "norm" => Ok(NormOp::N),
            "M" | "m" => Ok(NormOp::M),
            "ell" | "l" | "log" => Ok(NormOp::Ell),
            "psi" | "Psi" => Ok(NormOp::Psi),
            other => Err(Error::Parse(format!(
                "unknown operator {other:?}; expected T, N, M, ell or psi"
            ))),
        }
    }
}

/// Evaluates `op` on the text input `x` in the chosen host and renders the
/// result.
pub fn eval(op: NormOp, ring: HostRing, x: &str, prec2: u32, prec_a: usize) -> Result<String> {
    match ring {
        HostRing::R => {
            let v = crate::expr::parse_poly(x)?;
            eval_in(&StandardR, op, &v, prec2, prec_a)
        }
        HostRing::S => {
            let v = crate::expr::parse_s(x)?;
            eval_in(&LocalizedS::new()?, op, &v, prec2, prec_a)
        }
        HostRing::Shat => {
            let v = crate::expr::parse_s(x)?;
            let h = LocalizedS::new()?;
            match op {
                NormOp::Ell => match v.to_poly() {
                    Some(p) => Ok(ell_completed(&p, prec2, prec_a)?.to_string()),
                    None => Ok(ell(&h, &v, prec2, prec_a)?.to_string()),
                },
                _ => {
                    let out = match op {
                        NormOp::T => trace(&h, &v)?,
                        NormOp::N => norm(&h, &v)?,
                        NormOp::M => m_op(&h, &v)?,
                        NormOp::Psi => psi_act(&h, &v)?,
                        NormOp::Ell => unreachable!(),
                    };
                    Ok(h.to_padic(&out, prec2, prec_a)?.to_string())
                }
            }
        }
    }
}

fn eval_in<H: GammaHost>(
    h: &H,
    op: NormOp,
    x: &H::Elem,
    prec2: u32,
    prec_a: usize,
) -> Result<String> {
    Ok(match op {
        NormOp::T => trace(h, x)?.to_string(),
        NormOp::N => norm(h, x)?.to_string(),
        NormOp::M => m_op(h, x)?.to_string(),
        NormOp::Psi => psi_act(h, x)?.to_string(),
        NormOp::Ell => ell(h, x, prec2, prec_a)?.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::standard_act;

    fn p(cs: &[i64]) -> PolyA {
        PolyA::from_i64s(cs)
    }

    #[test]
    fn trace_examples() {
        let h = StandardR;
        assert_eq!(trace(&h, &p(&[1])).unwrap(), p(&[3]));
        assert_eq!(trace(&h, &PolyA::a()).unwrap(), p(&[0, 0, 1]));
        assert_eq!(trace(&h, &PolyA::zero()).unwrap(), PolyA::zero());
    }

    #[test]
    fn norm_examples() {
        let h = StandardR;
        for m in -3..=3 {
            assert_eq!(norm(&h, &p(&[m])).unwrap(), p(&[m * m * m]));
        }
        let am3 = p(&[-3, 1]);
        assert_eq!(norm(&h, &am3).unwrap(), am3.pow(3).neg());
        let d = PolyA::disc();
        assert_eq!(norm(&h, &d).unwrap(), d.pow(3).neg());
    }

    #[test]
    fn norm_is_the_norm_of_the_total_operation() {
        let x = p(&[2, -1, 3]);
        let px = S2::<PolyA>::total_op_of_poly(&x);
        assert_eq!(norm(&StandardR, &x).unwrap(), px.norm());
        assert_eq!(trace(&StandardR, &x).unwrap(), px.trace());
    }

    #[test]
    fn psi_act_matches_module_action() {
        for x in [p(&[0, 1]), p(&[1, 1, 1]), PolyA::disc()] {
            assert_eq!(psi_act(&StandardR, &x).unwrap(), standard_act(&psi(), &x));
        }
    }

    #[test]
    fn disc_identity() {
        let h = StandardR;
        let d = PolyA::disc();
        let lhs = d.square().mul(&psi_act(&h, &d).unwrap());
        assert_eq!(lhs, norm(&h, &d).unwrap().neg());
    }

    #[test]
    fn linearization_examples() {
        for r in [
            p(&[1]),
            p(&[0, 1]),
            p(&[0, 0, 1]),
            p(&[2, 1]),
            PolyA::zero(),
        ] {
            let (n, t) = linearization(&r).unwrap();
            assert_eq!(n.re, PolyA::one());
            assert_eq!(n.eps, t, "r = {r}");
        }
    }

    #[test]
    fn congruence() {
        for x in [p(&[0, 1]), p(&[1]), p(&[-3, 1]), p(&[5, -2, 7])] {
            assert!(norm_congruence(&x).unwrap(), "{x}");
        }
    }

    #[test]
    fn ell_of_units_of_s() {
        let h = LocalizedS::new().unwrap();
        for k in -3..=3i64 {
            for sign in [1, -1] {
                let x = SElem::base_pow(k).scale_int(sign);
                let l = ell(&h, &x, 20, 16).unwrap();
                assert!(l.is_zero(), "ℓ({x}) = {l}");
            }
        }
    }

    #[test]
    fn ell_is_a_homomorphism() {
        let x = p(&[1, 2]);
        let y = p(&[3, 0, 4]);
        let lx = ell_completed(&x, 16, 8).unwrap();
        let ly = ell_completed(&y, 16, 8).unwrap();
        let lxy = ell_completed(&x.mul(&y), 16, 8).unwrap();
        assert_eq!(lxy, lx.add(&ly));
    }

    #[test]
    fn ell_of_one_plus_two_a_is_nonzero() {
        let l = ell_completed(&p(&[1, 2]), 16, 8).unwrap();
        assert!(!l.is_zero());
    }

    #[test]
    fn dual_division_inverts() {
        let y = Dual::new(p(&[-1]), p(&[0, 3]));
        let q = DualR.divide(&Dual::one(), &y).unwrap();
        assert_eq!(q.mul(&y), Dual::one());
    }

    #[test]
    fn padic_action_precision_is_contained_in_the_error_ideal() {
        for (n, m) in [(20u32, 16usize), (4, 3), (1, 1), (10, 30)] {
            let (n2, ma) = padic_action_precision(n, m);
            assert!(n2 as usize + ma <= m / 3 + 1);
            assert!(n2 <= n && ma <= m);
        }
    }

    #[test]
    fn eval_by_name() {
        assert_eq!(
            eval(NormOp::N, HostRing::R, "a - 3", 20, 16).unwrap(),
            p(&[-3, 1]).pow(3).neg().to_string()
        );
        assert_eq!(eval(NormOp::T, HostRing::R, "a", 20, 16).unwrap(), "a^2");
        assert!(eval(NormOp::Ell, HostRing::S, "D", 20, 16)
            .unwrap()
            .starts_with("0 +"));
    }
}
