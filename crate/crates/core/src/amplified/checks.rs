//! Identity suite, scalar-extension continuity, and the non-examples
//! `R/(2)` and `R/(2, a)`.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use super::witness::{BPoly, WitnessModel};
use super::{render_amp, AmpPoly, FreeAmplified, Gen};
use crate::error::{Error, Result};
use crate::gamma::{basis_up_to, psi, AdmMono, GammaElem};
use crate::gmod::standard_act;
use crate::local::Half;
use crate::poly::PolyA;
use crate::ring::{Algebra, Ring};
use crate::tower::S2;

/// Outcome of one displayed identity on one sample pair.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub x: String,
    pub y: String,
    /// Both sides computed with the amplified-ring engine agree.
    pub engine: bool,
    /// The engine's right-hand side embeds to the left-hand side computed
    /// in the torsion-free model.
    pub witness: bool,
    pub error: Option<String>,
}

impl IdentityResult {
    pub fn ok(&self) -> bool {
        self.engine && self.witness && self.error.is_none()
    }
}

pub const IDENTITY_NAMES: [&str; 5] = [
    "θ(x+y) = θx + θy - xy",
    "θ(ax) = a^2 θx - a Q1x + 3 Q2x",
    "θ(xy) = x^2 θy + y^2 θx + 2 θx θy + Q1x Q2y + Q2x Q1y",
    "Q1 θx = Q2Q1x - Q0Q2x - Q0x Q1x - a Q1x Q2x - (Q2x)^2",
    "Q2 θx = θQ1x + a θQ2x - Q1Q2x - Q0x Q2x",
];

struct Sides {
    lhs: AmpPoly,
    rhs: AmpPoly,
    model_lhs: BPoly,
}

fn sides(
    r: &FreeAmplified,
    m: &WitnessModel,
    which: usize,
    x: &AmpPoly,
    y: &AmpPoly,
) -> Result<Sides> {
    let a = AmpPoly::from_poly(&PolyA::a());
    let q = |i: u8, p: &AmpPoly| r.apply_q(i, p);
    let th = |p: &AmpPoly| r.apply_theta(p);
    let (bx, by) = (m.embed(x), m.embed(y));
    let ba = BPoly::constant(Half::from(PolyA::a()));
    Ok(match which {
        0 => Sides {
            lhs: th(&x.add(y))?,
            rhs: th(x)?.add(&th(y)?).sub(&x.mul(y)),
            model_lhs: m.theta(&bx.add(&by)),
        },
        1 => Sides {
            lhs: th(&a.mul(x))?,
            rhs: a
                .square()
                .mul(&th(x)?)
                .sub(&a.mul(&q(1, x)?))
                .add(&q(2, x)?.scale_int(3)),
            model_lhs: m.theta(&ba.mul(&bx)),
        },
        2 => {
            let (tx, ty) = (th(x)?, th(y)?);
            Sides {
                lhs: th(&x.mul(y))?,
                rhs: x
                    .square()
                    .mul(&ty)
                    .add(&y.square().mul(&tx))
                    .add(&tx.mul(&ty).scale_int(2))
                    .add(&q(1, x)?.mul(&q(2, y)?))
                    .add(&q(2, x)?.mul(&q(1, y)?)),
                model_lhs: m.theta(&bx.mul(&by)),
            }
        }
        3 => {
            let (q0, q1, q2) = (q(0, x)?, q(1, x)?, q(2, x)?);
            Sides {
                lhs: q(1, &th(x)?)?,
                rhs: q(2, &q1)?
                    .sub(&q(0, &q2)?)
                    .sub(&q0.mul(&q1))
                    .sub(&a.mul(&q1).mul(&q2))
                    .sub(&q2.square()),
                model_lhs: m.apply_q(1, &m.theta(&bx)),
            }
        }
        4 => {
            let (q0, q1, q2) = (q(0, x)?, q(1, x)?, q(2, x)?);
            Sides {
                lhs: q(2, &th(x)?)?,
                rhs: th(&q1)?
                    .add(&a.mul(&th(&q2)?))
                    .sub(&q(1, &q2)?)
                    .sub(&q0.mul(&q2)),
                model_lhs: m.apply_q(2, &m.theta(&bx)),
            }
        }
        _ => return Err(Error::Parse(format!("no identity number {which}"))),
    })
}

/// Evaluates all five displayed θ identities on each sample pair.
pub fn identity_suite(
    r: &FreeAmplified,
    m: &WitnessModel,
    samples: &[(AmpPoly, AmpPoly)],
) -> Vec<IdentityResult> {
    let mut out = Vec::new();
    for (which, name) in IDENTITY_NAMES.iter().enumerate() {
        for (x, y) in samples {
            let mut res = IdentityResult {
                identity: name.to_string(),
                x: render_amp(x),
                y: render_amp(y),
                engine: false,
                witness: false,
                error: None,
            };
            match sides(r, m, which, x, y) {
                Ok(s) => {
                    res.engine = s.lhs == s.rhs;
                    res.witness = m.embed(&s.rhs) == s.model_lhs;
                }
                Err(e) => res.error = Some(e.to_string()),
            }
            out.push(res);
        }
    }
    out
}

/// `Ψ θ x = θ Ψ x` for the given element; returns both sides.
pub fn psi_theta_check(r: &FreeAmplified, x: &AmpPoly) -> Result<(AmpPoly, AmpPoly)> {
    let p = psi();
    let lhs = r.apply_gamma(&p, &r.apply_theta(x)?)?;
    let rhs = r.apply_theta(&r.apply_gamma(&p, x)?)?;
    Ok((lhs, rhs))
}

fn random_coeff(rng: &mut impl Rng) -> PolyA {
    let c: i64 = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
    match rng.gen_range(0..3) {
        0 => PolyA::from_i64s(&[c]),
        1 => PolyA::from_i64s(&[0, c]),
        _ => PolyA::from_i64s(&[c, rng.gen_range(-2..=2), 1]),
    }
}

/// A random polynomial with up to `max_terms` terms, each a product of up
/// to `max_factors` symbols drawn from `gens`.
pub fn random_window_poly(
    rng: &mut impl Rng,
    gens: &[Gen],
    max_terms: usize,
    max_factors: usize,
) -> AmpPoly {
    let mut p = AmpPoly::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut t = AmpPoly::constant(random_coeff(rng));
        for _ in 0..rng.gen_range(0..=max_factors) {
            t = t.mul(&AmpPoly::var(gens[rng.gen_range(0..gens.len())].clone()));
        }
        p = p.add(&t);
    }
    p
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityViolation {
    pub operation: String,
    pub input: String,
    pub output: String,
    pub requirement: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub max_deg: usize,
    pub max_k: u32,
    pub checks: usize,
    /// Violations of `Γ·2R ⊆ 2R`.
    pub two_violations: Vec<ContinuityViolation>,
    /// Violations of `Γ·a^3 R ⊆ 2R + aR`.
    pub cube_violations: Vec<ContinuityViolation>,
    /// `g(a^(3^r)) ∈ 2R + aR` for every admissible `g` of degree
    /// `r <= min(max_deg, 3)`, the degree-graded form of the cube bound.
    pub graded_bound_holds: bool,
    pub graded_checks: usize,
}

impl ContinuityReport {
    pub fn ok(&self) -> bool {
        self.two_violations.is_empty() && self.cube_violations.is_empty()
    }
}

fn in_2r_plus_ar(p: &PolyA) -> bool {
    p.coeff(0).is_even()
}

/// `g(y)` for every admissible `g` of degree `<= max_deg`. Monomials are
/// grown by prepending letters, so each intermediate value is shared and
/// costs one evaluation of the total operation `p`.
fn act_all(max_deg: usize, y: &PolyA, p: impl Fn(&PolyA) -> [PolyA; 3]) -> Vec<(AdmMono, PolyA)> {
    let mut out = vec![(AdmMono::identity(), y.clone())];
    let mut frontier = 0;
    for _ in 0..max_deg {
        let end = out.len();
        for idx in frontier..end {
            let (m, v) = out[idx].clone();
            let [q0, q1, q2] = p(&v);
            out.push((AdmMono::new(m.j + 1, m.word.clone()), q0));
            if m.j == 0 {
                for (k, q) in [(1u8, q1), (2, q2)] {
                    let mut word = vec![k];
                    word.extend_from_slice(&m.word);
                    out.push((AdmMono::new(0, word), q));
                }
            }
        }
        frontier = end;
    }
    out
}

fn total_op_exact(v: &PolyA) -> [PolyA; 3] {
    S2::<PolyA>::total_op_of_poly(v).c
}

fn total_op_mod2(v: &PolyA) -> [PolyA; 3] {
    let two = BigInt::from(2);
    let pa = S2::<PolyA>::p_of_a().map(|c| c.mod_int(&two));
    v.mod_int(&two)
        .coeffs()
        .iter()
        .rev()
        .fold(S2::<PolyA>::zero(), |acc, c| {
            acc.mul(&pa)
                .add(&S2::from_base(PolyA::constant(c.clone())))
                .map(|x| x.mod_int(&two))
        })
        .c
}

/// For every admissible monomial `g` of degree `<= max_deg` and every
/// `k <= max_k`: `g(2 a^k) ∈ 2R` and `g(a^(3+k)) ∈ 2R + aR`.
pub fn continuity_check(max_deg: usize, max_k: u32) -> ContinuityReport {
    let mut two_violations = Vec::new();
    let mut cube_violations = Vec::new();
    let mut checks = 0;
    let two = BigInt::from(2);
    for k in 0..=max_k {
        let x = PolyA::monomial(two.clone(), k as usize);
        for (m, gx) in act_all(max_deg, &x, total_op_exact) {
            checks += 1;
            if !gx.divisible_by_int(&two) {
                two_violations.push(ContinuityViolation {
                    operation: m.to_string(),
                    input: x.to_string(),
                    output: gx.to_string(),
                    requirement: "2R".into(),
                });
            }
        }
        let y = PolyA::monomial(BigInt::from(1), 3 + k as usize);
        for (m, gy) in act_all(max_deg, &y, total_op_exact) {
            checks += 1;
            if !in_2r_plus_ar(&gy) {
                cube_violations.push(ContinuityViolation {
                    operation: m.to_string(),
                    input: y.to_string(),
                    output: gy.to_string(),
                    requirement: "2R + aR".into(),
                });
            }
        }
    }
    let mut graded_checks = 0;
    let mut graded_bound_holds = true;
    for r in 0..=max_deg.min(3) {
        let y = PolyA::monomial(BigInt::from(1), 3usize.pow(r as u32));
        for (m, gy) in act_all(r, &y, total_op_mod2) {
            if m.degree() == r {
                graded_checks += 1;
                graded_bound_holds &= in_2r_plus_ar(&gy);
            }
        }
    }
    ContinuityReport {
        max_deg,
        max_k,
        checks,
        two_violations,
        cube_violations,
        graded_bound_holds,
        graded_checks,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonexampleReport {
    /// `(operation, input, output)` with input in `(2, a)` and output not.
    pub witness_mod_2a: Option<(String, String, String)>,
    /// `Γ·2r ⊆ 2R` on every tested pair, so the action descends to `R/(2)`.
    pub descends_mod_2: bool,
    pub descent_checks: usize,
    /// The identity acts on every element.
    pub identity_descends: bool,
    /// `θ(2) = -1` while `2 ≡ 0` and `θ(0) = 0`: `θ` does not descend to
    /// `R/(2)`.
    pub theta_of_two: String,
    pub theta_descends_mod_2: bool,
}

impl NonexampleReport {
    pub fn ok(&self) -> bool {
        self.witness_mod_2a.is_some()
            && self.descends_mod_2
            && self.identity_descends
            && !self.theta_descends_mod_2
    }
}

pub fn nonexample_check() -> Result<NonexampleReport> {
    let monos = basis_up_to(3);
    let two = BigInt::from(2);
    let ideal_samples: Vec<PolyA> = vec![
        PolyA::from_i64s(&[2]),
        PolyA::a(),
        PolyA::from_i64s(&[2, 1]),
        PolyA::from_i64s(&[0, 0, 1]),
    ];
    let mut witness = None;
    'outer: for m in monos.iter().filter(|m| m.degree() > 0) {
        for x in &ideal_samples {
            let y = standard_act(&GammaElem::mono(m.clone()), x);
            if !in_2r_plus_ar(&y) {
                witness = Some((m.to_string(), x.to_string(), y.to_string()));
                break 'outer;
            }
        }
    }
    let mut descent_checks = 0;
    let mut descends = true;
    for m in &monos {
        for k in 0..=6usize {
            for r in [
                PolyA::monomial(BigInt::from(1), k),
                PolyA::from_i64s(&[1, 1]).pow(k as u32),
            ] {
                descent_checks += 1;
                let y = standard_act(&GammaElem::mono(m.clone()), &r.scale(&two));
                descends &= y.divisible_by_int(&two);
            }
        }
    }
    let identity_descends = ideal_samples
        .iter()
        .all(|x| &standard_act(&GammaElem::one(), x) == x);
    let t2 = super::theta_of_poly(&PolyA::from_i64s(&[2]))?;
    let t0 = super::theta_of_poly(&PolyA::zero())?;
    Ok(NonexampleReport {
        witness_mod_2a: witness,
        descends_mod_2: descends,
        descent_checks,
        identity_descends,
        theta_of_two: t2.to_string(),
        theta_descends_mod_2: t2.sub(&t0).divisible_by_int(&two),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplified::Window;

    #[test]
    fn identities_on_free_generators() {
        let r = FreeAmplified::new(Window::default());
        let m = WitnessModel::new();
        let samples = vec![(r.var(0), r.var(1))];
        for res in identity_suite(&r, &m, &samples) {
            assert!(res.ok(), "{res:?}");
        }
    }

    #[test]
    fn continuity_examples() {
        // Q1(2a) = 6
        assert_eq!(
            standard_act(&GammaElem::q(1), &PolyA::from_i64s(&[0, 2])),
            PolyA::from_i64s(&[6])
        );
        let rep = continuity_check(1, 6);
        assert!(rep.two_violations.is_empty());
    }

    #[test]
    fn nonexamples() {
        let rep = nonexample_check().unwrap();
        assert!(rep.ok(), "{rep:?}");
        let (op, input, output) = rep.witness_mod_2a.unwrap();
        assert_eq!(
            (op.as_str(), input.as_str(), output.as_str()),
            ("Q1", "a", "3")
        );
        assert_eq!(rep.theta_of_two, "-1");
    }
}
