//! The curve `C: v^2 + a u v + v = u^3` in the chart around the identity,
//! translation by the universal point of order 2, the degree-2 isogeny to
//! `C2: v'^2 + (a^2 + 3d - a d^2) u' v' + v' = u'^3`, and the derivation of
//! the relations of `Γ` from the total power operation.
//!
//! Series arithmetic runs over `S2[1/2]`, where `d` is a unit
//! (`d (d^2 - a) = 2`); every reported coefficient is checked to lie in
//! `S2` itself.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gamma::{psi, AdmMono, GammaElem};
use crate::gmod::{cartan_terms, standard_q, ModulePresentation};
use crate::local::{Half, SElem};
use crate::mpoly::MPoly;
use crate::normlog::norm_formula;
use crate::poly::PolyA;
use crate::ring::{Algebra, Ring, TryInverse};
use crate::series::Series;
use crate::tower::{TowerElem, S2, S22};

/// Coefficients used while dividing: `S2[1/2]`.
pub type Coef = S2<Half>;
/// Integral coefficients: `S2` over `R`.
pub type S2R = S2<PolyA>;

/// Default number of displayed coefficients (`u^1 .. u^8`).
pub const DEFAULT_ISOGENY_ORDER: usize = 8;

/// A point of the chart `(u, v)` with series coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint<T> {
    pub u: Series<T>,
    pub v: Series<T>,
}

impl<T: Algebra> ChartPoint<T> {
    /// `v^2 + a u v + v - u^3`.
    pub fn curve_defect(&self) -> Series<T> {
        curve_defect(&T::a(), &self.u, &self.v)
    }

    pub fn on_curve(&self) -> bool {
        self.curve_defect().coeffs().iter().all(Ring::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.u
            .coeffs()
            .iter()
            .chain(self.v.coeffs())
            .all(Ring::is_zero)
    }
}

/// `v^2 + c u v + v - u^3` for a curve coefficient `c`.
fn curve_defect<T: Ring>(c: &T, u: &Series<T>, v: &Series<T>) -> Series<T> {
    v.mul(v).add(&u.mul(v).scale(c)).add(v).sub(&u.pow(3))
}

/// The unique `v(u) = u^3 + O(u^4)` on `C`, through `u^(order-1)`.
pub fn curve_v_series<T: Algebra>(order: usize) -> Series<T> {
    let u = Series::<T>::var(order);
    let u3 = u.pow(3).truncate(order);
    let a = T::a();
    let mut v = Series::zero(order);
    loop {
        let next = u3.sub(&u.mul(&v).scale(&a)).sub(&v.mul(&v)).truncate(order);
        if next == v {
            return v;
        }
        v = next;
    }
}

/// The point `(u, v(u))` of `C` over the series ring.
pub fn generic_point<T: Algebra>(order: usize) -> ChartPoint<T> {
    ChartPoint {
        u: Series::var(order),
        v: curve_v_series(order),
    }
}

/// `-P = (-v/u^2, -v^2/u^3)`.
pub fn invert_point<T: Algebra + TryInverse>(p: &ChartPoint<T>) -> Result<ChartPoint<T>> {
    if p.is_identity() {
        return Ok(p.clone());
    }
    let u2 = p.u.mul(&p.u);
    Ok(ChartPoint {
        u: p.v.div(&u2)?.neg(),
        v: p.v.mul(&p.v).div(&u2.mul(&p.u))?.neg(),
    })
}

/// The universal point `Q = (d, e)` of order 2.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderTwoDatum {
    pub d: S2R,
    pub e: S2R,
}

impl OrderTwoDatum {
    pub fn universal() -> Self {
        let d = S2R::d();
        OrderTwoDatum {
            e: d.pow(3).neg(),
            d,
        }
    }

    /// `d^3 - a d - 2 = 0`, `e = -a d - 2`, and `-Q = Q` under the
    /// inversion formula `(u, v) -> (-v/u^2, -v^2/u^3)`.
    pub fn check(&self) -> bool {
        let (d, e) = (
            self.d.map(|p| Half::from(p.clone())),
            self.e.map(|p| Half::from(p.clone())),
        );
        let dinv = match d.try_inverse() {
            Some(x) => x,
            None => return false,
        };
        let neg_u = e.neg().mul(&dinv).mul(&dinv);
        let neg_v = e.square().neg().mul(&dinv.pow(3));
        self.d.defining_cubic().is_zero()
            && self.e == S2R::new(PolyA::from_i64s(&[-2]), PolyA::a().neg(), PolyA::zero())
            && neg_u == d
            && neg_v == e
            && self
                .e
                .square()
                .add(&self.d.mul(&self.e).scale(&PolyA::a()))
                .add(&self.e)
                .sub(&self.d.pow(3))
                .is_zero()
    }
}

/// `P - Q` for the universal point `Q` of order 2:
/// `m = (-v^2/u^3 - e) / (-v/u^2 - d)`,
/// `u(P - Q) = m^2 + a m - d + v/u^2`, `v(P - Q) = m (u(P - Q) - d) + e`.
pub fn translate_by_q(p: &ChartPoint<Coef>) -> Result<ChartPoint<Coef>> {
    let order = p.u.order();
    let q = OrderTwoDatum::universal();
    let d = Series::constant(q.d.map(|p| Half::from(p.clone())), order);
    let e = Series::constant(q.e.map(|p| Half::from(p.clone())), order);
    let u2 = p.u.mul(&p.u);
    let v_u2 = p.v.div(&u2)?;
    let v2_u3 = p.v.mul(&p.v).div(&u2.mul(&p.u))?;
    let m = v2_u3.neg().sub(&e).div(&v_u2.neg().sub(&d))?;
    let a = Coef::a();
    let u = m.mul(&m).add(&m.scale(&a)).sub(&d).add(&v_u2);
    let v = m.mul(&u.sub(&d)).add(&e);
    Ok(ChartPoint { u, v })
}

fn integral(x: &Coef) -> Option<S2R> {
    let c: Option<Vec<PolyA>> =
        x.c.iter()
            .map(|h| (h.exp() == 0).then(|| h.num().clone()))
            .collect();
    c.map(|c| S2R::new(c[0].clone(), c[1].clone(), c[2].clone()))
}

fn integral_series(s: &Series<Coef>, what: &str) -> Result<Series<S2R>> {
    let cs = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            integral(c).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "coefficient of u^{k} in {what} is not 2-integral: {c}"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Series::new(cs, s.order()))
}

/// The isogeny `ψ: C1 -> C2` expanded in `u`.
#[derive(Clone, Debug)]
pub struct IsogenyData {
    /// Coefficients are known through `u^order`.
    pub order: usize,
    pub a_prime: S2R,
    pub u_prime: Series<S2R>,
    pub v_prime: Series<S2R>,
    /// The target Weierstrass relation was verified through this power.
    pub verified_through: usize,
}

/// `u' = -u(P) u(P - Q)`, `v' = v(P) v(P - Q)`, and the target coefficient
/// `a'` solved from `v'^2 + a' u' v' + v' = u'^3`.
pub fn isogeny_series(order: usize) -> Result<IsogenyData> {
    if order < 2 {
        return Err(Error::Parse("isogeny order must be at least 2".into()));
    }
    let work = order.max(DEFAULT_ISOGENY_ORDER) + 4;
    let p = generic_point::<Coef>(work);
    let phi = translate_by_q(&p)?;
    if !phi.on_curve() {
        return Err(Error::Inconsistent("P - Q does not lie on C".into()));
    }
    let u_prime = p.u.mul(&phi.u).neg();
    let v_prime = p.v.mul(&phi.v);
    // The relation is linear in a'; its u^4 coefficient has the unit d^4 in
    // front of a'.
    let uv = u_prime.mul(&v_prime);
    let rest = u_prime.pow(3).sub(&v_prime).sub(&v_prime.mul(&v_prime));
    let lead = uv.coeff(4).cloned().unwrap_or_else(Coef::zero);
    let lead_inv = lead.try_inverse().ok_or_else(|| {
        Error::Inconsistent(format!("u^4 coefficient of u'v' is not a unit: {lead}"))
    })?;
    let a_half = rest
        .coeff(4)
        .cloned()
        .unwrap_or_else(Coef::zero)
        .mul(&lead_inv);
    let a_prime = integral(&a_half).ok_or_else(|| {
        Error::Inconsistent(format!(
            "solved coefficient a' = {a_half} is not 2-integral"
        ))
    })?;
    let u_int = integral_series(&u_prime, "u'")?;
    let v_int = integral_series(&v_prime, "v'")?;
    let defect = curve_defect(&a_prime, &u_int, &v_int);
    if let Some(k) = defect.coeffs().iter().position(|c| !c.is_zero()) {
        return Err(Error::Inconsistent(format!(
            "u', v' satisfy no curve of the form v^2 + c u v + v = u^3 (defect at u^{k})"
        )));
    }
    Ok(IsogenyData {
        order,
        a_prime,
        u_prime: u_int.truncate(order + 1),
        v_prime: v_int.truncate(order + 1),
        verified_through: defect.order() - 1,
    })
}

/// `sum c a^i d^j` from `(c, i, j)` triples.
pub fn s2_from_terms(terms: &[(i64, usize, usize)]) -> S2R {
    terms.iter().fold(S2R::zero(), |acc, &(c, i, j)| {
        acc.add(&S2R::from_poly(&PolyA::monomial(c.into(), i)).mul(&S2R::d().pow(j as u32)))
    })
}

/// Known expansion of `u'`: index `k` holds the coefficient of `u^k`.
pub fn u_prime_reference() -> Vec<S2R> {
    let rows: [&[(i64, usize, usize)]; 7] = [
        &[],
        &[(-1, 0, 1)],
        &[(1, 1, 1), (3, 0, 0)],
        &[(-1, 2, 1), (-3, 0, 2), (-2, 1, 0)],
        &[(1, 3, 1), (5, 1, 2), (2, 2, 0), (6, 0, 1)],
        &[(-1, 4, 1), (-7, 2, 2), (-2, 3, 0), (-16, 1, 1), (-12, 0, 0)],
        &[
            (1, 5, 1),
            (9, 3, 2),
            (2, 4, 0),
            (30, 2, 1),
            (12, 0, 2),
            (32, 1, 0),
        ],
    ];
    rows.iter().map(|r| s2_from_terms(r)).collect()
}

/// Known expansion of `v'` through `u^8`.
pub fn v_prime_reference() -> Vec<S2R> {
    let rows: [&[(i64, usize, usize)]; 9] = [
        &[],
        &[],
        &[],
        &[(-1, 1, 1), (-2, 0, 0)],
        &[(2, 2, 1), (3, 0, 2), (4, 1, 0)],
        &[(-3, 3, 1), (-9, 1, 2), (-6, 2, 0), (-9, 0, 1)],
        &[(4, 4, 1), (18, 2, 2), (8, 3, 0), (35, 1, 1), (23, 0, 0)],
        &[
            (-5, 5, 1),
            (-30, 3, 2),
            (-10, 4, 0),
            (-86, 2, 1),
            (-27, 0, 2),
            (-84, 1, 0),
        ],
        &[
            (6, 6, 1),
            (45, 4, 2),
            (12, 5, 0),
            (170, 3, 1),
            (126, 1, 2),
            (199, 2, 0),
            (63, 0, 1),
        ],
    ];
    rows.iter().map(|r| s2_from_terms(r)).collect()
}

/// One coefficient compared against a known value.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub series: String,
    pub power: usize,
    pub computed: String,
    pub expected: String,
    pub agrees: bool,
}

fn compare<T: Ring + std::fmt::Display>(
    name: &str,
    computed: &Series<T>,
    expected: &[T],
    from: usize,
) -> Vec<CoefficientCheck> {
    (from..expected.len().min(computed.order()))
        .map(|k| {
            let got = computed.coeff(k);
            CoefficientCheck {
                series: name.to_string(),
                power: k,
                computed: got.map_or_else(|| "unknown".into(), ToString::to_string),
                expected: expected[k].to_string(),
                agrees: got == Some(&expected[k]),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IsogenyReport {
    pub a_prime: String,
    pub a_prime_matches: bool,
    pub checks: Vec<CoefficientCheck>,
    pub verified_through: usize,
    pub ok: bool,
}

/// Compares the isogeny expansion with the known coefficients.
pub fn isogeny_report(data: &IsogenyData) -> IsogenyReport {
    let mut checks = compare("u'", &data.u_prime, &u_prime_reference(), 0);
    checks.extend(compare("v'", &data.v_prime, &v_prime_reference(), 0));
    let a_prime_matches = data.a_prime == S2R::p_of_a();
    IsogenyReport {
        a_prime: data.a_prime.to_string(),
        a_prime_matches,
        ok: a_prime_matches && checks.iter().all(|c| c.agrees),
        checks,
        verified_through: data.verified_through,
    }
}

/// `{"var": "u", "order": .., "coeffs": [[c, c_d, c_d2], ..]}`.
pub fn s2_series_json(s: &Series<S2R>) -> Value {
    s.to_json("u", |x| {
        TowerElem::S2(x.map(|p| SElem::from(p.clone()))).to_json()
    })
}

pub fn r_series_json(s: &Series<PolyA>) -> Value {
    s.to_json("u", |p| TowerElem::R(p.clone()).to_json())
}

/// A relation of `Γ` read off the total operation, next to the relation
/// the algebra engine uses.
#[derive(Clone, Debug, Serialize)]
pub struct DerivedIdentity {
    pub name: String,
    pub derived: String,
    pub engine: String,
    pub agrees: bool,
}

type Sym = MPoly<u8, PolyA>;
type Sym2 = MPoly<(u8, u8), PolyA>;

/// `P(x)` with symbols `X_i = Q_i x`.
fn symbolic_p() -> S2<Sym> {
    S2::new(Sym::var(0), Sym::var(1), Sym::var(2))
}

fn linear_in_q(p: &Sym) -> Option<GammaElem> {
    let mut out = GammaElem::zero();
    for (mono, c) in p.terms() {
        match mono.as_slice() {
            [(i, 1)] => out = out.add(&GammaElem::q(*i).scale_left(c)),
            _ => return None,
        }
    }
    Some(out)
}

/// `P(a x) = P(a) P(x)`: the coefficient of `d^i` expresses `Q_i(a x)`
/// through the `Q_j x`.
pub fn derive_commutation() -> Vec<DerivedIdentity> {
    let prod = S2::<Sym>::p_of_a().mul(&symbolic_p());
    let mut out: Vec<DerivedIdentity> = (0..3u8)
        .map(|i| {
            let derived = linear_in_q(&prod.c[i as usize]);
            let engine = GammaElem::q(i).mul(&GammaElem::a());
            DerivedIdentity {
                name: format!("Q{i} a"),
                derived: derived
                    .as_ref()
                    .map_or_else(|| "non-linear".into(), ToString::to_string),
                engine: engine.to_string(),
                agrees: derived.as_ref() == Some(&engine),
            }
        })
        .collect();
    let one = S2::<Sym>::total_op_of_poly(&PolyA::one()).mul(&symbolic_p());
    out.push(DerivedIdentity {
        name: "P(1 x) = P(x)".into(),
        derived: render_components(&one),
        engine: render_components(&symbolic_p()),
        agrees: one == symbolic_p(),
    });
    out
}

fn render_components(x: &S2<Sym>) -> String {
    let parts: Vec<String> = x.c.iter().map(|p| p.render(|i| format!("Q{i}x"))).collect();
    format!("{} + [{}] d + [{}] d^2", parts[0], parts[1], parts[2])
}

fn render_words(p: &Sym2) -> String {
    p.render(|(i, j)| format!("Q{i}Q{j}x"))
}

fn words_to_gamma(p: &Sym2) -> Option<GammaElem> {
    let mut out = GammaElem::zero();
    for (mono, c) in p.terms() {
        match mono.as_slice() {
            [((i, j), 1)] => {
                out = out.add(
                    &GammaElem::from_poly(c.clone())
                        .mul(&GammaElem::q(*i))
                        .mul(&GammaElem::q(*j)),
                );
            }
            _ => return None,
        }
    }
    Some(out)
}

fn words(terms: &[(PolyA, u8, u8)]) -> Sym2 {
    terms.iter().fold(Sym2::zero(), |acc, (c, i, j)| {
        acc.add(&Sym2::var((*i, *j)).scale(c))
    })
}

/// Result of projecting `PP(x)` from `S22` to `S2`.
#[derive(Clone, Debug, Serialize)]
pub struct AdemDerivation {
    /// The `d^0, d^1, d^2` coefficients as combinations of `Q_i Q_j x`.
    pub components: [String; 3],
    /// Each component agrees with its known display.
    pub matches_display: [bool; 3],
    pub identities: Vec<DerivedIdentity>,
    /// `PP(1)` projects to `1` under the standard action.
    pub unit_projects_to_one: bool,
}

impl AdemDerivation {
    pub fn ok(&self) -> bool {
        self.matches_display.iter().all(|b| *b)
            && self.identities.iter().all(|i| i.agrees)
            && self.unit_projects_to_one
    }
}

/// `PP(x) = sum d^i d'^j Q_i Q_j x` in `S22`, projected by `d' -> a - d^2`:
/// the `d` and `d^2` coefficients vanish in `Γ` and the `d^0` coefficient
/// is `Ψ x`.
pub fn derive_adem_and_psi() -> AdemDerivation {
    let mut pp = S22::<Sym2>::zero();
    for i in 0..3u8 {
        for j in 0..3u8 {
            let basis = S22::d()
                .pow(u32::from(i))
                .mul(&S22::dprime().pow(u32::from(j)));
            pp = pp.add(&basis.mul(&S22::from_s2(S2::from_base(Sym2::var((i, j))))));
        }
    }
    let proj = pp.project();
    let a = PolyA::a;
    let int = |n: i64| PolyA::from_i64s(&[n]);
    let displays = [
        words(&[
            (int(1), 0, 0),
            (a(), 0, 1),
            (int(-2), 1, 1),
            (a().square(), 0, 2),
            (a().scale_int(-2), 1, 2),
            (int(4), 2, 2),
        ]),
        words(&[(int(1), 1, 0), (int(-2), 2, 1), (int(2), 0, 2)]),
        words(&[
            (int(1), 2, 0),
            (int(-1), 0, 1),
            (a().neg(), 0, 2),
            (int(2), 1, 2),
        ]),
    ];
    let matches_display = std::array::from_fn(|k| proj.c[k] == displays[k]);
    let engine = [psi(), GammaElem::zero(), GammaElem::zero()];
    let names = [
        "d^0 coefficient = Ψ",
        "d^1 coefficient = 0",
        "d^2 coefficient = 0",
    ];
    let identities = (0..3)
        .map(|k| {
            let g = words_to_gamma(&proj.c[k]);
            DerivedIdentity {
                name: names[k].into(),
                derived: render_words(&proj.c[k]),
                engine: engine[k].to_string(),
                agrees: g.as_ref() == Some(&engine[k]),
            }
        })
        .collect();
    let at_one = proj.map(|c| {
        c.eval(
            |p| p.clone(),
            |&(i, j)| standard_q(i, &standard_q(j, &PolyA::one())),
        )
    });
    AdemDerivation {
        components: std::array::from_fn(|k| render_words(&proj.c[k])),
        matches_display,
        identities,
        unit_projects_to_one: at_one == S2R::one(),
    }
}

/// The displayed `Q_i(u)` expansions; index `k` is the coefficient of `u^k`.
pub fn q_series_reference() -> [Vec<PolyA>; 3] {
    let p = |cs: &[i64]| PolyA::from_i64s(cs);
    [
        vec![
            p(&[]),
            p(&[]),
            p(&[-3]),
            p(&[0, -2]),
            p(&[0, 0, 2]),
            p(&[-12, 0, 0, -2]),
            p(&[0, 32, 0, 0, 2]),
        ],
        vec![
            p(&[]),
            p(&[-1]),
            p(&[0, 1]),
            p(&[0, 0, -1]),
            p(&[6, 0, 0, 1]),
            p(&[0, -16, 0, 0, -1]),
            p(&[0, 0, 30, 0, 0, 1]),
        ],
        vec![
            p(&[]),
            p(&[]),
            p(&[]),
            p(&[-3]),
            p(&[0, 5]),
            p(&[0, 0, -7]),
            p(&[12, 0, 0, 9]),
        ],
    ]
}

/// The disputed coefficient of `u^2` in `Q0(u)`.
#[derive(Clone, Debug, Serialize)]
pub struct SignDiscrepancy {
    pub computed: String,
    pub q_series_display: String,
    pub u_prime_display: String,
    pub computed_matches_q_series_display: bool,
    pub computed_matches_u_prime_display: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QSeriesReport {
    pub order: usize,
    pub checks: Vec<CoefficientCheck>,
    pub q0_u2: SignDiscrepancy,
    /// `Q_i(u^2)` through the Cartan formula equals the decomposition of
    /// `P(u)^2`.
    pub cartan_consistent: bool,
    /// The linear terms reproduce the module `ω`.
    pub linear_terms_match_omega: bool,
}

impl QSeriesReport {
    /// All comparisons agree except the `u^2` coefficient of `Q0(u)`,
    /// which is reported separately.
    pub fn ok_apart_from_discrepancy(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !(c.series == "Q0(u)" && c.power == 2))
            .all(|c| c.agrees)
            && self.cartan_consistent
            && self.linear_terms_match_omega
    }
}

/// `P(u) = u' = Q0(u) + Q1(u) d + Q2(u) d^2`, split coefficientwise.
pub fn q_series_on_u(order: usize) -> Result<[Series<PolyA>; 3]> {
    let iso = isogeny_series(order)?;
    Ok(std::array::from_fn(|i| iso.u_prime.map(|c| c.c[i].clone())))
}

pub fn q_series_report(order: usize) -> Result<QSeriesReport> {
    let q = q_series_on_u(order)?;
    let reference = q_series_reference();
    let mut checks = Vec::new();
    for i in 0..3 {
        let upto = reference[i].len().min(order + 1);
        checks.extend(compare(
            &format!("Q{i}(u)"),
            &q[i],
            &reference[i][..upto],
            0,
        ));
    }
    let u2 = q[0].coeff(2).cloned().unwrap_or_default();
    let u_prime_u2 = u_prime_reference()[2].c[0].clone();
    let q0_u2 = SignDiscrepancy {
        computed: u2.to_string(),
        q_series_display: reference[0][2].to_string(),
        u_prime_display: u_prime_u2.to_string(),
        computed_matches_q_series_display: u2 == reference[0][2],
        computed_matches_u_prime_display: u2 == u_prime_u2,
    };
    let pu: Series<S2R> = Series::new(
        (0..=order)
            .map(|k| {
                S2R::new(
                    q[0].coeffs()[k].clone(),
                    q[1].coeffs()[k].clone(),
                    q[2].coeffs()[k].clone(),
                )
            })
            .collect(),
        order + 1,
    );
    let squared = pu.mul(&pu).truncate(order + 1);
    let cartan_consistent = (0..3).all(|i| {
        let via_cartan = cartan_terms(i)
            .into_iter()
            .fold(Series::zero(order + 1), |acc: Series<PolyA>, (j, k, c)| {
                acc.add(&q[j].mul(&q[k]).scale(&c))
            });
        via_cartan.truncate(order + 1) == squared.map(|x| x.c[i].clone())
    });
    let omega = ModulePresentation::omega();
    let linear_terms_match_omega =
        (0..3).all(|i| q[i].coeff(1).is_some_and(|c| c == &omega.image(i, 0)[0]));
    Ok(QSeriesReport {
        order,
        checks,
        q0_u2,
        cartan_consistent,
        linear_terms_match_omega,
    })
}

/// Trace and norm of multiplication by `P(x)` on `S2` as polynomials in
/// the symbols `Q_i x`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceNormReport {
    pub trace: String,
    pub norm: String,
    pub trace_matches: bool,
    pub norm_matches: bool,
}

pub fn symbolic_trace_norm() -> TraceNormReport {
    let p = symbolic_p();
    let [q0, q1, q2] = p.c.clone();
    let trace = p.trace();
    let norm = p.norm();
    let expected_trace = q0.scale_int(3).add(&q2.mul(&Sym::a()).scale_int(2));
    let render = |s: &Sym| s.render(|i| format!("Q{i}x"));
    TraceNormReport {
        trace: render(&trace),
        norm: render(&norm),
        trace_matches: trace == expected_trace,
        norm_matches: norm == norm_formula(&q0, &q1, &q2),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalSubgroupReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Under `d -> 0` modulo 2 the total operation becomes `x -> x^2`, i.e.
/// `Q0 x ≡ x^2 mod 2`.
pub fn canonical_subgroup_check(sample: &[PolyA]) -> CanonicalSubgroupReport {
    let failures = sample
        .iter()
        .filter(|x| {
            let p = S2R::total_op_of_poly(x).map(|c| c.mod_int(&2.into()));
            p.c[0] != x.square().mod_int(&2.into())
        })
        .map(ToString::to_string)
        .collect();
    CanonicalSubgroupReport {
        checked: sample.len(),
        failures,
    }
}

/// Default sample for the canonical subgroup check.
pub fn canonical_sample() -> Vec<PolyA> {
    let mut out = Vec::new();
    for c0 in -2..=2 {
        for c1 in -2..=2 {
            for c2 in -1..=1 {
                out.push(PolyA::from_i64s(&[c0, c1, c2]));
            }
        }
    }
    out.push(PolyA::disc());
    out
}

/// Every elliptic check in one report.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticVerification {
    pub order_two_point: bool,
    pub isogeny: IsogenyReport,
    pub commutation: Vec<DerivedIdentity>,
    pub adem: AdemDerivation,
    pub q_series: QSeriesReport,
    pub trace_norm: TraceNormReport,
    pub canonical_subgroup: CanonicalSubgroupReport,
}

impl EllipticVerification {
    /// Whether every check agrees, counting the known `u^2` sign
    /// discrepancy as reported rather than failed.
    pub fn ok(&self) -> bool {
        self.order_two_point
            && self.isogeny.ok
            && self.commutation.iter().all(|c| c.agrees)
            && self.adem.ok()
            && self.q_series.ok_apart_from_discrepancy()
            && self.trace_norm.trace_matches
            && self.trace_norm.norm_matches
            && self.canonical_subgroup.failures.is_empty()
    }
}

pub fn verify_all(order: usize) -> Result<EllipticVerification> {
    let iso = isogeny_series(order)?;
    Ok(EllipticVerification {
        order_two_point: OrderTwoDatum::universal().check(),
        isogeny: isogeny_report(&iso),
        commutation: derive_commutation(),
        adem: derive_adem_and_psi(),
        q_series: q_series_report(order.min(6))?,
        trace_norm: symbolic_trace_norm(),
        canonical_subgroup: canonical_subgroup_check(&canonical_sample()),
    })
}

/// The admissible monomial `Q_i`.
pub fn generator(i: u8) -> AdmMono {
    if i == 0 {
        AdmMono::new(1, vec![])
    } else {
        AdmMono::new(0, vec![i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(cs: &[i64]) -> PolyA {
        PolyA::from_i64s(cs)
    }

    #[test]
    fn v_series_by_one_iteration() {
        let v = curve_v_series::<PolyA>(8);
        assert_eq!(
            v.coeffs()[..5],
            [r(&[]), r(&[]), r(&[]), r(&[1]), r(&[0, -1])]
        );
        assert!(generic_point::<PolyA>(10).on_curve());
    }

    #[test]
    fn inversion() {
        let p = generic_point::<Coef>(10);
        let n = invert_point(&p).unwrap();
        let v_u2 = curve_v_series::<PolyA>(12).shift_down(2).unwrap();
        assert_eq!(
            n.u.map(|x| integral(x).unwrap().c[0].clone()),
            v_u2.neg().truncate(n.u.order())
        );
        assert_eq!(n.u.coeffs()[1], Coef::one().neg());
        assert_eq!(n.u.coeffs()[2], Coef::a());
        assert!(n.on_curve());
        let back = invert_point(&n).unwrap();
        let k = back.u.order().min(back.v.order());
        assert_eq!(back.u.truncate(k), p.u.truncate(k));
        assert_eq!(back.v.truncate(k), p.v.truncate(k));
        let o = ChartPoint {
            u: Series::<Coef>::zero(5),
            v: Series::zero(5),
        };
        assert_eq!(invert_point(&o).unwrap(), o);
    }

    #[test]
    fn order_two_point() {
        assert!(OrderTwoDatum::universal().check());
    }

    #[test]
    fn translation() {
        let p = generic_point::<Coef>(10);
        let t = translate_by_q(&p).unwrap();
        assert!(t.on_curve());
        assert_eq!(t.u.coeffs()[0], Coef::d());
        assert_eq!(
            t.v.coeffs()[0],
            OrderTwoDatum::universal().e.map(|p| Half::from(p.clone()))
        );
    }

    #[test]
    fn isogeny_matches_display() {
        let iso = isogeny_series(8).unwrap();
        let rep = isogeny_report(&iso);
        assert!(
            rep.ok,
            "{:#?}",
            rep.checks.iter().filter(|c| !c.agrees).collect::<Vec<_>>()
        );
        assert_eq!(iso.a_prime, S2R::p_of_a());
        assert_eq!(
            iso.u_prime.coeffs()[5],
            s2_from_terms(&[(-1, 4, 1), (-7, 2, 2), (-2, 3, 0), (-16, 1, 1), (-12, 0, 0)])
        );
    }

    #[test]
    fn commutation_relations() {
        let rel = derive_commutation();
        assert!(rel.iter().all(|r| r.agrees), "{rel:#?}");
        let q0a = GammaElem::q(0)
            .scale_left(&r(&[0, 0, 1]))
            .add(&GammaElem::q(1).scale_left(&r(&[0, -2])))
            .add(&GammaElem::q(2).scale_int(6));
        assert_eq!(rel[0].derived, q0a.to_string());
    }

    #[test]
    fn adem_and_psi() {
        let rep = derive_adem_and_psi();
        assert!(rep.ok(), "{rep:#?}");
    }

    #[test]
    fn q_series() {
        let rep = q_series_report(6).unwrap();
        assert!(rep.ok_apart_from_discrepancy(), "{rep:#?}");
        assert!(!rep.q0_u2.computed_matches_q_series_display);
        assert!(rep.q0_u2.computed_matches_u_prime_display);
        assert_eq!(rep.q0_u2.computed, "3");
    }

    #[test]
    fn trace_and_norm() {
        let rep = symbolic_trace_norm();
        assert!(rep.trace_matches && rep.norm_matches, "{rep:?}");
    }

    #[test]
    fn canonical_subgroup() {
        let rep = canonical_subgroup_check(&[r(&[0, 1]), r(&[1]), r(&[1, 1])]);
        assert!(rep.failures.is_empty());
        assert!(canonical_subgroup_check(&canonical_sample())
            .failures
            .is_empty());
    }

    #[test]
    fn everything() {
        assert!(verify_all(8).unwrap().ok());
    }
}
