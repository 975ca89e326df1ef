//! The extension rings carrying the universal order-2 subgroup:
//! `S2 = B[d]/(d^3 - a d - 2)` and
//! `S22 = S2[d']/(d'^3 - (a^2 + 3d - a d^2) d' - 2)` over a base algebra `B`
//! (`R`, `S`, `R[1/2]`, or a polynomial ring of symbols).

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::local::SElem;
use crate::poly::PolyA;
use crate::ring::{Algebra, Ring, TryInverse};

/// `c[0] + c[1] d + c[2] d^2` with `d^3 = a d + 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct S2<B> {
    pub c: [B; 3],
}

impl<B: Algebra> S2<B> {
    pub fn new(c0: B, c1: B, c2: B) -> Self {
        S2 { c: [c0, c1, c2] }
    }

    pub fn from_base(b: B) -> Self {
        S2::new(b, B::zero(), B::zero())
    }

    pub fn d() -> Self {
        S2::new(B::zero(), B::one(), B::zero())
    }

    /// The image of `a` under the total power operation: `a^2 + 3d - a d^2`.
    pub fn p_of_a() -> Self {
        let a = B::a();
        S2::new(a.square(), B::from_i64(3), a.neg())
    }

    /// Applies the total power operation to a ground-ring element by
    /// substituting `a -> a^2 + 3d - a d^2`.
    pub fn total_op_of_poly(p: &PolyA) -> Self {
        let pa = Self::p_of_a();
        p.coeffs().iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(&pa).add(&Self::from_base(B::from_int(c)))
        })
    }

    /// Reduces a coefficient list in `1, d, d^2, ...` modulo `d^3 = a d + 2`.
    pub fn reduce(mut raw: Vec<B>) -> Self {
        let a = B::a();
        let two = B::from_i64(2);
        while raw.len() > 3 {
            let top = raw.pop().unwrap();
            let k = raw.len();
            // d^k = d^(k-3) * (a d + 2)
            raw[k - 2] = raw[k - 2].add(&top.mul(&a));
            raw[k - 3] = raw[k - 3].add(&top.mul(&two));
        }
        raw.resize(3, B::zero());
        let mut it = raw.into_iter();
        S2::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
    }

    pub fn map<C: Algebra>(&self, f: impl Fn(&B) -> C) -> S2<C> {
        S2::new(f(&self.c[0]), f(&self.c[1]), f(&self.c[2]))
    }

    pub fn scale(&self, b: &B) -> Self {
        self.map(|x| x.mul(b))
    }

    /// Columns are the coordinates of `z`, `z d`, `z d^2`.
    pub fn mul_matrix(&self) -> [[B; 3]; 3] {
        let a = B::a();
        let [z0, z1, z2] = &self.c;
        let col0 = [z0.clone(), z1.clone(), z2.clone()];
        let col1 = [z2.scale_int(2), z0.add(&a.mul(z2)), z1.clone()];
        let col2 = [
            z1.scale_int(2),
            z2.scale_int(2).add(&a.mul(z1)),
            z0.add(&a.mul(z2)),
        ];
        let cols = [col0, col1, col2];
        std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()))
    }

    /// Trace of multiplication by `self` on the free rank-3 base module.
    pub fn trace(&self) -> B {
        let m = self.mul_matrix();
        m[0][0].add(&m[1][1]).add(&m[2][2])
    }

    /// Norm: determinant of multiplication by `self`.
    pub fn norm(&self) -> B {
        det3(&self.mul_matrix())
    }

    /// Evaluates the defining cubic of `d` at `self`; zero iff `self`
    /// is a root of `t^3 - a t - 2`.
    pub fn defining_cubic(&self) -> Self {
        self.pow(3)
            .sub(&self.scale(&B::a()))
            .sub(&Self::from_base(B::from_i64(2)))
    }
}

pub(crate) fn det3<B: Ring>(m: &[[B; 3]; 3]) -> B {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}

impl<B: Algebra> Ring for S2<B> {
    fn zero() -> Self {
        S2::new(B::zero(), B::zero(), B::zero())
    }
    fn one() -> Self {
        S2::from_base(B::one())
    }
    fn from_int(n: &BigInt) -> Self {
        S2::from_base(B::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Ring::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        S2::new(
            self.c[0].add(&o.c[0]),
            self.c[1].add(&o.c[1]),
            self.c[2].add(&o.c[2]),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        S2::new(
            self.c[0].sub(&o.c[0]),
            self.c[1].sub(&o.c[1]),
            self.c[2].sub(&o.c[2]),
        )
    }
    fn mul(&self, o: &Self) -> Self {
        let mut raw = vec![B::zero(); 5];
        for i in 0..3 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                raw[i + j] = raw[i + j].add(&self.c[i].mul(&o.c[j]));
            }
        }
        Self::reduce(raw)
    }
    fn neg(&self) -> Self {
        self.map(Ring::neg)
    }
}

impl<B: Algebra> Algebra for S2<B> {
    fn from_poly(p: &PolyA) -> Self {
        S2::from_base(B::from_poly(p))
    }
}

impl<B: Algebra + TryInverse> TryInverse for S2<B> {
    /// Inverse through the adjugate of the multiplication matrix; exists iff
    /// the norm is a unit of the base.
    fn try_inverse(&self) -> Option<Self> {
        let m = self.mul_matrix();
        let ninv = det3(&m).try_inverse()?;
        let minor = |c1: usize, c2: usize| m[1][c1].mul(&m[2][c2]).sub(&m[1][c2].mul(&m[2][c1]));
        let x0 = minor(1, 2);
        let x1 = minor(0, 2).neg();
        let x2 = minor(0, 1);
        Some(S2::new(x0.mul(&ninv), x1.mul(&ninv), x2.mul(&ninv)))
    }
}

impl<B: Algebra + fmt::Display> fmt::Display for S2<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", " d", " d^2"];
        let mut first = true;
        for (c, n) in self.c.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}){n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<B: Algebra> fmt::Debug for S2<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S2{:?}", self.c)
    }
}

/// `c[0] + c[1] d' + c[2] d'^2` with coefficients in `S2` and
/// `d'^3 = (a^2 + 3d - a d^2) d' + 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct S22<B> {
    pub c: [S2<B>; 3],
}

impl<B: Algebra> S22<B> {
    pub fn new(c0: S2<B>, c1: S2<B>, c2: S2<B>) -> Self {
        S22 { c: [c0, c1, c2] }
    }

    pub fn from_s2(x: S2<B>) -> Self {
        S22::new(x, S2::zero(), S2::zero())
    }

    pub fn d() -> Self {
        Self::from_s2(S2::d())
    }

    pub fn dprime() -> Self {
        S22::new(S2::zero(), S2::one(), S2::zero())
    }

    /// Coefficient of `d^i d'^j`.
    pub fn coeff(&self, i: usize, j: usize) -> &B {
        &self.c[j].c[i]
    }

    /// The second inclusion `S2 -> S22`: `a -> a^2 + 3d - a d^2`, `d -> d'`,
    /// applied to an element whose base coefficients are ground-ring
    /// polynomials mapped by `base`.
    pub fn second_inclusion(x: &S2<B>, base: impl Fn(&B) -> S2<B>) -> Self {
        let dp = Self::dprime();
        let mut acc = Self::zero();
        for i in (0..3).rev() {
            acc = acc.mul(&dp).add(&Self::from_s2(base(&x.c[i])));
        }
        acc
    }

    /// The projection `f*`: `d -> d`, `d' -> a - d^2`.
    pub fn project(&self) -> S2<B> {
        let dp = S2::new(B::a(), B::zero(), B::one().neg());
        let mut acc = S2::zero();
        for j in (0..3).rev() {
            acc = acc.mul(&dp).add(&self.c[j]);
        }
        acc
    }

    fn reduce(mut raw: Vec<S2<B>>) -> Self {
        let big_a = S2::p_of_a();
        let two = S2::from_int(&BigInt::from(2));
        while raw.len() > 3 {
            let top = raw.pop().unwrap();
            let k = raw.len();
            raw[k - 2] = raw[k - 2].add(&top.mul(&big_a));
            raw[k - 3] = raw[k - 3].add(&top.mul(&two));
        }
        raw.resize(3, S2::zero());
        let mut it = raw.into_iter();
        S22::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
    }
}

impl<B: Algebra> Ring for S22<B> {
    fn zero() -> Self {
        S22::new(S2::zero(), S2::zero(), S2::zero())
    }
    fn one() -> Self {
        S22::from_s2(S2::one())
    }
    fn from_int(n: &BigInt) -> Self {
        S22::from_s2(S2::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Ring::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        S22::new(
            self.c[0].add(&o.c[0]),
            self.c[1].add(&o.c[1]),
            self.c[2].add(&o.c[2]),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut raw = vec![S2::zero(); 5];
        for i in 0..3 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                raw[i + j] = raw[i + j].add(&self.c[i].mul(&o.c[j]));
            }
        }
        Self::reduce(raw)
    }
    fn neg(&self) -> Self {
        S22::new(self.c[0].neg(), self.c[1].neg(), self.c[2].neg())
    }
}

impl<B: Algebra> Algebra for S22<B> {
    fn from_poly(p: &PolyA) -> Self {
        S22::from_s2(S2::from_poly(p))
    }
}

impl<B: Algebra> fmt::Debug for S22<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S22{:?}", self.c)
    }
}

/// Tagged element of the tower, used at the external (JSON) boundary.
#[derive(Clone, PartialEq, Debug)]
pub enum TowerElem {
    R(PolyA),
    S(SElem),
    S2(S2<SElem>),
    S22(S22<SElem>),
}

fn s_to_json(x: &SElem) -> Value {
    if x.exp() == 0 {
        serde_json::to_value(x.num()).unwrap()
    } else {
        json!({ "num": x.num(), "den_exp": x.exp() })
    }
}

fn s_from_json(v: &Value) -> Result<SElem> {
    match v {
        Value::Array(_) => {
            let p: PolyA = serde_json::from_value(v.clone())?;
            Ok(SElem::from(p))
        }
        Value::Object(m) => {
            let num: PolyA = serde_json::from_value(
                m.get("num")
                    .cloned()
                    .ok_or_else(|| Error::Parse("S element missing \"num\"".into()))?,
            )?;
            let exp = m
                .get("den_exp")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("S element missing \"den_exp\"".into()))?;
            Ok(SElem::new(num, exp as u32))
        }
        _ => Err(Error::Parse(format!("not an S element: {v}"))),
    }
}

impl TowerElem {
    /// JSON: `R` as a polynomial array, `S2` as `[c1, cd, cd2]`, `S22` as the
    /// 3x3 array indexed `[i][j]` for the basis `d^i d'^j`.
    pub fn to_json(&self) -> Value {
        match self {
            TowerElem::R(p) => serde_json::to_value(p).unwrap(),
            TowerElem::S(s) => s_to_json(s),
            TowerElem::S2(x) => Value::Array(x.c.iter().map(s_to_json).collect()),
            TowerElem::S22(x) => Value::Array(
                (0..3)
                    .map(|i| Value::Array((0..3).map(|j| s_to_json(x.coeff(i, j))).collect()))
                    .collect(),
            ),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = match v {
            Value::Object(_) => return Ok(TowerElem::S(s_from_json(v)?)),
            Value::Array(a) => a,
            _ => return Err(Error::Parse(format!("not a tower element: {v}"))),
        };
        let depth_two = arr.iter().any(|x| !x.is_string());
        if !depth_two {
            return Ok(TowerElem::R(serde_json::from_value(v.clone())?));
        }
        if arr.len() != 3 {
            return Err(Error::Parse("tower element needs 3 components".into()));
        }
        let nested = arr
            .iter()
            .any(|x| matches!(x, Value::Array(inner) if inner.iter().any(|y| !y.is_string())));
        if !nested {
            let cs = arr.iter().map(s_from_json).collect::<Result<Vec<_>>>()?;
            let [c0, c1, c2]: [SElem; 3] = cs.try_into().unwrap();
            return Ok(TowerElem::S2(S2::new(c0, c1, c2)));
        }
        let mut cols: [[SElem; 3]; 3] = Default::default();
        for (i, row) in arr.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == 3)
                .ok_or_else(|| Error::Parse("S22 rows need 3 entries".into()))?;
            for (j, x) in row.iter().enumerate() {
                cols[j][i] = s_from_json(x)?;
            }
        }
        let [c0, c1, c2] = cols.map(|[x, y, z]| S2::new(x, y, z));
        Ok(TowerElem::S22(S22::new(c0, c1, c2)))
    }
}

/// One monomial `coeff * a^i d^j d'^k` of an unreduced tower expression.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub coeff: BigInt,
    pub a: u32,
    pub d: u32,
    pub dprime: u32,
}

/// Reduces a raw expression in `a, d, d'` to the canonical basis of the
/// smallest tower ring containing it.
pub fn tower_reduce(terms: &[RawTerm]) -> TowerElem {
    let has_dp = terms.iter().any(|t| t.dprime > 0 && !t.coeff.is_zero());
    let has_d = terms.iter().any(|t| t.d > 0 && !t.coeff.is_zero());
    let mut acc = S22::<SElem>::zero();
    for t in terms {
        let mono = S22::from_poly(&PolyA::monomial(t.coeff.clone(), t.a as usize))
            .mul(&S22::d().pow(t.d))
            .mul(&S22::dprime().pow(t.dprime));
        acc = acc.add(&mono);
    }
    if has_dp {
        TowerElem::S22(acc)
    } else if has_d {
        TowerElem::S2(acc.c[0].clone())
    } else {
        TowerElem::R(acc.c[0].c[0].to_poly().expect("no denominators introduced"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::Half;

    type T = S2<PolyA>;

    fn term(c: i64, a: u32, d: u32, dprime: u32) -> RawTerm {
        RawTerm {
            coeff: BigInt::from(c),
            a,
            d,
            dprime,
        }
    }

    #[test]
    fn cube_of_d() {
        let d3 = T::d().pow(3);
        assert_eq!(
            d3,
            T::new(PolyA::from_i64s(&[2]), PolyA::a(), PolyA::zero())
        );
        assert!(T::d().defining_cubic().is_zero());
    }

    #[test]
    fn reduce_examples() {
        let r = tower_reduce(&[term(1, 0, 3, 0)]);
        assert_eq!(
            r,
            TowerElem::S2(S2::new(SElem::from_i64(2), SElem::a(), SElem::zero()))
        );
        assert_eq!(
            tower_reduce(&[term(1, 0, 0, 0)]),
            TowerElem::R(PolyA::one())
        );
    }

    #[test]
    fn inverse_of_d_needs_a_half() {
        assert!(T::d().try_inverse().is_none());
        let d = S2::<Half>::d();
        let inv = d.try_inverse().unwrap();
        assert!(d.mul(&inv).is_one());
        // d^{-1} = (d^2 - a) / 2
        let expect =
            S2::new(Half::a().neg(), Half::zero(), Half::one()).scale(&Half::new(PolyA::one(), 1));
        assert_eq!(inv, expect);
    }

    #[test]
    fn trace_and_norm_of_d() {
        assert_eq!(T::d().trace(), PolyA::zero());
        assert_eq!(T::d().norm(), PolyA::from_i64s(&[2]));
        assert_eq!(T::d().square().trace(), PolyA::from_i64s(&[0, 2]));
    }

    #[test]
    fn dprime_satisfies_its_cubic() {
        let dp = S22::<PolyA>::dprime();
        let lhs = dp.pow(3);
        let rhs = dp
            .mul(&S22::from_s2(T::p_of_a()))
            .add(&S22::from_int(&BigInt::from(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_is_compatible_with_the_cubic() {
        // f*(d') = a - d^2 must be a root of t^3 - (a^2 + 3d - a d^2) t - 2.
        let x = S22::<PolyA>::dprime()
            .pow(3)
            .sub(&S22::dprime().mul(&S22::from_s2(T::p_of_a())))
            .sub(&S22::from_int(&BigInt::from(2)));
        assert!(x.is_zero());
        let img = S2::new(PolyA::a(), PolyA::zero(), PolyA::from_i64s(&[-1]));
        let cubic = img
            .pow(3)
            .sub(&img.mul(&T::p_of_a()))
            .sub(&T::from_int(&BigInt::from(2)));
        assert!(cubic.is_zero());
    }

    #[test]
    fn tower_json_shapes() {
        let x = TowerElem::S2(S2::new(SElem::from_i64(2), SElem::a(), SElem::base_pow(-1)));
        let v = x.to_json();
        assert_eq!(TowerElem::from_json(&v).unwrap(), x);
        let y = tower_reduce(&[term(1, 0, 1, 2), term(3, 1, 0, 0)]);
        assert_eq!(TowerElem::from_json(&y.to_json()).unwrap(), y);
        let r = TowerElem::R(PolyA::disc());
        assert_eq!(r.to_json(), json!(["-27", "0", "0", "1"]));
    }
}
