//! Truncated power series in one variable with explicit truncation order.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{Ring, TryInverse};

/// Default truncation order for series computations.
pub const DEFAULT_ORDER: usize = 12;

/// `sum_{k < order} coeffs[k] t^k + O(t^order)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<T> {
    coeffs: Vec<T>,
    order: usize,
}

impl<T: Ring> Series<T> {
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.truncate(order);
        coeffs.resize(order, T::zero());
        Series { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: T, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series variable `t` itself.
    pub fn var(order: usize) -> Self {
        Self::monomial(T::one(), 1, order)
    }

    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; `None` when `k` is beyond the truncation.
    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    /// Index of the first non-zero coefficient, or the order if all known
    /// coefficients vanish.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.order)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order.min(self.order))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series::new(self.coeffs.iter().map(f).collect(), self.order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::new(
            (0..order)
                .map(|k| self.coeffs[k].add(&o.coeffs[k]))
                .collect(),
            order,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::new(
            (0..order)
                .map(|k| self.coeffs[k].sub(&o.coeffs[k]))
                .collect(),
            order,
        )
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.mul(x))
    }

    /// Product; the result order is `min(O1 + v2, O2 + v1)`.
    pub fn mul(&self, o: &Self) -> Self {
        let (v1, v2) = (self.valuation(), o.valuation());
        let order = (self.order + v2).min(o.order + v1);
        let mut out = vec![T::zero(); order];
        for i in v1..self.order.min(order) {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in v2..o.order.min(order - i) {
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        Self::new(out, order)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(T::one(), self.order.max(1) + k as usize * self.valuation());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, self.order + k)
    }

    /// Exact division by `t^k`; fails unless the first `k` coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.valuation() < k {
            return Err(Error::DivisionByNonUnit(format!(
                "series of valuation {} divided by t^{k}",
                self.valuation()
            )));
        }
        Ok(Self::new(
            self.coeffs[k.min(self.order)..].to_vec(),
            self.order - k,
        ))
    }
}

impl<T: TryInverse> Series<T> {
    /// Inverse of a series whose constant term is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .coeffs
            .first()
            .ok_or_else(|| Error::DivisionByNonUnit("series with no known coefficients".into()))?;
        let b0 = c0
            .try_inverse()
            .ok_or_else(|| Error::DivisionByNonUnit(format!("constant term {c0:?}")))?;
        let mut out: Vec<T> = vec![b0.clone()];
        for n in 1..self.order {
            let mut s = T::zero();
            for k in 1..=n {
                s = s.add(&self.coeffs[k].mul(&out[n - k]));
            }
            out.push(b0.mul(&s).neg());
        }
        Ok(Self::new(out, self.order))
    }

    /// `self / o`, factoring out the exact power of `t` from `o` first.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let v = o.valuation();
        if v >= o.order {
            return Err(Error::DivisionByNonUnit("division by O(t^n)".into()));
        }
        let num = self.shift_down(v)?;
        let den = o.shift_down(v)?;
        Ok(num.mul(&den.inverse()?))
    }
}

impl<T: Ring> Series<T> {
    /// JSON form `{"var": .., "order": .., "coeffs": [..]}` with a caller
    /// supplied coefficient encoder.
    pub fn to_json(&self, var: &str, enc: impl Fn(&T) -> Value) -> Value {
        json!({
            "var": var,
            "order": self.order,
            "coeffs": self.coeffs.iter().map(enc).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, dec: impl Fn(&Value) -> Result<T>) -> Result<(String, Self)> {
        let var = v
            .get("var")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("series missing \"var\"".into()))?;
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("series missing \"order\"".into()))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("series missing \"coeffs\"".into()))?
            .iter()
            .map(dec)
            .collect::<Result<Vec<_>>>()?;
        Ok((var.to_string(), Series::new(coeffs, order as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyA;

    type S = Series<PolyA>;

    fn s(cs: &[i64], order: usize) -> S {
        S::new(cs.iter().map(|&c| PolyA::from_i64s(&[c])).collect(), order)
    }

    #[test]
    fn product_order_tracks_valuations() {
        // (t + O(t^4)) * (t^2 + O(t^5)) is known to O(t^6).
        let x = s(&[0, 1], 4);
        let y = s(&[0, 0, 1], 5);
        let p = x.mul(&y);
        assert_eq!(p.order(), 6);
        assert_eq!(p, s(&[0, 0, 0, 1], 6));
    }

    #[test]
    fn geometric_inverse() {
        let x = s(&[1, -1], 8);
        assert_eq!(x.inverse().unwrap(), s(&[1; 8], 8));
        assert!(s(&[2, 1], 4).inverse().is_err());
    }

    #[test]
    fn division_factors_out_powers() {
        let num = s(&[0, 0, 1, 1], 8);
        let den = s(&[0, 1], 8);
        let q = num.div(&den).unwrap();
        assert_eq!(q, s(&[0, 1, 1], 7));
    }

    #[test]
    fn json_round_trip() {
        let x = Series::new(vec![PolyA::a(), PolyA::zero(), PolyA::disc()], 5);
        let v = x.to_json("u", |c| serde_json::to_value(c).unwrap());
        let (var, back) =
            Series::from_json(&v, |c| Ok(serde_json::from_value(c.clone())?)).unwrap();
        assert_eq!(var, "u");
        assert_eq!(back, x);
    }
}
