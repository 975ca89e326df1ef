//! Γ-modules that are free of finite rank over `R`, given by the action of
//! `Q0, Q1, Q2` on a basis.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gamma::{commute_poly, psi, AdmMono, GammaElem};
use crate::poly::PolyA;
use crate::ring::Ring;

/// A vector of coordinates in the module basis.
pub type Vector = Vec<PolyA>;

/// `Q_i(x ⊗ y) = sum c[i][j][k] Q_j x ⊗ Q_k y`, as `(j, k, coefficient)`.
pub fn cartan_terms(i: usize) -> Vec<(usize, usize, PolyA)> {
    let one = PolyA::one;
    let two = || PolyA::from_i64s(&[2]);
    let a = PolyA::a;
    match i {
        0 => vec![(0, 0, one()), (1, 2, two()), (2, 1, two())],
        1 => vec![
            (0, 1, one()),
            (1, 0, one()),
            (1, 2, a()),
            (2, 1, a()),
            (2, 2, two()),
        ],
        2 => vec![(0, 2, one()), (2, 0, one()), (1, 1, one()), (2, 2, a())],
        _ => panic!("generator index out of range: {i}"),
    }
}

/// `images[i][c]` holds the coordinates of `Q_i e_c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModulePresentation {
    rank: usize,
    images: [Vec<Vector>; 3],
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    rank: usize,
    #[serde(rename = "Q0")]
    q0: Vec<Vector>,
    #[serde(rename = "Q1")]
    q1: Vec<Vector>,
    #[serde(rename = "Q2")]
    q2: Vec<Vector>,
}

/// One violated defining relation on one basis element.
#[derive(Clone, Debug, Serialize)]
pub struct RelationFailure {
    pub basis: usize,
    pub relation: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WellDefinedReport {
    pub rank: usize,
    pub checks: usize,
    pub failures: Vec<RelationFailure>,
}

impl WellDefinedReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn zero_vec(n: usize) -> Vector {
    vec![PolyA::zero(); n]
}

fn vadd(x: &[PolyA], y: &[PolyA]) -> Vector {
    x.iter().zip(y).map(|(p, q)| p.add(q)).collect()
}

fn vscale(c: &PolyA, x: &[PolyA]) -> Vector {
    x.iter().map(|p| c.mul(p)).collect()
}

/// Outer product `x ⊗ y` in the basis `e_i ⊗ f_j` indexed by `i * |y| + j`.
pub fn outer(x: &[PolyA], y: &[PolyA]) -> Vector {
    x.iter()
        .flat_map(|p| y.iter().map(move |q| p.mul(q)))
        .collect()
}

fn render_vec(v: &[PolyA]) -> Vec<String> {
    v.iter().map(|p| p.to_string()).collect()
}

impl ModulePresentation {
    /// Builds a presentation, checking every image has length `rank`.
    pub fn new(rank: usize, images: [Vec<Vector>; 3]) -> Result<Self> {
        for imgs in &images {
            if imgs.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: imgs.len(),
                });
            }
            for v in imgs {
                if v.len() != rank {
                    return Err(Error::RankMismatch {
                        expected: rank,
                        got: v.len(),
                    });
                }
            }
        }
        Ok(ModulePresentation { rank, images })
    }

    /// Rank one module with `Q_i e = q[i] e`.
    pub fn rank_one(q: [PolyA; 3]) -> Self {
        let [q0, q1, q2] = q;
        ModulePresentation {
            rank: 1,
            images: [vec![vec![q0]], vec![vec![q1]], vec![vec![q2]]],
        }
    }

    /// The zero module.
    pub fn zero_module() -> Self {
        ModulePresentation {
            rank: 0,
            images: Default::default(),
        }
    }

    /// `R` with `Q0 1 = 1`, `Q1 1 = Q2 1 = 0`.
    pub fn standard() -> Self {
        Self::rank_one([PolyA::one(), PolyA::zero(), PolyA::zero()])
    }

    /// `ω` with `Q0 u = 0`, `Q1 u = -u`, `Q2 u = 0`.
    pub fn omega() -> Self {
        Self::rank_one([PolyA::zero(), PolyA::from_i64s(&[-1]), PolyA::zero()])
    }

    /// `ω^n` as an iterated tensor power; `ω^0 = R`.
    pub fn omega_power(n: usize) -> Self {
        (0..n).fold(Self::standard(), |acc, _| acc.tensor(&Self::omega()))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coordinates of `Q_i e_c`.
    pub fn image(&self, i: usize, c: usize) -> &[PolyA] {
        &self.images[i][c]
    }

    pub fn basis_vector(&self, c: usize) -> Vector {
        let mut v = zero_vec(self.rank);
        v[c] = PolyA::one();
        v
    }

    fn check_rank(&self, v: &[PolyA]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `Q_i v`, moving each coordinate's polynomial past `Q_i` with the
    /// commutation relations.
    pub fn apply_q(&self, i: u8, v: &[PolyA]) -> Result<Vector> {
        self.check_rank(v)?;
        let mut out = zero_vec(self.rank);
        for (c, p) in v.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let row = commute_poly(i as usize, p);
            for (l, coef) in row.iter().enumerate() {
                if !coef.is_zero() {
                    out = vadd(&out, &vscale(coef, &self.images[l][c]));
                }
            }
        }
        Ok(out)
    }

    fn apply_mono(&self, m: &AdmMono, v: &[PolyA]) -> Result<Vector> {
        let mut acc = v.to_vec();
        for k in m.letters().rev() {
            acc = self.apply_q(k, &acc)?;
        }
        Ok(acc)
    }

    /// The left action of `g` on `v`.
    pub fn act(&self, g: &GammaElem, v: &[PolyA]) -> Result<Vector> {
        self.check_rank(v)?;
        let mut out = zero_vec(self.rank);
        for (m, c) in g.terms() {
            out = vadd(&out, &vscale(c, &self.apply_mono(m, v)?));
        }
        Ok(out)
    }

    /// `self ⊗_R other` with the Cartan formulas.
    pub fn tensor(&self, other: &Self) -> Self {
        let rank = self.rank * other.rank;
        let images = std::array::from_fn(|i| {
            let mut imgs = Vec::with_capacity(rank);
            for p in 0..self.rank {
                for q in 0..other.rank {
                    let mut v = zero_vec(rank);
                    for (j, k, c) in cartan_terms(i) {
                        let t = outer(&self.images[j][p], &other.images[k][q]);
                        v = vadd(&v, &vscale(&c, &t));
                    }
                    imgs.push(v);
                }
            }
            imgs
        });
        ModulePresentation { rank, images }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let rank = self.rank + other.rank;
        let images = std::array::from_fn(|i| {
            let mut imgs = Vec::with_capacity(rank);
            for v in &self.images[i] {
                let mut w = v.clone();
                w.extend(zero_vec(other.rank));
                imgs.push(w);
            }
            for v in &other.images[i] {
                let mut w = zero_vec(self.rank);
                w.extend(v.iter().cloned());
                imgs.push(w);
            }
            imgs
        });
        ModulePresentation { rank, images }
    }

    /// Presentation obtained by renumbering the basis: new basis element
    /// `k` is old basis element `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: perm.len(),
            });
        }
        let images = std::array::from_fn(|i| {
            perm.iter()
                .map(|&old| {
                    perm.iter()
                        .map(|&o| self.images[i][old][o].clone())
                        .collect()
                })
                .collect()
        });
        Ok(ModulePresentation {
            rank: self.rank,
            images,
        })
    }

    /// Checks the three commutation relations and the two Adem relations
    /// on every basis element.
    pub fn check_well_defined(&self) -> WellDefinedReport {
        let mut failures = Vec::new();
        let mut checks = 0;
        let a = PolyA::a();
        let n = |k: i64| PolyA::from_i64s(&[k]);
        for e in 0..self.rank {
            let ev = self.basis_vector(e);
            let q = |i: u8, v: &[PolyA]| self.apply_q(i, v).expect("rank checked");
            let ae = vscale(&a, &ev);
            let (q0, q1, q2) = (q(0, &ev), q(1, &ev), q(2, &ev));
            let lin = |terms: &[(PolyA, &Vector)]| {
                terms
                    .iter()
                    .fold(zero_vec(self.rank), |acc, (c, v)| vadd(&acc, &vscale(c, v)))
            };
            let cases: Vec<(&str, Vector, Vector)> = vec![
                (
                    "Q0 a = a^2 Q0 - 2a Q1 + 6 Q2",
                    q(0, &ae),
                    lin(&[(a.square(), &q0), (a.scale_int(-2), &q1), (n(6), &q2)]),
                ),
                (
                    "Q1 a = 3 Q0 + a Q2",
                    q(1, &ae),
                    lin(&[(n(3), &q0), (a.clone(), &q2)]),
                ),
                (
                    "Q2 a = -a Q0 + 3 Q1",
                    q(2, &ae),
                    lin(&[(a.neg(), &q0), (n(3), &q1)]),
                ),
                (
                    "Q1 Q0 = 2 Q2 Q1 - 2 Q0 Q2",
                    q(1, &q0),
                    lin(&[(n(2), &q(2, &q1)), (n(-2), &q(0, &q2))]),
                ),
                (
                    "Q2 Q0 = Q0 Q1 + a Q0 Q2 - 2 Q1 Q2",
                    q(2, &q0),
                    lin(&[
                        (n(1), &q(0, &q1)),
                        (a.clone(), &q(0, &q2)),
                        (n(-2), &q(1, &q2)),
                    ]),
                ),
            ];
            for (name, lhs, rhs) in cases {
                checks += 1;
                if lhs != rhs {
                    failures.push(RelationFailure {
                        basis: e,
                        relation: name.to_string(),
                        lhs: render_vec(&lhs),
                        rhs: render_vec(&rhs),
                    });
                }
            }
        }
        WellDefinedReport {
            rank: self.rank,
            checks,
            failures,
        }
    }

    pub fn to_json(&self) -> Value {
        let j = ModuleJson {
            rank: self.rank,
            q0: self.images[0].clone(),
            q1: self.images[1].clone(),
            q2: self.images[2].clone(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let j: ModuleJson = serde_json::from_value(v.clone())?;
        Self::new(j.rank, [j.q0, j.q1, j.q2])
    }
}

/// `Ψ(v1 ⊗ v2)` computed in the tensor product, after asserting that it
/// equals `Ψ v1 ⊗ Ψ v2`.
pub fn psi_on_tensor(
    m1: &ModulePresentation,
    m2: &ModulePresentation,
    v1: &[PolyA],
    v2: &[PolyA],
) -> Result<Vector> {
    let p = psi();
    let t = m1.tensor(m2);
    let lhs = t.act(&p, &outer(v1, v2))?;
    let rhs = outer(&m1.act(&p, v1)?, &m2.act(&p, v2)?);
    if lhs != rhs {
        return Err(Error::Inconsistent(format!(
            "Ψ(x⊗y) = {:?} but Ψx⊗Ψy = {:?}",
            render_vec(&lhs),
            render_vec(&rhs)
        )));
    }
    Ok(lhs)
}

/// `(m1 ⊗ m2)` and `(m2 ⊗ m1)` agree under the swap of tensor factors.
pub fn swap_is_isomorphism(m1: &ModulePresentation, m2: &ModulePresentation) -> bool {
    let (r1, r2) = (m1.rank(), m2.rank());
    let perm: Vec<usize> = (0..r1 * r2).map(|k| (k % r1) * r2 + k / r1).collect();
    m1.tensor(m2).permute(&perm).ok().as_ref() == Some(&m2.tensor(m1))
}

/// `(m1 ⊗ m2) ⊗ m3` and `m1 ⊗ (m2 ⊗ m3)` have identical action matrices;
/// both use the lexicographic index `(i * r2 + j) * r3 + k`.
pub fn tensor_is_associative(
    m1: &ModulePresentation,
    m2: &ModulePresentation,
    m3: &ModulePresentation,
) -> bool {
    m1.tensor(m2).tensor(m3) == m1.tensor(&m2.tensor(m3))
}

/// `Q_i p` for `p` in the standard module `R`.
pub fn standard_q(i: u8, p: &PolyA) -> PolyA {
    ModulePresentation::standard()
        .apply_q(i, std::slice::from_ref(p))
        .expect("rank one")
        .remove(0)
}

/// `g · p` for `p` in the standard module `R`.
pub fn standard_act(g: &GammaElem, p: &PolyA) -> PolyA {
    ModulePresentation::standard()
        .act(g, std::slice::from_ref(p))
        .expect("rank one")
        .remove(0)
}

/// Parses a module name: `R`, `omega`, `omega^n`, `R+omega`, or a JSON
/// document of the presentation.
pub fn parse_module_spec(s: &str) -> Result<ModulePresentation> {
    let t = s.trim();
    if t.starts_with('{') {
        return ModulePresentation::from_json(&serde_json::from_str(t)?);
    }
    let mut summands = Vec::new();
    for part in t.split('+') {
        let p = part.trim();
        let m = match p {
            "R" | "omega^0" | "ω^0" => ModulePresentation::standard(),
            "omega" | "ω" => ModulePresentation::omega(),
            "0" => ModulePresentation::zero_module(),
            _ => {
                let n = p
                    .strip_prefix("omega^")
                    .or_else(|| p.strip_prefix("ω^"))
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown module {p:?}")))?;
                ModulePresentation::omega_power(n)
            }
        };
        summands.push(m);
    }
    let first = summands.remove(0);
    Ok(summands.iter().fold(first, |acc, m| acc.direct_sum(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::S2;

    fn p(cs: &[i64]) -> PolyA {
        PolyA::from_i64s(cs)
    }

    #[test]
    fn standard_values() {
        let r = ModulePresentation::standard();
        assert_eq!(
            r.act(&GammaElem::q(1), &[PolyA::a()]).unwrap(),
            vec![p(&[3])]
        );
        assert_eq!(r.act(&GammaElem::q(0), &[p(&[1])]).unwrap(), vec![p(&[1])]);
        assert_eq!(standard_q(0, &PolyA::a()), p(&[0, 0, 1]));
        assert_eq!(standard_q(2, &PolyA::a()), p(&[0, -1]));
    }

    #[test]
    fn psi_on_omega() {
        let w = ModulePresentation::omega();
        assert_eq!(w.act(&psi(), &[p(&[1])]).unwrap(), vec![p(&[-2])]);
    }

    #[test]
    fn omega_squared_values() {
        let w2 = ModulePresentation::omega().tensor(&ModulePresentation::omega());
        let u = [p(&[1])];
        assert_eq!(w2.apply_q(2, &u).unwrap(), vec![p(&[1])]);
        assert!(w2.apply_q(0, &u).unwrap()[0].is_zero());
        assert!(w2.apply_q(1, &u).unwrap()[0].is_zero());
    }

    /// Independent oracle: `P(u^n) = P(u)^n = (-d)^n` in `R[d]/(d^3 - ad - 2)`.
    #[test]
    fn omega_powers_match_total_operation() {
        for n in 0..=6usize {
            let w = ModulePresentation::omega_power(n);
            let pd = S2::<PolyA>::d().neg().pow(n as u32);
            for i in 0..3 {
                assert_eq!(w.image(i, 0)[0], pd.c[i], "Q{i} on ω^{n}");
            }
        }
    }

    #[test]
    fn ill_defined_module_is_caught() {
        let m = ModulePresentation::rank_one([p(&[1]), p(&[1]), PolyA::zero()]);
        let r = m.check_well_defined();
        assert!(!r.ok());
        assert!(r.failures.iter().any(|f| f.relation.starts_with("Q1 Q0")));
    }

    #[test]
    fn shipped_modules_are_well_defined() {
        for n in 0..=3 {
            assert!(ModulePresentation::omega_power(n).check_well_defined().ok());
        }
        let e0s2 = parse_module_spec("R+omega").unwrap();
        assert_eq!(e0s2.rank(), 2);
        assert!(e0s2.check_well_defined().ok());
    }

    #[test]
    fn unit_object() {
        let m = parse_module_spec("R+omega^2").unwrap();
        assert_eq!(ModulePresentation::standard().tensor(&m), m);
        assert_eq!(m.tensor(&ModulePresentation::standard()), m);
    }

    #[test]
    fn swap_and_associativity() {
        let a = parse_module_spec("R+omega").unwrap();
        let b = parse_module_spec("omega+omega^2").unwrap();
        assert!(swap_is_isomorphism(&a, &b));
        assert!(tensor_is_associative(&a, &b, &a));
    }

    #[test]
    fn psi_tensor_examples() {
        let w = ModulePresentation::omega();
        let one = [p(&[1])];
        assert_eq!(psi_on_tensor(&w, &w, &one, &one).unwrap(), vec![p(&[4])]);
        let r = ModulePresentation::standard();
        assert_eq!(psi_on_tensor(&r, &r, &one, &one).unwrap(), vec![p(&[1])]);
        let w2 = w.tensor(&w);
        assert_eq!(psi_on_tensor(&w2, &w, &one, &one).unwrap(), vec![p(&[-8])]);
    }

    #[test]
    fn json_round_trip_and_rank_errors() {
        let m = parse_module_spec("R+omega").unwrap();
        assert_eq!(ModulePresentation::from_json(&m.to_json()).unwrap(), m);
        let bad = serde_json::json!({"rank": 2, "Q0": [[["1"]]], "Q1": [], "Q2": []});
        assert!(matches!(
            ModulePresentation::from_json(&bad),
            Err(Error::RankMismatch { .. })
        ));
        assert!(m.act(&psi(), &[p(&[1])]).is_err());
    }
}
