//! The length-two Koszul complex of a `Γ`-module `M`,
//!
//! `0 -> Γ⊗C2⊗M --d2--> Γ⊗C1⊗M --d1--> Γ⊗M --d0--> M -> 0`,
//!
//! with `C1 = R{q0, q1, q2}` (right action twisted like `Γ[1]`) and
//! `C2 = R{r1, r2}` (central). All tensor products are over `R`; an element
//! `γ ⊗ q_i ⊗ p e_c` is rewritten as `sum_j γ·m_ij(p) ⊗ q_j ⊗ e_c`, where
//! `q_i p = sum_j m_ij(p) q_j` mirrors `Q_i p = sum_j m_ij(p) Q_j` in `Γ`.
//!
//! The differentials preserve the filtration by the degree of the `Γ`
//! factor (`q_i` counts one, `r_i` two), so the complex is assembled up to
//! a cap and each filtration level is a finite complex of free
//! `R`-modules.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{basis_of_degree, basis_up_to, commute_poly, AdmMono, GammaElem};
use crate::gmod::{ModulePresentation, Vector};
use crate::pid::{homology, Euclid, F2Poly, Matrix, PidModule, QPoly, Zint};
use crate::poly::PolyA;
use crate::ring::Ring;

/// Default filtration cap.
pub const DEFAULT_KMAX: usize = 5;

/// A matrix over `R` stored by sparse columns.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    pub rows: usize,
    pub cols: Vec<BTreeMap<usize, PolyA>>,
}

impl RMatrix {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> PolyA {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    /// `self * o`.
    pub fn mul(&self, o: &RMatrix) -> RMatrix {
        let cols = o
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, PolyA> = BTreeMap::new();
                for (k, c) in col {
                    for (i, e) in &self.cols[*k] {
                        let v = acc.entry(*i).or_default();
                        *v = v.add(&e.mul(c));
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            })
            .collect();
        RMatrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.values().all(|v| v.is_zero()))
    }

    /// The leading `rows × cols` block, after base change through `f`.
    pub fn to_pid<E: Euclid>(
        &self,
        rows: usize,
        cols: usize,
        f: impl Fn(&PolyA) -> E,
    ) -> Matrix<E> {
        let mut m = Matrix::zero(rows, cols);
        for (j, col) in self.cols.iter().take(cols).enumerate() {
            for (i, e) in col.range(..rows) {
                m.data[*i][j] = f(e);
            }
        }
        m
    }

    /// Whether all entries are integer constants.
    pub fn is_constant(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.values().all(|v| v.is_constant()))
    }
}

/// Homology coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Field {
    Q,
    F2,
    Z,
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" => Ok(Field::Q),
            "f2" | "F2" => Ok(Field::F2),
            "z" | "Z" => Ok(Field::Z),
            other => Err(Error::Parse(format!(
                "unknown coefficient ring {other:?}; expected q, f2 or z"
            ))),
        }
    }
}

/// A slot of `C1 ⊗ M` (`q_i ⊗ e_c`, index `i·rank + c`) or of `C2 ⊗ M`
/// (`r_{i+1} ⊗ e_c`).
type Basis = Vec<(AdmMono, usize)>;

/// The complex assembled for Γ-factors of degree `<= k_max` (in `Γ⊗M`).
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub module: ModulePresentation,
    pub k_max: usize,
    pub basis0: Basis,
    pub basis1: Basis,
    pub basis2: Basis,
    /// `Γ⊗M -> M`.
    pub d0: RMatrix,
    /// `Γ⊗C1⊗M -> Γ⊗M`.
    pub d1: RMatrix,
    /// `Γ⊗C2⊗M -> Γ⊗C1⊗M`.
    pub d2: RMatrix,
}

fn basis(monos: &[AdmMono], slots: usize) -> Basis {
    monos
        .iter()
        .flat_map(|m| (0..slots).map(move |s| (m.clone(), s)))
        .collect()
}

fn monos_below(n: isize) -> Vec<AdmMono> {
    if n < 0 {
        Vec::new()
    } else {
        basis_up_to(n as usize)
    }
}

fn add_at(out: &mut [GammaElem], slot: usize, x: &GammaElem) {
    out[slot] = out[slot].add(x);
}

/// Adds `x·coeff ⊗ q_i ⊗ v` to an element of `Γ⊗C1⊗M`.
fn put1(out: &mut [GammaElem], rank: usize, x: &GammaElem, coeff: &PolyA, i: usize, v: &[PolyA]) {
    let xc = x.mul_poly(coeff);
    for (c, p) in v.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let row = commute_poly(i, p);
        for (j, m) in row.iter().enumerate() {
            if !m.is_zero() {
                add_at(out, j * rank + c, &xc.mul_poly(m));
            }
        }
    }
}

/// Adds `x ⊗ v` to an element of `Γ⊗M`.
fn put0(out: &mut [GammaElem], x: &GammaElem, v: &[PolyA]) {
    for (c, p) in v.iter().enumerate() {
        if !p.is_zero() {
            add_at(out, c, &x.mul_poly(p));
        }
    }
}

fn int(n: i64) -> PolyA {
    PolyA::from_i64s(&[n])
}

/// `d1(μ ⊗ q_i ⊗ e_c) = μ ⊗ Q_i e_c - μ Q_i ⊗ e_c`.
pub fn d1_on_basis(m: &ModulePresentation, mu: &AdmMono, i: usize, c: usize) -> Vec<GammaElem> {
    let g = GammaElem::mono(mu.clone());
    let mut out = vec![GammaElem::zero(); m.rank()];
    put0(&mut out, &g, m.image(i, c));
    add_at(&mut out, c, &g.mul(&GammaElem::q(i as u8)).neg());
    out
}

/// `d2(μ ⊗ r_{which+1} ⊗ e_c)`.
pub fn d2_on_basis(m: &ModulePresentation, mu: &AdmMono, which: usize, c: usize) -> Vec<GammaElem> {
    let r = m.rank();
    let g = GammaElem::mono(mu.clone());
    let e = m.basis_vector(c);
    let gq = |k: u8| g.mul(&GammaElem::q(k));
    let mut out = vec![GammaElem::zero(); 3 * r];
    let one = PolyA::one();
    if which == 0 {
        put1(&mut out, r, &gq(1), &one, 0, &e);
        put1(&mut out, r, &gq(2), &int(-2), 1, &e);
        put1(&mut out, r, &gq(0), &int(2), 2, &e);
        put1(&mut out, r, &g, &one, 1, m.image(0, c));
        put1(&mut out, r, &g, &int(-2), 2, m.image(1, c));
        put1(&mut out, r, &g, &int(2), 0, m.image(2, c));
    } else {
        let g_a_q0 = g.mul_poly(&PolyA::a()).mul(&GammaElem::q(0));
        put1(&mut out, r, &gq(2), &one, 0, &e);
        put1(&mut out, r, &gq(0), &int(-1), 1, &e);
        put1(&mut out, r, &g_a_q0, &int(-1), 2, &e);
        put1(&mut out, r, &gq(1), &int(2), 2, &e);
        put1(&mut out, r, &g, &one, 2, m.image(0, c));
        put1(&mut out, r, &g, &int(-1), 0, m.image(1, c));
        put1(&mut out, r, &g, &PolyA::a().neg(), 0, m.image(2, c));
        put1(&mut out, r, &g, &int(2), 1, m.image(2, c));
    }
    out
}

fn to_column(
    elem: &[GammaElem],
    index: &HashMap<(AdmMono, usize), usize>,
) -> Result<BTreeMap<usize, PolyA>> {
    let mut col = BTreeMap::new();
    for (slot, g) in elem.iter().enumerate() {
        for (mono, c) in g.terms() {
            let row = index.get(&(mono.clone(), slot)).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "differential leaves the filtration: {mono} in slot {slot}"
                ))
            })?;
            col.insert(*row, c.clone());
        }
    }
    Ok(col)
}

fn index_of(b: &Basis) -> HashMap<(AdmMono, usize), usize> {
    b.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect()
}

impl KoszulComplex {
    /// Assembles `d0, d1, d2` on the filtration level `k_max`.
    pub fn build(m: &ModulePresentation, k_max: usize) -> Result<Self> {
        let report = m.check_well_defined();
        if !report.ok() {
            return Err(Error::IllDefinedModule(format!(
                "{} relation failures, first: {:?}",
                report.failures.len(),
                report.failures.first()
            )));
        }
        let r = m.rank();
        let k = k_max as isize;
        let basis0 = basis(&monos_below(k), r);
        let basis1 = basis(&monos_below(k - 1), 3 * r);
        let basis2 = basis(&monos_below(k - 2), 2 * r);
        let idx0 = index_of(&basis0);
        let idx1 = index_of(&basis1);
        let d0 = RMatrix {
            rows: r,
            cols: basis0
                .iter()
                .map(|(mu, c)| {
                    let v = m.act(&GammaElem::mono(mu.clone()), &m.basis_vector(*c))?;
                    Ok(v.into_iter()
                        .enumerate()
                        .filter(|(_, p)| !p.is_zero())
                        .collect())
                })
                .collect::<Result<_>>()?,
        };
        let d1 = RMatrix {
            rows: basis0.len(),
            cols: basis1
                .iter()
                .map(|(mu, s)| to_column(&d1_on_basis(m, mu, s / r, s % r), &idx0))
                .collect::<Result<_>>()?,
        };
        let d2 = RMatrix {
            rows: basis1.len(),
            cols: basis2
                .iter()
                .map(|(mu, s)| to_column(&d2_on_basis(m, mu, s / r, s % r), &idx1))
                .collect::<Result<_>>()?,
        };
        Ok(KoszulComplex {
            module: m.clone(),
            k_max,
            basis0,
            basis1,
            basis2,
            d0,
            d1,
            d2,
        })
    }

    /// Ranks of `Γ⊗C2⊗M, Γ⊗C1⊗M, Γ⊗M` on filtration level `n`.
    pub fn dims(&self, n: usize) -> [usize; 3] {
        let r = self.module.rank();
        let count = |k: isize| monos_below(k).len();
        let n = n as isize;
        [count(n - 2) * 2 * r, count(n - 1) * 3 * r, count(n) * r]
    }

    /// `d0 d1 = 0` and `d1 d2 = 0` as matrices over `R`.
    pub fn d_squared_vanishes(&self) -> (bool, bool) {
        (
            self.d0.mul(&self.d1).is_zero(),
            self.d1.mul(&self.d2).is_zero(),
        )
    }

    /// Homology of the augmented level-`n` complex at `M, Γ⊗M, Γ⊗C1⊗M,
    /// Γ⊗C2⊗M` after base change to `E`.
    pub fn level_homology<E: Euclid>(
        &self,
        n: usize,
        f: impl Fn(&PolyA) -> E + Copy,
    ) -> [PidModule; 4] {
        let [n2, n1, n0] = self.dims(n);
        let r = self.module.rank();
        let d0 = self.d0.to_pid(r, n0, f);
        let d1 = self.d1.to_pid(n0, n1, f);
        let d2 = self.d2.to_pid(n1, n2, f);
        [
            homology(r, None, Some(&d0)),
            homology(n0, Some(&d0), Some(&d1)),
            homology(n1, Some(&d1), Some(&d2)),
            homology(n2, Some(&d2), None),
        ]
    }
}

/// Homology of one filtration level.
#[derive(Clone, Debug, Serialize)]
pub struct LevelHomology {
    pub level: usize,
    /// At `M` (cokernel of `d0`), `Γ⊗M`, `Γ⊗C1⊗M`, `Γ⊗C2⊗M`.
    pub homology: [PidModule; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityReport {
    pub field: Field,
    pub k_max: usize,
    pub levels: Vec<LevelHomology>,
    /// Positions `Γ⊗C1⊗M` and `Γ⊗C2⊗M` are exact on every level.
    pub exact_at_1_2: bool,
    /// The augmented complex is exact on every level.
    pub exact: bool,
}

/// Homology of the filtration levels `0..=k_max` after base change to
/// `Q[a]` or `F2[a]`.
pub fn acyclicity_check(
    m: &ModulePresentation,
    k_max: usize,
    field: Field,
) -> Result<AcyclicityReport> {
    let cx = KoszulComplex::build(m, k_max)?;
    let levels: Vec<LevelHomology> = (0..=k_max)
        .map(|n| LevelHomology {
            level: n,
            homology: match field {
                Field::Q => cx.level_homology(n, QPoly::from_poly),
                Field::F2 => cx.level_homology(n, F2Poly::from_poly),
                Field::Z => unreachable!("checked below"),
            },
        })
        .collect();
    if field == Field::Z {
        return Err(Error::Parse("acyclicity is computed over q or f2".into()));
    }
    let exact_at_1_2 = levels
        .iter()
        .all(|l| l.homology[2].is_zero() && l.homology[3].is_zero());
    let exact = levels
        .iter()
        .all(|l| l.homology.iter().all(PidModule::is_zero));
    Ok(AcyclicityReport {
        field,
        k_max,
        levels,
        exact_at_1_2,
        exact,
    })
}

/// The complex `0 -> C2⊗M -> C1⊗M -> M -> 0` computing
/// `Tor^Γ_q(Γ/I, M)`, obtained by applying `Γ/I ⊗_Γ -`: every term with a
/// positive-degree `Γ` factor is dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct TorComplex {
    pub rank: usize,
    /// `C1⊗M -> M`.
    pub d1: RMatrix,
    /// `C2⊗M -> C1⊗M`.
    pub d2: RMatrix,
}

impl TorComplex {
    /// Reads the induced maps off the assembled complex: the rows and
    /// columns whose `Γ` factor is the identity.
    pub fn from_complex(cx: &KoszulComplex) -> Self {
        let r = cx.module.rank();
        let restrict = |mat: &RMatrix, rows: usize, cols: usize| RMatrix {
            rows,
            cols: mat.cols[..cols]
                .iter()
                .map(|c| c.range(..rows).map(|(i, v)| (*i, v.clone())).collect())
                .collect(),
        };
        TorComplex {
            rank: r,
            d1: restrict(&cx.d1, r, 3 * r),
            d2: restrict(&cx.d2, 3 * r, 2 * r),
        }
    }

    pub fn homology<E: Euclid>(&self, f: impl Fn(&PolyA) -> E + Copy) -> [PidModule; 3] {
        let r = self.rank;
        let d1 = self.d1.to_pid(r, 3 * r, f);
        let d2 = self.d2.to_pid(3 * r, 2 * r, f);
        [
            homology(r, None, Some(&d1)),
            homology(3 * r, Some(&d1), Some(&d2)),
            homology(2 * r, Some(&d2), None),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorReport {
    pub module: String,
    pub over_q: [PidModule; 3],
    pub over_f2: [PidModule; 3],
    /// Present when the induced maps have integer entries.
    pub over_z: Option<[PidModule; 3]>,
    pub d1: Vec<Vec<String>>,
    pub d2: Vec<Vec<String>>,
}

fn render_matrix(m: &RMatrix) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| (0..m.ncols()).map(|j| m.entry(i, j).to_string()).collect())
        .collect()
}

/// `Tor^Γ_q(Γ/I, M)` for `q = 0, 1, 2`.
pub fn tor_of_module(m: &ModulePresentation, name: &str) -> Result<TorReport> {
    let cx = KoszulComplex::build(m, 2)?;
    let t = TorComplex::from_complex(&cx);
    let constant = t.d1.is_constant() && t.d2.is_constant();
    Ok(TorReport {
        module: name.to_string(),
        over_q: t.homology(QPoly::from_poly),
        over_f2: t.homology(F2Poly::from_poly),
        over_z: constant.then(|| t.homology(|p| Zint(p.coeff(0)))),
        d1: render_matrix(&t.d1),
        d2: render_matrix(&t.d2),
    })
}

/// `Tor^Γ_q(Γ/I, ω^k)`.
pub fn tor_gamma_mod_i(k: usize) -> Result<TorReport> {
    tor_of_module(&ModulePresentation::omega_power(k), &format!("omega^{k}"))
}

/// The identification of `C2` with the kernel of the multiplication
/// `Γ[1] ⊗_R Γ[1] -> Γ[2]`.
#[derive(Clone, Debug, Serialize)]
pub struct C2KernelReport {
    /// Rows: the 7 admissible monomials of degree 2; columns: `Q_i ⊗ Q_j`.
    pub multiplication: Vec<Vec<String>>,
    pub rank_over_q: usize,
    /// The leading terms of `d2(1 ⊗ r_k ⊗ 1)` in `Γ[1] ⊗ C1`.
    pub relation_vectors: Vec<Vec<String>>,
    pub relations_in_kernel: bool,
    /// Some 2×2 minor of the relation vectors is `±1`, so they span a
    /// direct summand of `R^9`; with the rank count this is the kernel.
    pub unit_minor: bool,
    pub matches: bool,
}

pub fn c2_kernel_check() -> Result<C2KernelReport> {
    let deg2 = basis_of_degree(2);
    let pairs: Vec<(u8, u8)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
    let mult: Vec<Vec<PolyA>> = pairs
        .iter()
        .map(|&(i, j)| {
            let prod = GammaElem::q(i).mul(&GammaElem::q(j));
            deg2.iter().map(|m| prod.coeff(m)).collect()
        })
        .collect();
    let cx = KoszulComplex::build(&ModulePresentation::standard(), 2)?;
    let idx1 = index_of(&cx.basis1);
    let vectors: Vec<Vec<PolyA>> = (0..2)
        .map(|k| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let row = idx1[&(
                        AdmMono::new(u32::from(i == 0), if i == 0 { vec![] } else { vec![i] }),
                        j as usize,
                    )];
                    cx.d2.entry(row, k)
                })
                .collect()
        })
        .collect();
    let relations_in_kernel = vectors.iter().all(|v| {
        (0..deg2.len()).all(|r| {
            pairs
                .iter()
                .enumerate()
                .fold(PolyA::zero(), |acc, (p, _)| acc.add(&mult[p][r].mul(&v[p])))
                .is_zero()
        })
    });
    let qmat = Matrix::from_fn(deg2.len(), pairs.len(), |r, p| {
        QPoly::from_poly(&mult[p][r])
    });
    let rank_over_q = qmat.rank();
    let one = BigInt::from(1);
    let unit_minor = (0..9).any(|x| {
        (x + 1..9).any(|y| {
            let det = vectors[0][x]
                .mul(&vectors[1][y])
                .sub(&vectors[0][y].mul(&vectors[1][x]));
            det.is_constant() && det.coeff(0).magnitude() == one.magnitude()
        })
    });
    Ok(C2KernelReport {
        multiplication: (0..deg2.len())
            .map(|r| {
                pairs
                    .iter()
                    .enumerate()
                    .map(|(p, _)| mult[p][r].to_string())
                    .collect()
            })
            .collect(),
        rank_over_q,
        relation_vectors: vectors
            .iter()
            .map(|v| v.iter().map(|p| p.to_string()).collect())
            .collect(),
        relations_in_kernel,
        unit_minor,
        matches: relations_in_kernel && unit_minor && rank_over_q + 2 == pairs.len(),
    })
}

/// Element of `Γ⊗M` as `(monomial, slot) -> coefficient`, for display.
pub fn describe(elem: &[GammaElem]) -> Vec<(String, usize, String)> {
    let mut out = Vec::new();
    for (slot, g) in elem.iter().enumerate() {
        for (m, c) in g.terms() {
            out.push((m.to_string(), slot, c.to_string()));
        }
    }
    out
}

/// `Q_i e_c` as a vector, used when checking the induced maps.
pub fn module_column(m: &ModulePresentation, i: usize, c: usize) -> Vector {
    m.image(i, c).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega() -> ModulePresentation {
        ModulePresentation::omega()
    }

    #[test]
    fn d_squared_is_zero() {
        for m in [ModulePresentation::standard(), omega()] {
            let cx = KoszulComplex::build(&m, 3).unwrap();
            assert_eq!(cx.d_squared_vanishes(), (true, true));
        }
    }

    #[test]
    fn d1_on_omega_in_degree_one() {
        let m = omega();
        let mu = AdmMono::new(0, vec![1]);
        let g = GammaElem::mono(mu.clone());
        for i in 0..3 {
            let got = d1_on_basis(&m, &mu, i, 0);
            let qu = if i == 1 { g.neg() } else { GammaElem::zero() };
            let want = qu.sub(&g.mul(&GammaElem::q(i as u8)));
            assert_eq!(got[0], want);
        }
    }

    /// The induced maps written out by hand for `ω`.
    #[test]
    fn tor_of_omega_against_hand_oracle() {
        let z = |rows: &[&[i64]]| {
            Matrix::from_fn(rows.len(), rows[0].len(), |i, j| {
                Zint(BigInt::from(rows[i][j]))
            })
        };
        // d1 = (0, -1, 0); d2: r1 -> 2 q2, r2 -> q0
        let d1 = z(&[&[0, -1, 0]]);
        let d2 = z(&[&[0, 1], &[0, 0], &[2, 0]]);
        let oracle = [
            homology(1, None, Some(&d1)),
            homology(3, Some(&d1), Some(&d2)),
            homology(2, Some(&d2), None),
        ];
        assert_eq!(oracle[0].to_string(), "0");
        assert_eq!(oracle[1].to_string(), "Z/2");
        assert_eq!(oracle[2].to_string(), "0");
        let rep = tor_gamma_mod_i(1).unwrap();
        assert_eq!(rep.over_z.as_ref().unwrap(), &oracle);
        assert_eq!(rep.d1, [["0", "-1", "0"]]);
        assert_eq!(rep.d2, [["0", "1"], ["0", "0"], ["2", "0"]]);
    }

    #[test]
    fn tor_of_standard_module() {
        let rep = tor_gamma_mod_i(0).unwrap();
        assert!(rep.over_z.as_ref().unwrap()[0].is_zero());
    }

    #[test]
    fn tor_of_zero_module() {
        let rep = tor_of_module(&ModulePresentation::zero_module(), "0").unwrap();
        assert!(rep
            .over_q
            .iter()
            .chain(&rep.over_f2)
            .all(PidModule::is_zero));
    }

    #[test]
    fn acyclic_small() {
        let rep = acyclicity_check(&ModulePresentation::standard(), 2, Field::Q).unwrap();
        assert!(rep.exact, "{:?}", rep.levels);
        let rep = acyclicity_check(&omega(), 2, Field::F2).unwrap();
        assert!(rep.exact, "{:?}", rep.levels);
    }

    #[test]
    fn c2_is_the_kernel_of_multiplication() {
        let rep = c2_kernel_check().unwrap();
        assert_eq!(rep.rank_over_q, 7);
        assert!(rep.matches, "{rep:?}");
    }

    #[test]
    fn ill_defined_module_is_rejected() {
        let bad = ModulePresentation::rank_one([PolyA::one(), PolyA::one(), PolyA::zero()]);
        assert!(matches!(
            KoszulComplex::build(&bad, 2),
            Err(Error::IllDefinedModule(_))
        ));
    }
}
