//! The acceptance criteria as executable checks, each with its own time
//! budget.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amplified::{
    continuity_check, identity_suite, psi_theta_check, random_window_poly, FreeAmplified, Window,
    WitnessModel,
};
use crate::elliptic;
use crate::error::Result;
use crate::gamma::{basis_of_degree, psi, GammaElem};
use crate::gmod::{psi_on_tensor, ModulePresentation};
use crate::koszul::{self, Field, KoszulComplex};
use crate::local::SElem;
use crate::normlog::{ell, linearization, norm, psi_act, LocalizedS, StandardR};
use crate::pid::{homology, Matrix, PidModule, Zint};
use crate::poly::PolyA;
use crate::ring::Ring;

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    /// All checks held.
    pub holds: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl CriterionResult {
    pub fn within_budget(&self) -> bool {
        self.elapsed_ms <= self.budget_ms
    }

    pub fn passed(&self) -> bool {
        self.holds && self.within_budget()
    }

    /// `PASS  3  name  (12 ms / 1000 ms)  detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {} ({} ms / {} ms) {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

/// Criterion numbers with names and budgets.
pub const CRITERIA: [(usize, &str, u64); 12] = [
    (1, "rank formula", 1),
    (2, "centrality of Ψ", 1),
    (3, "Ψ on tensor products", 1),
    (4, "module well-definedness", 5),
    (5, "θ identities", 30),
    (6, "continuity", 10),
    (7, "norm identities", 5),
    (8, "logarithm", 5),
    (9, "Koszul complex", 60),
    (10, "isogeny series", 5),
    (11, "derivation closure", 10),
    (12, "trace and norm cross-check", 10),
];

type Check = (bool, String);

fn timed(id: usize, f: impl FnOnce() -> Result<Check>) -> CriterionResult {
    let (_, name, secs) = CRITERIA[id - 1];
    let start = Instant::now();
    let (holds, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: name.to_string(),
        holds,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
        budget_ms: Duration::from_secs(secs).as_millis(),
    }
}

fn failures(list: &[String]) -> Check {
    if list.is_empty() {
        (true, "all checks hold".into())
    } else {
        (
            false,
            format!("{} failures: {}", list.len(), list.join("; ")),
        )
    }
}

fn rank_formula() -> Result<Check> {
    let bad: Vec<String> = (0..=8)
        .filter_map(|k| {
            let n = basis_of_degree(k).len();
            (n != (1 << (k + 1)) - 1).then(|| format!("degree {k}: {n}"))
        })
        .collect();
    Ok(failures(&bad))
}

fn centrality() -> Result<Check> {
    let p = psi();
    let gens = [
        ("a", GammaElem::a()),
        ("Q0", GammaElem::q(0)),
        ("Q1", GammaElem::q(1)),
        ("Q2", GammaElem::q(2)),
    ];
    let bad: Vec<String> = gens
        .iter()
        .filter(|(_, g)| !p.commutator(g).is_zero())
        .map(|(n, g)| format!("[Ψ, {n}] = {}", p.commutator(g)))
        .collect();
    Ok(failures(&bad))
}

fn tensor_multiplicativity() -> Result<Check> {
    let (r, w) = (ModulePresentation::standard(), ModulePresentation::omega());
    let w2 = ModulePresentation::omega_power(2);
    let mut bad = Vec::new();
    for (name, m1, m2) in [("ω⊗ω", &w, &w), ("ω⊗ω²", &w, &w2), ("R⊗ω", &r, &w)] {
        for c1 in 0..m1.rank() {
            for c2 in 0..m2.rank() {
                if let Err(e) = psi_on_tensor(m1, m2, &m1.basis_vector(c1), &m2.basis_vector(c2)) {
                    bad.push(format!("{name}: {e}"));
                }
            }
        }
    }
    let p = psi();
    for n in 0..=6u32 {
        let m = ModulePresentation::omega_power(n as usize);
        let v = m.basis_vector(0);
        let want = vec![PolyA::from_i64s(&[(-2i64).pow(n)])];
        let got = m.act(&p, &v)?;
        if got != want {
            bad.push(format!("Ψ on ω^{n}: {got:?}"));
        }
    }
    Ok(failures(&bad))
}

fn well_definedness() -> Result<Check> {
    let mut mods = vec![("R".to_string(), ModulePresentation::standard())];
    for n in 1..=6 {
        mods.push((format!("ω^{n}"), ModulePresentation::omega_power(n)));
    }
    let mut bad = Vec::new();
    let mut count = 0;
    for (n, m) in &mods {
        count += 1;
        if !m.check_well_defined().ok() {
            bad.push(n.clone());
        }
    }
    for (n1, m1) in &mods {
        for (n2, m2) in &mods {
            count += 1;
            if !m1.tensor(m2).check_well_defined().ok() {
                bad.push(format!("{n1}⊗{n2}"));
            }
        }
    }
    let (ok, detail) = failures(&bad);
    Ok((ok, format!("{count} modules: {detail}")))
}

fn theta_suite() -> Result<Check> {
    let mut bad = Vec::new();
    let r = FreeAmplified::new(Window::default());
    let m = WitnessModel::new();
    let samples = vec![(r.var(0), r.var(1))];
    for res in identity_suite(&r, &m, &samples) {
        if !res.ok() {
            bad.push(format!("{} failed ({:?})", res.identity, res.error));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let wide = FreeAmplified::new(Window::new(2, 4));
    let gens = Window::new(1, 2).generators(2);
    for _ in 0..100 {
        let factors = rng.gen_range(1..=2);
        let p = random_window_poly(&mut rng, &gens, 3, factors);
        match wide.frobenius_check(&p) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("Frobenius fails on {p:?}")),
            Err(e) => bad.push(format!("Frobenius: {e}")),
        }
    }
    let big = FreeAmplified::new(Window::new(3, 3));
    let (lhs, rhs) = psi_theta_check(&big, &big.var(0))?;
    if lhs != rhs {
        bad.push("Ψθx ≠ θΨx".into());
    }
    let (ok, detail) = failures(&bad);
    Ok((
        ok,
        format!("5 identities, 100 Frobenius samples, Ψθ = θΨ: {detail}"),
    ))
}

fn continuity() -> Result<Check> {
    let rep = continuity_check(4, 6);
    let detail = format!(
        "{} checks; Γ·2R ⊆ 2R violations: {}; Γ·a^3R ⊆ 2R + aR violations: {}{}; graded bound Γ[r]·a^(3^r) ⊆ 2R + aR ({} checks) {}",
        rep.checks,
        rep.two_violations.len(),
        rep.cube_violations.len(),
        rep.cube_violations
            .first()
            .map(|v| format!(" (first: {}({}) = {})", v.operation, v.input, v.output))
            .unwrap_or_default(),
        rep.graded_checks,
        if rep.graded_bound_holds { "holds" } else { "fails" },
    );
    Ok((rep.ok(), detail))
}

fn norm_identities() -> Result<Check> {
    let h = StandardR;
    let mut bad = Vec::new();
    for m in -3..=3i64 {
        let x = PolyA::from_i64s(&[m]);
        if norm(&h, &x)? != x.pow(3) {
            bad.push(format!("N({m})"));
        }
    }
    for x in [PolyA::from_i64s(&[-3, 1]), PolyA::disc()] {
        if norm(&h, &x)? != x.pow(3).neg() {
            bad.push(format!("N({x})"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random = || {
        let deg = rng.gen_range(0..=3);
        PolyA::from_i64s(&(0..=deg).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>())
    };
    for _ in 0..50 {
        let (x, y) = (random(), random());
        if norm(&h, &x.mul(&y))? != norm(&h, &x)?.mul(&norm(&h, &y)?) {
            bad.push(format!("N(({x})({y}))"));
        }
    }
    for r in [
        PolyA::one(),
        PolyA::a(),
        PolyA::a().square(),
        PolyA::from_i64s(&[2, 1]),
    ] {
        let (n, t) = linearization(&r)?;
        if !n.re.is_one() || n.eps != t {
            bad.push(format!("N(1 + ε({r})) = {n}"));
        }
    }
    Ok(failures(&bad))
}

fn logarithm() -> Result<Check> {
    let h = StandardR;
    let d = PolyA::disc();
    let mut bad = Vec::new();
    if d.square().mul(&psi_act(&h, &d)?) != norm(&h, &d)?.neg() {
        bad.push("D^2 ΨD ≠ -ND".into());
    }
    let s = LocalizedS::new()?;
    let mut units = vec![SElem::from(d.clone()), SElem::one().neg()];
    for k in -3..=3i64 {
        units.push(SElem::base_pow(k).neg());
    }
    for x in &units {
        let l = ell(&s, x, 20, 16)?;
        if !l.is_zero() {
            bad.push(format!("ℓ({x}) = {l}"));
        }
    }
    let (ok, detail) = failures(&bad);
    Ok((ok, format!("{} units at 2^20: {detail}", units.len())))
}

/// `Tor` of a module whose structure constants are integers, from the
/// induced maps written out directly: `q_i ⊗ e ↦ Q_i e`,
/// `r1 ↦ q1⊗Q0e - 2 q2⊗Q1e + 2 q0⊗Q2e`,
/// `r2 ↦ q2⊗Q0e - q0⊗Q1e - a q0⊗Q2e + 2 q1⊗Q2e`.
pub fn tor_oracle(m: &ModulePresentation) -> Option<[PidModule; 3]> {
    let r = m.rank();
    let entry = |i: usize, c: usize, row: usize| -> Option<BigInt> {
        let p = &m.image(i, c)[row];
        p.is_constant().then(|| p.coeff(0))
    };
    let mut d1 = Matrix::<Zint>::zero(r, 3 * r);
    for i in 0..3 {
        for c in 0..r {
            for row in 0..r {
                d1.data[row][i * r + c] = Zint(entry(i, c, row)?);
            }
        }
    }
    // The term - a q0 ⊗ Q2 e needs Q2 e = 0 to stay over Z.
    if (0..r).any(|c| m.image(2, c).iter().any(|p| !p.is_zero())) {
        return None;
    }
    let mut d2 = Matrix::<Zint>::zero(3 * r, 2 * r);
    let rel: [&[(i64, usize, usize)]; 2] = [
        &[(1, 1, 0), (-2, 2, 1), (2, 0, 2)],
        &[(1, 2, 0), (-1, 0, 1), (2, 1, 2)],
    ];
    for (k, terms) in rel.iter().enumerate() {
        for c in 0..r {
            for &(coef, slot, op) in terms.iter() {
                for row in 0..r {
                    let v = entry(op, c, row)? * coef;
                    let cell = &mut d2.data[slot * r + row][k * r + c];
                    cell.0 += v;
                }
            }
        }
    }
    Some([
        homology(r, None, Some(&d1)),
        homology(3 * r, Some(&d1), Some(&d2)),
        homology(2 * r, Some(&d2), None),
    ])
}

fn koszul_checks() -> Result<Check> {
    let mods = [
        ("R", ModulePresentation::standard()),
        ("ω", ModulePresentation::omega()),
        ("ω²", ModulePresentation::omega_power(2)),
    ];
    let mut bad = Vec::new();
    for (name, m) in &mods {
        let cx = KoszulComplex::build(m, 5)?;
        if cx.d_squared_vanishes() != (true, true) {
            bad.push(format!("d^2 ≠ 0 on {name}"));
        }
        for field in [Field::Q, Field::F2] {
            let rep = koszul::acyclicity_check(m, 3, field)?;
            if !rep.exact_at_1_2 {
                bad.push(format!("{name} over {field:?} not exact at positions 1, 2"));
            }
        }
    }
    let omega = ModulePresentation::omega();
    let oracle = tor_oracle(&omega);
    let engine = koszul::tor_gamma_mod_i(1)?;
    let expected = ["0", "Z/2", "0"];
    match (&oracle, &engine.over_z) {
        (Some(o), Some(e)) if o == e && e.iter().map(ToString::to_string).eq(expected) => {}
        _ => bad.push(format!(
            "Tor(ω): engine {:?}, oracle {oracle:?}",
            engine.over_z
        )),
    }
    let (ok, detail) = failures(&bad);
    Ok((
        ok,
        format!("d^2 = 0 through degree 5, exact through degree 3, Tor(ω) = (0, Z/2, 0): {detail}"),
    ))
}

fn isogeny() -> Result<Check> {
    let data = elliptic::isogeny_series(8)?;
    let rep = elliptic::isogeny_report(&data);
    let bad: Vec<String> = rep
        .checks
        .iter()
        .filter(|c| !c.agrees)
        .map(|c| {
            format!(
                "{} at u^{}: {} vs {}",
                c.series, c.power, c.computed, c.expected
            )
        })
        .chain((!rep.a_prime_matches).then(|| format!("a' = {}", rep.a_prime)))
        .collect();
    let (ok, detail) = failures(&bad);
    Ok((
        ok,
        format!(
            "{} coefficients, a' = {}: {detail}",
            rep.checks.len(),
            rep.a_prime
        ),
    ))
}

fn derivation() -> Result<Check> {
    let mut bad = Vec::new();
    for id in elliptic::derive_commutation() {
        if !id.agrees {
            bad.push(format!("{}: {} vs {}", id.name, id.derived, id.engine));
        }
    }
    let adem = elliptic::derive_adem_and_psi();
    if !adem.ok() {
        bad.push(format!("PP projection: {:?}", adem.components));
    }
    let q = elliptic::q_series_report(6)?;
    let wanted = |c: &elliptic::CoefficientCheck| match c.series.as_str() {
        "Q1(u)" | "Q2(u)" => c.power <= 4,
        "Q0(u)" => c.power == 3 || c.power == 4,
        _ => false,
    };
    for c in q.checks.iter().filter(|c| wanted(c)) {
        if !c.agrees {
            bad.push(format!(
                "{} at u^{}: {} vs {}",
                c.series, c.power, c.computed, c.expected
            ));
        }
    }
    let disc = &q.q0_u2;
    let detected = disc.computed_matches_q_series_display != disc.computed_matches_u_prime_display;
    if !detected {
        bad.push(format!(
            "u^2 coefficient of Q0(u) = {} not flagged",
            disc.computed
        ));
    }
    let (ok, detail) = failures(&bad);
    Ok((
        ok,
        format!(
            "Q0(u) at u^2: computed {}, Q-series display {}, u' display {} (discrepancy reported): {detail}",
            disc.computed, disc.q_series_display, disc.u_prime_display
        ),
    ))
}

fn trace_norm() -> Result<Check> {
    let rep = elliptic::symbolic_trace_norm();
    Ok((
        rep.trace_matches && rep.norm_matches,
        format!(
            "trace = {}, norm has {} terms",
            rep.trace,
            rep.norm.matches(" + ").count() + rep.norm.matches(" - ").count() + 1
        ),
    ))
}

/// Runs one criterion by number.
pub fn run_criterion(id: usize) -> Option<CriterionResult> {
    let f: fn() -> Result<Check> = match id {
        1 => rank_formula,
        2 => centrality,
        3 => tensor_multiplicativity,
        4 => well_definedness,
        5 => theta_suite,
        6 => continuity,
        7 => norm_identities,
        8 => logarithm,
        9 => koszul_checks,
        10 => isogeny,
        11 => derivation,
        12 => trace_norm,
        _ => return None,
    };
    Some(timed(id, f))
}

/// All twelve criteria in order.
pub fn verify_all() -> Vec<CriterionResult> {
    (1..=12).filter_map(run_criterion).collect()
}
