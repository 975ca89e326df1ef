//! One function per subcommand; each returns the rendered report and
//! whether its assertions hold.

use std::fmt::Display;

use serde_json::{json, Value};

use powops::amplified::{parse_amp, render_amp, FreeAmplified, Window};
use powops::elliptic::{self, r_series_json, s2_series_json};
use powops::error::{Error, Result};
use powops::expr::parse_poly;
use powops::gamma::{FreeWord, GammaElem, Strategy, WordRewriter};
use powops::gmod::{parse_module_spec, standard_act};
use powops::koszul::{self, Field};
use powops::normlog::{self, HostRing, NormOp};
use powops::pid::PidModule;
use powops::ring::Ring;
use powops::series::Series;
use powops::tower::TowerElem;
use powops::verify;

pub struct Outcome {
    pub ok: bool,
    pub text: String,
}

impl Outcome {
    fn new(ok: bool, text: String) -> Self {
        Outcome { ok, text }
    }

    fn report(
        ok: bool,
        json: bool,
        text: impl FnOnce() -> String,
        value: impl FnOnce() -> Value,
    ) -> Self {
        let text = if json {
            serde_json::to_string_pretty(&value()).expect("serializable report")
        } else {
            text()
        };
        Outcome::new(ok, text)
    }
}

/// Usage and input errors exit with 2; inconsistencies found by the
/// engine itself with 3.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent(_) => 3,
        _ => 2,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    match s {
        "leftmost" => Ok(Strategy::Leftmost),
        "rightmost" => Ok(Strategy::Rightmost),
        _ => s
            .strip_prefix("random:")
            .and_then(|seed| seed.parse().ok())
            .map(Strategy::Random)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown strategy {s:?}; expected leftmost, rightmost or random:SEED"
                ))
            }),
    }
}

pub fn nf(expr: &str, strategy: &str, json: bool) -> Result<Outcome> {
    let word = FreeWord::parse(expr)?;
    let mut rw = WordRewriter::new(parse_strategy(strategy)?);
    let g = rw.reduce(&word);
    Ok(Outcome::report(
        true,
        json,
        || g.to_string(),
        || {
            json!({
                "input": expr,
                "strategy": strategy,
                "normal_form": g.to_string(),
                "terms": g.to_json(),
                "steps": rw.steps(),
            })
        },
    ))
}

pub fn mul(left: &str, right: &str, json: bool) -> Result<Outcome> {
    let g = GammaElem::parse(left)?.mul(&GammaElem::parse(right)?);
    Ok(Outcome::report(
        true,
        json,
        || g.to_string(),
        || json!({ "product": g.to_string(), "terms": g.to_json() }),
    ))
}

fn render_vector<T: Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn act(
    gamma: &str,
    on: Option<&str>,
    module: Option<&str>,
    basis: usize,
    json: bool,
) -> Result<Outcome> {
    let g = GammaElem::parse(gamma)?;
    let (input, result): (String, Vec<String>) = match (on, module) {
        (Some(x), None) => {
            let p = parse_poly(x)?;
            (p.to_string(), vec![standard_act(&g, &p).to_string()])
        }
        (None, Some(spec)) => {
            let m = parse_module_spec(spec)?;
            if basis >= m.rank() {
                return Err(Error::Parse(format!(
                    "basis index {basis} out of range for rank {}",
                    m.rank()
                )));
            }
            let v = m.act(&g, &m.basis_vector(basis))?;
            (
                format!("e{basis} in {spec}"),
                v.iter().map(ToString::to_string).collect(),
            )
        }
        _ => return Err(Error::Parse("give exactly one of --on or --module".into())),
    };
    Ok(Outcome::report(
        true,
        json,
        || {
            if result.len() == 1 && on.is_some() {
                result[0].clone()
            } else {
                render_vector(&result)
            }
        },
        || json!({ "element": g.to_string(), "input": input, "result": result }),
    ))
}

pub fn tensor(left: &str, right: &str, json: bool) -> Result<Outcome> {
    let t = parse_module_spec(left)?.tensor(&parse_module_spec(right)?);
    let rep = t.check_well_defined();
    let ok = rep.ok();
    Ok(Outcome::report(
        ok,
        json,
        || {
            let mut lines = vec![format!("rank {}", t.rank())];
            for i in 0..3 {
                let cols: Vec<String> = (0..t.rank())
                    .map(|c| render_vector(t.image(i, c)))
                    .collect();
                lines.push(format!("Q{i}: {}", cols.join(" ")));
            }
            lines.push(format!(
                "relations: {}",
                if ok {
                    "all hold".to_string()
                } else {
                    format!("{} failures", rep.failures.len())
                }
            ));
            lines.join("\n")
        },
        || json!({ "module": t.to_json(), "well_defined": ok, "failures": rep.failures.len() }),
    ))
}

fn parse_window(s: &str) -> Result<Window> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [j, r] => match (j.parse(), r.parse()) {
            (Ok(j), Ok(r)) => Ok(Window::new(j, r)),
            _ => Err(Error::Parse(format!("window {s:?} is not THETA,WORD"))),
        },
        _ => Err(Error::Parse(format!("window {s:?} is not THETA,WORD"))),
    }
}

pub fn theta(expr: &str, window: &str, json: bool) -> Result<Outcome> {
    let ring = FreeAmplified::new(parse_window(window)?);
    let t = ring.apply_theta(&parse_amp(expr)?)?;
    let rendered = render_amp(&t);
    Ok(Outcome::report(
        true,
        json,
        || rendered.clone(),
        || json!({ "input": expr, "theta": rendered, "window": window }),
    ))
}

pub fn norm(
    op: &str,
    ring: &str,
    x: &str,
    prec2: u32,
    prec_a: usize,
    json: bool,
) -> Result<Outcome> {
    let op: NormOp = op.parse()?;
    let host: HostRing = ring.parse()?;
    let value = normlog::eval(op, host, x, prec2, prec_a)?;
    Ok(Outcome::report(
        true,
        json,
        || value.clone(),
        || json!({ "op": format!("{op:?}"), "ring": format!("{host:?}"), "x": x, "value": value, "prec2": prec2, "precA": prec_a }),
    ))
}

fn homology_lines(label: &str, h: &[PidModule]) -> Vec<String> {
    let mut out = vec![format!("over {label}:")];
    out.extend(
        h.iter()
            .enumerate()
            .map(|(q, m)| format!("  Tor_{q} = {m}")),
    );
    out
}

pub fn tor(k: usize, field: Option<&str>, json: bool) -> Result<Outcome> {
    let rep = koszul::tor_gamma_mod_i(k)?;
    let fields: Vec<Field> = match field {
        Some(f) => vec![f.parse()?],
        None => vec![Field::Z, Field::Q, Field::F2],
    };
    let mut sections: Vec<(&str, &[PidModule])> = Vec::new();
    for f in fields {
        match f {
            Field::Z => match &rep.over_z {
                Some(h) => sections.push(("Z", h)),
                None if field.is_some() => return Err(Error::Parse(format!(
                    "the induced maps for omega^{k} are not integer matrices; use --field q or f2"
                ))),
                None => {}
            },
            Field::Q => sections.push(("Q[a]", &rep.over_q)),
            Field::F2 => sections.push(("F2[a]", &rep.over_f2)),
        }
    }
    Ok(Outcome::report(
        true,
        json,
        || {
            let mut lines = vec![format!("Tor^Γ_q(Γ/I, {})", rep.module)];
            for (label, h) in &sections {
                lines.extend(homology_lines(label, h));
            }
            lines.join("\n")
        },
        || {
            let mut v = json!({ "module": rep.module, "d1": rep.d1, "d2": rep.d2 });
            for (label, h) in &sections {
                v[*label] = to_value(h);
            }
            v
        },
    ))
}

pub fn acyclic(module: &str, kmax: usize, field: &str, json: bool) -> Result<Outcome> {
    let m = parse_module_spec(module)?;
    let rep = koszul::acyclicity_check(&m, kmax, field.parse()?)?;
    Ok(Outcome::report(
        rep.exact_at_1_2,
        json,
        || {
            let mut lines: Vec<String> = rep
                .levels
                .iter()
                .map(|l| {
                    let [hm, h0, h1, h2] = &l.homology;
                    format!(
                        "level {}: M/im = {hm}, H0 = {h0}, H1 = {h1}, H2 = {h2}",
                        l.level
                    )
                })
                .collect();
            lines.push(format!("exact at positions 1, 2: {}", rep.exact_at_1_2));
            lines.push(format!("augmented complex exact: {}", rep.exact));
            lines.join("\n")
        },
        || to_value(&rep),
    ))
}

fn series_lines<T: Ring + Display>(name: &str, s: &Series<T>) -> Vec<String> {
    let mut out = vec![format!("{name} =")];
    out.extend(
        s.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("  u^{k}: {c}")),
    );
    out.push(format!("  + O(u^{})", s.order()));
    out
}

pub fn isogeny(order: usize, json: bool) -> Result<Outcome> {
    let data = elliptic::isogeny_series(order)?;
    let rep = elliptic::isogeny_report(&data);
    Ok(Outcome::report(
        rep.ok,
        json,
        || {
            let mut lines = vec![format!("a' = {}", data.a_prime)];
            lines.extend(series_lines("u'", &data.u_prime));
            lines.extend(series_lines("v'", &data.v_prime));
            lines.push(format!(
                "known coefficients: {}/{} agree; a' = a^2 + 3d - a d^2: {}",
                rep.checks.iter().filter(|c| c.agrees).count(),
                rep.checks.len(),
                rep.a_prime_matches
            ));
            lines.join("\n")
        },
        || {
            json!({
                "a_prime": TowerElem::S2(data.a_prime.map(|p| p.clone().into())).to_json(),
                "u_prime": s2_series_json(&data.u_prime),
                "v_prime": s2_series_json(&data.v_prime),
                "verified_through": data.verified_through,
                "report": to_value(&rep),
            })
        },
    ))
}

fn identity_lines(ids: &[elliptic::DerivedIdentity]) -> Vec<String> {
    ids.iter()
        .map(|i| {
            format!(
                "{}: {} [{}]",
                i.name,
                i.derived,
                if i.agrees { "agrees" } else { "DIFFERS" }
            )
        })
        .collect()
}

pub fn derive(what: &str, order: usize, json: bool) -> Result<Outcome> {
    match what {
        "commutation" => {
            let ids = elliptic::derive_commutation();
            let ok = ids.iter().all(|i| i.agrees);
            Ok(Outcome::report(
                ok,
                json,
                || identity_lines(&ids).join("\n"),
                || to_value(&ids),
            ))
        }
        "adem" => {
            let rep = elliptic::derive_adem_and_psi();
            Ok(Outcome::report(
                rep.ok(),
                json,
                || {
                    let mut lines: Vec<String> = ["d^0", "d^1", "d^2"]
                        .iter()
                        .zip(&rep.components)
                        .map(|(n, c)| format!("{n}: {c}"))
                        .collect();
                    lines.extend(identity_lines(&rep.identities));
                    lines.push(format!("PP(1) projects to 1: {}", rep.unit_projects_to_one));
                    lines.join("\n")
                },
                || to_value(&rep),
            ))
        }
        "qseries" => {
            let q = elliptic::q_series_on_u(order)?;
            let rep = elliptic::q_series_report(order)?;
            let d = &rep.q0_u2;
            Ok(Outcome::report(
                rep.ok_apart_from_discrepancy(),
                json,
                || {
                    let mut lines = Vec::new();
                    for (i, s) in q.iter().enumerate() {
                        lines.extend(series_lines(&format!("Q{i}(u)"), s));
                    }
                    for c in rep.checks.iter().filter(|c| !c.agrees) {
                        lines.push(format!(
                            "mismatch: {} at u^{}: computed {}, displayed {}",
                            c.series, c.power, c.computed, c.expected
                        ));
                    }
                    lines.push(format!(
                        "Q0(u) at u^2: computed {}, Q-series display {}, u' display {}",
                        d.computed, d.q_series_display, d.u_prime_display
                    ));
                    lines.push(format!(
                        "Cartan formula consistent: {}",
                        rep.cartan_consistent
                    ));
                    lines.join("\n")
                },
                || {
                    json!({
                        "series": q.iter().map(r_series_json).collect::<Vec<_>>(),
                        "report": to_value(&rep),
                    })
                },
            ))
        }
        other => Err(Error::Parse(format!(
            "unknown derivation {other:?}; expected commutation, adem or qseries"
        ))),
    }
}

pub fn elliptic_verify(all: bool, order: usize, json: bool) -> Result<Outcome> {
    if !all {
        return Err(Error::Parse("elliptic verify needs --all".into()));
    }
    let v = elliptic::verify_all(order)?;
    let ok = v.ok();
    Ok(Outcome::report(
        ok,
        json,
        || {
            [
                format!("order-two point: {}", v.order_two_point),
                format!("isogeny coefficients and a': {}", v.isogeny.ok),
                format!(
                    "commutation relations: {}",
                    v.commutation.iter().all(|c| c.agrees)
                ),
                format!("Adem relations and Ψ: {}", v.adem.ok()),
                format!(
                    "Q_i(u) series: {} (u^2 of Q0(u): computed {}, displayed {})",
                    v.q_series.ok_apart_from_discrepancy(),
                    v.q_series.q0_u2.computed,
                    v.q_series.q0_u2.q_series_display
                ),
                format!(
                    "trace and norm: {}",
                    v.trace_norm.trace_matches && v.trace_norm.norm_matches
                ),
                format!(
                    "canonical subgroup: {} of {} samples fail",
                    v.canonical_subgroup.failures.len(),
                    v.canonical_subgroup.checked
                ),
            ]
            .join("\n")
        },
        || to_value(&v),
    ))
}

pub fn verify_all(json: bool) -> Result<Outcome> {
    let results = verify::verify_all();
    let ok = results.iter().all(|r| r.passed());
    Ok(Outcome::report(
        ok,
        json,
        || {
            results
                .iter()
                .map(|r| r.line())
                .collect::<Vec<_>>()
                .join("\n")
        },
        || to_value(&results),
    ))
}
