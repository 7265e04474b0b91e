use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use towercodes::agcodes::{
    certify_transitive, dual_via_eta, eta_form, family_code_with, family_divisors, goppa_code, min_distance,
    plan_transitive_code, selfdual_scale, LinearCode,
};
use towercodes::bounds::{bound_curves, crossover, improved_and_selfdual, table};
use towercodes::galois::{
    automorphism_group, closure_compute, symbolic_ledger, verify_closure_ledger, CheckOutcome, Status,
};
use towercodes::sxcodes::{sx_codebook, sx_stats};
use towercodes::tower::{Divisor, Locus, TowerCtx};
use towercodes::verify::verify_all;

use crate::divspec;
use crate::report::{Emitted, Failure, RunConfig};
use crate::{BoundsCmd, Cmd, CodeCmd, SxCmd, TowerCmd, VerifyCmd};

pub fn dispatch(cmd: &Cmd, config: &RunConfig) -> Result<Emitted> {
    match cmd {
        Cmd::Tower(TowerCmd::Analyze { q, level }) => tower_analyze(*q, *level),
        Cmd::Closure { q, n } => closure(*q, *n),
        Cmd::Code(CodeCmd::Build { q, level, divisor }) => {
            code_build(*q, &Source::Build { level: *level, divisor: divisor.clone() }, config)
        }
        Cmd::Code(CodeCmd::Family { q, n, a, b, selfdual_scale }) => {
            code_build(*q, &Source::Family { n: *n, a: *a, b: *b, selfdual_scale: *selfdual_scale }, config)
        }
        Cmd::Code(CodeCmd::Certify { input }) => code_certify(input),
        Cmd::Code(CodeCmd::Plan { q, delta, eps }) => code_plan(*q, *delta, *eps),
        Cmd::Sx(SxCmd::Build { q, m0, s, t, level }) => sx_build(*q, *m0, *s, *t, *level, config),
        Cmd::Bounds(BoundsCmd::Table { q, curves, step }) => bounds_table(*q, curves, *step),
        Cmd::Bounds(BoundsCmd::Summary { q }) => bounds_summary(*q),
        Cmd::Verify(VerifyCmd::All { q }) => verify(*q),
    }
}

fn failures_from(checks: &[CheckOutcome]) -> Vec<Failure> {
    checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| Failure::new(format!("{}{}", c.item, c.n.map(|n| format!("@n={n}")).unwrap_or_default()), &c.detail))
        .collect()
}

fn checks_text(checks: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "  {:<14} {:<12} {}", c.item, format!("{:?}", c.status), c.detail);
    }
    s
}

fn tower_analyze(q: u64, level: usize) -> Result<Emitted> {
    let ctx = TowerCtx::new(q)?;
    ctx.check_level(level)?;
    let places = ctx.rational_places(level)?;
    let split = ctx.places_over(Locus::ZOne, level)?.len();
    let genus = ctx.genus_level(level)?;
    let n = level + 1;
    let closure = closure_compute(&ctx, n)?;
    let checks = verify_closure_ledger(&ctx, std::slice::from_ref(&closure));
    let failures = failures_from(&checks);
    let text = format!(
        "F{level} over GF({q}): genus {genus}, {} rational places, {split} over z = 1\nE{n}: [E:E0] = {}, g = {}\n{}",
        places.len(),
        closure.degree_over_e0,
        closure.genus,
        checks_text(&checks)
    );
    let report = json!({
        "q": q,
        "ell": ctx.ell(),
        "p": ctx.p(),
        "level": level,
        "genus": genus,
        "rational_places": places,
        "places_over_z1": split,
        "place_at_infinity": ctx.place_at_infinity(level)?,
        "closure": closure,
        "checks": checks,
        "ledger": symbolic_ledger(&ctx, n),
    });
    Ok(Emitted { failures, ..Emitted::new(report, text)? })
}

fn closure(q: u64, n: usize) -> Result<Emitted> {
    let ctx = TowerCtx::new(q)?;
    let r = closure_compute(&ctx, n)?;
    let checks = verify_closure_ledger(&ctx, std::slice::from_ref(&r));
    let failures = failures_from(&checks);
    let text = format!(
        "E{n} over GF({q}): t = {}, [E:E0] = {}, e0 = {}, e_inf = {}, deg A = {}, deg B = {}, g = {}\n{}",
        r.t,
        r.degree_over_e0,
        r.e0,
        r.e_inf,
        r.deg_a,
        r.deg_b,
        r.genus,
        checks_text(&checks)
    );
    let report = json!({ "closure": r, "checks": checks, "ledger": symbolic_ledger(&ctx, n) });
    Ok(Emitted { failures, ..Emitted::new(report, text)? })
}

/// How a code report was produced; enough to rebuild the code exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Source {
    Build { level: usize, divisor: String },
    Family { n: usize, a: i64, b: i64, selfdual_scale: bool },
}

struct Built {
    code: LinearCode,
    extra: Value,
    failures: Vec<Failure>,
}

fn rebuild(ctx: &TowerCtx, source: &Source) -> Result<Built> {
    match source {
        Source::Build { level, divisor } => {
            ctx.check_level(*level)?;
            let d = ctx.places_over(Locus::ZOne, *level)?;
            let g = divspec::resolve(ctx, &divspec::parse(divisor)?, &d, *level)?;
            let code = goppa_code(ctx, &d, &g, *level)?;
            Ok(Built { code, extra: json!({}), failures: Vec::new() })
        }
        Source::Family { n, a, b, selfdual_scale: scale } => {
            let eta = eta_form(ctx, *n)?;
            let base = family_code_with(ctx, &eta, *a, *b)?;
            let dual = dual_via_eta(ctx, &base, &eta)?;
            let code = if *scale { selfdual_scale(ctx, &base, &eta)? } else { base };
            let mut failures = Vec::new();
            if *scale && !code.is_self_dual() {
                failures.push(Failure::new("self_duality", "scaled code is not self-dual"));
            }
            let extra = json!({
                "eta": eta,
                "dual": dual,
                "duality_verified": true,
                "self_orthogonal": code.is_self_orthogonal(),
                "self_dual": code.is_self_dual(),
            });
            Ok(Built { code, extra, failures })
        }
    }
}

fn code_build(q: u64, source: &Source, config: &RunConfig) -> Result<Emitted> {
    let ctx = TowerCtx::new(q)?;
    let Built { code, extra, failures } = rebuild(&ctx, source)?;
    let md = min_distance(&code, config.budgets.distance)?;
    let text = format!(
        "[{}, {}, {}] code over GF({q}) on level {} ({}), G = {}{}\n",
        code.len(),
        code.dim(),
        md.d,
        code.level(),
        if md.exact { "exact distance" } else { "distance upper bound" },
        code.divisor(),
        if code.is_self_dual() { ", self-dual" } else { "" },
    );
    let mut report = json!({ "source": source, "code": code, "min_distance": md });
    if let (Value::Object(r), Value::Object(e)) = (&mut report, extra) {
        r.extend(e);
    }
    Ok(Emitted { failures, ..Emitted::new(report, text)? })
}

#[derive(Deserialize)]
struct CodeReportIn {
    config: ConfigIn,
    report: ReportIn,
}

#[derive(Deserialize)]
struct ConfigIn {
    q: u64,
}

#[derive(Deserialize)]
struct ReportIn {
    source: Source,
    code: CodeIn,
}

#[derive(Deserialize)]
struct CodeIn {
    generator_matrix: Vec<Vec<u32>>,
}

fn code_certify(path: &str) -> Result<Emitted> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let input: CodeReportIn =
        serde_json::from_str(&raw).with_context(|| format!("{path} is not a code build or code family report"))?;
    let ctx = TowerCtx::new(input.config.q)?;
    let code = rebuild(&ctx, &input.report.source)?.code;
    let rebuilt: Vec<Vec<u32>> =
        code.generator().to_rows().into_iter().map(|r| r.into_iter().map(|e| e.to_int()).collect()).collect();
    let mut failures = Vec::new();
    if rebuilt != input.report.code.generator_matrix {
        failures.push(Failure::new("generator", "report generator differs from the rebuilt code"));
    }
    let group = automorphism_group(&ctx, code.level() + 1)?;
    let cert = certify_transitive(&ctx, &code, &group)?;
    if !cert.transitive {
        failures.push(Failure::new("transitive", format!("orbit of the first place: {:?}", cert.orbit_of_first)));
    }
    for (sigma, ok) in cert.group.iter().zip(&cert.invariant) {
        if !ok {
            failures.push(Failure::new("invariant", format!("{sigma:?} does not preserve the code")));
        }
    }
    let text = format!(
        "[{}, {}] code: group of order {}, orbit size {}, stabilizer order {}, {}\n",
        code.len(),
        code.dim(),
        cert.group.len(),
        cert.orbit_of_first.len(),
        cert.stabilizer_order,
        if failures.is_empty() { "transitive and invariant" } else { "NOT certified" }
    );
    let report = json!({
        "source": input.report.source,
        "N": code.len(),
        "k": code.dim(),
        "certificate": cert,
    });
    Ok(Emitted { failures, ..Emitted::new(report, text)? })
}

fn code_plan(q: u64, delta: f64, eps: f64) -> Result<Emitted> {
    let ctx = TowerCtx::new(q)?;
    let r = plan_transitive_code(&ctx, delta, eps)?;
    let text = format!(
        "level n = {}, length {}, deg G0 = {:?}, r = {}, predicted rate {} and distance {}\n",
        r.n,
        r.length.map_or("unbounded at desk scale".into(), |l| l.to_string()),
        r.deg_g0,
        r.r.map_or("-".into(), |x| x.to_string()),
        r.predicted_rate.map_or("-".into(), |x| x.to_string()),
        r.predicted_delta.map_or("-".into(), |x| x.to_string()),
    );
    Emitted::new(r, text)
}

fn sx_build(q: u64, m0: i64, s: usize, t: usize, level: usize, config: &RunConfig) -> Result<Emitted> {
    let ctx = TowerCtx::new(q)?;
    let (h, d, group) = match level {
        0 => {
            let (_, b, d) = family_divisors(&ctx, 1)?;
            (b.scale(m0), d, Some(automorphism_group(&ctx, 1)?))
        }
        1 => {
            let h = Divisor::from_place(&ctx.place_at_infinity(1)?, m0);
            (h, ctx.places_over(Locus::ZOne, 1)?, None)
        }
        _ => bail!(towercodes::Error::UnsupportedLevel { level, max: 1 }),
    };
    let book = sx_codebook(&ctx, &h, &d, s, t, config.budgets.enumeration)?;
    let stats = sx_stats(&ctx, &book, group.as_deref(), config.budgets.pairs)?;
    let mut failures = Vec::new();
    if !stats.disjoint {
        failures.push(Failure::new("disjoint", "two divisors share a codeword"));
    }
    if !stats.census_matches_prediction {
        failures.push(Failure::new("census", "set sizes differ from inclusion-exclusion"));
    }
    if stats.gamma_invariant == Some(false) {
        failures.push(Failure::new("invariant", "codebook is not invariant under the automorphisms"));
    }
    let text = format!(
        "N = {}, |S| = {}, |C| = {}, rate {}, min distance {}\n",
        stats.n,
        stats.size_s,
        stats.size_c,
        stats.rate,
        stats.min_dist.map_or("over budget".into(), |d| format!("{d}{}", if stats.exact { "" } else { " (bound)" })),
    );
    let report = json!({ "level": level, "m0": m0, "H": h, "stats": stats, "census": book.census() });
    Ok(Emitted { failures, ..Emitted::new(report, text)? })
}

fn bounds_table(q: u64, curves: &[String], step: f64) -> Result<Emitted> {
    let names: Vec<&str> = curves.iter().map(String::as_str).collect();
    let rows = table(q, &names, step)?;
    let mut csv = format!("delta,{}\n", names.join(","));
    for (d, vals) in &rows {
        let vals: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(csv, "{d},{}", vals.join(","));
    }
    let reg = bound_curves();
    let notes: Vec<Value> = names
        .iter()
        .map(|n| json!({ "name": n, "domain": reg.get(n).map(|c| c.domain_note()).unwrap_or("") }))
        .collect();
    let json_rows: Vec<Value> = rows.iter().map(|(d, v)| json!({ "delta": d, "values": v })).collect();
    let report = json!({ "q": q, "step": step, "curves": notes, "rows": json_rows });
    Ok(Emitted { csv: Some(csv.clone()), ..Emitted::new(report, csv)? })
}

fn bounds_summary(q: u64) -> Result<Emitted> {
    let c = crossover(q)?;
    let s = improved_and_selfdual(q)?;
    let text = format!(
        "q = {q}: crossover {}, max tvz - gv = {:.6e} at {}\ndelta* = {}/{} ~ {}, self-dual delta = {}/{}{}\n",
        c.witness.map_or("none".into(), |w| format!("from delta = {w}")),
        c.max_gap,
        c.argmax,
        s.delta_star.num,
        s.delta_star.den,
        s.delta_star.value,
        s.selfdual_delta.num,
        s.selfdual_delta.den,
        s.isodual_old_delta.map_or(String::new(), |o| format!(", earlier iso-dual delta = {}/{}", o.num, o.den)),
    );
    Emitted::new(json!({ "crossover": c, "summary": s }), text)
}

fn verify(q: u64) -> Result<Emitted> {
    let outcomes = verify_all(q)?;
    let mut text = String::new();
    let mut failures = Vec::new();
    for o in &outcomes {
        let tag = match (o.passed, o.blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (non-blocking)",
        };
        let _ = writeln!(text, "{:>2} {tag:<5} {}: {}", o.id, o.title, o.detail);
        if !o.passed && o.blocking {
            failures.push(Failure::new(format!("acceptance-{}", o.id), &o.detail));
        }
    }
    Ok(Emitted { failures, ..Emitted::new(json!({ "outcomes": outcomes }), text)? })
}
