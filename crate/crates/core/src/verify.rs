//! The end-to-end acceptance suite over `GF(9)`, as a registry of checks.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::agcodes::{
    certify_transitive, dual_via_eta, eta_form, family_code_with, family_divisors, goppa_code, min_distance,
    residue_sums, selfdual_scale, DEFAULT_BUDGET,
};
use crate::algebra::Elem;
use crate::bounds::{crossover, delta_star, isodual_old_delta, selfdual_delta};
use crate::error::{Error, Result};
use crate::galois::{automorphism_group, closure_compute, verify_closure_ledger, Status};
use crate::registry::{Named, Registry};
use crate::rrspace::rr_space;
use crate::sxcodes::{sx_codebook, sx_stats, DEFAULT_ENUMERATION_BUDGET, DEFAULT_PAIR_BUDGET};
use crate::tower::{Divisor, Locus, TowerCtx};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    /// Failures of non-blocking checks do not fail the suite.
    pub blocking: bool,
    pub detail: String,
    /// Wall-clock time; kept out of reports so they stay byte-identical.
    #[serde(skip)]
    pub millis: u128,
}

pub trait AcceptanceCheck: Named + Send + Sync {
    fn id(&self) -> u32;
    fn title(&self) -> &'static str;
    fn blocking(&self) -> bool {
        true
    }
    fn time_limit(&self) -> Option<Duration> {
        None
    }
    fn run(&self, ctx: &TowerCtx) -> Result<(bool, String)>;
}

macro_rules! check {
    ($t:ident, $id:literal, $name:literal, $title:literal $(, limit = $lim:expr)? $(, blocking = $b:expr)?) => {
        struct $t;
        impl Named for $t {
            fn name(&self) -> &'static str {
                $name
            }
        }
        impl AcceptanceCheck for $t {
            fn id(&self) -> u32 {
                $id
            }
            fn title(&self) -> &'static str {
                $title
            }
            $(fn time_limit(&self) -> Option<Duration> {
                Some($lim)
            })?
            $(fn blocking(&self) -> bool {
                $b
            })?
            fn run(&self, ctx: &TowerCtx) -> Result<(bool, String)> {
                $t::body(ctx)
            }
        }
    };
}

check!(ClosureN1, 1, "closure-n1", "first closure ledger", limit = Duration::from_secs(1));
check!(SelfDual, 2, "self-dual", "self-dual [6,3,4] code");
check!(Transitive, 3, "transitive", "transitive automorphism action");
check!(Duality, 4, "duality", "dual codes via the differential");
check!(Residues, 5, "residues", "residues and residue theorem");
check!(RiemannRoch, 6, "riemann-roch", "one-point spaces on F1");
check!(Sweep, 7, "sweep", "designed-parameter sweep on F1", limit = Duration::from_secs(120));
check!(Bounds, 8, "bounds", "bound comparisons");
check!(Sx, 9, "sx", "nonlinear codebooks", limit = Duration::from_secs(60));
check!(ClosureN2, 10, "closure-n2", "second closure ledger", blocking = false);

impl ClosureN1 {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let r = closure_compute(ctx, 1)?;
        let identity = r.degree_over_fw as i128 + 1 - (r.deg_a + r.deg_b) as i128;
        let ok = r.t == 0 && r.degree_over_e0 == 6 && r.deg_a == 3 && r.deg_b == 1 && r.genus == 0 && identity == 0;
        Ok((ok, format!("t={} [E1:E0]={} degA={} degB={} g={}", r.t, r.degree_over_e0, r.deg_a, r.deg_b, r.genus)))
    }
}

impl SelfDual {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let eta = eta_form(ctx, 1)?;
        let c = selfdual_scale(ctx, &family_code_with(ctx, &eta, 0, 2)?, &eta)?;
        let md = min_distance(&c, DEFAULT_BUDGET)?;
        let ok =
            c.len() == 6 && c.dim() == 3 && c.is_self_orthogonal() && 2 * c.dim() == c.len() && md.d == 4 && md.exact;
        Ok((ok, format!("[{}, {}, {}] exact={} G*G^T=0: {}", c.len(), c.dim(), md.d, md.exact, c.is_self_orthogonal())))
    }
}

impl Transitive {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let eta = eta_form(ctx, 1)?;
        let c = family_code_with(ctx, &eta, 0, 2)?;
        let group = automorphism_group(ctx, 1)?;
        let cert = certify_transitive(ctx, &c, &group)?;
        let ok = group.len() == 6 && cert.transitive && cert.all_invariant();
        Ok((ok, format!("|group|={} orbit={:?} invariant={:?}", group.len(), cert.orbit_of_first, cert.invariant)))
    }
}

impl Duality {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let eta = eta_form(ctx, 1)?;
        let mut equal = 0;
        for b in 0..=eta.b_n {
            let c = family_code_with(ctx, &eta, 0, b)?;
            let dual = dual_via_eta(ctx, &c, &eta)?;
            if dual.generator().same_row_space(&c.parity_check()) {
                equal += 1;
            }
        }
        Ok((eta.a_n == 0 && eta.b_n == 4 && equal == 5, format!("{equal}/5 row-space equalities")))
    }
}

impl Residues {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let f = ctx.field();
        let eta = eta_form(ctx, 1)?;
        let ints: Vec<u32> = eta.residues.iter().map(|e| e.to_int()).collect();
        let in_units = eta.residues.iter().all(|&r| f.pow(r, ctx.ell() as u64 - 1) == Elem::ONE);
        let g = ctx.genus_level(0)? as i64;
        let (_, b, _) = family_divisors(ctx, 1)?;
        let sums = residue_sums(ctx, &eta, &b.scale(2))?;
        let zeros = sums.iter().filter(|s| s.is_zero()).count();
        let ok = ints == [1, 1, 1, 2, 2, 2]
            && in_units
            && eta.divisor.degree() == 2 * g - 2
            && sums.len() == 9
            && zeros == 9;
        Ok((ok, format!("residues={ints:?} deg(eta)={} sums zero: {zeros}/{}", eta.divisor.degree(), sums.len())))
    }
}

/// Elements of the numerical semigroup `<3, 7, 8>` up to `r`.
fn semigroup_count(r: i64) -> usize {
    (0..=r).filter(|&n| (0..=n / 3).any(|a| (0..=(n - 3 * a) / 7).any(|b| (n - 3 * a - 7 * b) % 8 == 0))).count()
}

impl RiemannRoch {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let inf = ctx.place_at_infinity(1)?;
        let mut matches = 0;
        for r in 0..18i64 {
            let dim = rr_space(ctx, &Divisor::from_place(&inf, r), 1)?.dim();
            let expected = if r <= 6 { semigroup_count(r) } else { (r - 3) as usize };
            matches += usize::from(dim == expected);
        }
        let g = ctx.genus_level(1)?;
        let n = ctx.places_over(Locus::ZOne, 1)?.len();
        let ratio = n as f64 / g as f64;
        let ok = matches == 18 && g == 4 && n == 18 && ratio >= (ctx.ell() - 1) as f64;
        Ok((ok, format!("{matches}/18 dimensions, g={g}, N={n}, N/g={ratio}")))
    }
}

impl Sweep {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let d = ctx.places_over(Locus::ZOne, 1)?;
        let inf = ctx.place_at_infinity(1)?;
        let mut ok = true;
        let mut parts = Vec::new();
        for r in 8..=13i64 {
            let c = goppa_code(ctx, &d, &Divisor::from_place(&inf, r), 1)?;
            let md = min_distance(&c, DEFAULT_BUDGET)?;
            let k = c.dim() as i64;
            let dist = md.d as i64;
            ok &= md.exact && k == r - 3 && dist >= 18 - r && k + dist >= 15;
            parts.push(format!("r={r}:[18,{k},{dist}]"));
        }
        Ok((ok, parts.join(" ")))
    }
}

impl Bounds {
    fn body(_ctx: &TowerCtx) -> Result<(bool, String)> {
        let c49 = crossover(49)?;
        let c25 = crossover(25)?;
        let ds = delta_star(49)?;
        let ds_f = *ds.numer() as f64 / *ds.denom() as f64;
        let (sd, old) = (selfdual_delta(49)?, isodual_old_delta(49)?);
        let ok = c49.exists && !c25.exists && (ds_f - 0.666632).abs() <= 1e-5 && sd > old;
        Ok((
            ok,
            format!(
                "q=49 witness {:?}, q=25 max gap {:.3e}, delta*(49)={ds} ~ {ds_f:.6}, {sd} > {old}",
                c49.witness, c25.max_gap
            ),
        ))
    }
}

impl Sx {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let (_, b, d) = family_divisors(ctx, 1)?;
        let h = b.scale(2);
        let group = automorphism_group(ctx, 1)?;
        let mut ok = true;
        let mut parts = Vec::new();
        for (s, t) in [(1, 1), (2, 1), (2, 2)] {
            let book = sx_codebook(ctx, &h, &d, s, t, DEFAULT_ENUMERATION_BUDGET)?;
            let stats = sx_stats(ctx, &book, Some(&group), DEFAULT_PAIR_BUDGET)?;
            let sum: u128 = book.census().iter().map(|c| c.size).sum();
            ok &= stats.disjoint
                && sum == stats.size_s
                && stats.census_matches_prediction
                && stats.gamma_invariant == Some(true);
            parts.push(format!("(s,t)=({s},{t}): |S|={} |C|={} d={:?}", stats.size_s, stats.size_c, stats.min_dist));
        }
        Ok((ok, parts.join("; ")))
    }
}

impl ClosureN2 {
    fn body(ctx: &TowerCtx) -> Result<(bool, String)> {
        let r = closure_compute(ctx, 2)?;
        let t = r.t;
        let out = verify_closure_ledger(ctx, &[r]);
        let ok =
            ["d", "f", "h"].iter().all(|item| out.iter().filter(|o| o.item == *item).all(|o| o.status == Status::Pass));
        Ok((ok, format!("t(2)={t}")))
    }
}

pub fn acceptance_checks() -> Registry<dyn AcceptanceCheck> {
    let all: [Box<dyn AcceptanceCheck>; 10] = [
        Box::new(ClosureN1),
        Box::new(SelfDual),
        Box::new(Transitive),
        Box::new(Duality),
        Box::new(Residues),
        Box::new(RiemannRoch),
        Box::new(Sweep),
        Box::new(Bounds),
        Box::new(Sx),
        Box::new(ClosureN2),
    ];
    all.into_iter().fold(Registry::new("acceptance check"), Registry::with)
}

/// Runs one check; errors and overruns count as failures.
pub fn run_check(check: &dyn AcceptanceCheck, ctx: &TowerCtx) -> Outcome {
    let start = Instant::now();
    let result = check.run(ctx);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = check.time_limit() {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!(" (took {elapsed:?}, limit {limit:?})"));
        }
    }
    Outcome {
        id: check.id(),
        title: check.title(),
        passed,
        blocking: check.blocking(),
        detail,
        millis: elapsed.as_millis(),
    }
}

/// The full suite. Only `q = 9` carries frozen expectations.
pub fn verify_all(q: u64) -> Result<Vec<Outcome>> {
    if q != 9 {
        return Err(Error::RangeError(format!("the acceptance suite is defined for q = 9, got {q}")));
    }
    let ctx = TowerCtx::new(q)?;
    Ok(acceptance_checks().iter().map(|c| run_check(c, &ctx)).collect())
}

pub fn suite_passed(outcomes: &[Outcome]) -> bool {
    outcomes.iter().all(|o| o.passed || !o.blocking)
}
