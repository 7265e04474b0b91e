//! Item-by-item checks of the closure ledger.

use serde::Serialize;

use super::closure::{ClosureReport, Locus};
use crate::registry::{Named, Registry};
use crate::tower::{Locus as PlaceLocus, TowerCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable at this level; reported, never counted as failure.
    OutOfRange,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub item: &'static str,
    pub n: Option<usize>,
    pub status: Status,
    pub detail: String,
}

impl CheckOutcome {
    fn new(item: &'static str, n: Option<usize>, ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        CheckOutcome { item, n, status, detail }
    }
}

/// One ledger item, evaluated over all supplied reports.
pub trait LedgerCheck: Named + Send + Sync {
    fn check(&self, ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome>;
}

fn per_report(
    item: &'static str,
    reports: &[ClosureReport],
    f: impl Fn(&ClosureReport) -> (bool, String),
) -> Vec<CheckOutcome> {
    reports
        .iter()
        .map(|r| {
            let (ok, detail) = f(r);
            CheckOutcome::new(item, Some(r.n), ok, detail)
        })
        .collect()
}

struct DegreeShape;
struct Splitting;
struct DivisorShape;
struct Different;
struct GenusIdentity;
struct RatioBound;
struct RatioTrend;
struct EtaExponents;
struct LevelOneProxy;

macro_rules! named {
    ($t:ty, $n:literal) => {
        impl Named for $t {
            fn name(&self) -> &'static str {
                $n
            }
        }
    };
}

named!(DegreeShape, "d");
named!(Splitting, "e");
named!(DivisorShape, "f");
named!(Different, "g");
named!(GenusIdentity, "h");
named!(RatioBound, "ratio");
named!(RatioTrend, "j");
named!(EtaExponents, "eta_exponents");
named!(LevelOneProxy, "f1_proxy");

impl LedgerCheck for DegreeShape {
    fn check(&self, ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        let (ell, p) = (ctx.ell() as u128, ctx.p() as u128);
        per_report("d", reports, |r| {
            let ok = r.t >= 0
                && r.degree_over_e0 == (ell - 1) * ell.pow(r.n as u32) * p.pow(r.t.max(0) as u32)
                && r.degree_over_e0 == (ell - 1) * r.degree_over_fw;
            (ok, format!("[E_n:E_0] = {} with t = {}", r.degree_over_e0, r.t))
        })
    }
}

impl LedgerCheck for Splitting {
    fn check(&self, _ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        per_report("e", reports, |r| {
            let ok = r.splits_over_z1 && r.n_lower == r.degree_over_e0;
            (ok, format!("{} rational places over z = 1", r.n_lower))
        })
    }
}

impl LedgerCheck for DivisorShape {
    fn check(&self, ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        let ell = ctx.ell() as u64;
        let p = ctx.p() as u64;
        per_report("f", reports, |r| {
            let n = r.n as u32;
            let ok = r.e0 as u128 * r.deg_a == r.degree_over_fw
                && r.e_inf as u128 * r.deg_b == r.degree_over_fw
                && r.r >= 0
                && r.s >= 0
                && r.e0 == ell.pow(n - 1) * p.pow(r.r.max(0) as u32)
                && r.e_inf == ell.pow(n) * p.pow(r.s.max(0) as u32);
            (ok, format!("e0 = {}, e_inf = {}, deg A = {}, deg B = {}", r.e0, r.e_inf, r.deg_a, r.deg_b))
        })
    }
}

impl LedgerCheck for Different {
    fn check(&self, _ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        per_report("g", reports, |r| {
            let local_ok = r.local.iter().all(|l| match l.locus {
                Locus::A => l.different_over_fw == 2 * (r.e0 - 1),
                Locus::B => l.different_over_fw == 2 * (r.e_inf - 1),
                Locus::D => l.different_over_fw == 0,
            });
            let expected = 2 * (r.e0 as u128 - 1) * r.deg_a + 2 * (r.e_inf as u128 - 1) * r.deg_b;
            let ok = local_ok && r.different_degree == expected;
            (ok, format!("deg Diff = {} (expected {expected})", r.different_degree))
        })
    }
}

impl LedgerCheck for GenusIdentity {
    fn check(&self, _ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        per_report("h", reports, |r| {
            let lhs = r.degree_over_fw as i128 + 1 - (r.deg_a + r.deg_b) as i128;
            let ok = lhs == r.genus && r.genus == r.genus_hurwitz;
            (ok, format!("g = {}, identity gives {lhs}, Hurwitz gives {}", r.genus, r.genus_hurwitz))
        })
    }
}

impl LedgerCheck for RatioBound {
    fn check(&self, ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        let bound = (ctx.ell() - 1) as f64;
        reports
            .iter()
            .map(|r| match r.ratio {
                Some(x) => CheckOutcome::new("ratio", Some(r.n), x >= bound, format!("N/g = {x} against {bound}")),
                None => CheckOutcome {
                    item: "ratio",
                    n: Some(r.n),
                    status: if r.genus == 0 { Status::OutOfRange } else { Status::Fail },
                    detail: "genus zero, ratio undefined".into(),
                },
            })
            .collect()
    }
}

impl LedgerCheck for RatioTrend {
    fn check(&self, ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        let ratios: Vec<f64> = reports.iter().filter_map(|r| r.ratio).collect();
        let target = (ctx.ell() - 1) as f64;
        let ok = ratios.windows(2).all(|w| w[1] <= w[0] + 1e-12) && ratios.iter().all(|&x| x >= target);
        vec![CheckOutcome::new("j", None, ok, format!("ratios {ratios:?} non-increasing towards {target}"))]
    }
}

impl LedgerCheck for EtaExponents {
    fn check(&self, ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        let mut out = Vec::new();
        for r in reports {
            let (a_n, b_n) = eta_exponents(ctx, r);
            let even = a_n % 2 == 0 && b_n % 2 == 0;
            out.push(CheckOutcome::new("eta_even", Some(r.n), even, format!("a_n = {a_n}, b_n = {b_n}")));
            out.push(CheckOutcome {
                item: "eta_positive",
                n: Some(r.n),
                status: match (r.n, a_n > 0 && b_n > 0) {
                    (1, _) => Status::OutOfRange,
                    (_, true) => Status::Pass,
                    (_, false) => Status::Fail,
                },
                detail: format!("a_n = {a_n}, b_n = {b_n}"),
            });
        }
        out
    }
}

impl LedgerCheck for LevelOneProxy {
    fn check(&self, ctx: &TowerCtx, _reports: &[ClosureReport]) -> Vec<CheckOutcome> {
        let (Ok(d), Ok(g)) = (ctx.places_over(PlaceLocus::ZOne, 1), ctx.genus_level(1)) else {
            return vec![];
        };
        let ratio = d.len() as f64 / g as f64;
        let bound = (ctx.ell() - 1) as f64;
        vec![CheckOutcome::new("f1_proxy", Some(1), ratio >= bound, format!("{}/{g} = {ratio}", d.len()))]
    }
}

/// `(a_n, b_n)` with `(eta) = a_n A + b_n B - D` for `eta = dw / (1 - z)`.
pub fn eta_exponents(ctx: &TowerCtx, r: &ClosureReport) -> (i64, i64) {
    (2 * r.e0 as i64 - 2, (ctx.ell() as i64 - 1) * r.e_inf as i64 - 2)
}

/// The default checks, in reporting order.
pub fn ledger_checks() -> Registry<dyn LedgerCheck> {
    let checks: [Box<dyn LedgerCheck>; 9] = [
        Box::new(DegreeShape),
        Box::new(Splitting),
        Box::new(DivisorShape),
        Box::new(Different),
        Box::new(GenusIdentity),
        Box::new(RatioBound),
        Box::new(RatioTrend),
        Box::new(EtaExponents),
        Box::new(LevelOneProxy),
    ];
    checks.into_iter().fold(Registry::new("ledger check"), Registry::with)
}

/// Runs every registered check. Failures are data, not errors.
pub fn verify_closure_ledger(ctx: &TowerCtx, reports: &[ClosureReport]) -> Vec<CheckOutcome> {
    ledger_checks().iter().flat_map(|c| c.check(ctx, reports)).collect()
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::closure_compute;

    #[test]
    fn gf9_level_one_passes() {
        let t = TowerCtx::new(9).unwrap();
        let r = closure_compute(&t, 1).unwrap();
        let out = verify_closure_ledger(&t, &[r]);
        assert!(all_passed(&out), "{out:#?}");
        let ratio = out.iter().find(|o| o.item == "ratio").unwrap();
        assert_eq!(ratio.status, Status::OutOfRange);
        let pos = out.iter().find(|o| o.item == "eta_positive").unwrap();
        assert_eq!(pos.status, Status::OutOfRange);
        let proxy = out.iter().find(|o| o.item == "f1_proxy").unwrap();
        assert_eq!(proxy.status, Status::Pass);
        assert!(proxy.detail.starts_with("18/4"));
    }

    #[test]
    fn tampered_pole_degree_breaks_genus_identity() {
        let t = TowerCtx::new(9).unwrap();
        let mut r = closure_compute(&t, 1).unwrap();
        r.deg_b += 1;
        let out = verify_closure_ledger(&t, &[r]);
        let h = out.iter().find(|o| o.item == "h").unwrap();
        assert_eq!(h.status, Status::Fail);
        assert!(!all_passed(&out));
    }

    #[test]
    fn registry_is_complete() {
        let names = ledger_checks().names();
        for item in ["d", "e", "f", "g", "h", "ratio", "j"] {
            assert!(names.contains(&item));
        }
    }
}
