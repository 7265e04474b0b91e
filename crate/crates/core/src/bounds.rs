//! Asymptotic bound curves for codes over `GF(q)`.
//!
//! Rational formulas are evaluated in `Ratio<i128>`; only the entropy terms
//! of the Gilbert-Varshamov bound and the `log_q(1 + q^-3)` gain use floats.

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::prime_power;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

pub type Rational = Ratio<i128>;

/// `ell` with `q = ell^2`, for prime powers `q`.
pub fn sqrt_q(q: u64) -> Result<u64> {
    let (_, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let ell = (q as f64).sqrt().round() as u64;
    if m % 2 != 0 || ell * ell != q {
        return Err(Error::NonSquareQ(q));
    }
    Ok(ell)
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

/// `q`-ary entropy `H_q(delta)` for `0 < delta < 1`.
fn entropy(q: u64, delta: f64) -> f64 {
    let lq = (q as f64).ln();
    let a = delta * ((q - 1) as f64).ln();
    let b = -delta * delta.ln();
    // (1 - delta) ln(1 - delta) via ln_1p keeps precision for small delta
    let c = -(1.0 - delta) * (-delta).ln_1p();
    (a + b + c) / lq
}

/// Gilbert-Varshamov: `1 - H_q(delta)` on `0 < delta < 1 - 1/q`.
pub fn gv(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    let edge = 1.0 - 1.0 / q as f64;
    if !(delta > 0.0 && delta < edge) {
        return Err(Error::DomainError(format!("gv needs 0 < delta < {edge}, got {delta}")));
    }
    Ok(1.0 - entropy(q, delta))
}

/// `gv` extended by its limits: 1 at 0 and 0 from `1 - 1/q` on.
pub fn gv_clamped(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    if delta <= 0.0 {
        return Ok(1.0);
    }
    if delta >= 1.0 - 1.0 / q as f64 {
        return Ok(0.0);
    }
    gv(q, delta).map(|v| v.clamp(0.0, 1.0))
}

/// `A(q) = sqrt(q) - 1` for square `q`.
pub fn ihara(q: u64) -> Result<Rational> {
    Ok(Rational::from_integer(sqrt_q(q)? as i128 - 1))
}

/// Tsfasman-Vladut-Zink: `max(0, 1 - delta - 1/A(q))`, exact.
pub fn tvz_exact(q: u64, delta: Rational) -> Result<Rational> {
    let v = Rational::one() - delta - ihara(q)?.recip();
    Ok(if v.is_negative() { Rational::zero() } else { v })
}

pub fn tvz(q: u64, delta: f64) -> Result<f64> {
    let a = ihara(q)?.to_f64().expect("small");
    Ok((1.0 - delta - 1.0 / a).max(0.0))
}

/// `log_q(1 + q^-3)`.
pub fn sx_gain(q: u64) -> f64 {
    let q = q as f64;
    (q.powi(-3)).ln_1p() / q.ln()
}

/// Nonlinear improvement: `max(0, 1 - delta - 1/A(q) + log_q(1 + q^-3))`.
pub fn sx_improved(q: u64, delta: f64) -> Result<f64> {
    let a = ihara(q)?.to_f64().expect("small");
    Ok((1.0 - delta - 1.0 / a + sx_gain(q)).max(0.0))
}

/// `delta* = 1 - 2/(ell - 1) - (4q - 2)/((q - 1)(q^3 + 1))`.
pub fn delta_star(q: u64) -> Result<Rational> {
    let ell = sqrt_q(q)? as i128;
    let q = q as i128;
    Ok(Rational::one() - Rational::new(2, ell - 1) - Rational::new(4 * q - 2, (q - 1) * (q * q * q + 1)))
}

/// Relative distance of the self-dual family: `1/2 - 1/(ell - 1)`.
pub fn selfdual_delta(q: u64) -> Result<Rational> {
    let ell = sqrt_q(q)? as i128;
    Ok(Rational::new(1, 2) - Rational::new(1, ell - 1))
}

/// Earlier iso-dual guarantee `1/2 - 1/(ell - 3)`; needs `ell > 3`.
pub fn isodual_old_delta(q: u64) -> Result<Rational> {
    let ell = sqrt_q(q)?;
    if ell <= 3 {
        return Err(Error::EllTooSmall(ell as u32));
    }
    Ok(Rational::new(1, 2) - Rational::new(1, ell as i128 - 3))
}

/// Exact value with its decimal approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub num: i64,
    pub den: i64,
    pub value: f64,
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact {
            num: *r.numer() as i64,
            den: *r.denom() as i64,
            value: r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImprovedSummary {
    pub q: u64,
    pub ell: u64,
    pub sx_gain: f64,
    pub delta_star: Exact,
    /// The interval `(0, delta*)` is empty.
    pub delta_star_empty: bool,
    pub selfdual_delta: Exact,
    pub isodual_old_delta: Option<Exact>,
    pub selfdual_beats_isodual: Option<bool>,
}

pub fn improved_and_selfdual(q: u64) -> Result<ImprovedSummary> {
    let ell = sqrt_q(q)?;
    let ds = delta_star(q)?;
    let sd = selfdual_delta(q)?;
    let old = isodual_old_delta(q).ok();
    let beats = old.map(|o| sd > o);
    if beats == Some(false) {
        return Err(Error::Internal(format!("self-dual delta {sd} does not exceed {}", old.unwrap())));
    }
    Ok(ImprovedSummary {
        q,
        ell,
        sx_gain: sx_gain(q),
        delta_star: ds.into(),
        delta_star_empty: !ds.is_positive(),
        selfdual_delta: sd.into(),
        isodual_old_delta: old.map(Into::into),
        selfdual_beats_isodual: beats,
    })
}

pub const CROSSOVER_STEP: f64 = 1e-4;
pub const CROSSOVER_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossover {
    pub q: u64,
    pub exists: bool,
    /// Smallest grid point with `tvz - gv > tol`.
    pub witness: Option<f64>,
    pub max_gap: f64,
    pub argmax: f64,
}

/// Grid search for `delta` with `tvz(delta) > gv(delta)`.
pub fn crossover(q: u64) -> Result<Crossover> {
    sqrt_q(q)?;
    let edge = 1.0 - 1.0 / q as f64;
    let mut out = Crossover { q, exists: false, witness: None, max_gap: f64::NEG_INFINITY, argmax: 0.0 };
    let mut i = 1u64;
    loop {
        let delta = i as f64 * CROSSOVER_STEP;
        if delta >= edge {
            break;
        }
        let gap = tvz(q, delta)? - gv(q, delta)?;
        if gap > out.max_gap {
            out.max_gap = gap;
            out.argmax = delta;
        }
        if gap > CROSSOVER_TOL && out.witness.is_none() {
            out.witness = Some(delta);
            out.exists = true;
        }
        i += 1;
    }
    Ok(out)
}

/// A rate-versus-relative-distance curve.
pub trait BoundCurve: Named + Send + Sync {
    fn value(&self, q: u64, delta: f64) -> Result<f64>;
    fn domain_note(&self) -> &'static str;
}

struct Gv;
struct Tvz;
struct Sx;
/// Rate 1/2 up to the guaranteed relative distance of a self-dual family.
struct HalfRateStep {
    name: &'static str,
    delta: fn(u64) -> Result<Rational>,
    note: &'static str,
}

impl Named for Gv {
    fn name(&self) -> &'static str {
        "gv"
    }
}
impl Named for Tvz {
    fn name(&self) -> &'static str {
        "tvz"
    }
}
impl Named for Sx {
    fn name(&self) -> &'static str {
        "sx"
    }
}
impl Named for HalfRateStep {
    fn name(&self) -> &'static str {
        self.name
    }
}

impl BoundCurve for Gv {
    fn value(&self, q: u64, delta: f64) -> Result<f64> {
        gv_clamped(q, delta)
    }
    fn domain_note(&self) -> &'static str {
        "0 <= delta <= 1, clamped to 0 from 1 - 1/q"
    }
}

impl BoundCurve for Tvz {
    fn value(&self, q: u64, delta: f64) -> Result<f64> {
        tvz(q, delta)
    }
    fn domain_note(&self) -> &'static str {
        "square q, clamped at 0"
    }
}

impl BoundCurve for Sx {
    fn value(&self, q: u64, delta: f64) -> Result<f64> {
        sx_improved(q, delta)
    }
    fn domain_note(&self) -> &'static str {
        "square q; meaningful on (0, delta*)"
    }
}

impl BoundCurve for HalfRateStep {
    fn value(&self, q: u64, delta: f64) -> Result<f64> {
        let d = (self.delta)(q)?.to_f64().expect("small");
        Ok(if delta <= d { 0.5 } else { 0.0 })
    }
    fn domain_note(&self) -> &'static str {
        self.note
    }
}

pub fn bound_curves() -> Registry<dyn BoundCurve> {
    let all: [Box<dyn BoundCurve>; 5] = [
        Box::new(Gv),
        Box::new(Tvz),
        Box::new(Sx),
        Box::new(HalfRateStep { name: "selfdual", delta: selfdual_delta, note: "square q; rate 1/2 step" }),
        Box::new(HalfRateStep { name: "isodual", delta: isodual_old_delta, note: "square q with ell > 3" }),
    ];
    all.into_iter().fold(Registry::new("bound curve"), Registry::with)
}

/// Grid points `0, step, 2 step, ... <= 1`.
pub fn grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::DomainError(format!("grid step must lie in (0, 1], got {step}")));
    }
    let n = (1.0 / step + 1e-9).floor() as u64;
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

/// `(delta, values...)` rows for the named curves.
pub fn table(q: u64, curves: &[&str], step: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let reg = bound_curves();
    let chosen = curves.iter().map(|c| reg.get(c)).collect::<Result<Vec<_>>>()?;
    grid(step)?
        .into_iter()
        .map(|d| Ok((d, chosen.iter().map(|c| c.value(q, d)).collect::<Result<Vec<_>>>()?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `gv(49, 0.3)` evaluated with 40-digit arithmetic (mpmath).
    const GV_49_03: f64 = 0.544_628_356_507_717_6;

    #[test]
    fn gv_reference_values() {
        assert!((gv(49, 0.3).unwrap() - GV_49_03).abs() < 1e-12);
        assert!((gv_clamped(9, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(gv_clamped(9, 1.0 - 1.0 / 9.0).unwrap(), 0.0);
        assert!(gv(9, 1.0 - 1.0 / 9.0).is_err());
        // entropy is symmetric around 1 - 1/q only in the limit; the edge value is 0
        assert!(gv(9, 1.0 - 1.0 / 9.0 - 1e-9).unwrap().abs() < 1e-6);
    }

    #[test]
    fn tvz_reference_values() {
        assert_eq!(tvz_exact(49, Rational::new(3, 10)).unwrap(), Rational::new(8, 15));
        assert_eq!(tvz_exact(9, Rational::zero()).unwrap(), Rational::new(1, 2));
        assert_eq!(tvz_exact(49, Rational::new(5, 6)).unwrap(), Rational::zero());
        assert!(matches!(tvz(27, 0.1), Err(Error::NonSquareQ(27))));
    }

    #[test]
    fn crossover_threshold() {
        let c49 = crossover(49).unwrap();
        assert!(c49.exists && c49.max_gap > 0.0);
        let c25 = crossover(25).unwrap();
        assert!(!c25.exists);
        let c169 = crossover(169).unwrap();
        assert!(c169.exists && c169.max_gap > c49.max_gap);
    }

    #[test]
    fn improved_quantities() {
        assert_eq!(delta_star(49).unwrap(), Rational::new(2, 3) - Rational::new(194, 5_647_200));
        assert!((delta_star(49).unwrap().to_f64().unwrap() - 0.666632).abs() < 1e-5);
        let s = improved_and_selfdual(49).unwrap();
        assert_eq!((s.selfdual_delta.num, s.selfdual_delta.den), (1, 3));
        assert_eq!(s.isodual_old_delta.map(|e| (e.num, e.den)), Some((1, 4)));
        assert_eq!(s.selfdual_beats_isodual, Some(true));
        let s9 = improved_and_selfdual(9).unwrap();
        assert!(s9.delta_star_empty && s9.isodual_old_delta.is_none());
        assert_eq!(isodual_old_delta(9), Err(Error::EllTooSmall(3)));
    }

    #[test]
    fn table_and_registry() {
        let rows = table(49, &["gv", "tvz", "sx", "selfdual", "isodual"], 0.25).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(table(49, &["lp"], 0.5).is_err());
        assert!(table(9, &["isodual"], 0.5).is_err());
    }

    proptest! {
        #[test]
        fn curves_are_monotone_and_bounded(
            q in prop::sample::select(vec![9u64, 16, 25, 49, 64, 81, 121, 169]),
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            for c in bound_curves().iter() {
                let (Ok(x), Ok(y)) = (c.value(q, lo), c.value(q, hi)) else { continue };
                prop_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
                prop_assert!(y <= x + 1e-15, "{} not monotone", c.name());
            }
            let gap = sx_improved(q, lo).unwrap() - tvz(q, lo).unwrap();
            if tvz(q, lo).unwrap() > 0.0 {
                prop_assert!((gap - sx_gain(q)).abs() < 1e-15);
            }
        }
    }
}
