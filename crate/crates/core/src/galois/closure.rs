//! Galois closures `E_1`, `E_2` as elementary abelian compositums.
//!
//! Over a rational base `K`, the compositum of the extensions
//! `y^ell + y = v_i` corresponds to the `GF(p)`-span `U` of
//! `{lambda * v_i / c}` (lambda over a `GF(p)`-basis of `GF(ell)`) in
//! `K / {y^p - y}`, and has degree `|U|`. Local invariants at a place `P` of
//! `K` come from the reduced principal parts at `P`: the ramification index
//! is `p^rank` of their projection, the residue degree is read off the trace
//! of values of the unramified part, and the discriminant exponent is the
//! sum of conductors `m + 1` over the span.

use std::collections::BTreeMap;

use serde::Serialize;

use super::artin_schreier::{normalizer, reduce_mod_wp, AsReduced, PoleLoc};
use super::automorphism::automorphism_group;
use crate::algebra::{Elem, Field, FieldCtx, Matrix, RatFunc};
use crate::error::{Error, Result};
use crate::tower::TowerCtx;

/// Which divisor of `E_n` a place of the base field lies under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Locus {
    /// Zeros of `w`.
    A,
    /// Poles of `w`.
    B,
    /// `z = 1`.
    D,
}

/// Splitting data of `E_n / K` at one rational place of `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalData {
    pub locus: Locus,
    /// Coordinate of the place in `K` (`None` at infinity).
    pub point: Option<u32>,
    pub e: u64,
    pub f: u64,
    pub places_above: u64,
    pub disc_exponent: u64,
    pub different_exponent: u64,
    /// Different exponent over `F_q(w)`, after composing with `K / F_q(w)`.
    pub different_over_fw: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub n: usize,
    pub q: u32,
    pub ell: u32,
    pub p: u32,
    /// `GF(p)`-dimension of the span `U`; `[E_n : E_(n-1)] = p^dim_u`.
    pub dim_u: u32,
    pub t: i64,
    pub degree_over_e0: u128,
    pub degree_over_fw: u128,
    pub e0: u64,
    pub e_inf: u64,
    pub r: i64,
    pub s: i64,
    pub deg_a: u128,
    pub deg_b: u128,
    /// `[E_n : F_q(w)] + 1 - (deg A + deg B)`.
    pub genus: i128,
    /// Hurwitz over the rational base field.
    pub genus_hurwitz: i128,
    /// Degree of the different of `E_n / F_q(w)`.
    pub different_degree: u128,
    pub splits_over_z1: bool,
    pub n_lower: u128,
    pub ratio: Option<f64>,
    pub local: Vec<LocalData>,
}

/// Coordinates over `GF(p)` of reduced classes in a common layout.
struct Layout {
    /// `(pole, max order)`; orders divisible by `p` are skipped.
    poles: Vec<(PoleLoc, usize)>,
    p: usize,
    m: usize,
}

impl Layout {
    fn new(classes: &[AsReduced], p: usize, m: usize) -> Self {
        let mut max: BTreeMap<PoleLoc, usize> = BTreeMap::new();
        for c in classes {
            for (loc, coeffs) in &c.poles {
                let e = max.entry(*loc).or_insert(0);
                *e = (*e).max(coeffs.len());
            }
        }
        Layout { poles: max.into_iter().collect(), p, m }
    }

    fn orders(&self, max: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=max).filter(move |k| k % self.p != 0)
    }

    /// `(pole, order, digit)` for every coordinate except the final
    /// constant-trace one.
    fn coords(&self) -> Vec<(PoleLoc, usize, usize)> {
        let mut out = Vec::new();
        for &(loc, max) in &self.poles {
            for k in self.orders(max) {
                for d in 0..self.m {
                    out.push((loc, k, d));
                }
            }
        }
        out
    }

    fn len(&self) -> usize {
        self.coords().len() + 1
    }

    fn vector(&self, f: &Field, c: &AsReduced) -> Vec<Elem> {
        let mut v = Vec::with_capacity(self.len());
        for &(loc, max) in &self.poles {
            let coeffs = c.poles.get(&loc);
            for k in self.orders(max) {
                let a = coeffs.and_then(|cs| cs.get(k - 1)).copied().unwrap_or(Elem::ZERO);
                let mut digits = f.digits(a);
                digits.resize(self.m, 0);
                v.extend(digits.into_iter().map(Elem));
            }
        }
        v.push(Elem(c.constant_trace));
        v
    }
}

/// Base field data for one closure step.
struct Base {
    /// `[K : F_q(w)]`
    degree: u128,
    /// `e` and different exponent of the infinite place of `K` over `F_q(w)`.
    e_inf: u64,
    d_inf: u64,
    a_points: Vec<Elem>,
    d_points: Vec<Elem>,
    generators: Vec<RatFunc>,
}

fn base_for(ctx: &TowerCtx, n: usize) -> Result<Base> {
    let f = ctx.field();
    let ell = ctx.ell();
    let sub: Vec<Elem> = f.subfield().expect("square field").into_iter().filter(|e| !e.is_zero()).collect();
    match n {
        1 => {
            // K = F_q(w); the conjugates of w over F_q(z) are zeta * w
            let w = RatFunc::x(f);
            Ok(Base {
                degree: 1,
                e_inf: 1,
                d_inf: 0,
                a_points: vec![Elem::ZERO],
                d_points: f.elements().filter(|&a| f.pow(a, ell as u64 - 1) == Elem::ONE).collect(),
                generators: sub.iter().map(|&zeta| w.scale(zeta)).collect(),
            })
        }
        2 => {
            // K = F0 = E_1; the conjugates of F1 are y^ell + y = sigma(u)
            let group = automorphism_group(ctx, 1)?;
            Ok(Base {
                degree: ell as u128,
                e_inf: ell as u64,
                d_inf: 2 * (ell as u64 - 1),
                a_points: ctx.kernel().to_vec(),
                d_points: f.elements().filter(|&a| ctx.z_of(a) == Elem::ONE).collect(),
                generators: group.iter().map(|s| s.apply_func(ctx.u())).collect(),
            })
        }
        0 => Err(Error::RangeError("closure level must be at least 1".into())),
        _ => Err(Error::UnsupportedLevel { level: n, max: 2 }),
    }
}

/// Basis rows of the span of `rows` over the prime field.
fn span_basis(fp: &Field, rows: Vec<Vec<Elem>>, len: usize) -> Matrix {
    let mut m = Matrix::from_rows(fp, rows, len);
    m.rref();
    m
}

fn columns(m: &Matrix, cols: &[usize]) -> Matrix {
    let rows = (0..m.nrows()).map(|r| cols.iter().map(|&c| m.get(r, c)).collect()).collect();
    Matrix::from_rows(m.field(), rows, cols.len())
}

/// Basis of `{x in rowspace(b) : x projected onto cols = 0}`.
fn kernel_of_projection(b: &Matrix, cols: &[usize]) -> Matrix {
    let fp = b.field().clone();
    if b.nrows() == 0 {
        return b.clone();
    }
    let proj = columns(b, cols);
    // y * proj = 0  <=>  proj^T y^T = 0
    let ys = if cols.is_empty() { Matrix::identity(&fp, b.nrows()).to_rows() } else { proj.transpose().nullspace() };
    let rows: Vec<Vec<Elem>> = ys.iter().map(|y| b.left_mul_vec(y)).collect();
    Matrix::from_rows(&fp, rows, b.ncols())
}

/// The Galois closure report for `E_n`, `n` in `{1, 2}`.
pub fn closure_compute(ctx: &TowerCtx, n: usize) -> Result<ClosureReport> {
    let base = base_for(ctx, n)?;
    let f = ctx.field();
    let p = f.p() as usize;
    let m = f.m() as usize;
    let fp = FieldCtx::new(f.p(), 1)?;
    let c_inv = f.inv(normalizer(ctx));
    // GF(p)-basis of GF(ell): the elements p^i of the subfield's power basis
    let sub: Vec<Elem> = f.subfield().expect("square field");
    let lambdas = prime_basis(f, &sub);
    let mut classes = Vec::new();
    for g in &base.generators {
        for &lam in &lambdas {
            classes.push(reduce_mod_wp(f, &g.scale(f.mul(lam, c_inv)))?);
        }
    }
    let layout = Layout::new(&classes, p, m);
    let rows: Vec<Vec<Elem>> = classes.iter().map(|c| layout.vector(f, c)).collect();
    let u = span_basis(&fp, rows, layout.len());
    let dim_u = u.nrows() as u32;
    let size_u = (p as u128).pow(dim_u);
    let coords = layout.coords();

    let mut local = Vec::new();
    let mut places: Vec<(Locus, Option<Elem>)> = base.a_points.iter().map(|&a| (Locus::A, Some(a))).collect();
    places.push((Locus::B, None));
    places.extend(base.d_points.iter().map(|&a| (Locus::D, Some(a))));
    for (locus, point) in places {
        let loc = point.map_or(PoleLoc::Infinity, PoleLoc::Finite);
        let at_p = |min_order: usize| -> Vec<usize> {
            coords.iter().enumerate().filter(|(_, (l, k, _))| *l == loc && *k > min_order).map(|(i, _)| i).collect()
        };
        let principal = at_p(0);
        let rank = if principal.is_empty() { 0 } else { columns(&u, &principal).rank() };
        let e = (p as u64).pow(rank as u32);
        // residue degree from the trace of values of the unramified part
        let nr = kernel_of_projection(&u, &principal);
        let functional = value_trace_functional(f, &layout, &coords, point);
        let fdeg = if nr.nrows() == 0 {
            1
        } else {
            let vals = nr.mul_vec(&functional);
            if vals.iter().any(|v| !v.is_zero()) {
                p as u64
            } else {
                1
            }
        };
        // discriminant exponent: sum over U of conductors
        let max_order = layout.poles.iter().find(|(l, _)| *l == loc).map_or(0, |(_, k)| *k);
        let mut disc: u128 = 0;
        let mut prev = (p as u128).pow(nr.nrows() as u32);
        for mo in 1..=max_order {
            let le = (p as u128).pow(kernel_of_projection(&u, &at_p(mo)).nrows() as u32);
            disc += (mo as u128 + 1) * (le - prev);
            prev = le;
        }
        let e128 = e as u128;
        if !(disc * e128).is_multiple_of(size_u) {
            return Err(Error::Internal(format!("non-integral different exponent at {point:?}")));
        }
        let d = (disc * e128 / size_u) as u64;
        let (base_e, base_d) = if point.is_none() { (base.e_inf, base.d_inf) } else { (1, 0) };
        local.push(LocalData {
            locus,
            point: point.map(|a| a.to_int()),
            e,
            f: fdeg,
            places_above: (size_u / (e128 * fdeg as u128)) as u64,
            disc_exponent: disc as u64,
            different_exponent: d,
            different_over_fw: d + e * base_d,
        });
        let _ = base_e;
    }

    let ell = ctx.ell() as u128;
    let a = ctx.a() as i64;
    let a_data: Vec<&LocalData> = local.iter().filter(|l| l.locus == Locus::A).collect();
    let b_data = local.iter().find(|l| l.locus == Locus::B).expect("infinite place");
    let e_a = a_data[0].e;
    if a_data.iter().any(|l| l.e != e_a) {
        return Err(Error::Internal("zeros of w have unequal ramification".into()));
    }
    let e0 = e_a;
    let e_inf = base.e_inf * b_data.e;
    let deg_a: u128 = a_data.iter().map(|l| size_u / l.e as u128).sum();
    let deg_b = size_u / b_data.e as u128;
    let degree_over_fw = base.degree * size_u;
    let degree_over_e0 = (ell - 1) * degree_over_fw;
    let t = dim_u as i64 - a;
    let genus = degree_over_fw as i128 + 1 - (deg_a + deg_b) as i128;
    // Hurwitz over K (genus 0): 2g - 2 = -2|U| + sum disc * deg
    let disc_total: i128 = local.iter().map(|l| l.disc_exponent as i128).sum();
    let genus_hurwitz = (-2 * size_u as i128 + disc_total + 2) / 2;
    let different_degree: u128 = local
        .iter()
        .filter(|l| l.locus != Locus::D)
        .map(|l| (size_u / l.e as u128) * l.different_over_fw as u128)
        .sum();
    let d_data: Vec<&LocalData> = local.iter().filter(|l| l.locus == Locus::D).collect();
    let splits_over_z1 = d_data.iter().all(|l| l.e == 1 && l.f == 1);
    let n_lower = if splits_over_z1 { d_data.len() as u128 * size_u } else { 0 };
    let log_p = |x: u64| -> i64 { (x as f64).log(p as f64).round() as i64 };
    Ok(ClosureReport {
        n,
        q: ctx.q(),
        ell: ctx.ell(),
        p: ctx.p(),
        dim_u,
        t,
        degree_over_e0,
        degree_over_fw,
        e0,
        e_inf,
        r: log_p(e0) - a * (n as i64 - 1),
        s: log_p(e_inf) - a * n as i64,
        deg_a,
        deg_b,
        genus,
        genus_hurwitz,
        different_degree,
        splits_over_z1,
        n_lower,
        ratio: (genus > 0).then(|| n_lower as f64 / genus as f64),
        local,
    })
}

/// `GF(p)`-basis of the subfield, taken greedily in encoding order.
fn prime_basis(f: &Field, sub: &[Elem]) -> Vec<Elem> {
    let fp = FieldCtx::new(f.p(), 1).expect("prime");
    let m = f.m() as usize;
    let mut chosen: Vec<Elem> = Vec::new();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for &s in sub.iter().filter(|s| !s.is_zero()) {
        let mut d = f.digits(s);
        d.resize(m, 0);
        let mut trial = rows.clone();
        trial.push(d.into_iter().map(Elem).collect());
        if Matrix::from_rows(&fp, trial.clone(), m).rank() == trial.len() {
            rows = trial;
            chosen.push(s);
        }
    }
    chosen
}

/// Functional on layout coordinates giving `Tr(v(P))` for classes regular
/// at `P`.
fn value_trace_functional(
    f: &Field,
    layout: &Layout,
    coords: &[(PoleLoc, usize, usize)],
    point: Option<Elem>,
) -> Vec<Elem> {
    let p = f.p();
    let mut out = Vec::with_capacity(layout.len());
    for &(loc, k, d) in coords {
        let mut unit = vec![0u32; f.m() as usize];
        unit[d] = 1;
        let basis = f.from_digits(&unit);
        let weight = match (loc, point) {
            (PoleLoc::Finite(b), Some(a)) if a != b => f.pow(f.inv(f.sub(a, b)), k as u64),
            (PoleLoc::Infinity, Some(a)) => f.pow(a, k as u64),
            // a pole at P itself never reaches here with a nonzero entry;
            // principal parts at finite poles vanish at infinity
            _ => Elem::ZERO,
        };
        out.push(Elem(f.trace_to_prime(f.mul(basis, weight)) % p));
    }
    out.push(Elem::ONE);
    out
}

/// `[E_n : E_0]` shape and related quantities with `t(n)` left symbolic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicLedger {
    pub n: usize,
    pub degree_over_e0: String,
    pub e0: String,
    pub e_inf: String,
    pub genus: String,
    pub n_lower: String,
    pub ratio_lower_bound: u32,
}

pub fn symbolic_ledger(ctx: &TowerCtx, n: usize) -> SymbolicLedger {
    let (l, p) = (ctx.ell(), ctx.p());
    SymbolicLedger {
        n,
        degree_over_e0: format!("{} * {l}^{n} * {p}^t({n})", l - 1),
        e0: format!("{l}^{} * {p}^r({n})", n.saturating_sub(1)),
        e_inf: format!("{l}^{n} * {p}^s({n})"),
        genus: format!("[E_{n} : F_q(w)] + 1 - (deg A + deg B)"),
        n_lower: format!("{} * {l}^{n} * {p}^t({n})", l - 1),
        ratio_lower_bound: l - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_closure_over_gf9() {
        let t = TowerCtx::new(9).unwrap();
        let r = closure_compute(&t, 1).unwrap();
        assert_eq!(r.t, 0);
        assert_eq!(r.degree_over_e0, 6);
        assert_eq!((r.deg_a, r.deg_b), (3, 1));
        assert_eq!((r.e0, r.e_inf), (1, 3));
        assert_eq!(r.genus, 0);
        assert_eq!(r.genus_hurwitz, 0);
        assert!(r.splits_over_z1);
        assert_eq!(r.n_lower, 6);
        assert_eq!(r.ratio, None);
    }

    #[test]
    fn first_closure_over_gf25_and_gf16() {
        let r = closure_compute(&TowerCtx::new(25).unwrap(), 1).unwrap();
        assert_eq!((r.t, r.degree_over_e0, r.genus), (0, 20, 0));
        let r = closure_compute(&TowerCtx::new(16).unwrap(), 1).unwrap();
        assert_eq!((r.t, r.degree_over_e0, r.genus), (0, 12, 0));
    }

    #[test]
    fn second_closure_shape() {
        for q in [4u64, 9, 16, 25] {
            let t = TowerCtx::new(q).unwrap();
            let r = closure_compute(&t, 2).unwrap();
            let ell = t.ell() as u128;
            assert!(r.t >= 0, "q = {q}");
            assert_eq!(r.degree_over_e0, (ell - 1) * ell * ell * (t.p() as u128).pow(r.t as u32));
            assert_eq!(r.e0 as u128 * r.deg_a, r.degree_over_fw);
            assert_eq!(r.e_inf as u128 * r.deg_b, r.degree_over_fw);
            assert_eq!(r.genus, r.genus_hurwitz, "q = {q}");
            assert!(r.splits_over_z1);
            for l in r.local.iter().filter(|l| l.locus != Locus::D) {
                assert_eq!(l.different_exponent, 2 * (l.e - 1));
            }
            if r.genus > 0 {
                assert!(r.ratio.unwrap() >= (ell - 1) as f64);
            }
        }
    }

    #[test]
    fn closure_levels_outside_range() {
        let t = TowerCtx::new(9).unwrap();
        assert!(matches!(closure_compute(&t, 3), Err(Error::UnsupportedLevel { .. })));
        assert!(matches!(closure_compute(&t, 0), Err(Error::RangeError(_))));
    }

    #[test]
    fn second_closure_contains_f1() {
        // E_2 over E_1 has degree at least ell, and F1 alone has genus (ell-1)^2
        let t = TowerCtx::new(9).unwrap();
        let r = closure_compute(&t, 2).unwrap();
        assert!(r.dim_u >= t.a());
        assert!(r.genus >= t.genus_level(1).unwrap() as i128);
    }
}
