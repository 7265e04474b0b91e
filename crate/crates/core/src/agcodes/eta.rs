//! The differential `eta = dw / (1 - z)` on `E_1 = F0` and the duality it
//! induces on the family codes.

use serde::Serialize;

use super::code::{goppa_code, FamilyParams, LinearCode};
use crate::algebra::{Elem, RatFunc};
use crate::error::{Error, Result};
use crate::galois::{closure_compute, eta_exponents};
use crate::tower::{Divisor, Locus, Place, TowerCtx};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaForm {
    pub n: usize,
    pub a_n: i64,
    pub b_n: i64,
    /// `(eta)` computed directly from `(1 - z)` and `(dw)`.
    pub divisor: Divisor,
    pub place_order: Vec<Place>,
    #[serde(serialize_with = "ser_elems")]
    pub residues: Vec<Elem>,
}

fn ser_elems<S: serde::Serializer>(v: &[Elem], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_int()))
}

/// Tower level carrying `E_n` explicitly.
fn explicit_level(n: usize) -> Result<usize> {
    match n {
        0 => Err(Error::RangeError("family level must be at least 1".into())),
        1 => Ok(0),
        _ => Err(Error::UnsupportedLevel { level: n, max: 1 }),
    }
}

/// `A`, `B` and the ordered places of `D` on `E_n`.
pub fn family_divisors(ctx: &TowerCtx, n: usize) -> Result<(Divisor, Divisor, Vec<Place>)> {
    let level = explicit_level(n)?;
    let a = Divisor::sum_of(&ctx.places_over(Locus::WZero, level)?, 1);
    let b = Divisor::sum_of(&ctx.places_over(Locus::WInf, level)?, 1);
    Ok((a, b, ctx.places_over(Locus::ZOne, level)?))
}

pub fn eta_form(ctx: &TowerCtx, n: usize) -> Result<EtaForm> {
    let level = explicit_level(n)?;
    let f = ctx.field();
    let report = closure_compute(ctx, n)?;
    let (a_n, b_n) = eta_exponents(ctx, &report);
    let (a, b, d) = family_divisors(ctx, n)?;
    let expected = a.scale(a_n).add(&b.scale(b_n)).sub(&Divisor::sum_of(&d, 1));

    // On F0 = GF(q)(x0): (eta) = -(1 - z) + (dx0) * (dw/dx0), and x0 has a
    // double pole of its differential at infinity only.
    let dw = ctx.w_func().derivative();
    let omz = &RatFunc::one(f) - &ctx.z_func();
    let one_minus_z = ctx.base(level, omz.clone());
    let inf = ctx.place_at_infinity(level)?;
    let divisor = ctx
        .principal_divisor(&ctx.base(level, dw.clone()))?
        .sub(&ctx.principal_divisor(&one_minus_z)?)
        .sub(&Divisor::from_place(&inf, 2));
    if divisor != expected {
        return Err(Error::Internal(format!("(eta) = {divisor}, formula gives {expected}")));
    }
    let genus = ctx.genus_level(level)? as i64;
    if divisor.degree() != 2 * genus - 2 {
        return Err(Error::Internal(format!("deg (eta) = {} but g = {genus}", divisor.degree())));
    }
    let ratio = dw.div(&omz);
    let ell = ctx.ell() as u64;
    let mut residues = Vec::with_capacity(d.len());
    for p in &d {
        let alpha = p.x0().expect("finite place");
        let r = ratio.expand_at(alpha, 0).coeff(-1);
        if r.is_zero() || f.pow(r, ell - 1) != Elem::ONE {
            return Err(Error::Internal(format!("residue {r} at {p} is not in GF(ell)^*")));
        }
        residues.push(r);
    }
    Ok(EtaForm { n, a_n, b_n, divisor, place_order: d, residues })
}

/// Dual of `c = C_L(D, G)` as `res * C_L(D, D - G + (eta))`, checked against
/// the nullspace of `c`'s generator.
pub fn dual_via_eta(ctx: &TowerCtx, c: &LinearCode, eta: &EtaForm) -> Result<LinearCode> {
    let f = ctx.field();
    for p in c.place_order() {
        let v = eta.divisor.coeff(p);
        if v != -1 {
            return Err(Error::EtaValuationMismatch { place: p.to_string(), found: v });
        }
    }
    let res: Vec<Elem> = c
        .place_order()
        .iter()
        .map(|p| {
            let i = eta.place_order.iter().position(|q| q == p).expect("valuation -1 implies a D place");
            eta.residues[i]
        })
        .collect();
    let d = Divisor::sum_of(c.place_order(), 1);
    let h = d.sub(c.divisor()).add(&eta.divisor);
    let scaling: Vec<Elem> = match c.scaling() {
        None => res,
        Some(s) => res.iter().zip(s).map(|(&r, &a)| f.div(r, a)).collect(),
    };
    let dual = goppa_code(ctx, c.place_order(), &h, c.level())?.with_scaling(Some(scaling))?;
    let oracle = c.parity_check();
    if !dual.generator().same_row_space(&oracle) {
        return Err(Error::DualityCheckFailed(format!(
            "row space of res * C_L(D, {h}) differs from the nullspace of C_L(D, {})",
            c.divisor()
        )));
    }
    Ok(dual)
}

/// `C^(n)_{a,b} = C_L(D, aA + bB)`, with `(C_{a,b})^perp = res * C_{a_n - a, b_n - b}` verified.
pub fn family_code(ctx: &TowerCtx, n: usize, a: i64, b: i64) -> Result<LinearCode> {
    let eta = eta_form(ctx, n)?;
    family_code_with(ctx, &eta, a, b)
}

pub fn family_code_with(ctx: &TowerCtx, eta: &EtaForm, a: i64, b: i64) -> Result<LinearCode> {
    let n = eta.n;
    if !(0..=eta.a_n).contains(&a) || !(0..=eta.b_n).contains(&b) {
        return Err(Error::RangeError(format!("(a, b) = ({a}, {b}) outside [0, {}] x [0, {}]", eta.a_n, eta.b_n)));
    }
    let level = explicit_level(n)?;
    let (da, db, d) = family_divisors(ctx, n)?;
    let mut code = goppa_code(ctx, &d, &da.scale(a).add(&db.scale(b)), level)?;
    code.family = Some(FamilyParams { n, a, b });
    let dual = dual_via_eta(ctx, &code, eta)?;
    let complement = goppa_code(ctx, &d, &da.scale(eta.a_n - a).add(&db.scale(eta.b_n - b)), level)?
        .with_scaling(Some(eta.residues.clone()))?;
    if !dual.same_code(&complement) {
        return Err(Error::DualityCheckFailed(format!(
            "dual of C_({a},{b}) is not res * C_({},{})",
            eta.a_n - a,
            eta.b_n - b
        )));
    }
    Ok(code)
}

/// Rescales a family code by square roots of the residues, giving a
/// self-orthogonal code (self-dual at the midpoint `(a_n/2, b_n/2)`).
pub fn selfdual_scale(ctx: &TowerCtx, c: &LinearCode, eta: &EtaForm) -> Result<LinearCode> {
    let f = ctx.field();
    let Some(fam) = c.family else {
        return Err(Error::RangeError("self-dual scaling needs a family code".into()));
    };
    if 2 * fam.a > eta.a_n || 2 * fam.b > eta.b_n {
        return Err(Error::RangeError(format!(
            "(a, b) = ({}, {}) exceeds ({}/2, {}/2)",
            fam.a, fam.b, eta.a_n, eta.b_n
        )));
    }
    let v = eta.residues.iter().map(|&r| f.sqrt(r)).collect::<Result<Vec<_>>>()?;
    let scaled = c.with_scaling(Some(v))?;
    if !scaled.is_self_orthogonal() {
        return Err(Error::SelfDualityCheckFailed("G * G^T is not zero".into()));
    }
    if 2 * fam.a == eta.a_n && 2 * fam.b == eta.b_n && 2 * scaled.dim() != scaled.len() {
        return Err(Error::SelfDualityCheckFailed(format!("2k = {} but N = {}", 2 * scaled.dim(), scaled.len())));
    }
    Ok(scaled)
}

/// `sum_j res_j f(P_j) g(P_j)` for all pairs of basis functions of `L(G)`.
pub fn residue_sums(ctx: &TowerCtx, eta: &EtaForm, g: &Divisor) -> Result<Vec<Elem>> {
    let f = ctx.field();
    let space = crate::rrspace::rr_space(ctx, g, explicit_level(eta.n)?)?;
    let m = space.evaluation_matrix(ctx, &eta.place_order)?;
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.nrows() {
            let s = (0..m.ncols())
                .fold(Elem::ZERO, |acc, c| f.add(acc, f.mul(eta.residues[c], f.mul(m.get(i, c), m.get(j, c)))));
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[Elem]) -> Vec<u32> {
        v.iter().map(|e| e.to_int()).collect()
    }

    #[test]
    fn eta_over_gf9() {
        let t = TowerCtx::new(9).unwrap();
        let eta = eta_form(&t, 1).unwrap();
        assert_eq!((eta.a_n, eta.b_n), (0, 4));
        assert_eq!(eta.divisor.degree(), -2);
        assert_eq!(ints(&eta.residues), vec![1, 1, 1, 2, 2, 2]);
        let f = t.field();
        let total = eta.residues.iter().fold(Elem::ZERO, |a, &r| f.add(a, r));
        assert!(total.is_zero());
    }

    #[test]
    fn residue_oracle_from_derivative() {
        // res at a simple zero alpha of 1 - z is 1 / (-z'(alpha))
        for q in [9u64, 25] {
            let t = TowerCtx::new(q).unwrap();
            let f = t.field();
            let eta = eta_form(&t, 1).unwrap();
            let z = t.z_func();
            let dz = z.num().derivative();
            for (p, &r) in eta.place_order.iter().zip(&eta.residues) {
                let a = p.x0().unwrap();
                assert_eq!(r, f.inv(f.neg(dz.eval(a))));
            }
        }
    }

    #[test]
    fn family_duality_and_self_dual_midpoint() {
        let t = TowerCtx::new(9).unwrap();
        let eta = eta_form(&t, 1).unwrap();
        for b in 0..=4 {
            let c = family_code_with(&t, &eta, 0, b).unwrap();
            assert_eq!(c.dim(), (b + 1) as usize);
            let dual = dual_via_eta(&t, &c, &eta).unwrap();
            assert_eq!(c.dim() + dual.dim(), 6);
        }
        let c = family_code_with(&t, &eta, 0, 2).unwrap();
        let s = selfdual_scale(&t, &c, &eta).unwrap();
        assert!(s.is_self_dual());
        assert_eq!(ints(s.scaling().unwrap()), vec![1, 1, 1, 3, 3, 3]);
        let half = selfdual_scale(&t, &family_code_with(&t, &eta, 0, 1).unwrap(), &eta).unwrap();
        assert!(half.is_self_orthogonal() && !half.is_self_dual());
        let over = family_code_with(&t, &eta, 0, 3).unwrap();
        assert!(matches!(selfdual_scale(&t, &over, &eta), Err(Error::RangeError(_))));
        assert!(matches!(family_code_with(&t, &eta, 1, 0), Err(Error::RangeError(_))));
    }

    #[test]
    fn residue_theorem_on_l2b() {
        let t = TowerCtx::new(9).unwrap();
        let eta = eta_form(&t, 1).unwrap();
        let (_, b, _) = family_divisors(&t, 1).unwrap();
        let sums = residue_sums(&t, &eta, &b.scale(2)).unwrap();
        assert_eq!(sums.len(), 9);
        assert!(sums.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn eta_families_over_larger_fields() {
        for q in [16u64, 25] {
            let t = TowerCtx::new(q).unwrap();
            let eta = eta_form(&t, 1).unwrap();
            assert_eq!(eta.a_n, 0);
            assert_eq!(eta.b_n, (t.ell() as i64 - 1) * t.ell() as i64 - 2);
            let mid = family_code_with(&t, &eta, 0, eta.b_n / 2).unwrap();
            assert!(selfdual_scale(&t, &mid, &eta).unwrap().is_self_dual());
        }
    }

    #[test]
    fn levels_without_explicit_model() {
        let t = TowerCtx::new(9).unwrap();
        assert!(matches!(eta_form(&t, 2), Err(Error::UnsupportedLevel { .. })));
        assert!(matches!(eta_form(&t, 0), Err(Error::RangeError(_))));
    }
}
