//! Canonical representatives in `K / {y^p - y : y in K}` for `K = GF(q)(x)`.
//!
//! After partial fractions, a term `c t^(-p k)` is replaced by
//! `c^(1/p) t^(-k)` (they differ by an element `y^p - y`), so every class
//! has a unique representative with pole orders prime to `p`, plus a
//! constant that only matters through its absolute trace.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Elem, Field, RatFunc};
use crate::error::{Error, Result};
use crate::tower::TowerCtx;

/// Pole location of a rational function of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PoleLoc {
    Finite(Elem),
    Infinity,
}

/// Reduced representative: `poles[P][k-1]` is the coefficient of `t_P^(-k)`
/// (`t_P = x - alpha`, or `1/x` at infinity); entries at `k` divisible by
/// `p` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsReduced {
    pub poles: BTreeMap<PoleLoc, Vec<Elem>>,
    pub constant_trace: u32,
}

impl AsReduced {
    pub fn is_zero(&self) -> bool {
        self.poles.is_empty() && self.constant_trace == 0
    }

    /// `(pole, reduced pole order)` pairs.
    pub fn pole_orders(&self) -> Vec<(PoleLoc, usize)> {
        self.poles.iter().map(|(l, c)| (*l, c.len())).collect()
    }

    /// The representative as a rational function, taking the constant to be
    /// the smallest encoding with the recorded trace.
    pub fn to_ratfunc(&self, f: &Field) -> RatFunc {
        let c = f.elements().find(|&a| f.trace_to_prime(a) == self.constant_trace).expect("trace is surjective");
        let mut acc = RatFunc::constant(f, c);
        for (loc, coeffs) in &self.poles {
            for (i, &a) in coeffs.iter().enumerate() {
                let k = i as u64 + 1;
                let term = match loc {
                    PoleLoc::Finite(b) => RatFunc::from_poly(crate::algebra::Poly::linear(f, *b)).pow(k).inv(),
                    PoleLoc::Infinity => RatFunc::x(f).pow(k),
                };
                acc = &acc + &term.scale(a);
            }
        }
        acc
    }
}

/// Reduces `v` modulo `{y^p - y}`. Denominators must split over GF(q).
pub fn reduce_mod_wp(f: &Field, v: &RatFunc) -> Result<AsReduced> {
    let p = f.p() as usize;
    let roots =
        v.den().split_roots().ok_or_else(|| Error::NonRationalPoleField(format!("denominator {:?}", v.den())))?;
    let mut raw: BTreeMap<PoleLoc, Vec<Elem>> = BTreeMap::new();
    for (a, mult) in roots {
        let s = v.expand_at(a, 0);
        raw.insert(PoleLoc::Finite(a), (1..=mult as i64).map(|k| s.coeff(-k)).collect());
    }
    let (poly_part, _) = v.num().div_rem(v.den());
    let constant = poly_part.coeff(0);
    if poly_part.degree().unwrap_or(0) > 0 {
        raw.insert(PoleLoc::Infinity, poly_part.coeffs()[1..].to_vec());
    }
    let mut poles = BTreeMap::new();
    for (loc, mut c) in raw {
        for k in (1..=c.len()).rev() {
            if k % p == 0 && !c[k - 1].is_zero() {
                let r = f.p_root(c[k - 1]);
                c[k / p - 1] = f.add(c[k / p - 1], r);
                c[k - 1] = Elem::ZERO;
            }
        }
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if !c.is_empty() {
            poles.insert(loc, c);
        }
    }
    Ok(AsReduced { poles, constant_trace: f.trace_to_prime(constant) })
}

/// `c` with `c^(ell-1) = -1`; substituting `y = c Y` turns `y^ell + y = u`
/// into `Y^ell - Y = -u/c`.
pub fn normalizer(ctx: &TowerCtx) -> Elem {
    let f = ctx.field();
    let minus_one = f.neg(Elem::ONE);
    f.elements().find(|&c| f.pow(c, ctx.ell() as u64 - 1) == minus_one).expect("-1 is an (ell-1)-th power in GF(ell^2)")
}

/// Class of the equation `y^ell + y = u` in `K / {y^p - y}`: the reduction
/// of `u / c`.
pub fn artin_schreier_reduce(ctx: &TowerCtx, u: &RatFunc) -> Result<AsReduced> {
    let f = ctx.field();
    reduce_mod_wp(f, &u.scale(f.inv(normalizer(ctx))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use proptest::prelude::*;

    fn wp_ell(v: &RatFunc, ell: u64) -> RatFunc {
        &v.pow(ell) + v
    }

    #[test]
    fn recursion_rhs_has_simple_poles() {
        let t = TowerCtx::new(9).unwrap();
        let r = artin_schreier_reduce(&t, t.u()).unwrap();
        let orders = r.pole_orders();
        let i = t.field().elem(3).unwrap();
        let minus_i = t.field().elem(6).unwrap();
        assert_eq!(orders, vec![(PoleLoc::Finite(i), 1), (PoleLoc::Finite(minus_i), 1), (PoleLoc::Infinity, 1)]);
    }

    #[test]
    fn frobenius_terms_fold_down() {
        let f = crate::algebra::FieldCtx::with_order(9).unwrap();
        let x = RatFunc::x(&f);
        // x^3 = (x^3 - x) + x
        let r = reduce_mod_wp(&f, &x.pow(3)).unwrap();
        assert_eq!(r, reduce_mod_wp(&f, &x).unwrap());
        let back = r.to_ratfunc(&f);
        assert_eq!(reduce_mod_wp(&f, &back).unwrap(), r);
    }

    #[test]
    fn non_split_denominator_is_rejected() {
        let f = crate::algebra::FieldCtx::with_order(9).unwrap();
        let x = Poly::x(&f);
        // x^2 + x + 2 ... pick an irreducible quadratic over GF(9) by search
        let irr = f.elements().map(|c| &x.pow(2) - &Poly::constant(&f, c)).find(|p| p.roots().is_empty()).unwrap();
        let v = RatFunc::new(Poly::one(&f), irr);
        assert!(matches!(reduce_mod_wp(&f, &v), Err(Error::NonRationalPoleField(_))));
    }

    proptest! {
        #[test]
        fn well_defined_and_idempotent(num in prop::collection::vec(0u32..9, 1..5), a in 0u32..9, b in 0u32..9, vnum in prop::collection::vec(0u32..9, 1..4), vr in 0u32..9) {
            let t = TowerCtx::new(9).unwrap();
            let f = t.field();
            let lin = |r: u32| Poly::linear(f, Elem(r));
            let u = RatFunc::new(Poly::new(f, num.iter().map(|&c| Elem(c)).collect()), &lin(a).pow(2) * &lin(b));
            let v = RatFunc::new(Poly::new(f, vnum.iter().map(|&c| Elem(c)).collect()), lin(vr));
            let r = artin_schreier_reduce(&t, &u).unwrap();
            prop_assert_eq!(&artin_schreier_reduce(&t, &(&u + &wp_ell(&v, 3))).unwrap(), &r);
            prop_assert!(artin_schreier_reduce(&t, &wp_ell(&v, 3)).unwrap().is_zero());
            let rep = r.to_ratfunc(f);
            prop_assert_eq!(reduce_mod_wp(f, &rep).unwrap(), r);
        }
    }
}
