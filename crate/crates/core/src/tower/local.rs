//! Local data at rational places: valuations, values, Laurent expansions.
//!
//! Unramified places of `F1` use the shifted coordinate `t = x0 - alpha` as
//! uniformizer and expand `x1` by Hensel lifting. At the totally ramified
//! places (over `x0 = infinity` and the roots of `h`) `x1` has a simple pole
//! and `x0`-shifts have valuation `ell`, so `v(sum c_j x1^j)` is the minimum
//! of `ell * v(c_j) - j`: these are distinct modulo `ell`.

use crate::algebra::{Elem, RatFunc, Series};
use crate::error::{Error, Result};

use super::{Place, PlaceKind, TowerCtx, TowerFunc};

const INITIAL_TERMS: i64 = 8;
const MAX_TERMS: i64 = 512;

impl TowerCtx {
    fn check_place_level(&self, f: &TowerFunc, p: &Place) -> Result<()> {
        if f.level() != p.level() {
            return Err(Error::Internal(format!("function at level {} evaluated at {p}", f.level())));
        }
        Ok(())
    }

    /// Base valuation of an `F0` element at the point under `p`.
    fn base_valuation(&self, r: &RatFunc, p: &Place) -> Option<i64> {
        match p.x0() {
            Some(a) => r.valuation_at(a),
            None => r.valuation_inf(),
        }
    }

    /// Expansion of `x1 - beta` in `t = x0 - alpha` at an unramified place,
    /// to absolute precision `prec`.
    pub fn x1_expansion(&self, alpha: Elem, beta: Elem, prec: i64) -> Series {
        let f = &self.field;
        let u0 = self.u_at(alpha).expect("unramified place");
        let delta = self.u.expand_at(alpha, prec).sub(&Series::constant(f, u0, prec));
        // s^ell + s = delta; s = delta - s^ell converges t-adically
        let mut s = delta.clone();
        let mut reach = self.ell as i64;
        loop {
            s = delta.sub(&s.frobenius(self.ell as u64).truncate(prec));
            if reach >= prec {
                break;
            }
            reach = reach.saturating_mul(self.ell as i64);
        }
        s.add(&Series::constant(f, beta, prec))
    }

    /// Laurent expansion of `f` at a level-0 place or an unramified level-1
    /// place, in `t = x0 - alpha` (or `t = 1/x0` at infinity), known at
    /// least to absolute precision `prec`.
    pub fn expand(&self, f: &TowerFunc, p: &Place, prec: i64) -> Result<Series> {
        self.check_place_level(f, p)?;
        match (p.level(), p.kind()) {
            (0, PlaceKind::Infinity) => Ok(f.coeff(0).expand_at_inf(prec)),
            (0, _) => Ok(f.coeff(0).expand_at(p.x0().expect("finite"), prec)),
            (_, PlaceKind::Finite(c)) => {
                let (alpha, beta) = (c[0], c[1]);
                // pole orders of the coefficients cost precision in products
                let slack =
                    f.coeffs().iter().filter_map(|r| r.valuation_at(alpha)).map(|v| (-v).max(0)).max().unwrap_or(0);
                let inner = prec + slack;
                let x1 = self.x1_expansion(alpha, beta, inner);
                let mut acc = Series::zero(&self.field, prec);
                let mut x1_pow = Series::constant(&self.field, Elem::ONE, inner);
                for (j, c) in f.coeffs().iter().enumerate() {
                    if j > 0 {
                        x1_pow = x1_pow.mul(&x1);
                    }
                    if c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&c.expand_at(alpha, inner).mul(&x1_pow));
                }
                Ok(acc.truncate(prec))
            }
            _ => Err(Error::Internal(format!("no series expansion at ramified place {p}"))),
        }
    }

    /// Exact valuation `v_P(f)`.
    pub fn valuation(&self, f: &TowerFunc, p: &Place) -> Result<i64> {
        self.check_place_level(f, p)?;
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if p.level() == 0 {
            return self.base_valuation(f.coeff(0), p).ok_or(Error::ZeroFunction);
        }
        if p.is_ramified_over_base() {
            let ell = self.ell as i64;
            let v = f
                .coeffs()
                .iter()
                .enumerate()
                .filter_map(|(j, c)| self.base_valuation(c, p).map(|v| ell * v - j as i64))
                .min()
                .expect("nonzero function");
            return Ok(v);
        }
        let mut prec = INITIAL_TERMS;
        loop {
            if let Some(v) = self.expand(f, p, prec)?.valuation() {
                return Ok(v);
            }
            if prec >= MAX_TERMS {
                return Err(Error::ExpansionCap(MAX_TERMS as usize));
            }
            prec *= 2;
        }
    }

    /// Value `f(P)`; fails at a pole.
    pub fn evaluate(&self, f: &TowerFunc, p: &Place) -> Result<Elem> {
        self.check_place_level(f, p)?;
        if f.is_zero() {
            return Ok(Elem::ZERO);
        }
        let v = self.valuation(f, p)?;
        if v < 0 {
            return Err(Error::Internal(format!("evaluation at a pole of order {} at {p}", -v)));
        }
        if v > 0 {
            return Ok(Elem::ZERO);
        }
        if p.level() == 0 || !p.is_ramified_over_base() {
            return Ok(self.expand(f, p, 1)?.coeff(0));
        }
        // v = 0 forces the x1^j terms (j > 0) to vanish at P
        let c0 = f.coeff(0);
        Ok(match p.x0() {
            Some(a) => c0.eval(a).expect("regular"),
            None => c0.eval_inf().expect("regular"),
        })
    }

    /// Linear functional detecting exact order: for `f` with `v_P(f) >= order`,
    /// the result is nonzero iff `v_P(f) = order`.
    pub fn local_coefficient(&self, f: &TowerFunc, p: &Place, order: i64) -> Result<Elem> {
        self.check_place_level(f, p)?;
        if p.level() == 0 || !p.is_ramified_over_base() {
            return Ok(self.expand(f, p, order + 1)?.coeff(order));
        }
        let ell = self.ell as i64;
        let j = (-order).rem_euclid(ell);
        let k = (order + j) / ell;
        let c = f.coeff(j as usize);
        let s = match p.x0() {
            Some(a) => c.expand_at(a, k + 1),
            None => c.expand_at_inf(k + 1),
        };
        Ok(s.coeff(k))
    }
}
