use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Elem, Field};
use super::poly::Poly;
use super::series::Series;

/// Element of GF(q)(x) in canonical form: monic denominator, coprime parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl RatFunc {
    /// Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let field = num.field().clone();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(&field) };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let c = field.inv(den.lead());
        RatFunc { num: num.scale(c), den: den.scale(c) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn x(field: &Field) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// `deg num - deg den`; this is `-v_inf`.
    pub fn degree(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.deg_i64())
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: Elem) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Value at a finite point, `None` at a pole.
    pub fn eval(&self, a: Elem) -> Option<Elem> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        let f = self.field();
        Some(f.div(self.num.eval(a), d))
    }

    /// Value at infinity, `None` at a pole.
    pub fn eval_inf(&self) -> Option<Elem> {
        match self.degree() {
            None => Some(Elem::ZERO),
            Some(d) if d > 0 => None,
            Some(d) if d < 0 => Some(Elem::ZERO),
            _ => Some(self.field().div(self.num.lead(), self.den.lead())),
        }
    }

    /// Valuation at `x = a`; `None` for the zero function.
    pub fn valuation_at(&self, a: Elem) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64)
    }

    /// Valuation at `x = infinity`; `None` for the zero function.
    pub fn valuation_inf(&self) -> Option<i64> {
        self.degree().map(|d| -d)
    }

    /// `r(a*x + b)`
    pub fn compose_affine(&self, a: Elem, b: Elem) -> RatFunc {
        RatFunc::new(self.num.compose_affine(a, b), self.den.compose_affine(a, b))
    }

    /// `r(g(x))` for a polynomial `g`.
    pub fn compose_poly(&self, g: &Poly) -> RatFunc {
        RatFunc::new(self.num.compose(g), self.den.compose(g))
    }

    /// Laurent expansion in `t = x - a`, known to absolute precision `prec`.
    pub fn expand_at(&self, a: Elem, prec: i64) -> Series {
        let p = prec.max(0) + 2 * self.den.deg_i64().max(0) + 1;
        let num = Series::from_poly(&self.num.taylor_shift(a), p);
        let den = Series::from_poly(&self.den.taylor_shift(a), p);
        let s = num.div(&den).expect("denominator is nonzero");
        s.truncate(prec)
    }

    /// Laurent expansion in `t = 1/x` at infinity.
    pub fn expand_at_inf(&self, prec: i64) -> Series {
        // r(1/t) = t^(dd - dn) * rev(num)(t) / rev(den)(t)
        let f = self.field();
        let rev = |p: &Poly| Poly::new(f, p.coeffs().iter().rev().copied().collect());
        let dn = self.num.deg_i64();
        let dd = self.den.deg_i64();
        if self.is_zero() {
            return Series::zero(f, prec);
        }
        let p = (prec + dn - dd).max(0) + 1;
        let num = Series::from_poly(&rev(&self.num), p);
        let den = Series::from_poly(&rev(&self.den), p);
        let s = num.div(&den).expect("reversed denominator has nonzero constant term");
        s.shift(dd - dn).truncate(prec)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl RatFunc {
    /// Division; panics on division by zero.
    pub fn div(&self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;

    #[test]
    fn canonical_form() {
        let f = FieldCtx::new(5, 1).unwrap();
        let x = Poly::x(&f);
        let one = Poly::one(&f);
        let a = RatFunc::new(&(&x * &x) - &one, (&x - &one).scale(f.from_int(2)));
        assert_eq!(a, RatFunc::new((&x + &one).scale(f.from_int(3)), one.clone()));
        assert!(a.den().is_monic());
    }

    #[test]
    fn valuations() {
        let f = FieldCtx::new(3, 2).unwrap();
        let x = Poly::x(&f);
        let h = &x.pow(2) + &Poly::one(&f);
        let r = RatFunc::new(x.pow(3), h.clone());
        assert_eq!(r.valuation_inf(), Some(-1));
        assert_eq!(r.valuation_at(Elem::ZERO), Some(3));
        let i = f.elem(3).unwrap();
        assert_eq!(r.valuation_at(i), Some(-1));
    }

    #[test]
    fn expansion_matches_value() {
        let f = FieldCtx::new(7, 1).unwrap();
        let x = RatFunc::x(&f);
        let r = &x.pow(3) + &x.inv();
        let a = f.from_int(3);
        let s = r.expand_at(a, 6);
        assert_eq!(s.coeff(0), r.eval(a).unwrap());
        let s = r.expand_at(Elem::ZERO, 4);
        assert_eq!(s.valuation(), Some(-1));
        let s = r.expand_at_inf(4);
        assert_eq!(s.valuation(), Some(-3));
        assert_eq!(s.coeff(-3), Elem::ONE);
        assert_eq!(s.coeff(1), Elem::ONE);
    }
}
