use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Elem, Field};

/// Dense univariate polynomial over GF(q), little-endian, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// The variable `x`.
    pub fn x(field: &Field) -> Self {
        Self::new(field, vec![Elem::ZERO, Elem::ONE])
    }

    pub fn monomial(field: &Field, c: Elem, deg: usize) -> Self {
        let mut v = vec![Elem::ZERO; deg + 1];
        v[deg] = c;
        Self::new(field, v)
    }

    /// `x - a`
    pub fn linear(field: &Field, a: Elem) -> Self {
        Self::new(field, vec![field.neg(a), Elem::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg(0) = i64::MIN`.
    pub fn deg_i64(&self) -> i64 {
        self.degree().map_or(i64::MIN, |d| d as i64)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Elem::ONE
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &a)| f.mul(f.from_int(i as i64), a)).collect();
        Poly::new(f, c)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut quot = vec![Elem::ZERO; r.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        (Poly::new(f, quot), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p(a*x + b)`
    pub fn compose_affine(&self, a: Elem, b: Elem) -> Poly {
        let f = &self.field;
        let lin = Poly::new(f, vec![b, a]);
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(f, c);
        }
        acc
    }

    /// `p(g(x))`
    pub fn compose(&self, g: &Poly) -> Poly {
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(f, c);
        }
        acc
    }

    /// Coefficients of `p(a + t)` in powers of `t`.
    pub fn taylor_shift(&self, a: Elem) -> Poly {
        self.compose_affine(Elem::ONE, a)
    }

    /// Multiplicity of `a` as a root (0 if not a root). Zero polynomial
    /// returns `usize::MAX`.
    pub fn root_multiplicity(&self, a: Elem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.taylor_shift(a);
        shifted.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Distinct roots in GF(q), ascending by encoding.
    pub fn roots(&self) -> Vec<Elem> {
        if self.is_zero() {
            return Vec::new();
        }
        self.field.elements().filter(|&a| self.eval(a).is_zero()).collect()
    }

    /// Factorization into linear factors over GF(q): `(root, multiplicity)`
    /// pairs, or `None` if an irreducible factor of degree > 1 remains.
    pub fn split_roots(&self) -> Option<Vec<(Elem, usize)>> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        for r in self.roots() {
            let k = rest.root_multiplicity(r);
            let lin = Poly::linear(&self.field, r);
            for _ in 0..k {
                rest = rest.div_rem(&lin).0;
            }
            out.push((r, k));
        }
        (rest.degree() == Some(0)).then_some(out)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![Elem::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;

    #[test]
    fn division_identity() {
        let f = FieldCtx::new(3, 2).unwrap();
        let a = Poly::new(&f, [1, 2, 0, 5, 7].map(|x| f.elem(x).unwrap()).to_vec());
        let b = Poly::new(&f, [3, 1, 4].map(|x| f.elem(x).unwrap()).to_vec());
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg_i64() < b.deg_i64());
    }

    #[test]
    fn split_roots_of_x9_minus_x() {
        let f = FieldCtx::new(3, 2).unwrap();
        let x = Poly::x(&f);
        let p = &x.pow(9) - &x;
        let roots = p.split_roots().unwrap();
        assert_eq!(roots.len(), 9);
        assert!(roots.iter().all(|&(_, k)| k == 1));
        // x^2 + 1 is irreducible over GF(3) but splits over GF(9)
        let f3 = FieldCtx::new(3, 1).unwrap();
        let h = &Poly::x(&f3).pow(2) + &Poly::one(&f3);
        assert!(h.split_roots().is_none());
    }

    #[test]
    fn taylor_shift_multiplicity() {
        let f = FieldCtx::new(5, 1).unwrap();
        let a = f.from_int(2);
        let p = &Poly::linear(&f, a).pow(3) * &Poly::linear(&f, f.from_int(4));
        assert_eq!(p.root_multiplicity(a), 3);
        assert_eq!(p.root_multiplicity(f.from_int(4)), 1);
        assert_eq!(p.root_multiplicity(f.from_int(0)), 0);
    }
}
