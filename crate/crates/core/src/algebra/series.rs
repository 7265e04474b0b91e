//! Truncated Laurent series over GF(q) with tracked absolute precision.

use std::fmt;

use super::field::{Elem, Field};
use super::poly::Poly;

/// `sum_{k >= start} c_k t^k + O(t^prec)`. Coefficients below `start` are
/// exactly zero; coefficients at or above `prec` are unknown.
#[derive(Clone)]
pub struct Series {
    field: Field,
    start: i64,
    coeffs: Vec<Elem>,
    prec: i64,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}*{:?} + O(t^{})", self.start, self.coeffs, self.prec)
    }
}

impl Series {
    pub fn zero(field: &Field, prec: i64) -> Self {
        Series { field: field.clone(), start: prec, coeffs: Vec::new(), prec }
    }

    pub fn from_coeffs(field: &Field, start: i64, coeffs: Vec<Elem>) -> Self {
        let prec = start + coeffs.len() as i64;
        Series { field: field.clone(), start, coeffs, prec }
    }

    /// A polynomial in `t`, known to absolute precision `prec`.
    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        let n = prec.max(0) as usize;
        let coeffs = (0..n).map(|i| p.coeff(i)).collect();
        Series { field: p.field().clone(), start: 0, coeffs, prec: prec.max(0) }
    }

    pub fn constant(field: &Field, c: Elem, prec: i64) -> Self {
        let mut coeffs = vec![Elem::ZERO; prec.max(0) as usize];
        if let Some(first) = coeffs.first_mut() {
            *first = c;
        }
        Series { field: field.clone(), start: 0, coeffs, prec: prec.max(0) }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Coefficient of `t^k`; panics if `k` is beyond the known precision.
    pub fn coeff(&self, k: i64) -> Elem {
        assert!(k < self.prec, "coefficient t^{k} beyond precision {}", self.prec);
        if k < self.start {
            Elem::ZERO
        } else {
            self.coeffs[(k - self.start) as usize]
        }
    }

    /// Exponent of the first nonzero coefficient, if it is within precision.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.start + i as i64)
    }

    pub fn shift(&self, k: i64) -> Series {
        Series { field: self.field.clone(), start: self.start + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.start {
            return Series::zero(&self.field, prec);
        }
        let mut s = self.clone();
        s.coeffs.truncate((prec - self.start) as usize);
        s.prec = prec;
        s
    }

    pub fn scale(&self, c: Elem) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        let start = self.start.min(other.start).min(prec);
        let coeffs = (start..prec)
            .map(|k| {
                let a = if k >= self.start { self.coeff(k) } else { Elem::ZERO };
                let b = if k >= other.start { other.coeff(k) } else { Elem::ZERO };
                f.add(a, b)
            })
            .collect();
        Series { field: f.clone(), start, coeffs, prec }
    }

    pub fn neg(&self) -> Series {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Series) -> Series {
        let f = &self.field;
        let prec = (self.prec + other.start).min(other.prec + self.start);
        let start = (self.start + other.start).min(prec);
        let n = (prec - start).max(0) as usize;
        let mut coeffs = vec![Elem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= n {
                    break;
                }
                coeffs[k] = f.add(coeffs[k], f.mul(a, b));
            }
        }
        Series { field: f.clone(), start, coeffs, prec }
    }

    pub fn pow(&self, e: u64) -> Series {
        if e == 0 {
            return Series::constant(&self.field, Elem::ONE, self.prec - self.start);
        }
        let mut out = self.clone();
        for _ in 1..e {
            out = out.mul(self);
        }
        out
    }

    /// `self^(p^k)` computed coefficientwise, valid in characteristic `p`
    /// where `q_pow = p^k`.
    pub fn frobenius(&self, q_pow: u64) -> Series {
        let f = &self.field;
        let e = q_pow as i64;
        let start = self.start * e;
        let prec = self.prec * e;
        let mut coeffs = vec![Elem::ZERO; (prec - start) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * e as usize] = f.pow(c, q_pow);
        }
        Series { field: f.clone(), start, coeffs, prec }
    }

    /// Quotient; `None` if the divisor's leading coefficient is not resolved.
    pub fn div(&self, other: &Series) -> Option<Series> {
        let f = &self.field;
        let vb = other.valuation()?;
        let rel = (other.prec - vb) as usize;
        let lead_inv = f.inv(other.coeff(vb));
        // inverse of B(t) = other / t^vb to relative precision rel
        let b: Vec<Elem> = (0..rel).map(|i| other.coeff(vb + i as i64)).collect();
        let mut inv = vec![Elem::ZERO; rel];
        inv[0] = lead_inv;
        for k in 1..rel {
            let mut s = Elem::ZERO;
            for j in 1..=k {
                s = f.add(s, f.mul(b[j], inv[k - j]));
            }
            inv[k] = f.neg(f.mul(s, lead_inv));
        }
        let inv_series = Series { field: f.clone(), start: -vb, coeffs: inv, prec: -vb + rel as i64 };
        Some(self.mul(&inv_series))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;

    #[test]
    fn geometric_series_inverse() {
        let f = FieldCtx::new(5, 1).unwrap();
        // 1 / (1 - t) = 1 + t + t^2 + ...
        let one_minus_t = Series::from_coeffs(&f, 0, vec![Elem::ONE, f.from_int(-1), Elem::ZERO, Elem::ZERO]);
        let one = Series::constant(&f, Elem::ONE, 4);
        let q = one.div(&one_minus_t).unwrap();
        assert_eq!(one_minus_t.frobenius(5).mul(&q.frobenius(5)).coeff(0), Elem::ONE);
        assert_eq!(q.precision(), 4);
        for k in 0..4 {
            assert_eq!(q.coeff(k), Elem::ONE);
        }
    }

    #[test]
    fn precision_tracking_in_products() {
        let f = FieldCtx::new(3, 1).unwrap();
        let a = Series::from_coeffs(&f, -2, vec![Elem::ONE; 5]); // prec 3
        let b = Series::from_coeffs(&f, 1, vec![Elem::ONE; 2]); // prec 3
        let c = a.mul(&b);
        assert_eq!(c.precision(), 1);
        assert_eq!(c.valuation(), Some(-1));
    }
}
