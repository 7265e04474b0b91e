use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{Elem, Field, Poly, RatFunc};

/// Element of a tower level: `sum_{j < ell} c_j(x0) * x1^j` at level 1, a
/// rational function of `x0` at level 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerFunc {
    level: usize,
    coeffs: Vec<RatFunc>,
}

impl fmt::Debug for TowerFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            return write!(f, "{:?}", self.coeffs[0]);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| if j == 0 { format!("{c:?}") } else { format!("({c:?})*x1^{j}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl TowerFunc {
    /// Panics unless `coeffs` has length 1 at level 0 (any positive length
    /// is accepted at level 1 and read as `x1`-coefficients).
    pub fn new(level: usize, coeffs: Vec<RatFunc>) -> Self {
        assert!(!coeffs.is_empty(), "tower function needs coefficients");
        assert!(level > 0 || coeffs.len() == 1, "level-0 functions have one coefficient");
        TowerFunc { level, coeffs }
    }

    pub fn from_ratfunc(level: usize, r: RatFunc, ell: u32) -> Self {
        if level == 0 {
            return TowerFunc { level, coeffs: vec![r] };
        }
        let f = r.field().clone();
        let mut coeffs = vec![RatFunc::zero(&f); ell as usize];
        coeffs[0] = r;
        TowerFunc { level, coeffs }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn field(&self) -> &Field {
        self.coeffs[0].field()
    }

    /// The `x1^j` coefficients (a single entry at level 0).
    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &RatFunc {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The function as an element of `F0`, if it lies there.
    pub fn as_base(&self) -> Option<&RatFunc> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then_some(&self.coeffs[0])
    }

    fn zip(&self, other: &TowerFunc, op: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> TowerFunc {
        assert_eq!(self.level, other.level, "tower functions at different levels");
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "mismatched representations");
        TowerFunc { level: self.level, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| op(a, b)).collect() }
    }

    pub fn add(&self, other: &TowerFunc) -> TowerFunc {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TowerFunc) -> TowerFunc {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> TowerFunc {
        TowerFunc { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: Elem) -> TowerFunc {
        TowerFunc { level: self.level, coeffs: self.coeffs.iter().map(|r| r.scale(c)).collect() }
    }

    /// Product with an element of `F0`.
    pub fn mul_base(&self, r: &RatFunc) -> TowerFunc {
        TowerFunc { level: self.level, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Product in `F1 = F0[x1]/(x1^ell + x1 - u)`, or in `F0` at level 0.
    pub fn mul(&self, other: &TowerFunc, u: &RatFunc) -> TowerFunc {
        assert_eq!(self.level, other.level, "tower functions at different levels");
        if self.level == 0 {
            return TowerFunc { level: 0, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        let ell = self.coeffs.len();
        let f = self.field().clone();
        let mut prod = vec![RatFunc::zero(&f); 2 * ell - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = &prod[i + j] + &(a * b);
                }
            }
        }
        // x1^k = x1^(k-ell) * (u - x1)
        for k in (ell..2 * ell - 1).rev() {
            let c = std::mem::replace(&mut prod[k], RatFunc::zero(&f));
            if c.is_zero() {
                continue;
            }
            prod[k - ell] = &prod[k - ell] + &(&c * u);
            prod[k - ell + 1] = &prod[k - ell + 1] - &c;
        }
        prod.truncate(ell);
        TowerFunc { level: self.level, coeffs: prod }
    }

    pub fn pow(&self, e: u64, u: &RatFunc) -> TowerFunc {
        let ell = self.coeffs.len() as u32;
        let mut acc = TowerFunc::from_ratfunc(self.level, RatFunc::one(self.field()), ell);
        for _ in 0..e {
            acc = acc.mul(self, u);
        }
        acc
    }

    /// Matrix of multiplication by `self` on the basis `1, x1, ..., x1^(ell-1)`;
    /// column `i` holds the coordinates of `self * x1^i`.
    pub fn mult_matrix(&self, u: &RatFunc) -> Vec<Vec<RatFunc>> {
        let ell = self.coeffs.len();
        let f = self.field().clone();
        let mut cols = Vec::with_capacity(ell);
        for i in 0..ell {
            let mut e = vec![RatFunc::zero(&f); ell];
            e[i] = RatFunc::one(&f);
            cols.push(self.mul(&TowerFunc { level: self.level, coeffs: e }, u).coeffs);
        }
        (0..ell).map(|r| (0..ell).map(|c| cols[c][r].clone()).collect()).collect()
    }

    /// Norm to `F0`.
    pub fn norm(&self, u: &RatFunc) -> RatFunc {
        if self.level == 0 {
            return self.coeffs[0].clone();
        }
        determinant(self.mult_matrix(u))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, u: &RatFunc) -> Option<TowerFunc> {
        if self.is_zero() {
            return None;
        }
        if self.level == 0 {
            return Some(TowerFunc { level: 0, coeffs: vec![self.coeffs[0].inv()] });
        }
        let f = self.field().clone();
        let ell = self.coeffs.len();
        let mut rhs = vec![RatFunc::zero(&f); ell];
        rhs[0] = RatFunc::one(&f);
        solve(self.mult_matrix(u), rhs).map(|coeffs| TowerFunc { level: self.level, coeffs })
    }

    pub fn div(&self, other: &TowerFunc, u: &RatFunc) -> Option<TowerFunc> {
        other.inv(u).map(|i| self.mul(&i, u))
    }
}

/// Determinant over `GF(q)(x)` by fraction-field Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<RatFunc>>) -> RatFunc {
    let n = m.len();
    let f = m[0][0].field().clone();
    let mut det = RatFunc::one(&f);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return RatFunc::zero(&f);
        };
        if p != c {
            m.swap(p, c);
            det = -&det;
        }
        let piv = m[c][c].clone();
        det = &det * &piv;
        let inv = piv.inv();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] * &inv;
            for k in c..n {
                m[r][k] = &m[r][k] - &(&factor * &m[c][k]);
            }
        }
    }
    det
}

/// Solves `m * x = rhs` over `GF(q)(x)`; `None` if `m` is singular.
pub fn solve(mut m: Vec<Vec<RatFunc>>, mut rhs: Vec<RatFunc>) -> Option<Vec<RatFunc>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        rhs.swap(p, c);
        let inv = m[c][c].inv();
        for k in c..n {
            m[c][k] = &m[c][k] * &inv;
        }
        rhs[c] = &rhs[c] * &inv;
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let factor = m[r][c].clone();
            for k in c..n {
                m[r][k] = &m[r][k] - &(&factor * &m[c][k]);
            }
            rhs[r] = &rhs[r] - &(&factor * &rhs[c]);
        }
    }
    Some(rhs)
}

#[derive(Serialize)]
struct CoeffJson {
    num: Vec<u32>,
    den: Vec<u32>,
}

fn poly_ints(p: &Poly) -> Vec<u32> {
    p.coeffs().iter().map(|c| c.to_int()).collect()
}

impl Serialize for TowerFunc {
    /// Table of `x1^j` coefficients, each as little-endian numerator and
    /// denominator coefficient lists.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let table: Vec<CoeffJson> =
            self.coeffs.iter().map(|c| CoeffJson { num: poly_ints(c.num()), den: poly_ints(c.den()) }).collect();
        table.serialize(s)
    }
}
