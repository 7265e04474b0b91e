//! The tower `F_q(z) < F_q(w) < F0 = F_q(x0) < F1 < ...` with
//! `w = x0^ell + x0`, `z = w^(ell-1)` and `x1^ell + x1 = x0^ell / (x0^(ell-1) + 1)`.
//!
//! Level 0 is `F0` and level 1 is `F1`; explicit arithmetic stops there.

mod divisor;
mod func;
mod local;
mod place;

pub use divisor::Divisor;
pub use func::{determinant, solve, TowerFunc};
pub use place::{Locus, Place, PlaceKind};

use crate::algebra::additive::{ell_trace, solve_additive};
use crate::algebra::{Elem, Field, FieldCtx, Poly, RatFunc};
use crate::error::{Error, Result};

/// Highest level with explicit field arithmetic.
pub const MAX_LEVEL: usize = 1;

#[derive(Debug, Clone)]
pub struct TowerCtx {
    field: Field,
    ell: u32,
    a: u32,
    max_level: usize,
    h: Poly,
    u: RatFunc,
    kernel: Vec<Elem>,
    branch_roots: Vec<Elem>,
}

impl TowerCtx {
    /// Tower over GF(q); `q` must be an even prime power.
    pub fn new(q: u64) -> Result<Self> {
        Self::from_field(FieldCtx::with_order(q)?)
    }

    pub fn from_field(field: Field) -> Result<Self> {
        let ell = field.ell().ok_or(Error::NonSquareQ(field.q() as u64))?;
        let a = field.m() / 2;
        let x = Poly::x(&field);
        let h = &x.pow(ell as u64 - 1) + &Poly::one(&field);
        let u = RatFunc::new(x.pow(ell as u64), h.clone());
        let kernel = solve_additive(&field, ell_trace(&field, ell), Elem::ZERO);
        let branch_roots = h.roots();
        Ok(TowerCtx { field, ell, a, max_level: MAX_LEVEL, h, u, kernel, branch_roots })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// `ell = p^a`.
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// `x0^(ell-1) + 1`.
    pub fn h(&self) -> &Poly {
        &self.h
    }

    /// Right-hand side `x0^ell / (x0^(ell-1) + 1)` of the recursion.
    pub fn u(&self) -> &RatFunc {
        &self.u
    }

    /// Roots of `y^ell + y`, ascending.
    pub fn kernel(&self) -> &[Elem] {
        &self.kernel
    }

    /// Roots of `x0^(ell-1) + 1`, ascending.
    pub fn branch_roots(&self) -> &[Elem] {
        &self.branch_roots
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level > self.max_level {
            return Err(Error::UnsupportedLevel { level, max: self.max_level });
        }
        Ok(())
    }

    /// `w(alpha) = alpha^ell + alpha`.
    pub fn w_of(&self, x0: Elem) -> Elem {
        let f = &self.field;
        f.add(f.pow(x0, self.ell as u64), x0)
    }

    /// `z(alpha) = w(alpha)^(ell-1)`.
    pub fn z_of(&self, x0: Elem) -> Elem {
        self.field.pow(self.w_of(x0), self.ell as u64 - 1)
    }

    /// `u(alpha)`, `None` at a root of `h`.
    pub fn u_at(&self, x0: Elem) -> Option<Elem> {
        self.u.eval(x0)
    }

    /// `w` as a rational function of `x0`.
    pub fn w_func(&self) -> RatFunc {
        let x = Poly::x(&self.field);
        RatFunc::from_poly(&x.pow(self.ell as u64) + &x)
    }

    /// `z` as a rational function of `x0`.
    pub fn z_func(&self) -> RatFunc {
        self.w_func().pow(self.ell as u64 - 1)
    }

    // ---- functions ------------------------------------------------------

    pub fn constant(&self, level: usize, c: Elem) -> TowerFunc {
        TowerFunc::from_ratfunc(level, RatFunc::constant(&self.field, c), self.ell)
    }

    pub fn one(&self, level: usize) -> TowerFunc {
        self.constant(level, Elem::ONE)
    }

    pub fn base(&self, level: usize, r: RatFunc) -> TowerFunc {
        TowerFunc::from_ratfunc(level, r, self.ell)
    }

    pub fn x0(&self, level: usize) -> TowerFunc {
        self.base(level, RatFunc::x(&self.field))
    }

    /// The generator `x1` of `F1`.
    pub fn x1(&self) -> TowerFunc {
        let mut c = vec![RatFunc::zero(&self.field); self.ell as usize];
        c[1] = RatFunc::one(&self.field);
        TowerFunc::new(1, c)
    }

    pub fn w(&self, level: usize) -> TowerFunc {
        self.base(level, self.w_func())
    }

    pub fn z(&self, level: usize) -> TowerFunc {
        self.base(level, self.z_func())
    }

    pub fn mul(&self, a: &TowerFunc, b: &TowerFunc) -> TowerFunc {
        a.mul(b, &self.u)
    }

    pub fn pow(&self, a: &TowerFunc, e: u64) -> TowerFunc {
        a.pow(e, &self.u)
    }

    pub fn inv(&self, a: &TowerFunc) -> Result<TowerFunc> {
        a.inv(&self.u).ok_or(Error::ZeroFunction)
    }

    pub fn norm(&self, a: &TowerFunc) -> RatFunc {
        a.norm(&self.u)
    }

    // ---- places ---------------------------------------------------------

    fn make_place(&self, level: usize, kind: PlaceKind) -> Place {
        let l = self.ell;
        let (mut e, mut d) = (Vec::new(), Vec::new());
        // F_q(w)/F_q(z): tame Kummer step, ramified over w = 0 and w = infinity
        let x0 = match &kind {
            PlaceKind::Finite(c) => Some(c[0]),
            PlaceKind::Branch(r) => Some(*r),
            PlaceKind::Infinity => None,
        };
        let kummer_ramified = x0.is_none_or(|a| self.w_of(a).is_zero());
        if kummer_ramified {
            e.push(l - 1);
            d.push(l - 2);
        } else {
            e.push(1);
            d.push(0);
        }
        // F0/F_q(w): Artin-Schreier, totally ramified over w = infinity only
        if x0.is_none() {
            e.push(l);
            d.push(2 * (l - 1));
        } else {
            e.push(1);
            d.push(0);
        }
        if level >= 1 {
            let ramified = matches!(kind, PlaceKind::Branch(_) | PlaceKind::Infinity);
            if ramified {
                e.push(l);
                d.push(2 * (l - 1));
            } else {
                e.push(1);
                d.push(0);
            }
        }
        let key = match &kind {
            PlaceKind::Finite(c) => {
                let mut k = vec![self.z_of(c[0]).to_int(), self.w_of(c[0]).to_int()];
                k.extend(c.iter().map(|v| v.to_int()));
                k
            }
            PlaceKind::Branch(r) => vec![self.z_of(*r).to_int(), self.w_of(*r).to_int(), r.to_int()],
            PlaceKind::Infinity => Vec::new(),
        };
        Place { level, kind, e_profile: e, d_profile: d, key }
    }

    pub fn place_at_infinity(&self, level: usize) -> Result<Place> {
        self.check_level(level)?;
        Ok(self.make_place(level, PlaceKind::Infinity))
    }

    /// Rational places of level `level` over `x0 = alpha`. Empty when the
    /// places there are not rational.
    pub fn places_above_x0(&self, alpha: Elem, level: usize) -> Result<Vec<Place>> {
        self.check_level(level)?;
        if level == 0 {
            return Ok(vec![self.make_place(0, PlaceKind::Finite(vec![alpha]))]);
        }
        match self.u_at(alpha) {
            None => Ok(vec![self.make_place(1, PlaceKind::Branch(alpha))]),
            Some(b) => {
                let mut out: Vec<Place> = solve_additive(&self.field, ell_trace(&self.field, self.ell), b)
                    .into_iter()
                    .map(|beta| self.make_place(1, PlaceKind::Finite(vec![alpha, beta])))
                    .collect();
                out.sort();
                Ok(out)
            }
        }
    }

    /// Finite `x0`-values lying over a base locus, ascending by encoding.
    fn x0_values(&self, locus: Locus) -> Vec<Elem> {
        let f = &self.field;
        match locus {
            Locus::ZOne => f.elements().filter(|&a| self.z_of(a) == Elem::ONE).collect(),
            Locus::WZero | Locus::ZZero => self.kernel.clone(),
            Locus::X0(a) => vec![a],
            Locus::WInf | Locus::ZInf | Locus::X0Inf => Vec::new(),
        }
    }

    /// All rational places of the given level over a base locus, sorted.
    pub fn places_over(&self, locus: Locus, level: usize) -> Result<Vec<Place>> {
        self.check_level(level)?;
        if matches!(locus, Locus::WInf | Locus::ZInf | Locus::X0Inf) {
            return Ok(vec![self.make_place(level, PlaceKind::Infinity)]);
        }
        let mut out = Vec::new();
        for a in self.x0_values(locus) {
            out.extend(self.places_above_x0(a, level)?);
        }
        out.sort();
        Ok(out)
    }

    /// Every rational place of the level, sorted.
    pub fn rational_places(&self, level: usize) -> Result<Vec<Place>> {
        self.check_level(level)?;
        let mut out = vec![self.make_place(level, PlaceKind::Infinity)];
        for a in self.field.elements() {
            out.extend(self.places_above_x0(a, level)?);
        }
        out.sort();
        Ok(out)
    }

    /// Image of a place under `x0 -> eps*x0 + gamma` (level 0 only).
    pub fn map_place_affine(&self, p: &Place, eps: Elem, gamma: Elem) -> Result<Place> {
        if p.level() != 0 {
            return Err(Error::UnsupportedLevel { level: p.level(), max: 0 });
        }
        let f = &self.field;
        Ok(match p.kind() {
            PlaceKind::Infinity => p.clone(),
            _ => {
                let a = p.x0().expect("finite place");
                self.make_place(0, PlaceKind::Finite(vec![f.add(f.mul(eps, a), gamma)]))
            }
        })
    }

    // ---- divisors and genus ---------------------------------------------

    /// Genus of `F_level`, by Hurwitz over the Artin-Schreier steps.
    pub fn genus_level(&self, level: usize) -> Result<u64> {
        self.check_level(level)?;
        if level == 0 {
            return Ok(0);
        }
        // 2g - 2 = [F1:F0](2*0 - 2) + deg Diff(F1/F0)
        let ramified: Vec<Place> = self.rational_places(1)?.into_iter().filter(|p| p.is_ramified_over_base()).collect();
        let diff: i64 = ramified.iter().map(|p| p.d_profile()[2] as i64 * p.degree() as i64).sum();
        let two_g_minus_2 = -2 * self.ell as i64 + diff;
        Ok(((two_g_minus_2 + 2) / 2) as u64)
    }

    /// Divisor of a nonzero function. Fails with `UnsupportedLocus` when a
    /// zero or pole lies on a non-rational place.
    pub fn principal_divisor(&self, f: &TowerFunc) -> Result<Divisor> {
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let level = f.level();
        self.check_level(level)?;
        let mut candidates: Vec<Elem> = Vec::new();
        let mut push_roots = |p: &Poly, what: &str| -> Result<()> {
            let roots = p
                .split_roots()
                .ok_or_else(|| Error::UnsupportedLocus(format!("{what} {p:?} does not split over GF({})", self.q())))?;
            candidates.extend(roots.into_iter().map(|(r, _)| r));
            Ok(())
        };
        if level == 0 {
            let r = &f.coeffs()[0];
            push_roots(r.num(), "numerator")?;
            push_roots(r.den(), "denominator")?;
        } else {
            let n = self.norm(f);
            push_roots(n.num(), "norm numerator")?;
            push_roots(n.den(), "norm denominator")?;
            for c in f.coeffs() {
                push_roots(c.den(), "coefficient denominator")?;
            }
            candidates.extend(self.branch_roots.iter().copied());
        }
        candidates.sort();
        candidates.dedup();
        let mut div = Divisor::zero();
        let inf = self.place_at_infinity(level)?;
        div.add_term(&inf, self.valuation(f, &inf)?);
        for a in candidates {
            let places = self.places_above_x0(a, level)?;
            if places.is_empty() {
                return Err(Error::UnsupportedLocus(format!("places over x0 = {a} are not rational")));
            }
            for p in places {
                let v = self.valuation(f, &p)?;
                div.add_term(&p, v);
            }
        }
        if div.degree() != 0 {
            return Err(Error::Internal(format!("principal divisor of degree {}", div.degree())));
        }
        Ok(div)
    }
}

#[cfg(test)]
mod tests;
