//! Finite fields GF(p^m) with table-driven arithmetic.
//!
//! Elements are stored as their integer encoding `sum c_j p^j` of the digit
//! vector in the power basis of the modulus. The encoding is what every
//! report and file format uses, so it is also the in-memory form.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported; exhaustive oracles stay cheap below it.
pub const MAX_ORDER: u64 = 1 << 16;

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

/// An element of GF(q), in integer encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn to_int(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled so products need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    ell: Option<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx").field("p", &self.p).field("m", &self.m).field("modulus", &self.modulus).finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over GF(p) as little-endian digit vectors. Only used to
// bootstrap the field tables.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Monic polynomials of degree `deg` over GF(p), in lexicographic order of
/// the coefficient tuple `(c_0, c_1, ..., c_{deg-1})`.
fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg);
    (0..count).map(move |mut idx| {
        // c_0 is the most significant digit of idx.
        let mut c = vec![0u32; deg as usize + 1];
        for j in (0..deg as usize).rev() {
            c[j] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        c[deg as usize] = 1;
        c
    })
}

fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    for d in 1..=m / 2 {
        for g in monic_polys(p, d) {
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^m) with the lexicographically least monic irreducible
    /// modulus (constant term compared first).
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::DegreeTooLarge { p, m });
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::DegreeTooLarge { p, m }),
        };
        let modulus =
            monic_polys(p, m).find(|f| fp_irreducible(f, p)).expect("irreducible polynomials exist in every degree");

        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
            ell: if m.is_multiple_of(2) { Some(p.pow(m / 2)) } else { None },
        };
        ctx.neg = (0..q).map(|a| ctx.neg_slow(a)).collect();
        ctx.build_log_tables();
        if p != 2 && q <= 1024 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = ctx.add_slow(a, b) as u16;
                }
            }
            ctx.add_table = Some(t);
        }
        Ok(Arc::new(ctx))
    }

    /// GF(q) for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m)
    }

    fn digits_of(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.m as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits_of(a), self.digits_of(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits_of(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits_of(a), self.digits_of(b));
        let mut prod = vec![0u32; 2 * self.m as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut r = fp_rem(&prod, &self.modulus, self.p);
        r.resize(self.m as usize, 0);
        self.encode(&r)
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let n = q - 1;
        if n == 1 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        for g in 2..q {
            let mut exp = Vec::with_capacity(2 * n as usize);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..n {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            if !ok || x != 1 {
                continue;
            }
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
            self.exp = doubled;
            self.log = log;
            return;
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `sqrt(q)` when `q` is an even power of `p`.
    pub fn ell(&self) -> Option<u32> {
        self.ell
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Element from its integer encoding.
    pub fn elem(&self, enc: u32) -> Result<Elem> {
        if enc < self.q {
            Ok(Elem(enc))
        } else {
            Err(Error::InvalidEncoding { value: enc as u64, q: self.q })
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        self.digits_of(a.0)
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        let mut v = d.to_vec();
        v.resize(self.m as usize, 0);
        Elem(self.encode(&v.iter().map(|x| x % self.p).collect::<Vec<_>>()))
    }

    /// Lexicographic comparison of little-endian digit vectors.
    pub fn digit_cmp(&self, a: Elem, b: Elem) -> Ordering {
        self.digits(a).cmp(&self.digits(b))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize] as u32),
            None => Elem(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[i as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a.0 != 0, "inverse of zero in GF({})", self.q);
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Elem(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem(1);
        }
        if a.0 == 0 {
            return Elem(0);
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `a^(1/p)`, the inverse of Frobenius.
    pub fn p_root(&self, a: Elem) -> Elem {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// Absolute trace to GF(p), as an integer in `0..p`.
    pub fn trace_to_prime(&self, a: Elem) -> u32 {
        let mut acc = Elem(0);
        let mut x = a;
        for _ in 0..self.m {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// Square root with a deterministic choice: of `v` and `-v` the one with
    /// the lexicographically smaller digit vector.
    pub fn sqrt(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Ok(a);
        }
        let mut best: Option<Elem> = None;
        for v in self.elements() {
            if self.mul(v, v) == a {
                best = match best {
                    Some(b) if self.digit_cmp(b, v) != Ordering::Greater => Some(b),
                    _ => Some(v),
                };
            }
        }
        best.ok_or(Error::NonSquare(a.0))
    }

    /// Elements of the subfield GF(ell) for `q = ell^2`, ascending.
    pub fn subfield(&self) -> Option<Vec<Elem>> {
        let ell = self.ell?;
        Some(self.elements().filter(|&a| self.pow(a, ell as u64) == a).collect())
    }
}

/// Decomposes `q = p^m` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut m = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p as u32, m))
}
