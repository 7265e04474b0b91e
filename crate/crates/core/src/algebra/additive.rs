//! Solving GF(p)-linear (additive) equations over GF(q) by linear algebra
//! over the prime field.

use super::field::{Elem, Field};

/// Matrix of an additive map `L` on GF(q) viewed as GF(p)^m, column `j`
/// holding the digits of `L(p^j)`.
fn linear_map_matrix(f: &Field, l: &impl Fn(Elem) -> Elem) -> Vec<Vec<u32>> {
    let m = f.m() as usize;
    let mut cols = Vec::with_capacity(m);
    let mut basis = vec![0u32; m];
    for j in 0..m {
        basis.fill(0);
        basis[j] = 1;
        cols.push(f.digits(l(f.from_digits(&basis))));
    }
    (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect()
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Solution set of `L(y) = c` for an additive map `L`, as a particular
/// solution plus a GF(p)-basis of the kernel. `None` if unsolvable.
pub fn solve_affine(f: &Field, l: impl Fn(Elem) -> Elem, c: Elem) -> Option<(Elem, Vec<Elem>)> {
    let p = f.p();
    let m = f.m() as usize;
    let mut a = linear_map_matrix(f, &l);
    let mut rhs = f.digits(c);
    rhs.resize(m, 0);
    for (row, r) in a.iter_mut().zip(&rhs) {
        row.push(*r);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(piv) = (r..m).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, piv);
        let inv = inv_mod(a[r][col], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m {
            if i != r && a[i][col] != 0 {
                let fac = a[i][col];
                for j in 0..=m {
                    a[i][j] = (a[i][j] + p * p - fac * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| row[m] != 0) {
        return None;
    }
    let mut part = vec![0u32; m];
    for (i, &pc) in pivots.iter().enumerate() {
        part[pc] = a[i][m];
    }
    let mut kernel = Vec::new();
    for free in (0..m).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; m];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[i][free]) % p;
        }
        kernel.push(f.from_digits(&v));
    }
    Some((f.from_digits(&part), kernel))
}

/// All GF(p)-combinations of `basis`, in odometer order with the first
/// vector varying fastest.
pub fn span(f: &Field, basis: &[Elem]) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO];
    for &b in basis {
        let mut next = Vec::with_capacity(out.len() * f.p() as usize);
        for k in 0..f.p() {
            let kb = f.mul(f.from_int(k as i64), b);
            next.extend(out.iter().map(|&x| f.add(x, kb)));
        }
        out = next;
    }
    out
}

/// All solutions of `L(y) = c`, sorted by encoding.
pub fn solve_additive(f: &Field, l: impl Fn(Elem) -> Elem, c: Elem) -> Vec<Elem> {
    let Some((part, kernel)) = solve_affine(f, l, c) else {
        return Vec::new();
    };
    let mut sols: Vec<Elem> = span(f, &kernel).into_iter().map(|k| f.add(part, k)).collect();
    sols.sort();
    sols
}

/// `y^ell + y`, the trace-like map of GF(q) over GF(ell) for `q = ell^2`.
pub fn ell_trace(f: &Field, ell: u32) -> impl Fn(Elem) -> Elem + '_ {
    move |y| f.add(f.pow(y, ell as u64), y)
}
