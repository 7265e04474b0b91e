//! Dense matrices over GF(q) and Gaussian elimination.

use std::fmt;

use super::field::{Elem, Field};

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Panics if the rows have unequal length.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { field: field.clone(), rows: n, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Panics on a dimension mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `v * M` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(r, c)));
            }
        }
        out
    }

    /// `M * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let f = &self.field;
        (0..self.rows).map(|r| dot(f, self.row(r), v)).collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data.truncate(r * self.cols);
        self.rows = r;
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : M x = 0}`, one vector per free column,
    /// with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = Elem::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Whether two matrices span the same row space.
    pub fn same_row_space(&self, other: &Matrix) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.rref();
        b.rref();
        a == b || (a.rows == 0 && b.rows == 0 && a.cols == b.cols)
    }

    /// Solves `x * M = target` for a row vector `x`, if possible.
    pub fn solve_left(&self, target: &[Elem]) -> Option<Vec<Elem>> {
        let f = &self.field;
        // [M^T | target] augmented system in x
        let t = self.transpose();
        let mut aug = Matrix::zeros(f, t.rows, t.cols + 1);
        for r in 0..t.rows {
            for c in 0..t.cols {
                aug.set(r, c, t.get(r, c));
            }
            aug.set(r, t.cols, target[r]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&t.cols) {
            return None;
        }
        let mut x = vec![Elem::ZERO; t.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, t.cols);
        }
        Some(x)
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;
    use proptest::prelude::*;

    fn random_matrix(f: &Field, rows: usize, cols: usize, seed: &[u32]) -> Matrix {
        let data = (0..rows * cols).map(|i| Elem(seed[i % seed.len()] % f.q())).collect();
        Matrix { field: f.clone(), rows, cols, data }
    }

    #[test]
    fn rref_of_rank_deficient() {
        let f = FieldCtx::new(3, 1).unwrap();
        let e = |v: u32| Elem(v);
        let m = Matrix::from_rows(&f, vec![vec![e(1), e(2), e(0)], vec![e(2), e(1), e(0)]], 3);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..6, cols in 1usize..7, seed in prop::collection::vec(0u32..9, 1..40)) {
            let f = FieldCtx::new(3, 2).unwrap();
            let m = random_matrix(&f, rows, cols, &seed);
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), cols);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn solve_left_roundtrip(rows in 1usize..5, cols in 1usize..6, seed in prop::collection::vec(0u32..7, 1..30), x in prop::collection::vec(0u32..7, 5)) {
            let f = FieldCtx::new(7, 1).unwrap();
            let m = random_matrix(&f, rows, cols, &seed);
            let x: Vec<Elem> = x[..rows].iter().map(|&v| Elem(v)).collect();
            let target = m.left_mul_vec(&x);
            let sol = m.solve_left(&target).expect("target lies in the row space");
            prop_assert_eq!(m.left_mul_vec(&sol), target);
        }
    }
}
