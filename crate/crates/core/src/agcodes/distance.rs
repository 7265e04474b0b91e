//! Minimum distance of linear codes.
//!
//! Strategies are registered by name. `codewords` scans one codeword per
//! projective point of the message space; `zero-sets` uses the fact that a
//! minimum weight word vanishes on a set of columns of rank `k - 1`, so it
//! suffices to visit independent `(k-1)`-subsets of columns.

use rayon::prelude::*;
use serde::Serialize;

use super::code::LinearCode;
use crate::algebra::{Elem, Field, Matrix};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDistance {
    pub d: usize,
    pub exact: bool,
    pub strategy: &'static str,
    /// Codewords or column subsets visited.
    pub work: u128,
    pub designed_lower: Option<i64>,
}

pub trait DistanceStrategy: Named + Send + Sync {
    /// Units of work needed for generator `g`, if finite.
    fn cost(&self, g: &Matrix) -> u128;
    fn run(&self, g: &Matrix) -> MinDistance;
}

fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

struct Codewords;
struct ZeroSets;
struct UpperBound;

impl Named for Codewords {
    fn name(&self) -> &'static str {
        "codewords"
    }
}
impl Named for ZeroSets {
    fn name(&self) -> &'static str {
        "zero-sets"
    }
}
impl Named for UpperBound {
    fn name(&self) -> &'static str {
        "upper-bound"
    }
}

/// Minimum weight over `row_lead + sum_{j > lead} c_j row_j` with
/// `c_(lead+1)` fixed to `first`.
fn scan_block(f: &Field, table: &[Vec<Vec<Elem>>], lead: usize, first: Option<usize>) -> usize {
    let k = table.len();
    let q = f.q() as usize;
    let mut acc = table[lead][1].clone();
    let free_start = match first {
        Some(c) => {
            for (a, &b) in acc.iter_mut().zip(&table[lead + 1][c]) {
                *a = f.add(*a, b);
            }
            lead + 2
        }
        None => lead + 1,
    };
    let free: Vec<usize> = (free_start..k).collect();
    let mut digits = vec![0usize; free.len()];
    let mut best = weight(&acc);
    'outer: loop {
        // odometer step: digit i moves from c to c+1
        let mut i = 0;
        loop {
            if i == free.len() {
                break 'outer;
            }
            let row = &table[free[i]];
            let old = digits[i];
            let new = (old + 1) % q;
            for (j, a) in acc.iter_mut().enumerate() {
                *a = f.add(f.sub(*a, row[old][j]), row[new][j]);
            }
            digits[i] = new;
            if new != 0 {
                break;
            }
            i += 1;
        }
        best = best.min(weight(&acc));
    }
    best
}

impl DistanceStrategy for Codewords {
    fn cost(&self, g: &Matrix) -> u128 {
        let q = g.field().q() as u128;
        (0..g.nrows()).map(|i| q.pow((g.nrows() - 1 - i) as u32)).sum()
    }

    fn run(&self, g: &Matrix) -> MinDistance {
        let f = g.field();
        let q = f.q() as usize;
        let k = g.nrows();
        let table: Vec<Vec<Vec<Elem>>> =
            (0..k).map(|r| f.elements().map(|c| g.row(r).iter().map(|&x| f.mul(c, x)).collect()).collect()).collect();
        let mut blocks: Vec<(usize, Option<usize>)> = Vec::new();
        for lead in 0..k {
            if lead + 1 < k {
                blocks.extend((0..q).map(|c| (lead, Some(c))));
            } else {
                blocks.push((lead, None));
            }
        }
        let d = blocks.par_iter().map(|&(lead, first)| scan_block(f, &table, lead, first)).min().unwrap_or(0);
        MinDistance { d, exact: true, strategy: "codewords", work: self.cost(g), designed_lower: None }
    }
}

/// Weight of the codeword vanishing on `cols`, if those columns are
/// independent.
fn weight_vanishing_on(g: &Matrix, cols_t: &Matrix, subset: &[usize]) -> Option<usize> {
    let rows: Vec<Vec<Elem>> = subset.iter().map(|&c| cols_t.row(c).to_vec()).collect();
    let m = Matrix::from_rows(g.field(), rows, g.nrows());
    let ker = m.nullspace();
    if ker.len() != 1 {
        return None;
    }
    Some(weight(&g.left_mul_vec(&ker[0])))
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl DistanceStrategy for ZeroSets {
    fn cost(&self, g: &Matrix) -> u128 {
        binomial(g.ncols(), g.nrows().saturating_sub(1))
    }

    fn run(&self, g: &Matrix) -> MinDistance {
        let k = g.nrows();
        let n = g.ncols();
        let work = self.cost(g);
        if k <= 1 {
            let d = if k == 1 { weight(g.row(0)) } else { 0 };
            return MinDistance { d, exact: true, strategy: "zero-sets", work, designed_lower: None };
        }
        let cols_t = g.transpose();
        let size = k - 1;
        // split on the smallest element of the subset
        let d = (0..=n - size)
            .into_par_iter()
            .map(|first| {
                let mut best = n;
                if size == 1 {
                    return weight_vanishing_on(g, &cols_t, &[first]).unwrap_or(n);
                }
                let rest_n = n - first - 1;
                let mut c: Vec<usize> = (0..size - 1).collect();
                loop {
                    let subset: Vec<usize> = std::iter::once(first).chain(c.iter().map(|&x| x + first + 1)).collect();
                    if let Some(w) = weight_vanishing_on(g, &cols_t, &subset) {
                        best = best.min(w);
                    }
                    if !next_combination(&mut c, rest_n) {
                        break;
                    }
                }
                best
            })
            .min()
            .unwrap_or(n);
        MinDistance { d, exact: true, strategy: "zero-sets", work, designed_lower: None }
    }
}

impl DistanceStrategy for UpperBound {
    fn cost(&self, g: &Matrix) -> u128 {
        let k = g.nrows() as u128;
        k * k * g.field().q() as u128
    }

    /// Best weight among rows and two-row combinations of the RREF basis.
    fn run(&self, g: &Matrix) -> MinDistance {
        let f = g.field();
        let k = g.nrows();
        let mut best = g.ncols();
        for i in 0..k {
            best = best.min(weight(g.row(i)));
            for j in i + 1..k {
                for c in f.elements().filter(|c| !c.is_zero()) {
                    let v: Vec<Elem> = g.row(i).iter().zip(g.row(j)).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect();
                    best = best.min(weight(&v));
                }
            }
        }
        MinDistance { d: best, exact: false, strategy: "upper-bound", work: self.cost(g), designed_lower: None }
    }
}

pub fn distance_strategies() -> Registry<dyn DistanceStrategy> {
    let all: [Box<dyn DistanceStrategy>; 3] = [Box::new(Codewords), Box::new(ZeroSets), Box::new(UpperBound)];
    all.into_iter().fold(Registry::new("distance strategy"), Registry::with)
}

fn check_nonzero(c: &LinearCode) -> Result<Matrix> {
    if c.dim() == 0 {
        return Err(Error::RangeError("minimum distance of the zero code".into()));
    }
    Ok(c.generator())
}

/// Exact minimum distance by the cheapest exact strategy within `budget`,
/// else a heuristic upper bound.
pub fn min_distance(c: &LinearCode, budget: u128) -> Result<MinDistance> {
    let g = check_nonzero(c)?;
    let reg = distance_strategies();
    let exact = ["codewords", "zero-sets"]
        .into_iter()
        .map(|n| reg.get(n).expect("registered"))
        .filter(|s| s.cost(&g) <= budget)
        .min_by_key(|s| s.cost(&g));
    let strategy = exact.unwrap_or_else(|| reg.get("upper-bound").expect("registered"));
    let mut out = strategy.run(&g);
    out.designed_lower = Some(c.designed_d_lower());
    Ok(out)
}

/// Minimum distance with a named strategy; exceeding `budget` is an error.
pub fn min_distance_with(c: &LinearCode, strategy: &str, budget: u128) -> Result<MinDistance> {
    let g = check_nonzero(c)?;
    let reg = distance_strategies();
    let s = reg.get(strategy)?;
    let cost = s.cost(&g);
    if cost > budget {
        return Err(Error::EnumerationBudgetExceeded { size: cost, budget });
    }
    let mut out = s.run(&g);
    out.designed_lower = Some(c.designed_d_lower());
    Ok(out)
}
