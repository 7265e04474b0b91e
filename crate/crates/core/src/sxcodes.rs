//! Nonlinear codes `C(H, P, s, t)` built from exact-pole-order sets.
//!
//! For each divisor `G = sum m_j P_(i_j)` with `t` points of `P` and degree
//! `s`, `M_H(G)` is the set of `x` in `L(H + G)` whose pole order at every
//! `P_(i_j)` is exactly `m_j`. The codebook is the image of the union `S`
//! under `x -> (x(P_i) or 0 on supp G)`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::galois::AutMap;
use crate::rrspace::{rr_space, rr_space_with_exact_orders};
use crate::tower::{Divisor, Place, TowerCtx};

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;
pub const DEFAULT_PAIR_BUDGET: u128 = 100_000_000;

/// All divisors of degree `s` supported on exactly `t` points of `places`,
/// each with multiplicity at least one. Subsets in lexicographic order,
/// compositions in lexicographic order within a subset.
pub fn sx_divisors(places: &[Place], s: usize, t: usize) -> Result<Vec<Divisor>> {
    let n = places.len();
    if t == 0 || t > n || s < t {
        return Err(Error::RangeError(format!("need 1 <= t <= N = {n} and s >= t, got s = {s}, t = {t}")));
    }
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..t).collect();
    loop {
        for parts in compositions(s, t) {
            let mut d = Divisor::zero();
            for (&i, &m) in subset.iter().zip(&parts) {
                d.add_term(&places[i], m as i64);
            }
            out.push(d);
        }
        if !next_subset(&mut subset, n) {
            break;
        }
    }
    Ok(out)
}

fn next_subset(c: &mut [usize], n: usize) -> bool {
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

/// Ordered ways of writing `s` as `t` positive parts.
fn compositions(s: usize, t: usize) -> Vec<Vec<usize>> {
    if t == 1 {
        return vec![vec![s]];
    }
    (1..=s - (t - 1))
        .flat_map(|first| {
            compositions(s - first, t - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Calls `visit` on every `GF(q)`-combination of `rows`, updating the sum
/// incrementally.
fn for_each_combination(f: &Field, rows: &[Vec<Elem>], width: usize, mut visit: impl FnMut(&[Elem])) {
    let q = f.q() as usize;
    let table: Vec<Vec<Vec<Elem>>> =
        rows.iter().map(|r| f.elements().map(|c| r.iter().map(|&x| f.mul(c, x)).collect()).collect()).collect();
    let mut acc = vec![Elem::ZERO; width];
    let mut digits = vec![0usize; rows.len()];
    visit(&acc);
    loop {
        let mut i = 0;
        loop {
            if i == rows.len() {
                return;
            }
            let (old, new) = (digits[i], (digits[i] + 1) % q);
            for (j, a) in acc.iter_mut().enumerate() {
                *a = f.add(f.sub(*a, table[i][old][j]), table[i][new][j]);
            }
            digits[i] = new;
            if new != 0 {
                break;
            }
            i += 1;
        }
        visit(&acc);
    }
}

type Word = Box<[u16]>;

fn word(v: &[Elem]) -> Word {
    v.iter().map(|e| e.to_int() as u16).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub divisor: Divisor,
    pub size: u128,
    /// Size predicted by inclusion-exclusion on the exact-order functionals.
    pub predicted: u128,
}

#[derive(Clone, Debug)]
pub struct SxCodebook {
    q: u32,
    h: Divisor,
    places: Vec<Place>,
    s: usize,
    t: usize,
    census: Vec<CensusEntry>,
    size_s: u128,
    disjoint: bool,
    /// Sorted, without repetitions.
    codewords: Vec<Word>,
}

impl SxCodebook {
    pub fn h(&self) -> &Divisor {
        &self.h
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn census(&self) -> &[CensusEntry] {
        &self.census
    }

    pub fn size_s(&self) -> u128 {
        self.size_s
    }

    pub fn size_c(&self) -> u128 {
        self.codewords.len() as u128
    }

    /// No function lies in two of the sets `M_H(G)`.
    pub fn disjoint(&self) -> bool {
        self.disjoint
    }

    pub fn codewords(&self) -> &[Box<[u16]>] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn rate(&self) -> f64 {
        (self.size_c() as f64).ln() / (self.q as f64).ln() / self.len() as f64
    }

    /// Minimum distance by bucketing on coordinate subsets: two words
    /// sharing their projection onto `N - d` coordinates are within `d`.
    /// `None` when the work would exceed `budget` word visits.
    pub fn min_distance(&self, budget: u128) -> Option<(usize, u128)> {
        let n = self.len();
        let m = self.codewords.len();
        if m < 2 {
            return Some((n + 1, 0));
        }
        let mut work: u128 = 0;
        for d in 1..=n {
            let keep = n - d;
            let subsets = binomial(n, keep);
            work += subsets * m as u128;
            if work > budget {
                return None;
            }
            let mut cols: Vec<usize> = (0..keep).collect();
            loop {
                let mut seen: HashSet<Vec<u16>> = HashSet::with_capacity(m);
                for w in &self.codewords {
                    if !seen.insert(cols.iter().map(|&c| w[c]).collect()) {
                        return Some((d, work));
                    }
                }
                if keep == 0 || !next_subset(&mut cols, n) {
                    break;
                }
            }
        }
        Some((n, work))
    }

    /// Whether every permutation maps the codebook onto itself;
    /// `perms[s][j]` is the index of the image of `P_j`.
    pub fn is_invariant(&self, perms: &[Vec<usize>]) -> bool {
        perms.iter().all(|perm| {
            let mut image: Vec<Word> =
                self.codewords.par_iter().map(|w| perm.iter().map(|&j| w[j]).collect()).collect();
            image.par_sort_unstable();
            image == self.codewords
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

struct PerDivisor {
    entry: CensusEntry,
    fingerprints: Vec<Word>,
    words: Vec<Word>,
}

/// Enumerates `S = union of M_H(G)` and its image.
pub fn sx_codebook(
    ctx: &TowerCtx,
    h: &Divisor,
    places: &[Place],
    s: usize,
    t: usize,
    budget: u128,
) -> Result<SxCodebook> {
    let level = places.first().map_or(0, Place::level);
    let f = ctx.field();
    if let Some(p) = places.iter().find(|p| h.coeff(p) != 0) {
        return Err(Error::SupportOverlap(p.to_string()));
    }
    let genus = ctx.genus_level(level)? as i64;
    if h.degree() < 2 * genus - 1 {
        return Err(Error::RangeError(format!("deg H = {} < 2g - 1 = {}", h.degree(), 2 * genus - 1)));
    }
    let divisors = sx_divisors(places, s, t)?;
    let ambient = rr_space(ctx, &h.add(&Divisor::sum_of(places, s as i64)), level)?;
    let n = places.len();
    let per: Vec<PerDivisor> = divisors
        .par_iter()
        .map(|g| -> Result<PerDivisor> {
            let constraints: Vec<(Place, i64)> = g.terms().map(|(p, m)| (p.clone(), -m)).collect();
            let set = rr_space_with_exact_orders(ctx, &h.add(g), level, &constraints)?;
            let space = set.space();
            let size = (f.q() as u128).pow(space.dim() as u32);
            if size > budget {
                return Err(Error::EnumerationBudgetExceeded { size, budget });
            }
            let outside: Vec<Place> = places.iter().filter(|p| g.coeff(p) == 0).cloned().collect();
            let eval = space.evaluation_matrix(ctx, &outside)?;
            let embedded = space.embed_into(&ambient)?;
            let width = n + ambient.ansatz().len() + constraints.len();
            let rows: Vec<Vec<Elem>> = (0..space.dim())
                .map(|i| {
                    let mut col = 0;
                    let mut r: Vec<Elem> = places
                        .iter()
                        .map(|p| {
                            if g.coeff(p) > 0 {
                                return Elem::ZERO;
                            }
                            col += 1;
                            eval.get(i, col - 1)
                        })
                        .collect();
                    r.extend_from_slice(&embedded[i]);
                    r.extend(set.functionals().iter().map(|phi| phi[i]));
                    r
                })
                .collect();
            let mut fingerprints = Vec::new();
            let mut words = Vec::new();
            if !set.is_empty_by_construction() {
                let split = n + ambient.ansatz().len();
                for_each_combination(f, &rows, width, |v| {
                    if v[split..].iter().all(|x| !x.is_zero()) {
                        words.push(word(&v[..n]));
                        fingerprints.push(word(&v[n..split]));
                    }
                });
            }
            let entry = CensusEntry { divisor: g.clone(), size: words.len() as u128, predicted: set.count() };
            Ok(PerDivisor { entry, fingerprints, words })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut seen: HashSet<&Word> = HashSet::new();
    let mut disjoint = true;
    for p in &per {
        for fp in &p.fingerprints {
            disjoint &= seen.insert(fp);
        }
    }
    let mut codewords: Vec<Word> = per.iter().flat_map(|p| p.words.iter().cloned()).collect();
    codewords.par_sort_unstable();
    codewords.dedup();
    let census: Vec<CensusEntry> = per.into_iter().map(|p| p.entry).collect();
    Ok(SxCodebook {
        q: f.q(),
        h: h.clone(),
        places: places.to_vec(),
        s,
        t,
        size_s: census.iter().map(|c| c.size).sum(),
        census,
        disjoint,
        codewords,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SxStats {
    pub q: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub deg_h: i64,
    pub size_s: u128,
    pub size_c: u128,
    pub disjoint: bool,
    pub census_matches_prediction: bool,
    pub rate: f64,
    pub min_dist: Option<usize>,
    pub exact: bool,
    pub gamma_invariant: Option<bool>,
}

/// Coordinate permutations induced by `group` on level-0 `places`.
pub fn induced_permutations(ctx: &TowerCtx, places: &[Place], group: &[AutMap]) -> Result<Vec<Vec<usize>>> {
    group
        .iter()
        .map(|s| {
            places
                .iter()
                .map(|p| {
                    let image = ctx.map_place_affine(p, s.eps, s.gamma)?;
                    places.iter().position(|q| *q == image).ok_or_else(|| Error::PlaceNotMapped(p.to_string()))
                })
                .collect()
        })
        .collect()
}

/// Summary statistics; `group` enables the invariance check.
pub fn sx_stats(ctx: &TowerCtx, book: &SxCodebook, group: Option<&[AutMap]>, pair_budget: u128) -> Result<SxStats> {
    let md = book.min_distance(pair_budget);
    let gamma_invariant = match group {
        Some(g) => Some(book.is_invariant(&induced_permutations(ctx, book.places(), g)?)),
        None => None,
    };
    Ok(SxStats {
        q: book.q,
        n: book.len(),
        s: book.s,
        t: book.t,
        deg_h: book.h.degree(),
        size_s: book.size_s,
        size_c: book.size_c(),
        disjoint: book.disjoint,
        census_matches_prediction: book.census.iter().all(|c| c.size == c.predicted),
        rate: book.rate(),
        min_dist: md.map(|(d, _)| d),
        exact: md.is_some(),
        gamma_invariant,
    })
}
