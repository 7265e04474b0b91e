use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::place::Place;

/// Finite integer combination of rational places.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_place(p: &Place, c: i64) -> Self {
        let mut d = Self::zero();
        d.add_term(p, c);
        d
    }

    /// `sum_{P in places} c * P`
    pub fn sum_of(places: &[Place], c: i64) -> Self {
        let mut d = Self::zero();
        for p in places {
            d.add_term(p, c);
        }
        d
    }

    pub fn add_term(&mut self, p: &Place, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(p);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn support(&self) -> Vec<&Place> {
        self.terms.keys().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, &c)| c * p.degree() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    pub fn positive_part(&self) -> Divisor {
        Divisor { terms: self.terms.iter().filter(|(_, &c)| c > 0).map(|(p, &c)| (p.clone(), c)).collect() }
    }

    pub fn negative_part(&self) -> Divisor {
        Divisor { terms: self.terms.iter().filter(|(_, &c)| c < 0).map(|(p, &c)| (p.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor { terms: self.terms.iter().map(|(p, &c)| (p.clone(), c * k)).collect() }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, c) in other.terms() {
            d.add_term(p, c);
        }
        d
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    /// `self >= other` coefficientwise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        self.sub(other).terms.values().all(|&c| c >= 0)
    }

    /// Whether any place of `places` lies in the support.
    pub fn meets(&self, places: &[Place]) -> bool {
        places.iter().any(|p| self.terms.contains_key(p))
    }

    /// Level of the places in the support, if any.
    pub fn level(&self) -> Option<usize> {
        self.terms.keys().next().map(|p| p.level())
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    place: &'a Place,
    coeff: i64,
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (place, &coeff) in &self.terms {
            seq.serialize_element(&TermJson { place, coeff })?;
        }
        seq.end()
    }
}
