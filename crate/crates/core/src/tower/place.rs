use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::Elem;

/// Base loci of the tower that places can be enumerated over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locus {
    /// `z = 1`, the completely splitting locus.
    ZOne,
    /// `w = 0`, equivalently `z = 0`.
    WZero,
    /// `w = infinity`, equivalently `z = infinity` and `x0 = infinity`.
    WInf,
    ZZero,
    ZInf,
    /// `x0 = alpha` for a rational `alpha`.
    X0(Elem),
    X0Inf,
}

/// Shape of a rational place.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// Coordinates `(x0, ..., x_k)`, all finite.
    Finite(Vec<Elem>),
    /// The place of `F1` over `x0 = root` with `root^(ell-1) + 1 = 0`; there
    /// `x1` has a pole and the extension is totally ramified.
    Branch(Elem),
    /// The unique place over `x0 = infinity`.
    Infinity,
}

impl PlaceKind {
    fn tag(&self) -> u8 {
        match self {
            PlaceKind::Finite(_) => 0,
            PlaceKind::Branch(_) => 1,
            PlaceKind::Infinity => 2,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            PlaceKind::Finite(_) => "finite",
            PlaceKind::Branch(_) => "branch",
            PlaceKind::Infinity => "infinity",
        }
    }
}

/// A rational place at a given tower level, with its ramification data
/// along the chain `F_q(z) < F_q(w) < F0 < F1`.
///
/// Places are built by [`super::TowerCtx`]; ordering is by level, kind, then
/// the integer encodings of `(z, w, x0, x1, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub(crate) level: usize,
    pub(crate) kind: PlaceKind,
    pub(crate) e_profile: Vec<u32>,
    pub(crate) d_profile: Vec<u32>,
    pub(crate) key: Vec<u32>,
}

impl Place {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    /// Residue degree; every catalogued place is rational.
    pub fn degree(&self) -> u32 {
        1
    }

    /// Ramification index of each step, from `F_q(w)/F_q(z)` upward.
    pub fn e_profile(&self) -> &[u32] {
        &self.e_profile
    }

    /// Different exponent of each step, aligned with `e_profile`.
    pub fn d_profile(&self) -> &[u32] {
        &self.d_profile
    }

    /// Ramification index over `F0 = F_q(x0)`.
    pub fn e_over_base(&self) -> u32 {
        self.e_profile.iter().skip(2).product()
    }

    /// `x0` coordinate, `None` at infinity.
    pub fn x0(&self) -> Option<Elem> {
        match &self.kind {
            PlaceKind::Finite(c) => Some(c[0]),
            PlaceKind::Branch(r) => Some(*r),
            PlaceKind::Infinity => None,
        }
    }

    pub fn coords(&self) -> Vec<Elem> {
        match &self.kind {
            PlaceKind::Finite(c) => c.clone(),
            PlaceKind::Branch(r) => vec![*r],
            PlaceKind::Infinity => Vec::new(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == PlaceKind::Infinity
    }

    pub fn is_ramified_over_base(&self) -> bool {
        self.e_over_base() > 1
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.level, self.kind.tag(), &self.key).cmp(&(other.level, other.kind.tag(), &other.key))
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PlaceKind::Finite(c) => {
                let parts: Vec<String> = c.iter().enumerate().map(|(i, v)| format!("x{i}={v}")).collect();
                write!(f, "P[{}]@F{}", parts.join(","), self.level)
            }
            PlaceKind::Branch(r) => write!(f, "P[x0={r},x1=inf]@F{}", self.level),
            PlaceKind::Infinity => write!(f, "P[inf]@F{}", self.level),
        }
    }
}

#[derive(Serialize)]
struct PlaceJson<'a> {
    level: usize,
    kind: &'a str,
    coords: Vec<u32>,
    degree: u32,
    e_profile: &'a [u32],
    d_profile: &'a [u32],
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PlaceJson {
            level: self.level,
            kind: self.kind.name(),
            coords: self.coords().iter().map(|c| c.to_int()).collect(),
            degree: self.degree(),
            e_profile: &self.e_profile,
            d_profile: &self.d_profile,
        }
        .serialize(s)
    }
}
