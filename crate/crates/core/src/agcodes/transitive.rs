use serde::Serialize;

use super::code::LinearCode;
use crate::error::{Error, Result};
use crate::galois::AutMap;
use crate::tower::TowerCtx;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitivityCertificate {
    pub group: Vec<AutMap>,
    /// `perms[s][j]` is the index of `sigma_s(P_j)`.
    pub perms: Vec<Vec<usize>>,
    pub orbit_of_first: Vec<usize>,
    pub transitive: bool,
    pub invariant: Vec<bool>,
    pub stabilizer_order: usize,
}

impl TransitivityCertificate {
    pub fn all_invariant(&self) -> bool {
        self.invariant.iter().all(|&b| b)
    }
}

/// Coordinate permutations induced by `group` on `c`, with orbit and
/// row-space invariance checks on the unscaled generator.
pub fn certify_transitive(ctx: &TowerCtx, c: &LinearCode, group: &[AutMap]) -> Result<TransitivityCertificate> {
    let places = c.place_order();
    let mut perms = Vec::with_capacity(group.len());
    for s in group {
        let perm = places
            .iter()
            .map(|p| {
                let image = ctx.map_place_affine(p, s.eps, s.gamma)?;
                places.iter().position(|q| *q == image).ok_or_else(|| Error::PlaceNotMapped(p.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        for (p, m) in c.divisor().terms() {
            let image = ctx.map_place_affine(p, s.eps, s.gamma)?;
            if c.divisor().coeff(&image) != m {
                return Err(Error::PlaceNotMapped(format!("{p} in supp G")));
            }
        }
        perms.push(perm);
    }
    let g = c.base_generator();
    let k = g.nrows();
    let invariant = perms
        .iter()
        .map(|perm| {
            let mut stacked = g.clone();
            for r in 0..k {
                let row: Vec<_> = (0..g.ncols()).map(|j| g.get(r, perm[j])).collect();
                stacked.push_row(&row);
            }
            stacked.rank() == k
        })
        .collect();
    let n = places.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    if n > 0 {
        seen[0] = true;
    }
    while let Some(i) = stack.pop() {
        for perm in &perms {
            if !seen[perm[i]] {
                seen[perm[i]] = true;
                stack.push(perm[i]);
            }
        }
    }
    let orbit_of_first: Vec<usize> = (0..n).filter(|&i| seen[i]).collect();
    let stabilizer_order = perms.iter().filter(|p| n > 0 && p[0] == 0).count();
    Ok(TransitivityCertificate {
        group: group.to_vec(),
        transitive: orbit_of_first.len() == n,
        orbit_of_first,
        perms,
        invariant,
        stabilizer_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agcodes::family_code;
    use crate::galois::automorphism_group;

    #[test]
    fn gamma_is_transitive_on_the_self_dual_code() {
        let t = TowerCtx::new(9).unwrap();
        let c = family_code(&t, 1, 0, 2).unwrap();
        let g = automorphism_group(&t, 1).unwrap();
        let cert = certify_transitive(&t, &c, &g).unwrap();
        assert!(cert.transitive && cert.all_invariant());
        assert_eq!(cert.group.len(), 6);
        assert_eq!(g.len(), c.len() * cert.stabilizer_order);
        for p in &cert.perms {
            let mut s = p.clone();
            s.sort();
            assert_eq!(s, (0..6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn translations_alone_have_orbits_of_size_ell() {
        let t = TowerCtx::new(9).unwrap();
        let c = family_code(&t, 1, 0, 2).unwrap();
        let sub: Vec<AutMap> =
            automorphism_group(&t, 1).unwrap().into_iter().filter(|m| m.eps == crate::algebra::Elem::ONE).collect();
        let cert = certify_transitive(&t, &c, &sub).unwrap();
        assert!(!cert.transitive);
        assert_eq!(cert.orbit_of_first.len(), 3);
        let id = certify_transitive(&t, &c, &[AutMap::IDENTITY]).unwrap();
        assert_eq!(id.perms[0], (0..6).collect::<Vec<_>>());
        assert!(id.all_invariant());
    }
}
