use serde::Serialize;

use crate::algebra::{Elem, Field, RatFunc};
use crate::error::{Error, Result};
use crate::tower::TowerCtx;

/// Automorphism `x0 -> eps * x0 + gamma` of `F0` over `F_q(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AutMap {
    pub eps: Elem,
    pub gamma: Elem,
}

impl AutMap {
    pub const IDENTITY: AutMap = AutMap { eps: Elem::ONE, gamma: Elem::ZERO };

    /// Image of the point `x0 = a`.
    pub fn apply(&self, f: &Field, a: Elem) -> Elem {
        f.add(f.mul(self.eps, a), self.gamma)
    }

    /// `r(eps * x0 + gamma)`.
    pub fn apply_func(&self, r: &RatFunc) -> RatFunc {
        r.compose_affine(self.eps, self.gamma)
    }

    /// `self` after `other`, as maps on points.
    pub fn compose(&self, other: &AutMap, f: &Field) -> AutMap {
        AutMap { eps: f.mul(self.eps, other.eps), gamma: self.apply(f, other.gamma) }
    }

    pub fn inverse(&self, f: &Field) -> AutMap {
        let inv = f.inv(self.eps);
        AutMap { eps: inv, gamma: f.neg(f.mul(inv, self.gamma)) }
    }
}

/// Whether `sigma` fixes `z = (x0^ell + x0)^(ell-1)` as a rational function.
pub fn fixes_z(ctx: &TowerCtx, sigma: &AutMap) -> bool {
    let z = ctx.z_func();
    sigma.apply_func(&z) == z
}

/// `Gal(E_n / E_0)` for `n <= 1`: trivial for `n = 0`, and for `n = 1` the
/// `ell(ell-1)` maps with `eps` in `GF(ell)^*` and `gamma` a root of
/// `y^ell + y`, sorted.
pub fn automorphism_group(ctx: &TowerCtx, n: usize) -> Result<Vec<AutMap>> {
    match n {
        0 => Ok(vec![AutMap::IDENTITY]),
        1 => {
            let f = ctx.field();
            let sub = f.subfield().expect("square field");
            let mut maps = Vec::new();
            for &eps in sub.iter().filter(|e| !e.is_zero()) {
                for &gamma in ctx.kernel() {
                    let m = AutMap { eps, gamma };
                    if !fixes_z(ctx, &m) {
                        return Err(Error::Internal(format!("{m:?} does not fix z")));
                    }
                    maps.push(m);
                }
            }
            maps.sort();
            if !is_group(f, &maps) {
                return Err(Error::Internal("automorphisms are not closed under composition".into()));
            }
            Ok(maps)
        }
        _ => Err(Error::UnsupportedLevel { level: n, max: 1 }),
    }
}

/// Closure under composition and inverses, identity included.
pub fn is_group(f: &Field, maps: &[AutMap]) -> bool {
    let set: std::collections::HashSet<&AutMap> = maps.iter().collect();
    set.contains(&AutMap::IDENTITY)
        && maps.iter().all(|a| set.contains(&a.inverse(f)) && maps.iter().all(|b| set.contains(&a.compose(b, f))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_of_e1_over_gf9() {
        let t = TowerCtx::new(9).unwrap();
        let g = automorphism_group(&t, 1).unwrap();
        assert_eq!(g.len(), 6);
        let eps: Vec<u32> = g.iter().map(|m| m.eps.to_int()).collect();
        assert!(eps.iter().all(|&e| e == 1 || e == 2));
        let gammas: std::collections::BTreeSet<u32> = g.iter().map(|m| m.gamma.to_int()).collect();
        // 0, i, 2i
        assert_eq!(gammas.into_iter().collect::<Vec<_>>(), vec![0, 3, 6]);
        assert!(g.contains(&AutMap::IDENTITY));
    }

    #[test]
    fn group_order_is_extension_degree() {
        for q in [4u64, 16, 25, 49] {
            let t = TowerCtx::new(q).unwrap();
            let ell = t.ell() as usize;
            assert_eq!(automorphism_group(&t, 1).unwrap().len(), ell * (ell - 1));
        }
        assert!(automorphism_group(&TowerCtx::new(9).unwrap(), 2).is_err());
    }

    #[test]
    fn no_other_affine_map_fixes_z() {
        let t = TowerCtx::new(9).unwrap();
        let f = t.field();
        let mut count = 0;
        for eps in f.elements().filter(|e| !e.is_zero()) {
            for gamma in f.elements() {
                if fixes_z(&t, &AutMap { eps, gamma }) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 6);
    }
}
