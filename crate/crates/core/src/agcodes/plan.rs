use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::closure_compute;
use crate::tower::TowerCtx;

/// Parameters of a transitive code meeting a target relative distance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recipe {
    pub q: u32,
    pub delta: f64,
    pub eps: f64,
    pub rate_target: f64,
    pub n: usize,
    /// Code length `[E_n : E_0]`; unknown beyond the computed levels.
    pub length: Option<u128>,
    pub deg_g0: Option<u128>,
    pub genus: Option<i128>,
    pub r: Option<u64>,
    pub predicted_rate: Option<f64>,
    pub predicted_delta: Option<f64>,
}

/// Smallest `n` with `1 / (ell^n (ell - 1)) < eps`, and the largest `r`
/// with `r deg G0 <= (1 - delta) N`.
pub fn plan_transitive_code(ctx: &TowerCtx, delta: f64, eps: f64) -> Result<Recipe> {
    if !(delta > 0.0 && delta < 1.0 && eps > 0.0) {
        return Err(Error::RangeError(format!("need 0 < delta < 1 and eps > 0, got {delta}, {eps}")));
    }
    let ell = ctx.ell() as f64;
    let rate_target = 1.0 - delta - 1.0 / (ell - 1.0);
    if rate_target < 0.0 {
        return Err(Error::InfeasibleTarget(format!("1 - delta - 1/(ell - 1) = {rate_target} < 0")));
    }
    let mut n = 1usize;
    while 1.0 / (ell.powi(n as i32) * (ell - 1.0)) >= eps {
        n += 1;
    }
    let mut recipe = Recipe {
        q: ctx.q(),
        delta,
        eps,
        rate_target,
        n,
        length: None,
        deg_g0: None,
        genus: None,
        r: None,
        predicted_rate: None,
        predicted_delta: None,
    };
    if n > 2 {
        return Ok(recipe);
    }
    let ledger = closure_compute(ctx, n)?;
    let big_n = ledger.degree_over_e0;
    let deg = ledger.deg_b;
    let r = ((1.0 - delta) * big_n as f64 / deg as f64 + 1e-12).floor() as u64;
    let used = r as f64 * deg as f64 / big_n as f64;
    if used <= 1.0 - delta - eps {
        return Err(Error::Internal(format!("r = {r} leaves more than eps slack")));
    }
    let k = (r as i128 * deg as i128 + 1 - ledger.genus).max(0);
    recipe.length = Some(big_n);
    recipe.deg_g0 = Some(deg);
    recipe.genus = Some(ledger.genus);
    recipe.r = Some(r);
    recipe.predicted_rate = Some(k as f64 / big_n as f64);
    recipe.predicted_delta = Some(1.0 - used);
    Ok(recipe)
}
