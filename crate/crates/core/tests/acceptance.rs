//! Acceptance criteria over GF(9), one line per criterion.
//!
//! Each criterion recomputes its expected values with small oracles kept
//! here (brute-force scans, direct formulas) and compares them against the
//! library. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use towercodes::agcodes::{
    certify_transitive, dual_via_eta, eta_form, family_code_with, family_divisors, goppa_code, min_distance,
    residue_sums, selfdual_scale, DEFAULT_BUDGET,
};
use towercodes::algebra::{Elem, Field, Matrix};
use towercodes::bounds::{crossover, delta_star, isodual_old_delta, selfdual_delta, Rational};
use towercodes::galois::{automorphism_group, closure_compute, verify_closure_ledger, Status};
use towercodes::rrspace::rr_space;
use towercodes::sxcodes::{sx_codebook, sx_stats, DEFAULT_ENUMERATION_BUDGET, DEFAULT_PAIR_BUDGET};
use towercodes::tower::{Divisor, Locus, TowerCtx};

type Check = Result<String, String>;
type Criterion = (u32, bool, fn(&TowerCtx) -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: towercodes::Error) -> String {
    e.to_string()
}

fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Minimum weight over all `q^k` messages.
fn brute_distance(g: &Matrix) -> (usize, u64) {
    let f = g.field();
    let q = f.q() as u64;
    let k = g.nrows() as u32;
    let mut best = usize::MAX;
    for idx in 1..q.pow(k) {
        let msg: Vec<Elem> = (0..k).map(|i| f.elem(((idx / q.pow(i)) % q) as u32).unwrap()).collect();
        best = best.min(weight(&g.left_mul_vec(&msg)));
    }
    (best, q.pow(k))
}

fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn c1_closure(t: &TowerCtx) -> Check {
    let start = Instant::now();
    let r = closure_compute(t, 1).map_err(err)?;
    let elapsed = start.elapsed();
    let genus = r.degree_over_fw as i128 + 1 - (r.deg_a + r.deg_b) as i128;
    ensure(r.t == 0, format!("t(1) = {}", r.t))?;
    ensure(r.degree_over_e0 == 6, format!("[E1:E0] = {}", r.degree_over_e0))?;
    ensure((r.deg_a, r.deg_b) == (3, 1), format!("deg A, deg B = {}, {}", r.deg_a, r.deg_b))?;
    ensure(genus == 0 && r.genus == 0, format!("g = {} / {genus}", r.genus))?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("t=0 [E1:E0]=6 degA=3 degB=1 g=0 in {elapsed:?}"))
}

fn c2_self_dual(t: &TowerCtx) -> Check {
    let f = t.field();
    let eta = eta_form(t, 1).map_err(err)?;
    let c = selfdual_scale(t, &family_code_with(t, &eta, 0, 2).map_err(err)?, &eta).map_err(err)?;
    let g = c.generator();
    for i in 0..g.nrows() {
        for j in 0..g.nrows() {
            ensure(dot(f, g.row(i), g.row(j)).is_zero(), format!("rows {i}, {j} not orthogonal"))?;
        }
    }
    let (d, scanned) = brute_distance(&g);
    let lib = min_distance(&c, DEFAULT_BUDGET).map_err(err)?;
    ensure((c.len(), c.dim()) == (6, 3), format!("[{}, {}]", c.len(), c.dim()))?;
    ensure(scanned == 729 && d == 4 && lib.d == 4 && lib.exact, format!("d = {d} (library {})", lib.d))?;
    ensure(2 * c.dim() == c.len(), "rate is not 1/2")?;
    Ok(format!("[6,3,4] self-dual, G*G^T = 0, {scanned}-word scan"))
}

fn c3_transitive(t: &TowerCtx) -> Check {
    let f = t.field();
    let eta = eta_form(t, 1).map_err(err)?;
    let c = family_code_with(t, &eta, 0, 2).map_err(err)?;
    let group = automorphism_group(t, 1).map_err(err)?;
    let cert = certify_transitive(t, &c, &group).map_err(err)?;
    let xs: Vec<Elem> = c.place_order().iter().map(|p| p.x0().unwrap()).collect();
    let g = c.base_generator();
    let mut orbit = std::collections::BTreeSet::new();
    for (s, perm) in group.iter().zip(&cert.perms) {
        // x0 -> eps x0 + gamma on coordinates, independently of the library
        let oracle: Vec<usize> =
            xs.iter().map(|&a| xs.iter().position(|&b| b == f.add(f.mul(s.eps, a), s.gamma)).unwrap()).collect();
        ensure(&oracle == perm, format!("permutation mismatch for {s:?}"))?;
        orbit.insert(perm[0]);
        for r in 0..g.nrows() {
            let row: Vec<Elem> = perm.iter().map(|&j| g.get(r, j)).collect();
            ensure(g.solve_left(&row).is_some(), format!("{s:?} moves row {r} out of the code"))?;
        }
    }
    ensure(group.len() == 6 && orbit.len() == 6 && cert.transitive, "not transitive")?;
    Ok("6 maps, orbit of P1 is all 6 places, all permutations preserve C".into())
}

fn c4_duality(t: &TowerCtx) -> Check {
    let f = t.field();
    let eta = eta_form(t, 1).map_err(err)?;
    ensure((eta.a_n, eta.b_n) == (0, 4), format!("(a1, b1) = ({}, {})", eta.a_n, eta.b_n))?;
    let mut equal = 0;
    for b in 0..=4 {
        let c = family_code_with(t, &eta, 0, b).map_err(err)?;
        let dual = dual_via_eta(t, &c, &eta).map_err(err)?;
        let (g, h) = (c.generator(), dual.generator());
        let orthogonal = (0..g.nrows()).all(|i| (0..h.nrows()).all(|j| dot(f, g.row(i), h.row(j)).is_zero()));
        if orthogonal && g.nrows() + h.rank() == 6 {
            equal += 1;
        }
    }
    ensure(equal == 5, format!("{equal}/5"))?;
    Ok("5/5 dual row spaces equal the nullspace".into())
}

fn c5_residues(t: &TowerCtx) -> Check {
    let f = t.field();
    let eta = eta_form(t, 1).map_err(err)?;
    let dz = t.z_func().num().derivative();
    let oracle: Vec<u32> = eta.place_order.iter().map(|p| f.inv(f.neg(dz.eval(p.x0().unwrap()))).to_int()).collect();
    let ints: Vec<u32> = eta.residues.iter().map(|e| e.to_int()).collect();
    ensure(ints == [1, 1, 1, 2, 2, 2] && oracle == ints, format!("residues {ints:?}, oracle {oracle:?}"))?;
    ensure(eta.residues.iter().all(|&r| f.mul(r, r) == Elem::ONE), "residue outside GF(3)^*")?;
    ensure(eta.divisor.degree() == -2, format!("deg (eta) = {}", eta.divisor.degree()))?;
    let (_, b, _) = family_divisors(t, 1).map_err(err)?;
    let sums = residue_sums(t, &eta, &b.scale(2)).map_err(err)?;
    ensure(sums.len() == 9 && sums.iter().all(|s| s.is_zero()), "nonzero residue sum")?;
    Ok("residues (1,1,1,2,2,2), deg(eta) = -2, 9/9 sums vanish".into())
}

fn semigroup_count(r: i64) -> usize {
    let mut reach = vec![false; (r + 1) as usize];
    reach[0] = true;
    for n in 1..=r as usize {
        reach[n] = [3usize, 7, 8].iter().any(|&g| n >= g && reach[n - g]);
    }
    reach.iter().filter(|&&b| b).count()
}

fn c6_riemann_roch(t: &TowerCtx) -> Check {
    let inf = t.place_at_infinity(1).map_err(err)?;
    for r in 0..18i64 {
        let dim = rr_space(t, &Divisor::from_place(&inf, r), 1).map_err(err)?.dim();
        let expected = if r <= 6 { semigroup_count(r) } else { (r - 3) as usize };
        ensure(dim == expected, format!("dim L({r} Pinf) = {dim}, expected {expected}"))?;
    }
    // Hurwitz for y^3 + y = x^3 / (x^2 + 1) over a rational base: three
    // totally ramified places with different exponent 4
    let base_genus = 0;
    let hurwitz = (3 * (2 * base_genus - 2) + 3 * 4 + 2) / 2;
    let g = t.genus_level(1).map_err(err)? as i64;
    let n = t.places_over(Locus::ZOne, 1).map_err(err)?.len();
    ensure(g == 4 && hurwitz == 4 && n == 18, format!("g = {g}, N = {n}"))?;
    ensure(n as f64 / g as f64 >= 2.0, "ratio below ell - 1")?;
    Ok("18/18 dimensions, g = 4, N = 18, N/g = 4.5 >= 2".into())
}

fn c7_sweep(t: &TowerCtx) -> Check {
    let start = Instant::now();
    let d = t.places_over(Locus::ZOne, 1).map_err(err)?;
    let inf = t.place_at_infinity(1).map_err(err)?;
    let mut parts = Vec::new();
    for r in 8..=13i64 {
        let c = goppa_code(t, &d, &Divisor::from_place(&inf, r), 1).map_err(err)?;
        let md = min_distance(&c, DEFAULT_BUDGET).map_err(err)?;
        let (k, dist) = (c.dim() as i64, md.d as i64);
        if r <= 9 {
            let (brute, _) = brute_distance(&c.generator());
            ensure(brute as i64 == dist, format!("r = {r}: brute force {brute}, library {dist}"))?;
        }
        ensure(md.exact && k == r - 3, format!("r = {r}: k = {k}"))?;
        ensure(dist >= 18 - r && k + dist >= 15, format!("r = {r}: d = {dist}"))?;
        parts.push(format!("[18,{k},{dist}]"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.1?}", parts.join(" ")))
}

fn c8_bounds(_t: &TowerCtx) -> Check {
    let c49 = crossover(49).map_err(err)?;
    let c25 = crossover(25).map_err(err)?;
    ensure(c49.exists, "no crossover at q = 49")?;
    ensure(!c25.exists && c25.max_gap <= 1e-12, format!("q = 25 gap {}", c25.max_gap))?;
    let ds = delta_star(49).map_err(err)?;
    let oracle = Rational::new(2, 3) - Rational::new(194, 5_647_200);
    ensure(ds == oracle, format!("delta*(49) = {ds}"))?;
    let value = ds.to_f64().unwrap();
    ensure((value - 0.666632).abs() <= 1e-5, format!("delta*(49) = {value}"))?;
    let (sd, old) = (selfdual_delta(49).map_err(err)?, isodual_old_delta(49).map_err(err)?);
    ensure(sd == Rational::new(1, 3) && old == Rational::new(1, 4) && sd > old, "self-dual comparison")?;
    Ok(format!("q=49 witness delta={:?}, q=25 none, delta*(49)={value:.6}, 1/3 > 1/4", c49.witness))
}

fn c9_sx(t: &TowerCtx) -> Check {
    let start = Instant::now();
    let (_, b, d) = family_divisors(t, 1).map_err(err)?;
    let h = b.scale(2);
    let group = automorphism_group(t, 1).map_err(err)?;
    // |M_H(G)| by inclusion-exclusion on dim L(2B + G) = 3 + deg G
    let q: u128 = 9;
    let expected = [
        ((1, 1), 6 * (q.pow(4) - q.pow(3))),
        ((2, 1), 6 * (q.pow(5) - q.pow(4))),
        ((2, 2), 15 * (q.pow(5) - 2 * q.pow(4) + q.pow(3))),
    ];
    let mut parts = Vec::new();
    for ((s, tt), size) in expected {
        let book = sx_codebook(t, &h, &d, s, tt, DEFAULT_ENUMERATION_BUDGET).map_err(err)?;
        let stats = sx_stats(t, &book, Some(&group), DEFAULT_PAIR_BUDGET).map_err(err)?;
        let sum: u128 = book.census().iter().map(|c| c.size).sum();
        ensure(book.disjoint(), format!("({s},{tt}): sets overlap"))?;
        ensure(sum == size && stats.size_s == size, format!("({s},{tt}): |S| = {}, expected {size}", stats.size_s))?;
        ensure(stats.gamma_invariant == Some(true), format!("({s},{tt}): not invariant"))?;
        parts.push(format!("({s},{tt}) |S|={size} |C|={}", stats.size_c));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.1?}", parts.join(", ")))
}

fn c10_stretch(t: &TowerCtx) -> Check {
    let r = closure_compute(t, 2).map_err(err)?;
    let (t2, degree) = (r.t, r.degree_over_e0);
    ensure(degree == 2 * 9 * 3u128.pow(t2 as u32), format!("[E2:E0] = {degree}"))?;
    let out = verify_closure_ledger(t, &[r]);
    for item in ["d", "f", "h"] {
        let o = out.iter().find(|o| o.item == item).unwrap();
        ensure(o.status == Status::Pass, format!("item {item}: {}", o.detail))?;
    }
    Ok(format!("t(2) = {t2}, [E2:E0] = {degree}, items d/f/h pass"))
}

fn main() -> ExitCode {
    let t = TowerCtx::new(9).expect("GF(9)");
    let criteria: [Criterion; 10] = [
        (1, true, c1_closure),
        (2, true, c2_self_dual),
        (3, true, c3_transitive),
        (4, true, c4_duality),
        (5, true, c5_residues),
        (6, true, c6_riemann_roch),
        (7, true, c7_sweep),
        (8, true, c8_bounds),
        (9, true, c9_sx),
        (10, false, c10_stretch),
    ];
    let mut failed = 0;
    for (id, blocking, run) in criteria {
        match run(&t) {
            Ok(detail) => println!("acceptance {id:>2}: PASS  {detail}"),
            Err(why) => {
                let tag = if blocking { "FAIL" } else { "FAIL (non-blocking)" };
                println!("acceptance {id:>2}: {tag}  {why}");
                failed += usize::from(blocking);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
