use proptest::prelude::*;

use super::*;

fn e(v: u32) -> Elem {
    Elem(v)
}

fn tower9() -> TowerCtx {
    TowerCtx::new(9).unwrap()
}

/// Level-1 function with polynomial coefficients drawn from `seed`.
fn sample_func(t: &TowerCtx, seed: &[u32], den_root: Option<u32>) -> TowerFunc {
    let f = t.field();
    let ell = t.ell() as usize;
    let coeffs = (0..ell)
        .map(|j| {
            let c: Vec<Elem> = (0..3).map(|i| e(seed[(3 * j + i) % seed.len()] % f.q())).collect();
            let num = Poly::new(f, c);
            let den = match den_root {
                Some(r) if j == 0 => Poly::linear(f, e(r % f.q())),
                _ => Poly::one(f),
            };
            RatFunc::new(num, den)
        })
        .collect();
    TowerFunc::new(1, coeffs)
}

#[test]
fn splitting_places_of_f0_in_fixed_order() {
    let t = tower9();
    let d = t.places_over(Locus::ZOne, 0).unwrap();
    let xs: Vec<u32> = d.iter().map(|p| p.x0().unwrap().to_int()).collect();
    // 2, 2+i, 2+2i, 1, 1+i, 1+2i in the integer encoding c0 + 3 c1
    assert_eq!(xs, vec![2, 5, 8, 1, 4, 7]);
}

#[test]
fn splitting_places_of_f1() {
    let t = tower9();
    let d = t.places_over(Locus::ZOne, 1).unwrap();
    assert_eq!(d.len(), 18);
    assert!(d.iter().all(|p| p.e_profile().iter().all(|&x| x == 1)));
}

#[test]
fn place_over_w_infinity_is_totally_ramified_over_fw() {
    let t = tower9();
    let b = t.places_over(Locus::WInf, 0).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].e_profile()[1], 3);
    assert_eq!(b[0].d_profile()[1], 4);
    let b1 = t.places_over(Locus::ZInf, 1).unwrap();
    assert_eq!(b1[0].e_profile(), &[2, 3, 3]);
}

#[test]
fn rational_place_count_matches_coordinate_scan() {
    for q in [4u64, 9, 16, 25] {
        let t = TowerCtx::new(q).unwrap();
        let f = t.field();
        let ell = t.ell() as u64;
        let mut count = 1 + t.branch_roots().len();
        for a in f.elements() {
            let Some(ua) = t.u_at(a) else { continue };
            count += f.elements().filter(|&b| f.add(f.pow(b, ell), b) == ua).count();
        }
        assert_eq!(t.rational_places(1).unwrap().len(), count, "q = {q}");
        let split = t.places_over(Locus::ZOne, 1).unwrap().len() as u64;
        assert_eq!(split, ell * ell * (ell - 1), "q = {q}");
    }
}

#[test]
fn level_two_is_not_explicit() {
    let t = tower9();
    assert_eq!(t.places_over(Locus::ZOne, 2), Err(Error::UnsupportedLevel { level: 2, max: 1 }));
    assert!(t.genus_level(2).is_err());
}

#[test]
fn valuations_at_infinity_of_f1() {
    let t = tower9();
    let inf = t.place_at_infinity(1).unwrap();
    assert_eq!(t.valuation(&t.x0(1), &inf).unwrap(), -3);
    let x = Poly::x(t.field());
    let h = t.base(1, RatFunc::from_poly(&x.pow(2) + &Poly::one(t.field())));
    assert_eq!(t.valuation(&t.mul(&t.x1(), &h), &inf).unwrap(), -7);
    assert_eq!(t.valuation(&t.constant(1, Elem::ZERO), &inf), Err(Error::ZeroFunction));
}

#[test]
fn w_has_simple_zeros_on_f0() {
    let t = tower9();
    let w = t.w(0);
    for p in t.places_over(Locus::WZero, 0).unwrap() {
        assert_eq!(t.valuation(&w, &p).unwrap(), 1);
    }
    let div = t.principal_divisor(&w).unwrap();
    let inf = t.place_at_infinity(0).unwrap();
    assert_eq!(div.coeff(&inf), -3);
    assert_eq!(div.positive_part().degree(), 3);
}

#[test]
fn divisor_of_one_minus_z() {
    let t = tower9();
    let one_minus_z = t.one(0).sub(&t.z(0));
    let div = t.principal_divisor(&one_minus_z).unwrap();
    let d = t.places_over(Locus::ZOne, 0).unwrap();
    let inf = t.place_at_infinity(0).unwrap();
    let expected = Divisor::sum_of(&d, 1).sub(&Divisor::from_place(&inf, 6));
    assert_eq!(div, expected);
    assert!(t.principal_divisor(&t.constant(0, e(4))).unwrap().is_zero());
}

#[test]
fn genus_by_hurwitz() {
    assert_eq!(tower9().genus_level(0).unwrap(), 0);
    assert_eq!(tower9().genus_level(1).unwrap(), 4);
    assert_eq!(TowerCtx::new(25).unwrap().genus_level(1).unwrap(), 16);
    assert_eq!(TowerCtx::new(4).unwrap().genus_level(1).unwrap(), 1);
}

#[test]
fn weierstrass_semigroup_at_infinity() {
    let t = tower9();
    let inf = t.place_at_infinity(1).unwrap();
    let x = Poly::x(t.field());
    let h = t.base(1, RatFunc::from_poly(&x.pow(2) + &Poly::one(t.field())));
    let gens = [t.x0(1), t.mul(&t.x1(), &h), t.mul(&t.pow(&t.x1(), 2), &h)];
    let orders: Vec<i64> = gens.iter().map(|g| -t.valuation(g, &inf).unwrap()).collect();
    assert_eq!(orders, vec![3, 7, 8]);
    // pole orders of monomials in the generators, checked against valuations
    let mut reached = std::collections::BTreeSet::new();
    for a in 0..6u64 {
        for b in 0..3u64 {
            for c in 0..3u64 {
                let m = t.mul(&t.mul(&t.pow(&gens[0], a), &t.pow(&gens[1], b)), &t.pow(&gens[2], c));
                let v = -t.valuation(&m, &inf).unwrap();
                assert_eq!(v, 3 * a as i64 + 7 * b as i64 + 8 * c as i64);
                reached.insert(v);
            }
        }
    }
    let gaps = (0..14).filter(|n| !reached.contains(n)).count();
    assert_eq!(gaps as u64, t.genus_level(1).unwrap());
}

#[test]
fn x1_expansion_satisfies_recursion() {
    let t = tower9();
    let f = t.field();
    for p in t.places_over(Locus::ZOne, 1).unwrap() {
        let c = p.coords();
        let s = t.x1_expansion(c[0], c[1], 20);
        let lhs = s.frobenius(3).truncate(20).add(&s);
        let rhs = t.u().expand_at(c[0], 20);
        for k in 0..20 {
            assert_eq!(lhs.coeff(k), rhs.coeff(k));
        }
        assert_eq!(t.evaluate(&t.x1(), &p).unwrap(), c[1]);
        assert_eq!(t.evaluate(&t.x0(1), &p).unwrap(), c[0]);
        let _ = f;
    }
}

#[test]
fn inverse_and_norm() {
    let t = tower9();
    let g = sample_func(&t, &[1, 4, 0, 2, 7, 3, 5, 0, 1], None);
    let gi = t.inv(&g).unwrap();
    assert_eq!(t.mul(&g, &gi), t.one(1));
    let n = t.norm(&t.x1());
    // x1 satisfies T^3 + T - u, so its norm is u (odd degree)
    assert_eq!(n, t.u().clone());
}

#[test]
fn principal_divisor_of_x1() {
    let t = tower9();
    let div = t.principal_divisor(&t.x1()).unwrap();
    assert_eq!(div.degree(), 0);
    // poles: the three totally ramified places, each of order 1
    assert_eq!(div.negative_part().degree(), 3);
    assert!(div.negative_part().terms().all(|(p, _)| p.is_ramified_over_base()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn valuation_axioms(a in prop::collection::vec(0u32..9, 9), b in prop::collection::vec(0u32..9, 9), r in 0u32..9, idx in 0usize..40) {
        let t = tower9();
        let f = sample_func(&t, &a, Some(r));
        let g = sample_func(&t, &b, None);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let places = t.rational_places(1).unwrap();
        let p = &places[idx % places.len()];
        let vf = t.valuation(&f, p).unwrap();
        let vg = t.valuation(&g, p).unwrap();
        prop_assert_eq!(t.valuation(&t.mul(&f, &g), p).unwrap(), vf + vg);
        let s = f.add(&g);
        if !s.is_zero() {
            prop_assert!(t.valuation(&s, p).unwrap() >= vf.min(vg));
        }
    }

    #[test]
    fn principal_divisors_have_degree_zero(a in prop::collection::vec(0u32..9, 9), r in 0u32..9) {
        let t = tower9();
        let f = sample_func(&t, &a, Some(r));
        prop_assume!(!f.is_zero());
        match t.principal_divisor(&f) {
            Ok(d) => prop_assert_eq!(d.degree(), 0),
            Err(Error::UnsupportedLocus(_)) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }
}
