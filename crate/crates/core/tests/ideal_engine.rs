use gal_core::arith::BaseField;
use gal_core::ideal::{
    eliminate, groebner_basis, ideal_membership, radical, radical_membership, saturate, verify_radical, Ideal,
    MonomialOrder, MultiPoly, PolyRing,
};
use proptest::prelude::*;

fn q(vars: &[&str]) -> PolyRing {
    PolyRing::new(BaseField::Rationals, vars)
}

fn ideal(r: &PolyRing, gens: &[&str]) -> Ideal {
    Ideal::parse(r, gens).unwrap()
}

#[test]
fn groebner_examples() {
    let r = q(&["x", "y"]);
    let gb = groebner_basis(&ideal(&r, &["x", "y"]), &MonomialOrder::Lex).unwrap();
    assert_eq!(gb, r.parse_list(&["x", "y"]).unwrap());

    let i = ideal(&r, &["x^2 - 1", "x*y - 1"]);
    let gb = groebner_basis(&i, &MonomialOrder::Lex).unwrap();
    assert_eq!(gb, r.parse_list(&["x - y", "y^2 - 1"]).unwrap());
    // reduce both ways
    let out = Ideal::new(&r, gb).unwrap();
    assert!(i.gens().iter().all(|g| out.contains(g)));
    assert!(out.gens().iter().all(|g| i.contains(g)));

    assert!(groebner_basis(&Ideal::new(&r, vec![r.zero()]).unwrap(), &MonomialOrder::Lex).unwrap().is_empty());
}

#[test]
fn membership_examples() {
    let r = q(&["x", "y"]);
    assert!(ideal_membership(&r.parse("x^2").unwrap(), &ideal(&r, &["x"])).unwrap());
    assert!(ideal_membership(&r.one(), &ideal(&r, &["x", "x - 1"])).unwrap());
    let i = ideal(&r, &["y - x", "x^2 - x"]);
    let f = r.parse("y^2 - x^3").unwrap();
    assert!(ideal_membership(&f, &i).unwrap());
    // points of V(I) are (0,0) and (1,1): f vanishes there
    for p in [[0i64, 0], [1, 1]] {
        let pt: Vec<_> = p.iter().map(|&v| r.field.int(v)).collect();
        assert!(f.eval(&pt).is_zero());
    }
    let other = PolyRing::new(BaseField::Rationals, &["x"]);
    assert!(ideal_membership(&other.parse("x").unwrap(), &i).is_err());
}

#[test]
fn elimination_examples() {
    let r = q(&["x", "y", "z"]);
    let el = eliminate(&ideal(&r, &["y - x^2", "z - x^3"]), &[0]);
    assert!(el.contains(&r.parse("z^2 - y^3").unwrap()));
    assert!(el.gens().iter().all(|g| g.degree_in(0) == 0));
    let r2 = q(&["x", "y"]);
    assert!(eliminate(&ideal(&r2, &["x"]), &[1]).same_as(&ideal(&r2, &["x"])));
    assert!(eliminate(&ideal(&r2, &["x"]), &[0]).is_zero());
}

#[test]
fn saturation_examples() {
    let r = q(&["t", "x", "y"]);
    let y = r.parse("y").unwrap();
    let t = r.parse("t").unwrap();
    let s = saturate(&ideal(&r, &["x^2*y"]), &y).unwrap();
    assert!(s.same_as(&ideal(&r, &["x^2"])));
    // oracle: iterate single quotients until stable
    let mut cur = ideal(&r, &["x^2*y"]);
    loop {
        let next = cur.quotient(&y).unwrap();
        if next.same_as(&cur) {
            break;
        }
        cur = next;
    }
    assert!(cur.same_as(&s));
    assert!(saturate(&ideal(&r, &["x"]), &t).unwrap().same_as(&ideal(&r, &["x"])));
    assert!(saturate(&ideal(&r, &["t*x"]), &t).unwrap().same_as(&ideal(&r, &["x"])));
    assert!(saturate(&ideal(&r, &["x"]), &r.zero()).is_err());
}

#[test]
fn radical_examples() {
    let r = q(&["x", "y"]);
    for (gens, expect) in [(&["x^2"][..], &["x"][..]), (&["x^2*y^3"], &["x*y"]), (&["x^2", "x*y"], &["x"])] {
        let i = ideal(&r, gens);
        let rad = radical(&i).unwrap();
        assert!(rad.same_as(&ideal(&r, expect)), "{i} -> {rad}");
        assert!(verify_radical(&i, &rad));
        assert!(radical(&rad).unwrap().same_as(&rad));
    }
    let r = q(&["t", "x"]);
    let i = ideal(&r, &["x^2"]);
    assert!(radical_membership(&r.parse("x").unwrap(), &i).unwrap());
    assert!(!radical_membership(&r.parse("t").unwrap(), &i).unwrap());
    assert!(radical_membership(&r.parse("t").unwrap(), &ideal(&r, &["t^2"])).unwrap());
}

#[test]
fn intersection_and_quotient() {
    let r = q(&["x", "y"]);
    let a = ideal(&r, &["x"]);
    let b = ideal(&r, &["y"]);
    assert!(a.intersect(&b).same_as(&ideal(&r, &["x*y"])));
    assert!(ideal(&r, &["x*y", "x^2"]).quotient(&r.parse("x").unwrap()).unwrap().same_as(&ideal(&r, &["x", "y"])));
}

// ---- property suites ----

fn small_poly(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u16..3, nvars), -3i64..4), 1..4)
}

fn build(r: &PolyRing, terms: &[(Vec<u16>, i64)]) -> MultiPoly {
    let mut p = r.zero();
    for (e, c) in terms {
        p.add_term(gal_core::ideal::Monomial::from_slice(e), r.field.int(*c));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn groebner_is_independent_of_generator_order(
        gens in prop::collection::vec(small_poly(3), 1..4),
        seed in any::<u64>(),
    ) {
        let r = q(&["x", "y", "z"]);
        let mut polys: Vec<MultiPoly> = gens.iter().map(|g| build(&r, g)).collect();
        let a = groebner_basis(&Ideal::new(&r, polys.clone()).unwrap(), &MonomialOrder::Grevlex).unwrap();
        let k = polys.len();
        polys.rotate_left((seed as usize) % k);
        polys.reverse();
        let b = groebner_basis(&Ideal::new(&r, polys).unwrap(), &MonomialOrder::Grevlex).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn membership_is_an_ideal_property(f in small_poly(2), g in small_poly(2), h in small_poly(2)) {
        let r = q(&["x", "y"]);
        let i = Ideal::new(&r, vec![build(&r, &h), r.parse("x^2 - y").unwrap()]).unwrap();
        let fi = build(&r, &f).mul(&build(&r, &h));
        prop_assert!(i.contains(&fi));
        prop_assert!(i.contains(&fi.mul(&build(&r, &g))));
    }

    #[test]
    fn saturation_is_idempotent_and_monotone(gens in prop::collection::vec(small_poly(3), 1..3), f in small_poly(3)) {
        let r = q(&["t", "x", "y"]);
        let f = build(&r, &f);
        prop_assume!(!f.is_zero());
        let i = Ideal::new(&r, gens.iter().map(|g| build(&r, g)).collect()).unwrap();
        let s = saturate(&i, &f).unwrap();
        prop_assert!(s.contains_ideal(&i));
        prop_assert!(saturate(&s, &f).unwrap().same_as(&s));
    }

    #[test]
    fn radical_membership_agrees_with_powers(gens in prop::collection::vec(small_poly(2), 1..3), f in small_poly(2)) {
        let r = q(&["x", "y"]);
        let i = Ideal::new(&r, gens.iter().map(|g| build(&r, g)).collect()).unwrap();
        let f = build(&r, &f);
        let mut p = f.clone();
        let mut brute = false;
        for _ in 0..8 {
            if i.contains(&p) {
                brute = true;
                break;
            }
            p = p.mul(&f);
        }
        if brute {
            prop_assert!(i.radical_contains(&f));
        }
    }
}
