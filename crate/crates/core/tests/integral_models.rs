use gal_core::arith::BaseField;
use gal_core::ideal::{Ideal, Monomial, MultiPoly};
use gal_core::models::{
    ga_membership, ga_sections, normalize, place_witness_search, verify_chart, Chart, LaurentElement,
    MembershipCertificate,
};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: BaseField = BaseField::Rationals;

fn chart(vars: &[&str], gens: &[&str]) -> Chart {
    Chart::new(Q, vars, gens).unwrap()
}

fn curve_charts() -> Vec<Chart> {
    vec![
        chart(&["x"], &[]).named("line"),
        chart(&["x"], &["x^2 - t"]).named("ramified"),
        chart(&["x", "y"], &["y^2 - x^3 - t"]).named("cusp-fiber"),
        chart(&["x", "y"], &["x*y - t"]).named("node-fiber"),
        chart(&["x", "y"], &["y^2 - t*x"]).named("cone"),
    ]
}

fn r0() -> Rational64 {
    Rational64::from_integer(0)
}

#[test]
fn verify_chart_examples() {
    let d = verify_chart(&chart(&["x"], &["x^2 - t"]));
    assert!(d.t_torsion_free);
    assert_eq!(d.generic_fiber_smooth, Some(true));
    assert!(!verify_chart(&chart(&["x"], &["t*x"])).t_torsion_free);
    assert!(verify_chart(&chart(&["x"], &[])).all_pass());
}

fn fraction_is(c: &Chart, n: &gal_core::models::NormalizationData, num: &str, den: &str) -> bool {
    let r = c.ring();
    let (num, den) = (r.parse(num).unwrap(), r.parse(den).unwrap());
    n.fractions.iter().any(|f| c.ideal().contains(&f.num.mul(&den).sub(&f.den.mul(&num))))
}

#[test]
fn normalization_examples() {
    let cusp = chart(&["x", "y"], &["y^2 - x^3"]);
    let n = normalize(&cusp).unwrap();
    assert!(n.verify());
    assert_eq!(n.generators(cusp.ring()).len(), 2);
    assert!(fraction_is(&cusp, &n, "y", "x"));
    // (y/x)^2 = x
    let tvar = n.ring.var(n.base_vars);
    assert!(n.ideal.contains(&tvar.pow(2).sub(&n.ring.parse("x").unwrap())));

    let line = chart(&["x"], &[]);
    assert!(normalize(&line).unwrap().is_trivial());

    let nodal = chart(&["x", "y"], &["y^2 - x^2*(x + 1)"]);
    let n = normalize(&nodal).unwrap();
    assert!(n.verify());
    assert!(fraction_is(&nodal, &n, "y", "x"));
    let tvar = n.ring.var(n.base_vars);
    assert!(n.ideal.contains(&tvar.pow(2).sub(&n.ring.parse("x + 1").unwrap())));
}

#[test]
fn normalization_is_idempotent() {
    for gens in [&["y^2 - x^3"][..], &["y^2 - x^2*(x + 1)"], &["x^2 - t"]] {
        let c = chart(&["x", "y"], gens);
        let n = normalize(&c).unwrap();
        let again = Chart::from_ideal(n.ideal.clone()).unwrap();
        assert!(normalize(&again).unwrap().is_trivial(), "{c}");
    }
}

#[test]
fn ga_sections_examples() {
    let line = chart(&["x"], &[]);
    let g = ga_sections(&line, 0).unwrap();
    assert_eq!(g.fmt_generators(), vec!["t"]);
    let ram = chart(&["x"], &["x^2 - t"]);
    assert_eq!(ga_sections(&ram, 0).unwrap().fmt_generators(), vec!["x"]);
    // r = 1 on the line: the module generated by t^2
    let g1 = ga_sections(&line, 1).unwrap();
    let t2 = line.parse("t^2").unwrap();
    assert!(g1.contains(&t2, 0));
    for (num, tp) in g1.sections() {
        let ideal = Ideal::new(line.ring(), vec![t2.clone()]).unwrap();
        assert!(tp <= 0 && ideal.contains(&num.mul(&line.t().pow((-tp) as u32))));
    }
}

#[test]
fn ga_membership_examples() {
    let ram = chart(&["x"], &["x^2 - t"]);
    let x = LaurentElement::poly(ram.parse("x").unwrap());
    let m = ga_membership(&x, &ram, r0()).unwrap();
    assert!(m.member);
    assert!(matches!(m.certificate, MembershipCertificate::Radical { power: Some(_) }));
    for c in curve_charts() {
        let t = LaurentElement::poly(c.t());
        assert!(ga_membership(&t, &c, r0()).unwrap().member);
        let one = LaurentElement::poly(c.ring().one());
        assert!(!ga_membership(&one, &c, r0()).unwrap().member);
    }
    let sing = chart(&["x", "y"], &["y^2 - x^3"]);
    assert!(ga_membership(&LaurentElement::poly(sing.t()), &sing, r0()).is_err());
}

#[test]
fn witness_examples() {
    let line = chart(&["x"], &[]);
    let a = LaurentElement::poly(line.parse("x").unwrap());
    let w = place_witness_search(&a, &line, r0(), 6).unwrap();
    let w = w.witness().unwrap();
    assert_eq!(w.value, r0());

    let ram = chart(&["x"], &["x^2 - t"]);
    let a = LaurentElement::poly(ram.parse("x").unwrap());
    assert!(place_witness_search(&a, &ram, r0(), 6).unwrap().witness().is_none());
    for c in curve_charts() {
        let one = LaurentElement::poly(c.ring().one());
        assert_eq!(place_witness_search(&one, &c, r0(), 6).unwrap().witness().unwrap().value, r0());
    }
    let plane3 = chart(&["x", "y", "z"], &["x - y"]);
    assert!(place_witness_search(&a_of(&plane3), &plane3, r0(), 2).is_err());
}

fn a_of(c: &Chart) -> LaurentElement {
    LaurentElement::poly(c.ring().one())
}

fn random_poly(c: &Chart, rng: &mut ChaCha8Rng) -> MultiPoly {
    let n = c.ring().nvars();
    let mut p = c.ring().zero();
    for _ in 0..rng.gen_range(1..4) {
        let e: Vec<u16> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        p.add_term(Monomial::from_slice(&e), Q.int(rng.gen_range(-3..4)));
    }
    p
}

#[test]
fn membership_and_witnesses_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let twists = [r0(), Rational64::new(1, 2), Rational64::from_integer(1), Rational64::from_integer(-1)];
    for c in curve_charts() {
        let mut done = 0;
        while done < 50 {
            let p = random_poly(&c, &mut rng);
            if c.ideal().contains(&p) {
                continue;
            }
            let a = LaurentElement::new(p, rng.gen_range(0..2));
            let r = twists[rng.gen_range(0..twists.len())];
            let m = ga_membership(&a, &c, r).unwrap();
            let w = place_witness_search(&a, &c, r, 6).unwrap();
            if m.member {
                assert!(w.witness().is_none(), "{}: {} r={r} witness {}", c.name(), a.fmt_in(c.ring()), w.witness().unwrap());
            } else {
                let w = w.witness().unwrap_or_else(|| panic!("{}: no witness for {} r={r}", c.name(), a.fmt_in(c.ring())));
                assert!(w.value <= r);
            }
            done += 1;
        }
    }
}

#[test]
fn shift_and_sandwich() {
    for c in curve_charts() {
        for r in [-1i64, 0, 1, 2] {
            let lo = ga_sections(&c, r).unwrap();
            let hi = ga_sections(&c, r + 1).unwrap();
            // hi = t * lo
            for (g, tp) in hi.sections() {
                assert!(lo.contains(&g, tp + 1) && hi.contains(&g, tp));
            }
            for (g, tp) in lo.sections() {
                assert!(hi.contains(&g, tp - 1));
            }
        }
        let g0 = ga_sections(&c, 0).unwrap();
        let one = g0.ring.one();
        // t·Ā ⊆ G_a(0) ⊆ Ā
        assert!(g0.contains(&g0.ring.var(0), 0));
        assert!(!g0.contains(&one, 0));
        let gm1 = ga_sections(&c, -1).unwrap();
        for (g, tp) in g0.sections() {
            assert!(gm1.contains(&g, tp));
        }
        assert!(gm1.contains(&one, 0));
    }
}

#[test]
fn sections_localize() {
    for c in curve_charts() {
        let f = c.ring().var(1).add(&c.ring().one());
        let cf = c.localize(&f).unwrap();
        let g = ga_sections(&c, 0).unwrap();
        let gf = ga_sections(&cf, 0).unwrap();
        assert!(normalize(&c).unwrap().is_trivial() && normalize(&cf).unwrap().is_trivial());
        let images: Vec<MultiPoly> = g.generators.iter().map(|p| p.extend(1)).collect();
        let a = cf.ideal().with(&images);
        let b = cf.ideal().with(&gf.generators);
        assert!(a.same_as(&b), "{}", c.name());
    }
}
