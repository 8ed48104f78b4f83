use gal_core::arith::{BaseField, Scalar, UPoly};
use gal_core::lattice::linalg::{Echelon, SparseVec};
use gal_core::lattice::*;
use proptest::prelude::*;

const Q: BaseField = BaseField::Rationals;

fn w(d: u32) -> Window {
    Window::new(d, 4).unwrap()
}

fn pn(n: usize) -> ProjModel {
    let vars = ["X", "Y", "Z", "W"];
    build_proj_model(Q, &vars[..=n], &[]).unwrap().named(format!("P{n}"))
}

fn e5() -> ProjModel {
    let f5 = BaseField::prime(5).unwrap();
    build_proj_model(f5, &["X", "Y", "Z"], &["Y^2*Z - X^3 - X*Z^2 - Z^3"]).unwrap().named("E5")
}

fn e7() -> ProjModel {
    let f7 = BaseField::prime(7).unwrap();
    build_proj_model(f7, &["X", "Y", "Z"], &["Y^2*Z - X^3 - Z^3"]).unwrap().named("E7")
}

#[test]
fn window_dimension_counts() {
    let c = cech_complex(&pn(1), Sheaf::Structure, Window::new(2, 3).unwrap()).unwrap();
    // two charts, sections u^a t^v with a <= D, v < N
    let oracle: usize = 2 * (0..=2).count() * (0..3).count();
    assert_eq!(c.k_dimension(0), oracle);
}

#[test]
fn ga_of_smooth_model_is_t_times_structure() {
    for m in [pn(1), pn(2), e5()] {
        let o = cech_complex(&m, Sheaf::Structure, w(2)).unwrap();
        let g = cech_complex(&m, Sheaf::Ga(0), w(2)).unwrap();
        assert_eq!(o.dims, g.dims);
        let t = Scalar::t_pow(m.field(), 1);
        for p in 0..g.dims.len() {
            for j in 0..g.dims[p] {
                let x = g.to_ambient(p, &[(j, Scalar::one(m.field()))]);
                assert_eq!(x, vec![(j, t.clone())]);
            }
        }
    }
}

#[test]
fn complexes_are_complexes() {
    let conic = build_proj_model(Q, &["X", "Y", "Z"], &["X^2 - t*Y*Z"]).unwrap();
    for m in [pn(2), e7(), conic] {
        for d in 1..=3 {
            for sheaf in [Sheaf::Structure, Sheaf::Ga(0), Sheaf::Ga(1)] {
                let c = cech_complex(&m, sheaf, w(d)).unwrap();
                for p in 1..c.d.len() {
                    assert!(c.d[p].compose(&c.d[p - 1]).is_zero());
                }
                for p in 0..c.d.len() {
                    let lhs = c.d[p].compose(&c.t_action(p));
                    let rhs = c.t_action(p + 1).compose(&c.d[p]);
                    assert_eq!(lhs.to_dense(), rhs.to_dense());
                }
            }
        }
    }
}

#[test]
fn euler_characteristic_matches_generic_ranks() {
    for m in [pn(1), pn(2), e5()] {
        for d in 1..=2 {
            let c = cech_complex(&m, Sheaf::Structure, w(d)).unwrap();
            let chi: i64 = c.dims.iter().enumerate().map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
            let h: i64 = (0..c.dims.len())
                .map(|i| {
                    let r = Cohomology::of_complex(&c, i).rank as i64;
                    if i % 2 == 0 {
                        r
                    } else {
                        -r
                    }
                })
                .sum();
            assert_eq!(chi, h, "{} D={d}", m.name());
        }
    }
}

#[test]
fn projective_space_lattices() {
    for n in [1, 2] {
        let m = pn(n);
        let h0 = cohomology_lattice(&m, 0, 0, w(1), 1).unwrap();
        assert_eq!((h0.rank, h0.torsion.clone(), h0.certified), (1, vec![], true));
        assert_eq!(h0.image, vec![vec![Scalar::t_pow(Q, 1)]]);
        assert!(h0.basis[0].starts_with("[X] t;"), "{}", h0.basis[0]);
        for i in 1..=n {
            let h = cohomology_lattice(&m, i, 0, w(1), 1).unwrap();
            assert_eq!((h.rank, h.torsion.len(), h.certified), (0, 0, true));
        }
        let g = generic_fiber_cohomology(&m, 0, w(1), 1).unwrap();
        assert_eq!(g.dimension, 1);
        assert!(g.certified);
        assert!(compare_generic(&h0, &g));
    }
    let g = generic_fiber_cohomology(&pn(2), 1, w(1), 1).unwrap();
    assert_eq!(g.dimension, 0);
    let h = cohomology_lattice(&pn(2), 1, 0, w(1), 1).unwrap();
    assert!(compare_generic(&h, &g));
}

#[test]
fn elliptic_curve_lattices() {
    for e in [e5(), e7()] {
        let h1 = cohomology_lattice(&e, 1, 0, w(1), 1).unwrap();
        assert_eq!((h1.rank, h1.torsion.clone(), h1.certified), (1, vec![], true));
        // lattice = t·H^1 of the special fiber: its generic coordinate has valuation one
        assert_eq!(h1.image[0][0].val(), Some(1));
        let g = generic_fiber_cohomology(&e, 1, w(1), 1).unwrap();
        assert_eq!(g.dimension, 1);
        assert!(compare_generic(&h1, &g));
        let h2 = cohomology_lattice(&e, 2, 0, w(1), 1).unwrap();
        assert_eq!(h2.rank, 0);
    }
}

#[test]
fn uncertified_without_doubling() {
    let h = cohomology_lattice(&pn(1), 0, 0, w(1), 0).unwrap();
    assert!(!h.certified);
    assert_eq!(h.rank, 1);
}

#[test]
fn non_reduced_fiber() {
    let conic = build_proj_model(Q, &["X", "Y", "Z"], &["X^2 - t*Y*Z"]).unwrap();
    let h0 = cohomology_lattice(&conic, 0, 0, w(1), 1).unwrap();
    assert_eq!((h0.rank, h0.certified), (1, true));
    assert_eq!(h0.image[0][0].val(), Some(1));
    // G_a(-1) contains the constants
    let hm = cohomology_lattice(&conic, 0, -1, w(1), 1).unwrap();
    assert_eq!(hm.image[0][0].val(), Some(0));
    let split = build_proj_model(Q, &["X", "Y", "Z"], &["X*Y - t*Z^2"]).unwrap();
    let h = cohomology_lattice(&split, 0, 0, w(1), 1).unwrap();
    assert_eq!((h.rank, h.image[0][0].val()), (1, Some(1)));
}

fn one_by_one(m: &[Vec<Scalar>]) -> Scalar {
    assert_eq!((m.len(), m[0].len()), (1, 1));
    m[0][0].clone()
}

#[test]
fn actions_on_elliptic_curves() {
    let e = e5();
    let id = Morphism::identity(&e);
    let a = morphism_action(&id, 1, 0, w(1), 1).unwrap();
    assert!(one_by_one(&a.lattice).is_one());
    let inv = Morphism::parse(&e, &e, &["X", "-Y", "Z"]).unwrap();
    let a = morphism_action(&inv, 1, 0, w(1), 1).unwrap();
    assert_eq!(one_by_one(&a.lattice), Scalar::int(e.field(), -1));
    assert_eq!(a.lattice, a.generic);
    assert!(a.preserves && a.commutes && a.certified && a.charpoly.integral);
    let q = quasi_unipotence_check(&a.charpoly.coeffs).unwrap();
    assert_eq!(q.order, Some(2));

    let e = e7();
    let zeta = Morphism::parse(&e, &e, &["2*X", "Y", "Z"]).unwrap();
    let a = morphism_action(&zeta, 1, 0, w(1), 1).unwrap();
    let omega = one_by_one(&a.lattice).as_constant().unwrap().residue().unwrap();
    assert!(omega == 2 || omega == 4);
    // the two ways of computing agree, and omega is a primitive cube root of unity
    assert_eq!(a.lattice, a.generic);
    assert_eq!((omega * omega * omega) % 7, 1);
    assert!(a.charpoly.integral && a.certified);
    assert_eq!(quasi_unipotence_check(&a.charpoly.coeffs).unwrap().order, Some(3));
}

#[test]
fn actions_compose() {
    let e = e7();
    let zeta = Morphism::parse(&e, &e, &["2*X", "Y", "Z"]).unwrap();
    let inv = Morphism::parse(&e, &e, &["X", "-Y", "Z"]).unwrap();
    let pairs = [(zeta.clone(), zeta.clone()), (zeta.clone(), inv.clone()), (inv.clone(), zeta.clone())];
    for (f, g) in pairs {
        let gf = f.then(&g).unwrap();
        let af = morphism_action(&f, 1, 0, w(1), 0).unwrap();
        let ag = morphism_action(&g, 1, 0, w(1), 0).unwrap();
        let agf = morphism_action(&gf, 1, 0, w(1), 0).unwrap();
        let prod = one_by_one(&af.lattice).mul(&one_by_one(&ag.lattice));
        assert_eq!(one_by_one(&agf.lattice), prod);
    }
    // on P^1 × P^1, swapping factors composes to the identity
    let p = build_proj_model(Q, &["X", "Y"], &[]).unwrap();
    let pp = gal_core::lattice::product_with_p1(&p).unwrap();
    let v: Vec<String> = pp.ring().vars[1..].to_vec();
    let swap = Morphism::parse(&pp, &pp, &[&v[2], &v[3], &v[0], &v[1]]).unwrap();
    let twice = swap.then(&swap).unwrap();
    let a = morphism_action(&twice, 0, 0, w(1), 0).unwrap();
    assert!(one_by_one(&a.lattice).is_one());
}

#[test]
fn bad_morphisms_are_rejected() {
    let e = e7();
    // does not preserve the curve
    assert!(Morphism::parse(&e, &e, &["3*X", "Y", "Z"]).is_err());
    // inhomogeneous
    assert!(Morphism::parse(&e, &e, &["X^2", "Y", "Z"]).is_err());
}

#[test]
fn charpoly_examples() {
    let f5 = BaseField::prime(5).unwrap();
    let r = charpoly_integrality(f5, &[vec![Scalar::int(f5, -1)]]);
    assert_eq!(r.to_string(), "T + 1");
    assert!(r.integral);
    let q = quasi_unipotence_check(&r.coeffs).unwrap();
    assert_eq!(q.order, Some(2));

    let inv_t = Scalar::t_pow(Q, -1);
    let r = charpoly_integrality(Q, &[vec![inv_t]]);
    assert!(!r.integral);
    assert_eq!(r.coeffs[0].val(), Some(-1));

    // T - t(1 + t) reduces to T
    let f7 = BaseField::prime(7).unwrap();
    let u = Scalar::from_upoly(UPoly::from_coeffs(f7, vec![f7.zero(), f7.one(), f7.one()]));
    let q = quasi_unipotence_check(&[u.neg(), Scalar::one(f7)]).unwrap();
    assert!(!q.quasi_unipotent);

    // order of 2 in F_7^x by direct powering
    let order = (1..7u64).find(|k| (2u64.pow(*k as u32)) % 7 == 1).unwrap();
    let q = quasi_unipotence_check(&[Scalar::int(f7, -2), Scalar::one(f7)]).unwrap();
    assert_eq!(q.order, Some(order));
}

#[test]
fn invariance_suite_on_p1_and_p2() {
    let cfg = InvarianceConfig { window: w(1), rounds: 1, twist: 0, center: None };
    let rep = invariance_suite(&pn(1), &cfg).unwrap();
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["blowup", "p1-product", "shift", "sandwich"]);
    assert!(rep.all_passed(), "{rep}");

    let p2 = pn(2);
    let r = p2.ring();
    let cfg = InvarianceConfig { center: Some(vec![r.parse("X").unwrap(), r.parse("Y").unwrap()]), ..cfg };
    let rep = invariance_suite(&p2, &cfg).unwrap();
    assert!(rep.checks[0].passed, "{rep}");
}

#[test]
fn invariance_suite_on_elliptic_curve() {
    let rep = invariance_suite(&e5(), &InvarianceConfig::default()).unwrap();
    assert!(rep.all_passed(), "{rep}");
}

fn det(m: &[Vec<Scalar>], field: BaseField) -> Scalar {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Scalar::zero(field);
    for j in 0..n {
        let minor: Vec<Vec<Scalar>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = m[0][j].mul(&det(&minor, field));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n)).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
}

/// Minimal valuation of the k×k minors.
fn determinantal_valuation(m: &[Vec<Scalar>], k: usize, field: BaseField) -> Option<i64> {
    let mut best: Option<i64> = None;
    for rows in subsets(m.len(), k) {
        for cols in subsets(m[0].len(), k) {
            let sub: Vec<Vec<Scalar>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
            if let Some(v) = det(&sub, field).val() {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
    }
    best
}

fn scalar_from(field: BaseField, c: &[i64]) -> Scalar {
    Scalar::from_upoly(UPoly::from_coeffs(field, c.iter().map(|&x| field.int(x)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_invariants_match_determinantal_divisors(
        entries in proptest::collection::vec(proptest::collection::vec(-2i64..3, 3), 9),
        nrows in 1usize..4,
    ) {
        let f = BaseField::prime(5).unwrap();
        let m: Vec<Vec<Scalar>> = (0..nrows).map(|i| (0..3).map(|j| {
            let c = &entries[i * 3 + j];
            // bias towards positive valuations
            scalar_from(f, &[c[0] * (c[0] % 2), c[1], c[2]])
        }).collect()).collect();
        let rows: Vec<SparseVec> = m.iter().map(|r| r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect()).collect();
        let ech = Echelon::new(f, rows, 3);
        let mut inv = ech.invariant_valuations();
        inv.sort();
        let mut acc = 0i64;
        for k in 1..=nrows.min(3) {
            let d = determinantal_valuation(&m, k, f);
            if k <= inv.len() {
                acc += inv[k - 1];
                prop_assert_eq!(d, Some(acc));
            } else {
                prop_assert_eq!(d, None);
            }
        }
    }
}
