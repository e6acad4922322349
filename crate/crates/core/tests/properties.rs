mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;

use obstruction_lab::elliptic::{to_weierstrass, torsion_subgroup, CurvePoint, WeierstrassCurve};
use obstruction_lab::exactarith::{jacobi, primitive_normalize, valuation, Integer, Rational};
use obstruction_lab::localsymbols::{hilbert_symbol, LocalInvariant, Place, Prime};
use obstruction_lab::multipoly::named::*;
use obstruction_lab::multipoly::MultiPoly;
use obstruction_lab::obstruction::{
    class_invariant_table, point_invariant_profile, residue_sieve, QuaternionAlgebraSpec,
    ResidueClass,
};
use obstruction_lab::padicsolve::{padic_solutions_exist, replay_witness, SolubilityAnswer};

const PLACES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn int(n: i64) -> Integer {
    Integer::from(n)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(int(n))
}

fn place(i: usize) -> Place {
    if i == PLACES.len() {
        Place::Real
    } else {
        Place::prime(PLACES[i]).unwrap()
    }
}

fn quartic_alg() -> QuaternionAlgebraSpec {
    QuaternionAlgebraSpec::new(&quartic_f() * &quartic_h(), -(&quartic_g() * &quartic_h())).unwrap()
}

fn cubic_alg() -> QuaternionAlgebraSpec {
    QuaternionAlgebraSpec::new(
        &MultiPoly::z() * &cubic_f(),
        &cubic_linear() * &MultiPoly::z(),
    )
    .unwrap()
}

fn nonzero(range: i64) -> impl Strategy<Value = i64> {
    (-range..=range).prop_filter("nonzero", |v| *v != 0)
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-20i64..=20, 0u32..=3, 0u32..=3, 0u32..=3), 0..6).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|(c, a, b, d)| (int(c), [a, b, d])))
    })
}

fn point() -> impl Strategy<Value = [i64; 3]> {
    [-30i64..=30, -30i64..=30, -30i64..=30]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn valuation_is_additive(a in nonzero(1 << 40), b in nonzero(1 << 40), pi in 0usize..6) {
        let p = int(PLACES[pi] as i64);
        let va = valuation(&int(a), &p).unwrap().valuation.unwrap();
        let vb = valuation(&int(b), &p).unwrap().valuation.unwrap();
        let vab = valuation(&(int(a) * int(b)), &p).unwrap().valuation.unwrap();
        prop_assert_eq!(vab, va + vb);
    }

    #[test]
    fn jacobi_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, n in 0i64..5_000) {
        let n = int(2 * n + 1);
        let lhs = jacobi(&(int(a) * int(b)), &n).unwrap();
        prop_assert_eq!(lhs, jacobi(&int(a), &n).unwrap() * jacobi(&int(b), &n).unwrap());
    }

    #[test]
    fn normalize_ignores_scaling(p in point(), num in nonzero(50), den in 1i64..50) {
        prop_assume!(p != [0, 0, 0]);
        let v = p.map(q);
        let lambda = Rational::new(int(num), int(den));
        let scaled = v.clone().map(|c| c * &lambda);
        prop_assert_eq!(primitive_normalize(&v).unwrap(), primitive_normalize(&scaled).unwrap());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), p in point()) {
        let at = p.map(int);
        prop_assert_eq!((&f + &g).evaluate_int(&at), f.evaluate_int(&at) + g.evaluate_int(&at));
        prop_assert_eq!((&f * &g).evaluate_int(&at), f.evaluate_int(&at) * g.evaluate_int(&at));
        prop_assert_eq!((&f - &f).evaluate_int(&at), Integer::zero());
    }

    #[test]
    fn homogeneous_forms_scale(p in point(), lambda in -9i64..=9) {
        for f in [quartic_f(), cubic_f(), quartic_g()] {
            let d = f.homogeneous_degree().unwrap();
            let at = p.map(int);
            let scaled = p.map(|c| int(c * lambda));
            prop_assert_eq!(f.evaluate_int(&scaled), f.evaluate_int(&at) * num_traits::pow(int(lambda), d as usize));
        }
    }

    #[test]
    fn canonical_form_is_order_independent(terms in prop::collection::vec((-5i64..=5, 0u32..=2, 0u32..=2, 0u32..=2), 0..8)) {
        let build = |t: &[(i64, u32, u32, u32)]| MultiPoly::from_terms(t.iter().map(|&(c, a, b, d)| (int(c), [a, b, d])));
        let mut rev = terms.clone();
        rev.reverse();
        let (f, g) = (build(&terms), build(&rev));
        prop_assert!(f.is_canonical());
        prop_assert_eq!(f, g);
    }

    #[test]
    fn hilbert_symbol_is_symmetric(a in nonzero(500), b in nonzero(500), i in 0usize..=6) {
        let v = place(i);
        prop_assert_eq!(hilbert_symbol(&q(a), &q(b), &v).unwrap(), hilbert_symbol(&q(b), &q(a), &v).unwrap());
    }

    #[test]
    fn hilbert_symbol_is_bimultiplicative(a in nonzero(300), a2 in nonzero(300), b in nonzero(300), i in 0usize..=6) {
        let v = place(i);
        let lhs = hilbert_symbol(&q(a * a2), &q(b), &v).unwrap();
        prop_assert_eq!(lhs, hilbert_symbol(&q(a), &q(b), &v).unwrap() * hilbert_symbol(&q(a2), &q(b), &v).unwrap());
    }

    #[test]
    fn hilbert_symbol_ignores_squares(a in nonzero(500), b in nonzero(500), c in nonzero(60), d in 1i64..60, i in 0usize..=6) {
        let v = place(i);
        let sq = Rational::new(int(c), int(d));
        let sq = &sq * &sq;
        prop_assert_eq!(hilbert_symbol(&(q(a) * sq), &q(b), &v).unwrap(), hilbert_symbol(&q(a), &q(b), &v).unwrap());
    }

    #[test]
    fn norm_relations(a in nonzero(1000), d in 1i64..50, i in 0usize..=6) {
        let v = place(i);
        let a = Rational::new(int(a), int(d));
        prop_assert_eq!(hilbert_symbol(&a, &-a.clone(), &v).unwrap(), 1);
        prop_assume!(!a.is_one());
        prop_assert_eq!(hilbert_symbol(&a, &(Rational::one() - &a), &v).unwrap(), 1);
    }

    #[test]
    fn padic_search_is_deterministic_and_sound(
        c in [-6i64..=6, -6i64..=6, -6i64..=6], t in nonzero(20), pi in 0usize..3
    ) {
        prop_assume!(c.iter().all(|x| *x != 0));
        let f = common::poly(&[(c[0], [2, 0, 0]), (c[1], [0, 2, 0]), (c[2], [0, 0, 2])]);
        let p = Prime::new(PLACES[pi]).unwrap();
        let a1 = padic_solutions_exist(&f, &int(t), &p, 5);
        let a2 = padic_solutions_exist(&f, &int(t), &p, 5);
        prop_assert_eq!(&a1, &a2);
        if let SolubilityAnswer::Yes { witness } = &a1 {
            prop_assert!(replay_witness(&f, &int(t), witness));
        }
    }

    #[test]
    fn quartic_profile_is_scaling_invariant(p in point(), lambda in 0i64..20) {
        let lambda = 2 * lambda + 1;
        let pt = p.map(int);
        let scaled = p.map(|c| int(c * lambda));
        let alg = quartic_alg();
        match (point_invariant_profile(&alg, &pt), point_invariant_profile(&alg, &scaled)) {
            (Ok(a), Ok(b)) => {
                let ramified = |pr: &obstruction_lab::obstruction::PointProfile| -> Vec<Place> {
                    pr.profile.invariants.iter().filter(|(_, i)| *i == LocalInvariant::Half).map(|(p, _)| p.clone()).collect()
                };
                prop_assert_eq!(ramified(&a), ramified(&b));
                prop_assert_eq!(a.profile.sum, b.profile.sum);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "scaling changed whether an entry vanishes"),
        }
    }

    #[test]
    fn profiles_satisfy_reciprocity(p in point(), which in 0usize..2) {
        let alg = if which == 0 { quartic_alg() } else { cubic_alg() };
        if let Ok(pr) = point_invariant_profile(&alg, &p.map(int)) {
            prop_assert_eq!(pr.profile.sum, LocalInvariant::Zero);
        }
    }

    #[test]
    fn quartic_classes_carry_half_at_every_point(idx in 0usize..512, k in [-40i64..40, -40i64..40, -40i64..40]) {
        // any primitive integer point in a sieve class, whatever f(P) is, has 2-adic invariant 1/2
        let classes = residue_sieve(&quartic_f(), 16, &int(1)).unwrap();
        let c = classes[idx];
        let p: [Integer; 3] = std::array::from_fn(|i| int(c.residues[i] as i64 + 16 * k[i]));
        let pr = point_invariant_profile(&quartic_alg(), &p);
        prop_assume!(pr.is_ok());
        let two = Place::prime(2).unwrap();
        prop_assert_eq!(pr.unwrap().profile.at(&two), Some(LocalInvariant::Half));
    }

    #[test]
    fn cubic_classes_carry_half_at_every_point(x in -200i64..200, y in -200i64..200, z in -200i64..200) {
        // P = (x, 0, 1) mod 2
        let p = [int(x), int(2 * y), int(2 * z + 1)];
        let pr = point_invariant_profile(&cubic_alg(), &p);
        prop_assume!(pr.is_ok());
        let two = Place::prime(2).unwrap();
        prop_assert_eq!(pr.unwrap().profile.at(&two), Some(LocalInvariant::Half));
    }

    #[test]
    fn group_law_axioms(i in 1usize..6, j in 1usize..6, k in 1usize..6) {
        // v^2 = u^3 - 2 has the point (3, 5) of infinite order
        let e = WeierstrassCurve::new(int(0), int(0), int(-2)).unwrap();
        let g = CurvePoint::affine(3, 5);
        let (p, q2, r) = (e.multiple(&g, i), e.multiple(&g, j), e.multiple(&g, k));
        let add = |a: &CurvePoint, b: &CurvePoint| e.add_points(a, b).unwrap();
        prop_assert_eq!(add(&p, &q2), add(&q2, &p));
        prop_assert_eq!(add(&add(&p, &q2), &r), add(&p, &add(&q2, &r)));
        prop_assert_eq!(add(&p, &CurvePoint::Infinity), p.clone());
        prop_assert_eq!(add(&p, &e.negate(&p)), CurvePoint::Infinity);
        prop_assert!(e.contains(&add(&p, &q2)));
    }
}

#[test]
fn sieve_is_symmetric_for_even_degree() {
    for (m, t) in [(16u64, 1i64), (16, -1), (8, 3), (9, 1), (12, -2)] {
        let f = quartic_f();
        let classes = residue_sieve(&f, m, &int(t)).unwrap();
        for c in &classes {
            let neg = ResidueClass::new(m, c.residues.map(|r| (m - r) % m));
            assert!(classes.binary_search(&neg).is_ok(), "{c} mod {m}");
        }
    }
}

#[test]
fn tables_are_stable_under_refinement() {
    let cases = [
        (
            quartic_alg(),
            residue_sieve(&quartic_f(), 16, &int(1)).unwrap(),
            7u32,
        ),
        (
            cubic_alg(),
            residue_sieve(&cubic_f(), 2, &int(1)).unwrap(),
            4,
        ),
        (
            cubic_alg(),
            residue_sieve(&cubic_f(), 2, &int(-1)).unwrap(),
            4,
        ),
    ];
    for (alg, classes, max_exponent) in cases {
        let coarse = class_invariant_table(&alg, &classes, max_exponent).unwrap();
        let fine_classes: Vec<ResidueClass> = classes.iter().flat_map(|c| c.lifts(2)).collect();
        let fine = class_invariant_table(&alg, &fine_classes, max_exponent + 1).unwrap();
        for e in &fine.entries {
            let parent = coarse.get(&e.class.project(coarse.modulus)).unwrap();
            if parent.invariant.is_some() {
                assert_eq!(e.invariant, parent.invariant, "{}", e.class);
            }
        }
    }
}

#[test]
fn torsion_points_satisfy_the_group_axioms() {
    let curves = [
        to_weierstrass(&int(64), &int(64), &int(8), &int(-7)).unwrap(),
        WeierstrassCurve::new(int(0), int(-1), int(0)).unwrap(),
        WeierstrassCurve::new(int(0), int(0), int(1)).unwrap(),
    ];
    for e in &curves {
        let t = torsion_subgroup(e).unwrap();
        let mut pts = t.points.clone();
        pts.push(CurvePoint::Infinity);
        let add = |a: &CurvePoint, b: &CurvePoint| e.add_points(a, b).unwrap();
        for p in &pts {
            assert_eq!(add(p, &CurvePoint::Infinity), *p);
            assert_eq!(add(p, &e.negate(p)), CurvePoint::Infinity);
            let n = e.torsion_order(p).unwrap();
            assert_eq!(12 % n, 0, "order {n}");
            assert_eq!(e.multiple(p, n), CurvePoint::Infinity);
            for q in &pts {
                // torsion points form a subgroup
                assert!(pts.contains(&add(p, q)));
                for r in &pts {
                    assert_eq!(add(&add(p, q), r), add(p, &add(q, r)));
                }
            }
        }
    }
}
