use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use novikov::corpus;
use novikov::groupring::{CoefficientRing, GroupRingElement};
use novikov::homology::{novikov_betti, polytope_betti};
use novikov::lattice::{
    kernel_lattice, polytope_min_period, quotient_map, CohomologyClass, Polytope, Rational, Subpolytope,
};
use novikov::morse::{morse_reduce, MatchingStrategy};
use novikov::novseries::{geom_inverse, is_inverse_mod_window, positivity_check, Truncation};
use novikov::rank::RankOptions;
use novikov::twist::change_lifts;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn element(ring: CoefficientRing, terms: Vec<(Vec<i64>, i64)>) -> GroupRingElement {
    let rank = terms.first().map_or(2, |t| t.0.len());
    let mut x = GroupRingElement::zero(ring, rank);
    for (e, c) in terms {
        x.add_term(e, q(c, 1));
    }
    x
}

fn terms(rank: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -5i64..=5), 0..5)
}

fn ring() -> impl Strategy<Value = CoefficientRing> {
    prop_oneof![Just(CoefficientRing::Int), Just(CoefficientRing::Rat), Just(CoefficientRing::Mod2)]
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn class(rank: usize) -> impl Strategy<Value = CohomologyClass> {
    prop::collection::vec(rational(), rank).prop_map(CohomologyClass::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_ring_axioms(r in ring(), a in terms(2), b in terms(2), c in terms(2)) {
        let (x, y, z) = (element(r, a), element(r, b), element(r, c));
        let x = if x.rank() == 2 { x } else { GroupRingElement::zero(r, 2) };
        let y = if y.rank() == 2 { y } else { GroupRingElement::zero(r, 2) };
        let z = if z.rank() == 2 { z } else { GroupRingElement::zero(r, 2) };
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &GroupRingElement::one(r, 2), x.clone());
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(GroupRingElement::parse(&x.to_string(), r, 2).unwrap(), x);
    }

    #[test]
    fn specialization_is_a_ring_map(a in terms(3), b in terms(3), u in class(3)) {
        let x = element(CoefficientRing::Int, a);
        let y = element(CoefficientRing::Int, b);
        prop_assume!(x.rank() == 3 && y.rank() == 3);
        let map = quotient_map(&[u]).unwrap();
        prop_assert_eq!((&x * &y).specialize(&map), &x.specialize(&map) * &y.specialize(&map));
        prop_assert_eq!((&x + &y).specialize(&map), &x.specialize(&map) + &y.specialize(&map));
    }

    #[test]
    fn periods_are_additive(a in class(3), g in prop::collection::vec(-20i64..=20, 3), h in prop::collection::vec(-20i64..=20, 3)) {
        let sum: Vec<i64> = g.iter().zip(&h).map(|(x, y)| x + y).collect();
        prop_assert_eq!(a.eval(&sum).unwrap(), a.eval(&g).unwrap() + a.eval(&h).unwrap());
    }

    #[test]
    fn quotient_map_kills_exactly_the_kernel(classes in prop::collection::vec(class(3), 1..3), v in prop::collection::vec(-9i64..=9, 3)) {
        let map = quotient_map(&classes).unwrap();
        for k in kernel_lattice(&classes).unwrap() {
            prop_assert!(map.apply(&k).iter().all(|&x| x == 0));
        }
        for a in &classes {
            let induced = map.induced_class(a).unwrap();
            prop_assert_eq!(induced.eval(&map.apply(&v)).unwrap(), a.eval(&v).unwrap());
        }
        let image = map.apply(&v);
        let in_kernel = classes.iter().all(|a| a.eval(&v).unwrap().is_zero());
        prop_assert_eq!(in_kernel, image.iter().all(|&x| x == 0));
    }

    #[test]
    fn positivity_reduces_to_vertices(
        support in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..5),
        vertices in prop::collection::vec(class(2), 1..4),
        raw in prop::collection::vec(1i64..=9, 4),
    ) {
        let mut u = GroupRingElement::zero(CoefficientRing::Int, 2);
        for e in &support {
            u.add_term(e.clone(), Rational::one());
        }
        let p = Polytope::new(vertices).unwrap();
        let total: i64 = raw[..p.len()].iter().sum();
        let weights: Vec<Rational> = raw[..p.len()].iter().map(|&w| q(w, total)).collect();
        let c = p.convex_combination(&weights).unwrap();
        let positive = positivity_check(&u, &p).unwrap();
        for e in u.terms().keys() {
            let value = c.eval(e).unwrap();
            prop_assert!(polytope_min_period(&p, e).unwrap() <= value);
            if positive {
                prop_assert!(value > Rational::zero());
            }
        }
    }

    #[test]
    fn geometric_inverse_inverts_in_window(
        raw in prop::collection::vec((1i64..=3, 0i64..=4, -3i64..=3), 1..4),
        order in 1i64..=8,
    ) {
        // supports with Φ_{(1,0)} > 0 and Φ_{(1,1)} > 0
        let mut u = GroupRingElement::zero(CoefficientRing::Rat, 2);
        for (e1, s, c) in raw {
            if c != 0 {
                u.add_term(vec![e1, s - e1 + 1], q(c, 1));
            }
        }
        let p = Polytope::parse("1,0;1,1").unwrap();
        let t = Truncation::interior(&p, &[q(1, 2), q(1, 2)], q(order, 1)).unwrap();
        let x = &GroupRingElement::one(CoefficientRing::Rat, 2) - &u;
        let inv = geom_inverse(&x, &t, &p).unwrap();
        prop_assert!(is_inverse_mod_window(&x, &inv).unwrap());
        prop_assert!(t.truncate(&(&x * inv.element())).is_one());
        // coherence: lowering the order agrees with truncating
        let low = geom_inverse(&x, &t.with_order(q(order, 2)), &p).unwrap();
        prop_assert_eq!(inv.restrict(q(order, 2)).unwrap(), low);
    }

    #[test]
    fn betti_numbers_survive_scaling(a in class(2), pick in 0usize..3) {
        let x = corpus::torus_delta();
        let opts = RankOptions::default();
        let r = [q(1, 2), q(3, 1), q(7, 5)][pick].clone();
        let base = novikov_betti(&x, &a, &opts).unwrap();
        let scaled = novikov_betti(&x, &a.scaled(&r), &opts).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn betti_numbers_survive_lift_changes_and_reduction(
        shifts in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 6),
        a in class(2),
        seed in 0u64..1000,
    ) {
        let x = corpus::torus_delta();
        let lifts = vec![vec![shifts[0].clone()], shifts[1..4].to_vec(), shifts[4..6].to_vec()];
        let y = change_lifts(&x, &lifts).unwrap();
        let reduced = morse_reduce(&y, seed, MatchingStrategy::Greedy).unwrap().complex;
        let opts = RankOptions::default();
        let expected = novikov_betti(&x, &a, &opts).unwrap().betti;
        prop_assert_eq!(&novikov_betti(&y, &a, &opts).unwrap().betti, &expected);
        prop_assert_eq!(&novikov_betti(&reduced, &a, &opts).unwrap().betti, &expected);
        prop_assert_eq!(reduced.euler_characteristic(), x.euler_characteristic());
    }

    #[test]
    fn polytope_betti_is_euler_consistent(vertices in prop::collection::vec(class(4), 1..3)) {
        let x = corpus::genus_two();
        let p = Polytope::new(vertices).unwrap();
        let r = polytope_betti(&x, &p, &Subpolytope::full(&p), &RankOptions::default()).unwrap();
        let alt: i64 = r.betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(alt, -2);
        prop_assert!(r.passed());
    }
}
