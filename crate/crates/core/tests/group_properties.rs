//! Randomized checks of the group algorithms against brute force.

use num_bigint::BigUint;
use proptest::prelude::*;
use symdesign::blocks::minimal_block_systems;
use symdesign::coset::{induced_orbits, CosetAction};
use symdesign::{Perm, PermGroup};

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn group(max_degree: usize, max_gens: usize) -> impl Strategy<Value = PermGroup> {
    (2..=max_degree).prop_flat_map(move |n| {
        prop::collection::vec(perm(n), 1..=max_gens).prop_map(move |gens| PermGroup::new(n, gens).unwrap())
    })
}

fn small_fixtures() -> Vec<PermGroup> {
    let g = |n: usize, texts: &[&str]| {
        PermGroup::new(
            n,
            texts.iter().map(|t| symdesign::parse_cycles(t, n).unwrap()).collect(),
        )
        .unwrap()
    };
    vec![
        g(4, &["(1,2)", "(1,2,3,4)"]),
        g(5, &["(1,2,3,4,5)", "(1,2)"]),
        g(6, &["(1,2,3,4,5,6)", "(1,2)"]),
        g(7, &["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"]),
        g(8, &["(1,2,3,4,5,6,7,8)", "(1,8)(2,7)(3,6)(4,5)"]),
        g(6, &["(1,2,3)", "(4,5,6)", "(1,4)(2,5)(3,6)"]),
        g(
            9,
            &["(1,2,3)(4,5,6)(7,8,9)", "(1,4,7)(2,5,8)(3,6,9)", "(2,3)(5,6)(8,9)"],
        ),
    ]
}

#[test]
fn fixture_orders_match_enumeration() {
    for g in small_fixtures() {
        let order = g.order();
        assert!(order <= BigUint::from(5000u32));
        assert_eq!(order, BigUint::from(g.elements().len()));
    }
}

#[test]
fn s4_is_two_transitive() {
    assert_eq!(small_fixtures()[0].subdegrees(0).unwrap().len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_matches_enumeration(g in group(7, 3)) {
        if g.order() <= BigUint::from(5000u32) {
            prop_assert_eq!(g.order(), BigUint::from(g.elements().len()));
        }
    }

    #[test]
    fn orbit_stabilizer_theorem(g in group(12, 2), point in 0usize..12) {
        let point = point % g.degree();
        let orbit = g.orbit(point).unwrap();
        let stab = g.point_stabilizer(point).unwrap();
        prop_assert_eq!(g.order(), stab.order() * BigUint::from(orbit.len()));
        for s in stab.generators() {
            prop_assert!(s.fixes(point));
            prop_assert!(g.contains(s).unwrap());
        }
    }

    #[test]
    fn subdegrees_sum_to_degree(g in group(10, 2)) {
        if g.is_transitive() {
            let sub = g.subdegrees(0).unwrap();
            prop_assert_eq!(sub.iter().sum::<usize>(), g.degree());
        }
    }

    #[test]
    fn block_systems_are_invariant_partitions(g in group(12, 2)) {
        if g.is_transitive() {
            for s in minimal_block_systems(&g).unwrap() {
                prop_assert!(s.check_invariant(&g).is_ok());
                prop_assert_eq!(s.class_size() * s.num_classes(), g.degree());
                prop_assert!(!s.is_trivial());
            }
        }
    }

    #[test]
    fn coset_action_is_a_homomorphism(
        g in group(7, 2),
        words in prop::collection::vec((0usize..8, 0usize..8), 100),
    ) {
        let h = g.point_stabilizer(0).unwrap();
        let h = match h.generators().first() {
            Some(x) => PermGroup::new(g.degree(), vec![x.clone()]).unwrap(),
            None => h,
        };
        let act = CosetAction::new(&g, &h).unwrap();
        let image = act.image();
        prop_assert_eq!(BigUint::from(act.degree()) * h.order(), g.order());
        let stab = image.point_stabilizer(0).unwrap();
        prop_assert_eq!(BigUint::from(act.degree()) * stab.order(), image.order());
        let gens = g.generators();
        for (a, b) in words {
            let (a, b) = (&gens[a % gens.len()], &gens[b % gens.len()]);
            let lhs = act.act(&a.compose(b).unwrap()).unwrap();
            let rhs = act.act(a).unwrap().compose(&act.act(b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let total: usize = induced_orbits(&g, &h, &g).unwrap().iter().map(Vec::len).sum();
        prop_assert_eq!(total, act.degree());
    }
}
