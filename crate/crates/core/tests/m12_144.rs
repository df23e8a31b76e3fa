//! Facts about M12 in its 144-point action and the (144,66,30) design.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use symdesign::blocks::{class_stabilizer, minimal_block_systems};
use symdesign::catalog::{load_group, load_points};
use symdesign::coset::{induced_orbits, CosetAction};
use symdesign::design::{block_stabilizer, construct_design, Design, Refutation};
use symdesign::perm::parse_cycles;
use symdesign::PermGroup;

struct Fixture {
    g: PermGroup,
    h: PermGroup,
    k: PermGroup,
    design: Design,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let g = load_group("m12-144/G").unwrap();
        let base = load_points("m12-144/base-block").unwrap();
        let design = construct_design(&g, &base).unwrap().design;
        Fixture {
            g,
            h: load_group("m12-144/H").unwrap(),
            k: load_group("m12-144/K").unwrap(),
            design,
        }
    })
}

fn n(x: u64) -> BigUint {
    BigUint::from(x)
}

fn lengths(orbits: &[Vec<usize>]) -> Vec<usize> {
    orbits.iter().map(Vec::len).collect()
}

#[test]
fn orders_and_indices() {
    let f = fixture();
    assert_eq!(f.g.order(), n(95040));
    assert_eq!(f.h.order(), n(660));
    assert_eq!(f.k.order(), n(660));
    f.g.check_subgroup(&f.h).unwrap();
    f.g.check_subgroup(&f.k).unwrap();
    assert_eq!(f.g.order() / f.h.order(), n(144));
}

#[test]
fn generators_have_expected_shapes() {
    let f = fixture();
    let a1 = &f.g.generators()[0];
    assert!(a1.compose(a1).unwrap().is_identity());
    assert_eq!(a1.inverse(), *a1);
    assert_eq!(f.g.generators()[1].order(), n(3));
}

#[test]
fn transposition_is_not_in_g() {
    let t = parse_cycles("(1,2)", 144).unwrap();
    assert!(!fixture().g.contains(&t).unwrap());
}

#[test]
fn h_is_the_stabilizer_of_point_one() {
    let f = fixture();
    assert!(f.h.generators().iter().all(|g| g.fixes(0)));
    let stab = f.g.point_stabilizer(0).unwrap();
    assert_eq!(stab.order(), n(660));
    stab.check_subgroup(&f.h).unwrap();
    f.h.check_subgroup(&stab).unwrap();
}

#[test]
fn rank_five_with_k_orbits() {
    let f = fixture();
    assert_eq!(f.g.subdegrees(0).unwrap(), vec![1, 11, 11, 55, 66]);
    assert_eq!(lengths(&f.k.orbits()), vec![1, 11, 11, 55, 66]);
    let base = load_points("m12-144/base-block").unwrap();
    assert!(f.k.orbits().contains(&base));
}

#[test]
fn coset_action_on_h_reproduces_the_action() {
    let f = fixture();
    let act = CosetAction::new(&f.g, &f.h).unwrap();
    assert_eq!(act.degree(), 144);
    assert!(act.image().is_transitive());
    assert_eq!(act.image().subdegrees(0).unwrap(), vec![1, 11, 11, 55, 66]);
    assert_eq!(
        lengths(&induced_orbits(&f.g, &f.h, &f.k).unwrap()),
        vec![1, 11, 11, 55, 66]
    );
}

#[test]
fn two_minimal_block_systems() {
    let f = fixture();
    let systems = minimal_block_systems(&f.g).unwrap();
    assert_eq!(systems.len(), 2);
    let mut firsts: Vec<Vec<usize>> = systems
        .iter()
        .map(|s| {
            assert_eq!((s.num_classes(), s.class_size()), (12, 12));
            s.check_invariant(&f.g).unwrap();
            s.classes()[s.class_of(0)].iter().map(|p| p + 1).collect()
        })
        .collect();
    firsts.sort();
    assert_eq!(firsts[0], (1..=12).collect::<Vec<_>>());
    assert_eq!(firsts[1], vec![1, 13, 35, 38, 57, 62, 81, 91, 103, 109, 128, 140]);
}

#[test]
fn nested_class_stabilizers_give_h() {
    let f = fixture();
    let systems = minimal_block_systems(&f.g).unwrap();
    let m1 = class_stabilizer(&f.g, &systems[0], systems[0].class_of(0)).unwrap();
    assert_eq!(m1.order(), n(7920));
    let m2 = class_stabilizer(&f.g, &systems[1], systems[1].class_of(0)).unwrap();
    assert_eq!(m2.order(), n(7920));
    let both = class_stabilizer(&m1, &systems[1], systems[1].class_of(0)).unwrap();
    assert_eq!(both.order(), n(660));
    both.check_subgroup(&f.h).unwrap();
}

#[test]
fn design_parameters_and_complement() {
    let f = fixture();
    assert_eq!(f.design.blocks().len(), 144);
    let p = f.design.verify_symmetric().unwrap();
    assert_eq!((p.v, p.k, p.lambda), (144, 66, 30));
    assert!(p.is_nontrivial());
    let c = f.design.complement().unwrap().verify_symmetric().unwrap();
    assert_eq!((c.v, c.k, c.lambda), (144, 78, 42));
}

#[test]
fn perturbed_block_is_refuted() {
    let f = fixture();
    let mut blocks = f.design.blocks().to_vec();
    let mut b = blocks[5].clone();
    let outside = (0..144).find(|p| !b.contains(p)).unwrap();
    b[0] = outside;
    b.sort();
    assert!(!blocks.contains(&b));
    blocks[5] = b;
    let r = Design::new(144, blocks).unwrap().verify_symmetric().unwrap_err();
    assert!(
        matches!(r, Refutation::Replication { .. } | Refutation::BlockPair { .. }),
        "{r}"
    );
}

#[test]
fn block_stabilizer_and_flag_transitivity() {
    let f = fixture();
    let st = block_stabilizer(&f.g, &f.design, 0).unwrap();
    assert_eq!(st.order(), n(660));
    assert_eq!(st.order() * n(144), f.g.order());
    assert!(f.design.is_flag_transitive(&f.g, false).unwrap());
    assert!(!f.design.is_anti_flag_transitive(&f.g, false).unwrap());
}

#[test]
fn profiles_on_both_systems() {
    let f = fixture();
    for s in minimal_block_systems(&f.g).unwrap() {
        assert_eq!(f.design.profile_for(&s).unwrap().to_string(), "(12,12,6,11)");
    }
}

#[test]
fn arithmetic_conditions_on_the_design() {
    let f = fixture();
    let (v, k, lambda) = (144u64, 66u64, 30u64);
    let h_order = 660u64;
    assert_eq!(k * (k - 1), lambda * (v - 1));
    assert_eq!(h_order % k, 0);
    assert!(lambda * v < k * k);
    assert_eq!((lambda * (v - 1).gcd(&h_order)) % k, 0);
    // H is transitive on the 66 blocks through its fixed point
    let through: Vec<usize> = (0..144).filter(|&b| f.design.blocks()[b].contains(&0)).collect();
    assert_eq!(through.len(), 66);
    let hb = block_stabilizer(&f.h, &f.design, through[0]).unwrap();
    assert_eq!(f.h.order() / hb.order(), n(k));
}

#[test]
fn design_does_not_depend_on_k_orbit_choice() {
    let f = fixture();
    // the other 66-point K-orbit candidates: any 66-orbit of H gives the same parameters
    let orbit = f.h.orbits().into_iter().find(|o| o.len() == 66).unwrap();
    let d = construct_design(&f.g, &orbit).unwrap();
    assert_eq!(d.orbit_len, 144);
    let p = d.design.verify_symmetric().unwrap();
    assert_eq!((p.v, p.k, p.lambda), (144, 66, 30));
    assert_eq!(
        d.design.intersection_distribution(),
        f.design.intersection_distribution()
    );
}
