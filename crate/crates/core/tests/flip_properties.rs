mod common;

use std::sync::Arc;

use proptest::prelude::*;
use ptolemy_core::word::Generator;
use ptolemy_core::{ArcLabel, FlipWord, LabelPermutation, Triangulation};

/// Base surfaces: two punctured closed surfaces and the two bordered fixtures.
fn bases() -> Vec<Triangulation> {
    vec![
        Triangulation::build_standard(1, 2).unwrap(),
        Triangulation::build_standard(0, 5).unwrap(),
        common::torus().triangulation.as_ref().clone(),
        common::sphere().triangulation.as_ref().clone(),
    ]
}

/// A triangulation reached by flipping the arcs picked by `choices`.
fn wander(base: usize, choices: &[usize]) -> Triangulation {
    let mut t = bases().swap_remove(base);
    for &c in choices {
        let flippable: Vec<ArcLabel> = t.arcs().filter(|a| t.is_flippable(*a)).collect();
        t = t.flip(flippable[c % flippable.len()]).unwrap();
    }
    t
}

fn target(t: &Triangulation, gens: Vec<Generator>) -> Arc<Triangulation> {
    FlipWord::new(Arc::new(t.clone()), gens, 0).unwrap().target().clone()
}

fn random_permutation(n: u32, seed: &[u32]) -> LabelPermutation {
    let mut labels: Vec<u32> = (1..=n).collect();
    for (i, s) in seed.iter().enumerate() {
        let i = i % labels.len();
        let j = *s as usize % labels.len();
        labels.swap(i, j);
    }
    LabelPermutation::from_two_row(&(1..=n).collect::<Vec<_>>(), &labels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_is_an_involution(base in 0usize..4, walk in prop::collection::vec(0usize..64, 0..12), pick in 0usize..64) {
        let t = wander(base, &walk);
        let flippable: Vec<ArcLabel> = t.arcs().filter(|a| t.is_flippable(*a)).collect();
        let a = flippable[pick % flippable.len()];
        let back = t.flip(a).unwrap().flip(a).unwrap();
        prop_assert!(back.labeled_equal(&t));
    }

    #[test]
    fn epsilon_is_antisymmetric_and_bounded(base in 0usize..4, walk in prop::collection::vec(0usize..64, 0..12)) {
        let t = wander(base, &walk);
        let eps = t.epsilon();
        for a in t.arcs() {
            prop_assert_eq!(eps.get(a, a), 0);
            for b in t.arcs() {
                prop_assert_eq!(eps.get(a, b), -eps.get(b, a));
                prop_assert!(eps.get(a, b).abs() <= 2);
            }
        }
    }

    #[test]
    fn flips_are_natural_under_relabeling(base in 0usize..4, walk in prop::collection::vec(0usize..64, 0..8), pick in 0usize..64, seed in prop::collection::vec(0u32..100, 1..12)) {
        let t = wander(base, &walk);
        let flippable: Vec<ArcLabel> = t.arcs().filter(|x| t.is_flippable(*x)).collect();
        let a = flippable[pick % flippable.len()];
        let sigma = random_permutation(t.arc_count(), &seed);
        let left = target(&t, vec![Generator::Flip(a), Generator::Perm(sigma.clone())]);
        let right = target(&t, vec![Generator::Perm(sigma.clone()), Generator::Flip(ArcLabel(sigma.apply(a.0)))]);
        prop_assert!(left.labeled_equal(&right));
    }

    #[test]
    fn disjoint_flips_commute(base in 0usize..4, walk in prop::collection::vec(0usize..64, 0..8)) {
        let t = wander(base, &walk);
        for a in t.arcs() {
            for b in t.arcs() {
                if a != b && t.commuting_flips(a, b) {
                    let ab = target(&t, vec![Generator::Flip(a), Generator::Flip(b)]);
                    let ba = target(&t, vec![Generator::Flip(b), Generator::Flip(a)]);
                    prop_assert!(ab.labeled_equal(&ba));
                }
            }
        }
    }

    #[test]
    fn quintuples_close_with_a_transposition(base in 0usize..4, walk in prop::collection::vec(0usize..64, 0..8)) {
        let t = wander(base, &walk);
        for a in t.arcs() {
            for b in t.arcs() {
                if t.pentagon_applicable(a, b) {
                    let five = target(&t, ptolemy_core::rewrite::quintuple(a, b));
                    let sigma = t.apply_permutation(&LabelPermutation::transposition(a.0, b.0)).unwrap();
                    prop_assert!(five.labeled_equal(&sigma));
                }
            }
        }
    }
}

#[test]
fn pentagon_orientations_are_opposite() {
    let t = common::pentagon();
    let ab = t.pentagon_orientation(ArcLabel(1), ArcLabel(2)).unwrap();
    let ba = t.pentagon_orientation(ArcLabel(2), ArcLabel(1)).unwrap();
    assert_eq!(ab, -ba);
}
