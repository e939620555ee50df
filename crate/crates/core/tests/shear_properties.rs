mod common;

use proptest::prelude::*;
use ptolemy_core::shear::{
    flip_coords, gens_action, jacobian, jacobian_fd, poisson_invariance_check, shear_from_cross_ratio, IdealPoint, IdealQuadrilateral,
    ShearVector,
};
use ptolemy_core::word::Generator;
use ptolemy_core::{ArcLabel, LabelPermutation, Triangulation};

fn surfaces() -> Vec<Triangulation> {
    vec![
        Triangulation::build_standard(1, 1).unwrap(),
        Triangulation::build_standard(0, 4).unwrap(),
        common::torus().triangulation.as_ref().clone(),
        common::sphere().triangulation.as_ref().clone(),
    ]
}

/// Moves the quadrilateral to (-1, 0, x, ∞) with a Möbius map; the shear is
/// then `-ln x`.
fn normalized_oracle(p: [f64; 4]) -> f64 {
    let [p1, p2, p3, p4] = p;
    let k = -(p1 - p4) / (p1 - p2);
    let f = |x: f64| k * (x - p2) / (x - p4);
    -f(p3).ln()
}

fn mobius(p: f64, (a, b, c, d): (f64, f64, f64, f64)) -> f64 {
    (a * p + b) / (c * p + d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shear_is_mobius_invariant(mut p in prop::array::uniform4(-5.0f64..5.0), m in (0.5f64..2.0, -1.0f64..1.0, -0.1f64..0.1, 0.5f64..2.0)) {
        p.sort_by(f64::total_cmp);
        prop_assume!(p.windows(2).all(|w| w[1] - w[0] > 1e-2));
        let q = |p: [f64; 4]| IdealQuadrilateral::new(IdealPoint::Real(p[0]), IdealPoint::Real(p[1]), IdealPoint::Real(p[2]), IdealPoint::Real(p[3]));
        let s = shear_from_cross_ratio(&q(p)).unwrap();
        prop_assert!((s - normalized_oracle(p)).abs() < 1e-9);
        // an orientation-preserving real Möbius map that keeps the points finite
        let (a, b, c, d) = m;
        prop_assume!(a * d - b * c > 0.1);
        prop_assume!(p.iter().all(|x| (c * x + d).abs() > 1e-2));
        let moved = p.map(|x| mobius(x, m));
        prop_assume!(moved.windows(2).all(|w| w[1] > w[0]));
        prop_assert!((shear_from_cross_ratio(&q(moved)).unwrap() - s).abs() < 1e-7);
    }

    #[test]
    fn coordinate_flip_is_an_involution(k in 0usize..4, seed in any::<u64>(), pick in 0usize..64) {
        let t = surfaces().swap_remove(k);
        let x = ptolemy_core::shear::seeded_samples(t.arc_count() as usize, 1, seed).pop().unwrap();
        let flippable: Vec<ArcLabel> = t.arcs().filter(|a| t.is_flippable(*a)).collect();
        let a = flippable[pick % flippable.len()];
        let once = flip_coords(&t, a, &x).unwrap();
        let twice = flip_coords(&t.flip(a).unwrap(), a, &once).unwrap();
        prop_assert!(x.relative_error(&twice) < 1e-12);
    }

    #[test]
    fn flips_preserve_the_poisson_structure(k in 0usize..4, seed in any::<u64>()) {
        let t = surfaces().swap_remove(k);
        let x = ptolemy_core::shear::seeded_samples(t.arc_count() as usize, 1, seed).pop().unwrap();
        for a in t.arcs().filter(|a| t.is_flippable(*a)) {
            prop_assert!(poisson_invariance_check(&t, a, &x).unwrap() < 1e-8);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences(k in 0usize..4, seed in any::<u64>()) {
        let t = surfaces().swap_remove(k);
        let x = ptolemy_core::shear::seeded_samples(t.arc_count() as usize, 1, seed).pop().unwrap();
        for a in t.arcs().filter(|a| t.is_flippable(*a)) {
            let d = jacobian(&t, a, &x).unwrap() - jacobian_fd(&t, a, &x, 1e-6).unwrap();
            prop_assert!(d.amax() < 1e-6);
        }
    }

    #[test]
    fn quintuple_acts_as_its_transposition(seed in any::<u64>()) {
        let t = common::hexagon();
        let x = ptolemy_core::shear::seeded_samples(3, 1, seed).pop().unwrap();
        let (a, b) = (ArcLabel(1), ArcLabel(2));
        let mut gens = ptolemy_core::rewrite::quintuple(a, b);
        gens.push(Generator::Perm(LabelPermutation::transposition(1, 2)));
        let (end, y) = gens_action(&t, &gens, &x).unwrap();
        prop_assert!(end.labeled_equal(&t));
        prop_assert!(x.relative_error(&y) < 1e-9);
    }
}

#[test]
fn scaled_vertex_gives_minus_log_scale() {
    for u in [-1.5f64, 0.2, 2.4] {
        let q = IdealQuadrilateral::new(IdealPoint::Real(-1.0), IdealPoint::Real(0.0), IdealPoint::Real(u.exp()), IdealPoint::Infinity);
        assert!((shear_from_cross_ratio(&q).unwrap() + u).abs() < 1e-12);
    }
}

#[test]
fn samples_are_reproducible() {
    let a = ptolemy_core::shear::seeded_samples(8, 5, 42);
    let b = ptolemy_core::shear::seeded_samples(8, 5, 42);
    assert_eq!(a, b);
    assert!(a.iter().all(|v: &ShearVector| v.0.iter().all(|x| x.abs() <= 3.0)));
}
