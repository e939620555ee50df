mod common;

use std::sync::Arc;

use proptest::prelude::*;
use ptolemy_core::rewrite::{check_script, ScriptBuilder, POSITIVE_PENTAGON};
use ptolemy_core::simplify::{auto_simplify, invert_script, relator_phase, DEFAULT_BUDGET};
use ptolemy_core::word::Generator;
use ptolemy_core::{ArcLabel, FlipWord, Triangulation};

fn random_word(t: &Arc<Triangulation>, picks: &[usize]) -> FlipWord {
    let mut cur = t.as_ref().clone();
    let mut gens = Vec::new();
    for &p in picks {
        let flippable: Vec<ArcLabel> = cur.arcs().filter(|a| cur.is_flippable(*a)).collect();
        let a = flippable[p % flippable.len()];
        cur = cur.flip(a).unwrap();
        gens.push(Generator::Flip(a));
    }
    FlipWord::new(t.clone(), gens, 0).unwrap()
}

/// The quintuple of a pentagon-applicable pair at the target of `w`, closed
/// with its transposition, together with its orientation.
fn quintuple_relator(w: &FlipWord, pick: usize) -> Option<(FlipWord, i32)> {
    let t = w.target();
    let pairs: Vec<(ArcLabel, ArcLabel)> =
        t.arcs().flat_map(|a| t.arcs().map(move |b| (a, b))).filter(|&(a, b)| t.pentagon_applicable(a, b)).collect();
    let &(a, b) = pairs.get(pick % pairs.len().max(1))?;
    let mut gens = ptolemy_core::rewrite::quintuple(a, b);
    gens.push(Generator::Perm(ptolemy_core::LabelPermutation::transposition(a.0, b.0)));
    Some((FlipWord::new(t.clone(), gens, 0).unwrap(), t.pentagon_orientation(a, b).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Conjugating a relator by any word leaves its phase alone.
    #[test]
    fn conjugated_quintuples_keep_their_phase(picks in prop::collection::vec(0usize..16, 0..6), pick in 0usize..16) {
        let t = common::hexagon();
        let u = random_word(&t, &picks);
        let (r, orientation) = quintuple_relator(&u, pick).unwrap();
        let expected = if orientation == POSITIVE_PENTAGON { -1 } else { 1 };
        let conj = u.compose(&r).unwrap().compose(&u.invert()).unwrap();
        prop_assert_eq!(relator_phase(&conj, None, DEFAULT_BUDGET), Ok(expected));
    }

    /// Replaying a reduction backwards rebuilds the word with the opposite phase.
    #[test]
    fn inverted_reductions_restore_the_word(picks in prop::collection::vec(0usize..16, 1..6)) {
        let t = common::hexagon();
        let u = random_word(&t, &picks);
        let w = u.compose(&u.invert()).unwrap();
        let s = auto_simplify(&w, DEFAULT_BUDGET).unwrap();
        prop_assert!(s.word.is_empty());
        let back = invert_script(&w, &s.script).unwrap();
        prop_assert_eq!(check_script(&s.word, &back, &w), Ok(-s.delta));
    }
}

#[test]
fn pentagon_contracts_with_minus_one() {
    let t = common::pentagon();
    let (a, b) = if t.pentagon_orientation(ArcLabel(1), ArcLabel(2)) == Some(POSITIVE_PENTAGON) { (1, 2) } else { (2, 1) };
    let w = FlipWord::parse(t.clone(), &format!("F{a} F{b} F{a} F{b} F{a}"), 0).unwrap();
    let mut b_ = ScriptBuilder::new(w.clone());
    assert_eq!(b_.pentagon(0), Ok(-1));
    assert_eq!(b_.word().to_string(), format!("z^-1 P({} {})", a.min(b), a.max(b)));
    let mut rev = ScriptBuilder::new(FlipWord::parse(t, &format!("F{b} F{a} F{b} F{a} F{b}"), 0).unwrap());
    assert_eq!(rev.pentagon(0), Ok(1));
}
