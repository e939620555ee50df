//! Searching for rewrites: normal forms, derived moves, the bounded
//! simplifier and the bidirectional search that connects two words.
//!
//! Searches run on the normal form in which all permutations have been
//! pushed to the end of the word and merged, so a word is a flip sequence
//! followed by one permutation. Moves act on that form directly; once a
//! path is found each move is replayed through [`ScriptBuilder`], which
//! records the primitive rules it expands into.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::permutation::LabelPermutation;
use crate::rewrite::{apply_rule, Direction, ProofScript, RewriteError, RuleKind, ScriptBuilder, Step, POSITIVE_PENTAGON};
use crate::triangulation::{ArcLabel, Triangulation};
use crate::word::{FlipWord, Generator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("not a relator: {0}")]
    NotARelator(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Flip sequence followed by a single permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Normal {
    pub flips: Vec<ArcLabel>,
    pub perm: LabelPermutation,
}

impl Normal {
    /// Pushes every permutation of `gens` to the right.
    pub fn of(gens: &[Generator]) -> Self {
        let mut flips = Vec::new();
        let mut pending = LabelPermutation::identity();
        for g in gens {
            match g {
                Generator::Flip(a) => flips.push(ArcLabel(pending.inverse().apply(a.0))),
                Generator::Perm(p) => pending = pending.then(p),
            }
        }
        Self { flips, perm: pending }
    }

    pub fn gens(&self) -> Vec<Generator> {
        let mut out: Vec<Generator> = self.flips.iter().copied().map(Generator::Flip).collect();
        if !self.perm.is_identity() {
            out.push(Generator::Perm(self.perm.clone()));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty() && self.perm.is_identity()
    }

    /// Triangulations before each flip and after the last one; `None` when a
    /// flip is not applicable.
    pub fn states(&self, source: &Triangulation) -> Option<Vec<Triangulation>> {
        let mut out = Vec::with_capacity(self.flips.len() + 1);
        let mut t = source.clone();
        for a in &self.flips {
            let next = t.flip(*a).ok()?;
            out.push(t);
            t = next;
        }
        out.push(t);
        Some(out)
    }

    /// Flips relative to the target: `perm(f)` for each flip `f`. Two words
    /// with the same target agree on a common suffix of this sequence
    /// exactly when their last flips coincide.
    fn pulled_back(&self) -> Vec<u32> {
        self.flips.iter().map(|a| self.perm.apply(a.0)).collect()
    }
}

/// A derived move on the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// `F_a F_a -> ∅`.
    Cancel(usize),
    /// `∅ -> F_a F_a`.
    Insert(usize, ArcLabel),
    /// `F_a F_b -> F_b F_a` on disjoint quadrilaterals.
    Commute(usize),
    /// The alternating word of length `len` starting with the flip at `pos`
    /// and continuing with `b` becomes the complementary alternating word,
    /// with `a` and `b` swapped in the rest of the word.
    Pentagon { pos: usize, len: usize, b: ArcLabel },
}

impl Move {
    fn position(&self) -> usize {
        match *self {
            Move::Cancel(p) | Move::Insert(p, _) | Move::Commute(p) | Move::Pentagon { pos: p, .. } => p,
        }
    }

    fn span(&self) -> usize {
        match *self {
            Move::Cancel(_) | Move::Commute(_) => 2,
            Move::Insert(..) => 0,
            Move::Pentagon { len, .. } => len,
        }
    }

    /// Change in flip count.
    pub fn growth(&self) -> i64 {
        match *self {
            Move::Cancel(_) => -2,
            Move::Insert(..) => 2,
            Move::Commute(_) => 0,
            Move::Pentagon { len, .. } => 5 - 2 * len as i64,
        }
    }
}

/// Which moves a search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveSet {
    pub commute: bool,
    pub cancel: bool,
    /// Alternating lengths allowed for pentagon moves.
    pub pentagon_min: usize,
    pub pentagon_max: usize,
    /// Insertions use letters already present in the search window.
    pub insert: bool,
}

impl MoveSet {
    pub const REDUCING: MoveSet = MoveSet { commute: false, cancel: true, pentagon_min: 3, pentagon_max: 5, insert: false };
    pub const SHUFFLE: MoveSet = MoveSet { commute: true, cancel: true, pentagon_min: 2, pentagon_max: 5, insert: false };
    pub const FULL: MoveSet = MoveSet { commute: true, cancel: true, pentagon_min: 1, pentagon_max: 5, insert: true };
}

/// Applicable moves in deterministic order: by position, then by kind, then
/// by arc label. Only positions in `window` (a range of flip indices the
/// move must stay inside) are considered.
pub fn moves(nf: &Normal, states: &[Triangulation], set: MoveSet, window: (usize, usize)) -> Vec<Move> {
    let f = &nf.flips;
    let (lo, hi) = (window.0, window.1.min(f.len()));
    let mut letters: Vec<ArcLabel> = f[lo.min(f.len())..hi].to_vec();
    letters.sort_unstable();
    letters.dedup();
    let mut out = Vec::new();
    for pos in lo..=hi {
        let a = f.get(pos).copied();
        if set.cancel && pos + 1 < hi && a == f.get(pos + 1).copied() {
            out.push(Move::Cancel(pos));
        }
        if set.commute && pos + 1 < hi {
            if let (Some(a), Some(b)) = (a, f.get(pos + 1).copied()) {
                if states[pos].commuting_flips(a, b) {
                    out.push(Move::Commute(pos));
                }
            }
        }
        if let Some(a) = a.filter(|_| pos < hi) {
            if let Some(b) = f.get(pos + 1).copied().filter(|&b| b != a) {
                if states[pos].pentagon_applicable(a, b) {
                    let mut len = 0;
                    while len < 5 && pos + len < hi && f[pos + len] == if len % 2 == 0 { a } else { b } {
                        len += 1;
                    }
                    for l in (set.pentagon_min.max(2)..=len.min(set.pentagon_max)).rev() {
                        out.push(Move::Pentagon { pos, len: l, b });
                    }
                }
            }
            if set.pentagon_min <= 1 {
                for &b in &letters {
                    if b != a && states[pos].pentagon_applicable(a, b) {
                        out.push(Move::Pentagon { pos, len: 1, b });
                    }
                }
            }
        }
        if set.insert {
            for &x in &letters {
                let left = pos.checked_sub(1).and_then(|p| f.get(p)).copied();
                if Some(x) != a && Some(x) != left && states[pos].is_flippable(x) {
                    out.push(Move::Insert(pos, x));
                }
            }
        }
    }
    out
}

/// Effect of a move on the normal form: the new form and the phase change.
pub fn apply_move(nf: &Normal, states: &[Triangulation], m: Move) -> Normal {
    let mut flips = nf.flips.clone();
    let mut perm = nf.perm.clone();
    match m {
        Move::Cancel(p) => {
            flips.drain(p..p + 2);
        }
        Move::Insert(p, x) => {
            flips.splice(p..p, [x, x]);
        }
        Move::Commute(p) => flips.swap(p, p + 1),
        Move::Pentagon { pos, len, b } => {
            let a = flips[pos];
            let sigma = LabelPermutation::transposition(a.0, b.0);
            let swap = |x: ArcLabel| ArcLabel(sigma.apply(x.0));
            let alt = |k: usize| if k.is_multiple_of(2) { a } else { b };
            let replacement: Vec<ArcLabel> = (len..5).rev().map(|k| swap(alt(k))).collect();
            let tail: Vec<ArcLabel> = flips[pos + len..].iter().copied().map(swap).collect();
            flips.truncate(pos);
            flips.extend(replacement);
            flips.extend(tail);
            perm = sigma.then(&perm);
        }
    }
    let _ = states;
    Normal { flips, perm }
}

/// Phase change of a move at its position.
pub fn move_phase(nf: &Normal, states: &[Triangulation], m: Move) -> i64 {
    match m {
        Move::Pentagon { pos, b, .. } => {
            if states[pos].pentagon_orientation(nf.flips[pos], b) == Some(POSITIVE_PENTAGON) {
                -1
            } else {
                1
            }
        }
        _ => 0,
    }
}

/// Replays a move through the builder, whose word must be in normal form.
pub fn expand_move(b: &mut ScriptBuilder, m: Move) -> Result<(), RewriteError> {
    match m {
        Move::Cancel(p) => b.cancel(p),
        Move::Insert(p, x) => b.insert_pair(p, x),
        Move::Commute(p) => b.commute(p),
        Move::Pentagon { pos, len, b: second } => {
            b.pentagon_move(pos, len, second)?;
            b.normalize()
        }
    }
}

/// Outcome of [`auto_simplify`].
#[derive(Debug, Clone)]
pub struct Simplified {
    pub word: FlipWord,
    pub script: ProofScript,
    /// Phase change of the applied rules.
    pub delta: i64,
    /// The node budget ran out before the search finished.
    pub exhausted: bool,
}

/// Default node budget of [`auto_simplify`].
pub const DEFAULT_BUDGET: u64 = 200_000;

/// Shortens `w` with derived moves. Reducing moves are applied greedily at
/// the lowest position; when none applies, a breadth-first search over
/// commutations and pentagon moves (at most one flip longer than the
/// current word) looks for a form that admits one.
pub fn auto_simplify(w: &FlipWord, budget: u64) -> Result<Simplified, SimplifyError> {
    let source = w.source().clone();
    let mut b = ScriptBuilder::new(w.clone());
    b.normalize()?;
    let mut nodes = 0u64;
    let mut exhausted = false;
    loop {
        let nf = Normal::of(b.word().gens());
        let Some(states) = nf.states(&source) else {
            return Err(SimplifyError::NotARelator("word is not applicable".into()));
        };
        let reducing = moves(&nf, &states, MoveSet::REDUCING, (0, nf.len()));
        if let Some(m) = reducing.into_iter().find(|m| m.growth() < 0) {
            expand_move(&mut b, m)?;
            continue;
        }
        if nf.flips.is_empty() {
            break;
        }
        match shorter_form(&nf, &source, budget, &mut nodes) {
            Some(path) => {
                for m in path {
                    expand_move(&mut b, m)?;
                }
            }
            None => {
                exhausted = nodes >= budget;
                break;
            }
        }
    }
    let (word, script) = b.into_parts();
    let delta = word.zexp() - w.zexp();
    Ok(Simplified { word, script, delta, exhausted })
}

/// Breadth-first search for a move sequence that ends in a strictly shorter
/// normal form.
fn shorter_form(start: &Normal, source: &Triangulation, budget: u64, nodes: &mut u64) -> Option<Vec<Move>> {
    let target_len = start.len();
    let mut parent: HashMap<Normal, (Normal, Move)> = HashMap::new();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(nf) = queue.pop_front() {
        *nodes += 1;
        if *nodes >= budget {
            return None;
        }
        let states = nf.states(source)?;
        for m in moves(&nf, &states, MoveSet::SHUFFLE, (0, nf.len())) {
            let next = apply_move(&nf, &states, m);
            if next.len() > target_len + 1 || !seen.insert(next.clone()) {
                continue;
            }
            parent.insert(next.clone(), (nf.clone(), m));
            if next.len() < target_len {
                let mut path = vec![m];
                let mut cur = nf.clone();
                while let Some((p, mv)) = parent.get(&cur) {
                    path.push(*mv);
                    cur = p.clone();
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(next);
        }
    }
    None
}

/// Phase of a relator: the `k` with `gens(w) = z^k` in the quantized
/// groupoid. Uses the script when given, the simplifier otherwise.
pub fn relator_phase(w: &FlipWord, script: Option<&ProofScript>, budget: u64) -> Result<i64, SimplifyError> {
    if !w.is_automorphism() {
        return Err(SimplifyError::NotARelator("target differs from source".into()));
    }
    let end = match script {
        Some(s) => crate::rewrite::replay(w, s)?,
        None => {
            let s = auto_simplify(w, budget)?;
            if s.exhausted && !s.word.is_empty() {
                return Err(SimplifyError::BudgetExhausted(budget));
            }
            s.word
        }
    };
    if !end.is_empty() {
        return Err(SimplifyError::NotARelator(format!("reduces to `{end}`")));
    }
    Ok(end.zexp() - w.zexp())
}

/// The step undoing `step`, given the word it was applied to.
pub fn inverse_step(before: &FlipWord, step: &Step) -> Result<Step, RewriteError> {
    let gens = before.gens();
    let flip_arg = |i: usize| gens.get(i).and_then(Generator::as_flip).map(|a| format!("F{a}"));
    let pos = step.pos;
    let inv = match (step.rule, step.dir) {
        (RuleKind::Involution, Direction::Forward) => {
            Step::new(pos, RuleKind::Involution, Direction::Backward, flip_arg(pos).into_iter().collect())
        }
        (RuleKind::Involution, Direction::Backward) => Step::new(pos, RuleKind::Involution, Direction::Forward, vec![]),
        (RuleKind::Commutation, d) => Step::new(pos, RuleKind::Commutation, d, vec![]),
        (RuleKind::Pentagon, Direction::Forward) => Step::new(
            pos,
            RuleKind::Pentagon,
            Direction::Backward,
            [flip_arg(pos), flip_arg(pos + 1)].into_iter().flatten().collect(),
        ),
        (RuleKind::Pentagon, Direction::Backward) => Step::new(pos, RuleKind::Pentagon, Direction::Forward, vec![]),
        (RuleKind::PermNaturality, Direction::Forward) => Step::new(pos, RuleKind::PermNaturality, Direction::Backward, vec![]),
        (RuleKind::PermNaturality, Direction::Backward) => Step::new(pos, RuleKind::PermNaturality, Direction::Forward, vec![]),
        (RuleKind::PermMerge, Direction::Forward) => {
            let p = gens.get(pos).and_then(Generator::as_perm).cloned().unwrap_or_default();
            Step::new(pos, RuleKind::PermMerge, Direction::Backward, vec![format!("P{p}")])
        }
        (RuleKind::PermMerge, Direction::Backward) => Step::new(pos, RuleKind::PermMerge, Direction::Forward, vec![]),
        (RuleKind::PhaseMove, d) => Step::new(pos, RuleKind::PhaseMove, d, vec![]),
    };
    Ok(inv)
}

/// Script taking the result of `script` on `from` back to `from`.
pub fn invert_script(from: &FlipWord, script: &ProofScript) -> Result<ProofScript, RewriteError> {
    let mut w = from.clone();
    let mut inv = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        inv.push(inverse_step(&w, step)?);
        w = apply_rule(&w, step)?;
    }
    inv.reverse();
    Ok(ProofScript { steps: inv })
}

/// Limits for [`connect`].
#[derive(Debug, Clone, Copy)]
pub struct ConnectLimits {
    /// Nodes expanded on each side.
    pub nodes: usize,
    /// Extra positions allowed outside the differing window.
    pub margin: usize,
    pub moves: MoveSet,
}

impl Default for ConnectLimits {
    fn default() -> Self {
        Self { nodes: 200_000, margin: 2, moves: MoveSet::SHUFFLE }
    }
}

struct Side {
    parent: HashMap<Normal, Option<(Normal, Move)>>,
    frontier: VecDeque<Normal>,
    /// Length of the untouched prefix and suffix.
    prefix: usize,
    suffix: usize,
}

impl Side {
    fn new(start: Normal, prefix: usize, suffix: usize) -> Self {
        Self {
            parent: HashMap::from([(start.clone(), None)]),
            frontier: VecDeque::from([start]),
            prefix,
            suffix,
        }
    }

    fn path_to(&self, end: &Normal) -> Vec<(Normal, Move)> {
        let mut out = Vec::new();
        let mut cur = end.clone();
        while let Some(Some((p, m))) = self.parent.get(&cur) {
            out.push((p.clone(), *m));
            cur = p.clone();
        }
        out.reverse();
        out
    }
}

/// Finds a script rewriting `from` into `to` (same source and target) by a
/// bidirectional breadth-first search over derived moves, restricted to the
/// window where the two normal forms differ. Returns the script and its
/// phase change.
pub fn connect(from: &FlipWord, to: &FlipWord, limits: ConnectLimits) -> Result<(ProofScript, i64), SimplifyError> {
    if !from.source().labeled_equal(to.source()) || !from.target().labeled_equal(to.target()) {
        return Err(SimplifyError::NotARelator("words have different endpoints".into()));
    }
    let source: Arc<Triangulation> = from.source().clone();
    let a = Normal::of(from.gens());
    let z = Normal::of(to.gens());
    let prefix = a.flips.iter().zip(&z.flips).take_while(|(x, y)| x == y).count();
    let (pa, pz) = (a.pulled_back(), z.pulled_back());
    let suffix = pa.iter().rev().zip(pz.iter().rev()).take_while(|(x, y)| x == y).count();
    let suffix = suffix.min(a.len() - prefix).min(z.len() - prefix);
    let mut fwd = Side::new(a.clone(), prefix, suffix);
    let mut bwd = Side::new(z.clone(), prefix, suffix);
    let back_moves = MoveSet { pentagon_max: limits.moves.pentagon_max.min(4), ..limits.moves };
    let meet = if a == z {
        Some(a.clone())
    } else {
        let mut found = None;
        let mut expanded = 0usize;
        while found.is_none() && expanded < 2 * limits.nodes && (!fwd.frontier.is_empty() || !bwd.frontier.is_empty()) {
            let forward_turn = bwd.frontier.is_empty() || (!fwd.frontier.is_empty() && fwd.parent.len() <= bwd.parent.len());
            let (side, other, set) = if forward_turn {
                (&mut fwd, &bwd, limits.moves)
            } else {
                (&mut bwd, &fwd, back_moves)
            };
            let Some(nf) = side.frontier.pop_front() else { continue };
            expanded += 1;
            let Some(states) = nf.states(&source) else { continue };
            let lo = side.prefix.saturating_sub(limits.margin);
            let hi = (nf.len() + limits.margin).saturating_sub(side.suffix).min(nf.len());
            for m in moves(&nf, &states, set, (lo, hi)) {
                if m.position() + m.span() > hi {
                    continue;
                }
                let next = apply_move(&nf, &states, m);
                if side.parent.contains_key(&next) {
                    continue;
                }
                side.parent.insert(next.clone(), Some((nf.clone(), m)));
                if other.parent.contains_key(&next) {
                    found = Some(next);
                    break;
                }
                side.frontier.push_back(next);
            }
        }
        found
    };
    let Some(meet) = meet else {
        return Err(SimplifyError::BudgetExhausted(limits.nodes as u64));
    };

    let mut b = ScriptBuilder::new(from.clone());
    b.normalize()?;
    for (_, m) in fwd.path_to(&meet) {
        expand_move(&mut b, m)?;
    }
    // walk the backward tree from the meeting point to `z`, inverting moves
    let mut cur = meet.clone();
    for (prev, _) in bwd.path_to(&meet).into_iter().rev() {
        let states = cur.states(&source).ok_or_else(|| SimplifyError::NotARelator("lost applicability".into()))?;
        let step = moves(&cur, &states, MoveSet::FULL, (0, cur.len()))
            .into_iter()
            .chain(insertions(&cur, &states, &prev))
            .find(|m| apply_move(&cur, &states, *m) == prev)
            .ok_or_else(|| SimplifyError::NotARelator("backward move has no inverse".into()))?;
        expand_move(&mut b, step)?;
        cur = prev;
    }
    // undo the normalization of `to`
    let mut nb = ScriptBuilder::new(to.clone());
    nb.normalize()?;
    let undo = invert_script(to, &nb.script())?;
    for s in undo.steps {
        b.apply(s)?;
    }
    let (end, script) = b.into_parts();
    if end.gens() != to.gens() {
        return Err(RewriteError::FinalWordMismatch { got: end.to_string(), expected: to.to_string() }.into());
    }
    let delta = end.zexp() - from.zexp();
    Ok((script, delta))
}

/// Script rewriting `a` into `b` through the relator `a b⁻¹`: inserts
/// `b⁻¹ b` after `a`, then replays the simplifier's reduction of the prefix.
pub fn script_between(a: &FlipWord, b: &FlipWord, budget: u64) -> Result<(ProofScript, i64), SimplifyError> {
    let relator = a
        .compose(&b.invert())
        .map_err(|_| SimplifyError::NotARelator("words have different endpoints".into()))?;
    let reduced = auto_simplify(&relator, budget)?;
    if !reduced.word.is_empty() {
        return Err(if reduced.exhausted {
            SimplifyError::BudgetExhausted(budget)
        } else {
            SimplifyError::NotARelator(format!("reduces to `{}`", reduced.word))
        });
    }
    let mut builder = ScriptBuilder::new(a.clone());
    let end = a.len();
    // nest h h⁻¹ pairs for the letters h of b⁻¹, giving a b⁻¹ b
    for (k, h) in b.invert().gens().iter().enumerate() {
        builder.insert_inverse(end + k, h)?;
    }
    for step in reduced.script.steps {
        builder.apply(step)?;
    }
    let (word, script) = builder.into_parts();
    if word.gens() != b.gens() {
        return Err(RewriteError::FinalWordMismatch { got: word.to_string(), expected: b.to_string() }.into());
    }
    Ok((script, word.zexp() - a.zexp()))
}

/// How one leg of a derivation was bridged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bridge {
    Search,
    Simplifier,
}

/// One leg of [`derive_path`]: the phase the waypoint claims relative to the
/// previous one, and the phase actually found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub index: usize,
    pub claimed: i64,
    pub computed: i64,
    pub bridge: Bridge,
}

/// Builds a script from `from` through each waypoint to `to`. The phase of
/// each waypoint word is the phase it claims. Legs are bridged by
/// [`connect`], falling back to [`script_between`].
pub fn derive_path(
    from: &FlipWord,
    waypoints: &[FlipWord],
    to: &FlipWord,
    limits: ConnectLimits,
    budget: u64,
) -> Result<(ProofScript, Vec<Leg>), SimplifyError> {
    let mut steps = Vec::new();
    let mut legs = Vec::new();
    let mut cur = from.clone();
    let mut claimed_at = from.zexp();
    for (index, next) in waypoints.iter().chain(std::iter::once(to)).enumerate() {
        let (script, delta, bridge) = match connect(&cur, next, limits) {
            Ok((s, d)) => (s, d, Bridge::Search),
            Err(_) => {
                let (s, d) = script_between(&cur, next, budget)?;
                (s, d, Bridge::Simplifier)
            }
        };
        legs.push(Leg { index, claimed: next.zexp() - claimed_at, computed: delta, bridge });
        claimed_at = next.zexp();
        cur = crate::rewrite::replay(&cur, &script)?;
        steps.extend(script.steps);
    }
    Ok((ProofScript { steps }, legs))
}

/// Insertions producing `want` from `cur`; covers letters outside any window.
fn insertions(cur: &Normal, states: &[Triangulation], want: &Normal) -> Vec<Move> {
    if want.len() != cur.len() + 2 {
        return Vec::new();
    }
    let p = cur.flips.iter().zip(&want.flips).take_while(|(x, y)| x == y).count();
    let mut out = Vec::new();
    for pos in p.saturating_sub(1)..=p.min(cur.len()) {
        if let Some(&x) = want.flips.get(pos) {
            if states[pos].is_flippable(x) {
                out.push(Move::Insert(pos, x));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_gens;

    /// A triangulated hexagon: arcs 1, 2, 3 fan out from one corner.
    fn hexagon() -> Arc<Triangulation> {
        Arc::new(Triangulation::from_signed(3, 6, &[[-1, -2, 1], [1, -3, 2], [2, -4, 3], [3, -5, -6]]).unwrap())
    }

    fn positive_pair(t: &Triangulation) -> (u32, u32) {
        if t.pentagon_orientation(ArcLabel(1), ArcLabel(2)) == Some(POSITIVE_PENTAGON) {
            (1, 2)
        } else {
            (2, 1)
        }
    }

    #[test]
    fn normal_form_pushes_permutations() {
        let gens = parse_gens("F1 P(1 2) F1 F3 P(2 3)").unwrap();
        let nf = Normal::of(&gens);
        assert_eq!(nf.flips, vec![ArcLabel(1), ArcLabel(2), ArcLabel(3)]);
        assert_eq!(nf.perm, "(1 2)(2 3)".parse().unwrap());
    }

    #[test]
    fn moves_match_their_expansion() {
        let t = hexagon();
        let (a, b) = positive_pair(&t);
        for (gens, len) in [(format!("F{a} F{b} F{a}"), 3), (format!("F{b} F{a} F{b}"), 3), (format!("F{a} F{b}"), 2)] {
            let w = FlipWord::parse(t.clone(), &gens, 0).unwrap();
            let nf = Normal::of(w.gens());
            let states = nf.states(&t).unwrap();
            let m = Move::Pentagon { pos: 0, len, b: nf.flips[1] };
            let predicted = apply_move(&nf, &states, m);
            let phase = move_phase(&nf, &states, m);
            let mut builder = ScriptBuilder::new(w.clone());
            expand_move(&mut builder, m).unwrap();
            assert_eq!(Normal::of(builder.word().gens()), predicted);
            assert_eq!(builder.word().zexp(), phase);
            let replayed = crate::rewrite::check_script(&w, &builder.script(), builder.word()).unwrap();
            assert_eq!(replayed, phase);
        }
    }

    #[test]
    fn inverse_pair_simplifies_to_nothing() {
        let t = hexagon();
        let w = FlipWord::parse(t.clone(), "F1 F2 F3 F1 P(1 3)", 0).unwrap();
        let r = w.compose(&w.invert()).unwrap();
        let s = auto_simplify(&r, DEFAULT_BUDGET).unwrap();
        assert!(s.word.is_empty());
        assert_eq!(s.delta, 0);
        assert_eq!(relator_phase(&r, None, DEFAULT_BUDGET), Ok(0));
    }

    #[test]
    fn script_inversion_round_trips() {
        let t = hexagon();
        let (a, b) = positive_pair(&t);
        let w = FlipWord::parse(t.clone(), &format!("F{a} F{b} F{a} F3"), 0).unwrap();
        let mut builder = ScriptBuilder::new(w.clone());
        builder.pentagon_move(0, 3, ArcLabel(b)).unwrap();
        builder.normalize().unwrap();
        let (end, script) = builder.into_parts();
        let back = invert_script(&w, &script).unwrap();
        let mut again = crate::rewrite::replay(&end, &back).unwrap();
        assert_eq!(again.gens(), w.gens());
        assert_eq!(again.zexp(), 0);
        again = again.with_zexp(0);
        assert_eq!(again, w);
    }

    #[test]
    fn script_between_passes_through_the_relator() {
        let t = hexagon();
        let (a, b) = positive_pair(&t);
        let from = FlipWord::parse(t.clone(), &format!("F3 F{a} F{b} F{a} F{b} F{a} F3"), 0).unwrap();
        let to = FlipWord::parse(t.clone(), &format!("P({a} {b})"), 0).unwrap();
        let (script, delta) = script_between(&from, &to, DEFAULT_BUDGET).unwrap();
        assert_eq!(delta, -1);
        assert_eq!(crate::rewrite::check_script(&from, &script, &to), Ok(-1));
    }

    #[test]
    fn connect_finds_commutations_and_pentagons() {
        let t = hexagon();
        let (a, b) = positive_pair(&t);
        let from = FlipWord::parse(t.clone(), &format!("F{a} F{b} F{a} F{b}"), 0).unwrap();
        let to = FlipWord::parse(t.clone(), &format!("F{b} P({a} {b})"), 0).unwrap();
        let (script, delta) = connect(&from, &to, ConnectLimits::default()).unwrap();
        assert_eq!(crate::rewrite::check_script(&from, &script, &to).unwrap(), delta);
        assert_eq!(delta, -1);
    }
}
