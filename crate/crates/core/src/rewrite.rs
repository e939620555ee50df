//! Rewrite rules of the quantized groupoid and replayable proof scripts.
//!
//! Every rule rewrites a [`FlipWord`] in place of a short pattern and keeps
//! its source and target. Only the pentagon changes the phase: contracting
//! `F_a F_b F_a F_b F_a` to the transposition `(a b)` multiplies by `z^{-1}`.
//! The contraction is only a rule for positively oriented pairs, where `b`
//! immediately follows `a` counter-clockwise in their common triangle. The
//! quintuple of a negatively oriented pair walks the same pentagon the other
//! way round and equals `z^{+1} (a b)`; [`ScriptBuilder::pentagon`] derives
//! it from the rules.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::LabelPermutation;
use crate::triangulation::{ArcLabel, Triangulation};
use crate::word::{FlipWord, Generator, ParseError};

/// Orientation of the pairs whose pentagon contraction carries `z^{-1}`.
pub const POSITIVE_PENTAGON: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleKind {
    Involution,
    Commutation,
    Pentagon,
    PermNaturality,
    PermMerge,
    PhaseMove,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleKind::Involution => "involution",
            RuleKind::Commutation => "commutation",
            RuleKind::Pentagon => "pentagon",
            RuleKind::PermNaturality => "permutation naturality",
            RuleKind::PermMerge => "permutation merge",
            RuleKind::PhaseMove => "phase move",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteRule {
    pub kind: RuleKind,
    pub direction: Direction,
}

impl RewriteRule {
    /// Phase change contributed by one application.
    pub fn phase_delta(&self) -> i64 {
        match (self.kind, self.direction) {
            (RuleKind::Pentagon, Direction::Forward) => -1,
            (RuleKind::Pentagon, Direction::Backward) => 1,
            _ => 0,
        }
    }
}

/// One rule application. `args` holds generators in word notation:
///
/// - involution backward: the flip to insert twice, `["F3"]`
/// - pentagon backward: the two flips of the quintuple, `["F3", "F4"]`
/// - permutation merge backward: the left factor, `["P(2 4)"]`; splits the
///   permutation at `pos`, or inserts `τ τ⁻¹` when there is none
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub pos: usize,
    pub rule: RuleKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    #[serde(default)]
    pub dir: Direction,
}

impl Step {
    pub fn new(pos: usize, rule: RuleKind, dir: Direction, args: Vec<String>) -> Self {
        Self { pos, rule, args, dir }
    }

    pub fn rule(&self) -> RewriteRule {
        RewriteRule { kind: self.rule, direction: self.dir }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.dir {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        };
        write!(f, "{} {} at {}", self.rule, dir, self.pos)?;
        if !self.args.is_empty() {
            write!(f, " [{}]", self.args.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProofScript {
    pub steps: Vec<Step>,
}

impl ProofScript {
    /// Net phase: backward pentagons minus forward pentagons.
    pub fn phase(&self) -> i64 {
        self.steps.iter().map(|s| s.rule().phase_delta()).sum()
    }

    pub fn count(&self, kind: RuleKind) -> usize {
        self.steps.iter().filter(|s| s.rule == kind).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule not applicable at position {pos}: {reason}")]
    RuleNotApplicable { pos: usize, reason: String },
    #[error("pattern mismatch at position {pos}: expected {expected}")]
    PatternMismatch { pos: usize, expected: String },
    #[error("bad step argument: {0}")]
    BadArgument(#[from] ParseError),
    #[error("step {index} ({step}) failed: {source}")]
    ScriptStepFailed {
        index: usize,
        step: String,
        source: Box<RewriteError>,
    },
    #[error("replayed word `{got}` differs from the expected `{expected}`")]
    FinalWordMismatch { got: String, expected: String },
}

fn not_applicable(pos: usize, reason: impl Into<String>) -> RewriteError {
    RewriteError::RuleNotApplicable { pos, reason: reason.into() }
}

fn mismatch(pos: usize, expected: impl Into<String>) -> RewriteError {
    RewriteError::PatternMismatch { pos, expected: expected.into() }
}

fn flip_at(gens: &[Generator], pos: usize) -> Option<ArcLabel> {
    gens.get(pos).and_then(Generator::as_flip)
}

fn perm_at(gens: &[Generator], pos: usize) -> Option<&LabelPermutation> {
    gens.get(pos).and_then(Generator::as_perm)
}

fn parse_arg(step: &Step, i: usize) -> Result<Generator, RewriteError> {
    let s = step
        .args
        .get(i)
        .ok_or_else(|| not_applicable(step.pos, format!("missing argument {}", i + 1)))?;
    Ok(s.parse()?)
}

fn arg_flip(step: &Step, i: usize) -> Result<ArcLabel, RewriteError> {
    parse_arg(step, i)?
        .as_flip()
        .ok_or_else(|| not_applicable(step.pos, format!("argument {} must be a flip", i + 1)))
}

fn arg_perm(step: &Step, i: usize) -> Result<LabelPermutation, RewriteError> {
    match parse_arg(step, i)? {
        Generator::Perm(p) => Ok(p),
        Generator::Flip(_) => Err(not_applicable(step.pos, format!("argument {} must be a permutation", i + 1))),
    }
}

/// The quintuple `F_a F_b F_a F_b F_a`.
pub fn quintuple(a: ArcLabel, b: ArcLabel) -> Vec<Generator> {
    [a, b, a, b, a].into_iter().map(Generator::Flip).collect()
}

/// Rewrites `w` by one step. The result has the same source and target, and
/// its phase is shifted by the rule's delta.
pub fn apply_rule(w: &FlipWord, step: &Step) -> Result<FlipWord, RewriteError> {
    let gens = w.gens();
    let pos = step.pos;
    if pos > gens.len() {
        return Err(not_applicable(pos, format!("word has only {} generators", gens.len())));
    }
    let state = || w.state_at(pos);
    let mut out: Vec<Generator> = gens[..pos].to_vec();
    let rest: &[Generator];
    match (step.rule, step.dir) {
        (RuleKind::Involution, Direction::Forward) => {
            let a = flip_at(gens, pos).ok_or_else(|| mismatch(pos, "F_a F_a"))?;
            if flip_at(gens, pos + 1) != Some(a) {
                return Err(mismatch(pos, format!("F{a} F{a}")));
            }
            rest = &gens[pos + 2..];
        }
        (RuleKind::Involution, Direction::Backward) => {
            let a = arg_flip(step, 0)?;
            if !state().is_flippable(a) {
                return Err(not_applicable(pos, format!("arc {a} is not flippable here")));
            }
            out.extend([Generator::Flip(a), Generator::Flip(a)]);
            rest = &gens[pos..];
        }
        (RuleKind::Commutation, _) => {
            let (Some(a), Some(b)) = (flip_at(gens, pos), flip_at(gens, pos + 1)) else {
                return Err(mismatch(pos, "F_a F_b"));
            };
            if !state().commuting_flips(a, b) {
                return Err(not_applicable(pos, format!("flips of {a} and {b} do not commute here")));
            }
            out.extend([Generator::Flip(b), Generator::Flip(a)]);
            rest = &gens[pos + 2..];
        }
        (RuleKind::Pentagon, Direction::Forward) => {
            let (Some(a), Some(b)) = (flip_at(gens, pos), flip_at(gens, pos + 1)) else {
                return Err(mismatch(pos, "F_a F_b F_a F_b F_a"));
            };
            if gens.len() < pos + 5 || gens[pos..pos + 5] != quintuple(a, b)[..] {
                return Err(mismatch(pos, format!("F{a} F{b} F{a} F{b} F{a}")));
            }
            check_pentagon(&state(), pos, a, b)?;
            out.push(Generator::Perm(LabelPermutation::transposition(a.0, b.0)));
            rest = &gens[pos + 5..];
        }
        (RuleKind::Pentagon, Direction::Backward) => {
            let (a, b) = (arg_flip(step, 0)?, arg_flip(step, 1)?);
            let sigma = LabelPermutation::transposition(a.0, b.0);
            if perm_at(gens, pos) != Some(&sigma) {
                return Err(mismatch(pos, format!("P{sigma}")));
            }
            check_pentagon(&state(), pos, a, b)?;
            out.extend(quintuple(a, b));
            rest = &gens[pos + 1..];
        }
        (RuleKind::PermNaturality, Direction::Forward) => {
            let (Some(a), Some(p)) = (flip_at(gens, pos), perm_at(gens, pos + 1)) else {
                return Err(mismatch(pos, "F_a P"));
            };
            out.extend([Generator::Perm(p.clone()), Generator::flip(p.apply(a.0))]);
            rest = &gens[pos + 2..];
        }
        (RuleKind::PermNaturality, Direction::Backward) => {
            let (Some(p), Some(b)) = (perm_at(gens, pos), flip_at(gens, pos + 1)) else {
                return Err(mismatch(pos, "P F_b"));
            };
            out.extend([Generator::flip(p.inverse().apply(b.0)), Generator::Perm(p.clone())]);
            rest = &gens[pos + 2..];
        }
        (RuleKind::PermMerge, Direction::Forward) => {
            let (Some(p), Some(q)) = (perm_at(gens, pos), perm_at(gens, pos + 1)) else {
                return Err(mismatch(pos, "P P"));
            };
            out.push(Generator::Perm(p.then(q)));
            rest = &gens[pos + 2..];
        }
        (RuleKind::PermMerge, Direction::Backward) => {
            let tau = arg_perm(step, 0)?;
            if tau.max_label() > w.source().arc_count() {
                return Err(not_applicable(pos, "permutation moves labels out of range"));
            }
            match perm_at(gens, pos) {
                Some(p) => {
                    out.extend([Generator::Perm(tau.clone()), Generator::Perm(tau.inverse().then(p))]);
                    rest = &gens[pos + 1..];
                }
                None => {
                    out.extend([Generator::Perm(tau.clone()), Generator::Perm(tau.inverse())]);
                    rest = &gens[pos..];
                }
            }
        }
        (RuleKind::PhaseMove, _) => {
            rest = &gens[pos..];
        }
    }
    out.extend(rest.iter().cloned());
    let next = FlipWord::new(w.source().clone(), out, w.zexp() + step.rule().phase_delta())
        .map_err(|e| not_applicable(pos, e.to_string()))?;
    debug_assert!(next.target().labeled_equal(w.target()));
    if !next.target().labeled_equal(w.target()) {
        return Err(not_applicable(pos, "rewrite changed the target triangulation"));
    }
    Ok(next)
}

fn check_pentagon(t: &Triangulation, pos: usize, a: ArcLabel, b: ArcLabel) -> Result<(), RewriteError> {
    match t.pentagon_orientation(a, b) {
        None => Err(not_applicable(pos, format!("arcs {a} and {b} do not span a pentagon here"))),
        Some(o) if o != POSITIVE_PENTAGON => Err(not_applicable(pos, format!("pair ({a}, {b}) is negatively oriented here"))),
        Some(_) => Ok(()),
    }
}

/// Replays `script` on `from` and checks that the result is
/// generator-identical to `to`. Returns the accumulated phase change.
pub fn check_script(from: &FlipWord, script: &ProofScript, to: &FlipWord) -> Result<i64, RewriteError> {
    let end = replay(from, script)?;
    if end.gens() != to.gens() || !end.source().labeled_equal(to.source()) {
        return Err(RewriteError::FinalWordMismatch { got: end.to_string(), expected: to.to_string() });
    }
    Ok(end.zexp() - from.zexp())
}

/// Applies every step in order.
pub fn replay(from: &FlipWord, script: &ProofScript) -> Result<FlipWord, RewriteError> {
    let mut w = from.clone();
    for (index, step) in script.steps.iter().enumerate() {
        w = apply_rule(&w, step).map_err(|e| RewriteError::ScriptStepFailed {
            index,
            step: step.to_string(),
            source: Box::new(e),
        })?;
    }
    Ok(w)
}

/// Rewrites a word while recording the primitive steps. The derived moves
/// below expand into rule applications, so every recorded script replays
/// with [`check_script`].
#[derive(Debug, Clone)]
pub struct ScriptBuilder {
    word: FlipWord,
    steps: Vec<Step>,
}

impl ScriptBuilder {
    pub fn new(word: FlipWord) -> Self {
        Self { word, steps: Vec::new() }
    }

    pub fn word(&self) -> &FlipWord {
        &self.word
    }

    pub fn script(&self) -> ProofScript {
        ProofScript { steps: self.steps.clone() }
    }

    pub fn into_parts(self) -> (FlipWord, ProofScript) {
        (self.word, ProofScript { steps: self.steps })
    }

    pub fn apply(&mut self, step: Step) -> Result<(), RewriteError> {
        self.word = apply_rule(&self.word, &step)?;
        self.steps.push(step);
        Ok(())
    }

    fn rule(&mut self, pos: usize, rule: RuleKind, dir: Direction, args: Vec<String>) -> Result<(), RewriteError> {
        self.apply(Step::new(pos, rule, dir, args))
    }

    pub fn cancel(&mut self, pos: usize) -> Result<(), RewriteError> {
        self.rule(pos, RuleKind::Involution, Direction::Forward, vec![])
    }

    pub fn insert_pair(&mut self, pos: usize, a: ArcLabel) -> Result<(), RewriteError> {
        self.rule(pos, RuleKind::Involution, Direction::Backward, vec![format!("F{a}")])
    }

    pub fn commute(&mut self, pos: usize) -> Result<(), RewriteError> {
        self.rule(pos, RuleKind::Commutation, Direction::Forward, vec![])
    }

    /// Inserts `g g⁻¹` in front of position `pos`.
    pub fn insert_inverse(&mut self, pos: usize, g: &Generator) -> Result<(), RewriteError> {
        match g {
            Generator::Flip(a) => self.insert_pair(pos, *a),
            Generator::Perm(tau) => {
                let arg = |p: &LabelPermutation| vec![format!("P{p}")];
                match perm_at(self.word.gens(), pos) {
                    None => self.rule(pos, RuleKind::PermMerge, Direction::Backward, arg(tau)),
                    Some(_) => {
                        // p -> τ (τ⁻¹p) -> τ τ⁻¹ p; when τ = p the middle factor
                        // vanishes and the second step inserts τ⁻¹ τ instead
                        self.rule(pos, RuleKind::PermMerge, Direction::Backward, arg(tau))?;
                        self.rule(pos + 1, RuleKind::PermMerge, Direction::Backward, arg(&tau.inverse()))
                    }
                }
            }
        }
    }

    /// Cancels a word of the form `X X⁻¹` where `X` has `half` generators.
    pub fn cancel_middle(&mut self, half: usize) -> Result<(), RewriteError> {
        for i in (0..half).rev() {
            match self.word.gens().get(i) {
                Some(Generator::Flip(_)) => self.cancel(i)?,
                Some(Generator::Perm(_)) => self.rule(i, RuleKind::PermMerge, Direction::Forward, vec![])?,
                None => return Err(mismatch(i, "a generator")),
            }
        }
        Ok(())
    }

    /// Moves every permutation to the end of the word and merges them.
    pub fn normalize(&mut self) -> Result<(), RewriteError> {
        loop {
            let gens = self.word.gens();
            let step = (0..gens.len().saturating_sub(1)).find_map(|i| match (&gens[i], &gens[i + 1]) {
                (Generator::Perm(_), Generator::Flip(_)) => Some((i, RuleKind::PermNaturality, Direction::Backward)),
                (Generator::Perm(_), Generator::Perm(_)) => Some((i, RuleKind::PermMerge, Direction::Forward)),
                _ => None,
            });
            match step {
                Some((i, rule, dir)) => self.rule(i, rule, dir, vec![])?,
                None => return Ok(()),
            }
        }
    }

    /// Contracts the quintuple at `pos` to its transposition, in either
    /// orientation. Returns the phase change.
    pub fn pentagon(&mut self, pos: usize) -> Result<i64, RewriteError> {
        let gens = self.word.gens();
        let (Some(a), Some(b)) = (flip_at(gens, pos), flip_at(gens, pos + 1)) else {
            return Err(mismatch(pos, "F_a F_b F_a F_b F_a"));
        };
        if gens.len() < pos + 5 || gens[pos..pos + 5] != quintuple(a, b)[..] {
            return Err(mismatch(pos, format!("F{a} F{b} F{a} F{b} F{a}")));
        }
        let orientation = self
            .word
            .state_at(pos)
            .pentagon_orientation(a, b)
            .ok_or_else(|| not_applicable(pos, format!("arcs {a} and {b} do not span a pentagon here")))?;
        if orientation == POSITIVE_PENTAGON {
            self.rule(pos, RuleKind::Pentagon, Direction::Forward, vec![])?;
            return Ok(-1);
        }
        // σ σ A(a,b) -> A(b,a) σ A(a,b) -> A(b,a) A(b,a)' σ -> σ
        let sigma = format!("P{}", LabelPermutation::transposition(a.0, b.0));
        self.rule(pos, RuleKind::PermMerge, Direction::Backward, vec![sigma])?;
        self.rule(pos, RuleKind::Pentagon, Direction::Backward, vec![format!("F{b}"), format!("F{a}")])?;
        for k in 0..5 {
            self.rule(pos + 5 + k, RuleKind::PermNaturality, Direction::Backward, vec![])?;
        }
        for k in (0..5).rev() {
            self.cancel(pos + k)?;
        }
        Ok(1)
    }

    /// Replaces the alternating word of length `len` starting at `pos` (its
    /// second letter is `b`) by the complementary alternating word of the
    /// same pentagon, swapped and reversed, followed by `(a b)`:
    /// `F_a F_b F_a -> z^{∓1} F_b F_a (a b)` for `len = 3`. Lengths 1 to 5.
    pub fn pentagon_move(&mut self, pos: usize, len: usize, b: ArcLabel) -> Result<i64, RewriteError> {
        let a = flip_at(self.word.gens(), pos).ok_or_else(|| mismatch(pos, "a flip"))?;
        if !(1..=5).contains(&len) {
            return Err(not_applicable(pos, "alternating length must be 1 to 5"));
        }
        let expected: Vec<Generator> = quintuple(a, b)[..len].to_vec();
        if self.word.gens().get(pos..pos + len) != Some(&expected[..]) {
            return Err(mismatch(pos, crate::word::format_gens(&expected)));
        }
        // complete the quintuple with u·u⁻¹ where u is the missing tail
        let tail: Vec<ArcLabel> = quintuple(a, b)[len..].iter().filter_map(Generator::as_flip).collect();
        for (k, x) in tail.iter().enumerate() {
            self.insert_pair(pos + len + k, *x)?;
        }
        let delta = self.pentagon(pos)?;
        Ok(delta)
    }
}

impl FromStr for Step {
    type Err = String;

    /// Compact form used in tests: `pentagon+ 3`, `involution- 0 F4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split_whitespace();
        let head = parts.next().ok_or("empty step")?;
        let (name, dir) = match head.strip_suffix('-') {
            Some(n) => (n, Direction::Backward),
            None => (head.strip_suffix('+').unwrap_or(head), Direction::Forward),
        };
        let rule = match name {
            "involution" => RuleKind::Involution,
            "commutation" => RuleKind::Commutation,
            "pentagon" => RuleKind::Pentagon,
            "naturality" => RuleKind::PermNaturality,
            "merge" => RuleKind::PermMerge,
            "phase" => RuleKind::PhaseMove,
            other => return Err(format!("unknown rule `{other}`")),
        };
        let pos = parts
            .next()
            .ok_or("missing position")?
            .parse()
            .map_err(|_| "bad position".to_string())?;
        Ok(Step::new(pos, rule, dir, parts.map(str::to_string).collect()))
    }
}

/// Wraps a generator list on `source` as a word with phase `zexp`.
pub fn word(source: &Arc<Triangulation>, gens: Vec<Generator>, zexp: i64) -> Result<FlipWord, RewriteError> {
    FlipWord::new(source.clone(), gens, zexp).map_err(|e| not_applicable(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> Arc<Triangulation> {
        Arc::new(Triangulation::from_signed(3, 6, &[[-1, -2, 1], [1, -3, 2], [2, -4, 3], [3, -5, -6]]).unwrap())
    }

    fn pairs(t: &Triangulation) -> ((u32, u32), (u32, u32)) {
        if t.pentagon_orientation(ArcLabel(1), ArcLabel(2)) == Some(POSITIVE_PENTAGON) {
            ((1, 2), (2, 1))
        } else {
            ((2, 1), (1, 2))
        }
    }

    #[test]
    fn positive_quintuple_contracts_with_minus_one() {
        let t = hexagon();
        let ((a, b), _) = pairs(&t);
        let w = FlipWord::parse(t.clone(), &format!("F{a} F{b} F{a} F{b} F{a}"), 0).unwrap();
        let out = apply_rule(&w, &"pentagon+ 0".parse().unwrap()).unwrap();
        assert_eq!(out.to_string(), format!("z^-1 P({} {})", a.min(b), a.max(b)));
        assert_eq!(out.zexp(), -1);
        let back = apply_rule(&out, &Step::new(0, RuleKind::Pentagon, Direction::Backward, vec![format!("F{a}"), format!("F{b}")])).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn negative_quintuple_is_not_a_rule_but_derives_plus_one() {
        let t = hexagon();
        let (_, (a, b)) = pairs(&t);
        let w = FlipWord::parse(t.clone(), &format!("F{a} F{b} F{a} F{b} F{a}"), 0).unwrap();
        assert!(matches!(
            apply_rule(&w, &"pentagon+ 0".parse().unwrap()),
            Err(RewriteError::RuleNotApplicable { pos: 0, .. })
        ));
        let mut builder = ScriptBuilder::new(w.clone());
        assert_eq!(builder.pentagon(0), Ok(1));
        let sigma = FlipWord::parse(t, &format!("P({a} {b})"), 0).unwrap();
        assert_eq!(check_script(&w, &builder.script(), &sigma), Ok(1));
    }

    #[test]
    fn three_term_move() {
        let t = hexagon();
        let ((a, b), _) = pairs(&t);
        let w = FlipWord::parse(t.clone(), &format!("F{a} F{b} F{a}"), 0).unwrap();
        let mut builder = ScriptBuilder::new(w.clone());
        assert_eq!(builder.pentagon_move(0, 3, ArcLabel(b)), Ok(-1));
        builder.normalize().unwrap();
        let expected = FlipWord::parse(t, &format!("F{b} F{a} P({a} {b})"), -1).unwrap();
        assert_eq!(builder.word(), &expected);
    }

    #[test]
    fn script_errors_are_located() {
        let t = hexagon();
        let w = FlipWord::parse(t.clone(), "F1 F1 F2", 0).unwrap();
        let script = ProofScript { steps: vec!["involution+ 0".parse().unwrap(), "involution+ 0".parse().unwrap()] };
        match replay(&w, &script) {
            Err(RewriteError::ScriptStepFailed { index, source, .. }) => {
                assert_eq!(index, 1);
                assert!(matches!(*source, RewriteError::PatternMismatch { pos: 0, .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        let wrong = FlipWord::parse(t, "F3", 0).unwrap();
        let one = ProofScript { steps: vec!["involution+ 0".parse().unwrap()] };
        assert!(matches!(check_script(&w, &one, &wrong), Err(RewriteError::FinalWordMismatch { .. })));
    }

    #[test]
    fn naturality_and_merge() {
        let t = hexagon();
        let w = FlipWord::parse(t.clone(), "P(1 2) F1 P(2 3)", 0).unwrap();
        let mut builder = ScriptBuilder::new(w.clone());
        builder.normalize().unwrap();
        assert_eq!(builder.word().to_string(), "F2 P(1 3 2)");
        assert_eq!(builder.script().count(RuleKind::PermNaturality), 1);
        assert_eq!(builder.script().count(RuleKind::PermMerge), 1);
        assert_eq!(builder.script().phase(), 0);
    }
}
