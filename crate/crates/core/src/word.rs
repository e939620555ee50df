//! Phase-tracked words over flips and label permutations.
//!
//! Generators apply left to right: in `F3 F4 P(2 4)` arc 3 is flipped first,
//! then arc 4, then every label `x` becomes `σ(x)`. A word also carries the
//! exponent `k` of the central unit `z^k` it has accumulated; the unit is
//! formal and never evaluated numerically.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::{LabelPermutation, PermutationError};
use crate::triangulation::{ArcLabel, Triangulation, TriangulationError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Flip(ArcLabel),
    Perm(LabelPermutation),
}

impl Generator {
    pub fn flip(a: u32) -> Self {
        Generator::Flip(ArcLabel(a))
    }

    pub fn as_flip(&self) -> Option<ArcLabel> {
        match self {
            Generator::Flip(a) => Some(*a),
            Generator::Perm(_) => None,
        }
    }

    pub fn as_perm(&self) -> Option<&LabelPermutation> {
        match self {
            Generator::Perm(p) => Some(p),
            Generator::Flip(_) => None,
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Generator::Flip(a) => Generator::Flip(*a),
            Generator::Perm(p) => Generator::Perm(p.inverse()),
        }
    }

    /// Applies the generator to a triangulation.
    pub fn act(&self, t: &Triangulation) -> Result<Triangulation, TriangulationError> {
        match self {
            Generator::Flip(a) => t.flip(*a),
            Generator::Perm(p) => t.apply_permutation(p),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Flip(a) => write!(f, "F{a}"),
            Generator::Perm(p) => write!(f, "P{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("cannot parse generator `{0}`")]
    Generator(String),
    #[error(transparent)]
    Permutation(#[from] PermutationError),
}

impl FromStr for Generator {
    type Err = ParseError;

    /// `F7` or `P(2 4)(1 3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('F') {
            let a = rest.parse::<u32>().map_err(|_| ParseError::Generator(s.to_string()))?;
            if a == 0 {
                return Err(ParseError::Generator(s.to_string()));
            }
            Ok(Generator::Flip(ArcLabel(a)))
        } else if let Some(rest) = s.strip_prefix('P') {
            Ok(Generator::Perm(rest.parse()?))
        } else {
            Err(ParseError::Generator(s.to_string()))
        }
    }
}

/// Parses a whitespace separated generator list such as `F3 F4 F3 P(2 4)`.
/// Permutations may contain spaces inside their parentheses.
pub fn parse_gens(s: &str) -> Result<Vec<Generator>, ParseError> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if rest.starts_with('P') {
            // consume consecutive parenthesised cycles
            let mut end = 1;
            let bytes = rest.as_bytes();
            loop {
                while end < bytes.len() && bytes[end] == b' ' {
                    end += 1;
                }
                if end < bytes.len() && bytes[end] == b'(' {
                    match rest[end..].find(')') {
                        Some(close) => end += close + 1,
                        None => return Err(ParseError::Generator(rest.to_string())),
                    }
                } else {
                    break;
                }
            }
            out.push(rest[..end].trim_end().parse()?);
            rest = rest[end..].trim_start();
        } else {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            out.push(rest[..end].parse()?);
            rest = rest[end..].trim_start();
        }
    }
    Ok(out)
}

pub fn format_gens(gens: &[Generator]) -> String {
    gens.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator {index} ({generator}) is not applicable: {source}")]
    NotApplicable {
        index: usize,
        generator: String,
        source: TriangulationError,
    },
    #[error("target of the first word differs from the source of the second")]
    NonComposable,
}

/// A morphism of the quantized groupoid: `z^zexp · gens`, starting at
/// `source`.
#[derive(Debug, Clone)]
pub struct FlipWord {
    source: Arc<Triangulation>,
    gens: Vec<Generator>,
    zexp: i64,
    target: Arc<Triangulation>,
}

impl PartialEq for FlipWord {
    /// Generator-identical words with the same phase on labeled-equal sources.
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.zexp == other.zexp && self.source.labeled_equal(&other.source)
    }
}

impl FlipWord {
    /// Validates that every prefix is applicable. Identity permutations are
    /// dropped.
    pub fn new(source: Arc<Triangulation>, gens: Vec<Generator>, zexp: i64) -> Result<Self, WordError> {
        let gens: Vec<Generator> = gens
            .into_iter()
            .filter(|g| !matches!(g, Generator::Perm(p) if p.is_identity()))
            .collect();
        let target = Arc::new(run(&source, &gens)?);
        Ok(Self { source, gens, zexp, target })
    }

    pub fn empty(source: Arc<Triangulation>) -> Self {
        Self { target: source.clone(), source, gens: Vec::new(), zexp: 0 }
    }

    pub fn parse(source: Arc<Triangulation>, gens: &str, zexp: i64) -> Result<Self, WordParseError> {
        Ok(Self::new(source, parse_gens(gens)?, zexp)?)
    }

    pub fn source(&self) -> &Arc<Triangulation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Triangulation> {
        &self.target
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn zexp(&self) -> i64 {
        self.zexp
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn flip_count(&self) -> usize {
        self.gens.iter().filter(|g| g.as_flip().is_some()).count()
    }

    pub fn with_zexp(mut self, zexp: i64) -> Self {
        self.zexp = zexp;
        self
    }

    /// Target equals source up to labeled equality.
    pub fn is_automorphism(&self) -> bool {
        self.source.labeled_equal(&self.target)
    }

    /// Triangulation reached after the first `pos` generators.
    pub fn state_at(&self, pos: usize) -> Triangulation {
        run(&self.source, &self.gens[..pos.min(self.gens.len())]).expect("validated word")
    }

    /// Every intermediate triangulation, `len() + 1` entries.
    pub fn states(&self) -> Vec<Triangulation> {
        let mut out = Vec::with_capacity(self.gens.len() + 1);
        let mut t = (*self.source).clone();
        out.push(t.clone());
        for g in &self.gens {
            t = g.act(&t).expect("validated word");
            out.push(t.clone());
        }
        out
    }

    /// Concatenation; phases add.
    pub fn compose(&self, other: &Self) -> Result<Self, WordError> {
        if !self.target.labeled_equal(&other.source) {
            return Err(WordError::NonComposable);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self::new(self.source.clone(), gens, self.zexp + other.zexp)
    }

    /// Reversed generators, permutations inverted, phase negated.
    pub fn invert(&self) -> Self {
        let gens = self.gens.iter().rev().map(Generator::inverse).collect();
        Self::new(self.target.clone(), gens, -self.zexp).expect("inverse of a valid word is valid")
    }

    /// `prefix · core · prefix⁻¹`.
    pub fn expand_ad(prefix: &Self, core: &Self) -> Result<Self, WordError> {
        prefix.compose(core)?.compose(&prefix.invert())
    }
}

impl fmt::Display for FlipWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zexp != 0 {
            write!(f, "z^{} ", self.zexp)?;
        }
        if self.gens.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", format_gens(&self.gens))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Applies generators in order, reporting the first failing index.
pub fn run(source: &Triangulation, gens: &[Generator]) -> Result<Triangulation, WordError> {
    let mut t = source.clone();
    for (index, g) in gens.iter().enumerate() {
        t = g.act(&t).map_err(|source| WordError::NotApplicable {
            index,
            generator: g.to_string(),
            source,
        })?;
    }
    Ok(t)
}

/// Serialized word: `{"source": ..., "zexp": k, "gens": ["F3", "P(2 4)"]}`.
/// `source` is either a path to a triangulation document (resolved by the
/// caller) or an inline triangulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceRef>,
    #[serde(default)]
    pub zexp: i64,
    pub gens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceRef {
    Path(String),
    Inline(crate::triangulation::TriangulationFile),
}

impl WordFile {
    pub fn from_word(w: &FlipWord) -> Self {
        Self {
            source: Some(SourceRef::Inline(w.source.to_file())),
            zexp: w.zexp,
            gens: w.gens.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn generators(&self) -> Result<Vec<Generator>, ParseError> {
        self.gens.iter().map(|g| g.parse()).collect()
    }

    pub fn build(&self, source: Arc<Triangulation>) -> Result<FlipWord, WordParseError> {
        Ok(FlipWord::new(source, self.generators()?, self.zexp)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Arc<Triangulation> {
        Arc::new(Triangulation::build_standard(1, 1).unwrap())
    }

    #[test]
    fn parse_and_print() {
        let gens = parse_gens("F3 F10 P(2 4)(1 7) F1 P (3 5)").unwrap();
        assert_eq!(gens.len(), 5);
        assert_eq!(format_gens(&gens), "F3 F10 P(1 7)(2 4) F1 P(3 5)");
        assert!(parse_gens("F0").is_err());
        assert!(parse_gens("G3").is_err());
        assert!(parse_gens("P(2 4").is_err());
    }

    #[test]
    fn compose_adds_phases() {
        let t = torus();
        let w1 = FlipWord::parse(t.clone(), "F1", 2).unwrap();
        let w2 = FlipWord::parse(w1.target().clone(), "F1", -5).unwrap();
        let w = w1.compose(&w2).unwrap();
        assert_eq!(w.zexp(), -3);
        assert!(w.is_automorphism());
        let empty = FlipWord::empty(w1.target().clone());
        assert_eq!(w1.compose(&empty).unwrap(), w1);
        let sphere = Arc::new(Triangulation::build_standard(0, 4).unwrap());
        let u = FlipWord::parse(sphere.clone(), "F1", 0).unwrap();
        assert_eq!(u.compose(&u), Err(WordError::NonComposable));
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let t = torus();
        let w = FlipWord::parse(t.clone(), "F1 F2 P(1 2 3)", 4).unwrap();
        let inv = w.invert();
        assert_eq!(format_gens(inv.gens()), "P(1 3 2) F2 F1");
        assert_eq!(inv.zexp(), -4);
        assert!(inv.target().labeled_equal(&t));
        let single = FlipWord::parse(t.clone(), "F2", 0).unwrap();
        assert_eq!(single.invert().gens(), single.gens());
        assert!(FlipWord::empty(t).invert().is_empty());
    }

    #[test]
    fn not_applicable_reports_index() {
        let t = Arc::new(Triangulation::build_standard(0, 4).unwrap());
        let err = FlipWord::parse(t, "F1 F2 F9", 0).unwrap_err();
        assert!(matches!(err, WordParseError::Word(WordError::NotApplicable { index: 2, .. })));
    }
}
