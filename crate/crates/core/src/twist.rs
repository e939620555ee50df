//! Dehn twists as flip words and the fixture datasets that carry them.
//!
//! A dataset bundles a triangulation, named twist words, optional
//! conjugation forms `Ad(prefix) F_b (a b)`, relation specifications,
//! replayable scripts and the waypoint derivations those scripts were built
//! from. Words inside a dataset are written as token lists: a token is a
//! generator (`F3`, `P(2 4)`), a twist name, `Name^-1` for its inverse, or
//! `Name@ad` for its conjugation form.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extension::{RelationKind, RelationSpec};
use crate::permutation::LabelPermutation;
use crate::rewrite::{check_script, ProofScript, Step};
use crate::shear::{relator_residual, seeded_samples};
use crate::simplify::{derive_path, ConnectLimits, Leg};
use crate::triangulation::{ArcLabel, Triangulation, TriangulationError, TriangulationFile};
use crate::word::{FlipWord, Generator, WordError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("arcs {a} and {b} do not cobound a two-triangle annulus")]
    NotTwoArcConfiguration { a: ArcLabel, b: ArcLabel },
    #[error("unknown twist `{0}`")]
    UnknownTwist(String),
    #[error("twist `{0}` has no conjugation form")]
    NoConjugationForm(String),
    #[error("bad token `{0}`")]
    BadToken(String),
    #[error("unsupported format version {0}")]
    FormatVersion(u32),
    #[error("cannot read dataset: {0}")]
    Io(String),
    #[error("malformed dataset: {0}")]
    Format(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `F_b (a b)`: the twist along the curve that crosses only `a` and `b`.
/// The two arcs must both bound the same two triangles.
pub fn elementary_twist(t: &Arc<Triangulation>, a: ArcLabel, b: ArcLabel) -> Result<FlipWord, TwistError> {
    let bad = || TwistError::NotTwoArcConfiguration { a, b };
    if a == b {
        return Err(bad());
    }
    let ta = t.triangles_of(a)?;
    let tb = t.triangles_of(b)?;
    if ta.len() != 2 || ta != tb {
        return Err(bad());
    }
    let gens = vec![Generator::Flip(b), Generator::Perm(LabelPermutation::transposition(a.0, b.0))];
    let w = FlipWord::new(t.clone(), gens, 0).map_err(|_| bad())?;
    if !w.is_automorphism() {
        return Err(bad());
    }
    Ok(w)
}

/// `Ad(prefix)` applied to the elementary twist on `(a, b)` at the prefix's
/// target.
pub fn conjugated_twist(prefix: &FlipWord, a: ArcLabel, b: ArcLabel) -> Result<FlipWord, TwistError> {
    let core = elementary_twist(prefix.target(), a, b)?;
    Ok(FlipWord::expand_ad(prefix, &core)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdForm {
    pub prefix: Vec<String>,
    pub arcs: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistFile {
    pub name: String,
    pub gens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ad: Option<AdForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptFile {
    pub name: String,
    pub from: Vec<String>,
    #[serde(default)]
    pub to: Vec<String>,
    pub delta: i64,
    pub steps: Vec<Step>,
}

impl ScriptFile {
    pub fn script(&self) -> ProofScript {
        ProofScript { steps: self.steps.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFile {
    /// Phase the line claims.
    pub zexp: i64,
    pub word: Vec<String>,
}

/// Waypoints from `from` to `to`. When `relation` is set the derived script
/// reduces that relation's relator instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationKind>,
    pub from: Vec<String>,
    pub to: Vec<String>,
    /// Phase claimed for `to`.
    #[serde(default)]
    pub zexp: i64,
    #[serde(default)]
    pub lines: Vec<LineFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format_version: u32,
    pub name: String,
    pub triangulation: TriangulationFile,
    pub twists: Vec<TwistFile>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    #[serde(default)]
    pub scripts: Vec<ScriptFile>,
    #[serde(default)]
    pub derivations: Vec<DerivationFile>,
}

impl DatasetFile {
    pub fn from_json(s: &str) -> Result<Self, TwistError> {
        let file: Self = serde_json::from_str(s).map_err(|e| TwistError::Format(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(TwistError::FormatVersion(file.format_version));
        }
        Ok(file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, TwistError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| TwistError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datasets serialize")
    }
}

#[derive(Debug, Clone)]
pub struct TwistEntry {
    pub name: String,
    pub word: FlipWord,
    pub ad: Option<(FlipWord, ArcLabel, ArcLabel)>,
}

impl TwistEntry {
    pub fn ad_word(&self) -> Result<FlipWord, TwistError> {
        let (prefix, a, b) = self.ad.as_ref().ok_or_else(|| TwistError::NoConjugationForm(self.name.clone()))?;
        conjugated_twist(prefix, *a, *b)
    }
}

/// A dataset whose twist words have all been built.
#[derive(Debug, Clone)]
pub struct FixtureDataset {
    pub file: DatasetFile,
    pub triangulation: Arc<Triangulation>,
    pub twists: BTreeMap<String, TwistEntry>,
}

impl FixtureDataset {
    pub fn build(file: DatasetFile) -> Result<Self, TwistError> {
        let triangulation = Arc::new(file.triangulation.build()?);
        let mut twists = BTreeMap::new();
        for t in &file.twists {
            let gens = parse_tokens(&t.gens)?;
            let word = FlipWord::new(triangulation.clone(), gens, 0)?;
            let ad = match &t.ad {
                None => None,
                Some(ad) => {
                    let prefix = FlipWord::new(triangulation.clone(), parse_tokens(&ad.prefix)?, 0)?;
                    Some((prefix, ArcLabel(ad.arcs[0]), ArcLabel(ad.arcs[1])))
                }
            };
            twists.insert(t.name.clone(), TwistEntry { name: t.name.clone(), word, ad });
        }
        Ok(Self { file, triangulation, twists })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, TwistError> {
        Self::build(DatasetFile::read(path)?)
    }

    pub fn twist(&self, name: &str) -> Result<&TwistEntry, TwistError> {
        self.twists.get(name).ok_or_else(|| TwistError::UnknownTwist(name.to_string()))
    }

    /// Resolves a token list to a word with phase 0.
    pub fn resolve(&self, tokens: &[String]) -> Result<FlipWord, TwistError> {
        let mut w = FlipWord::empty(self.triangulation.clone());
        for tok in tokens {
            let piece = if let Ok(g) = tok.parse::<Generator>() {
                FlipWord::new(w.target().clone(), vec![g], 0)?
            } else if let Some(name) = tok.strip_suffix("^-1") {
                self.twist(name)?.word.invert()
            } else if let Some(name) = tok.strip_suffix("@ad") {
                self.twist(name)?.ad_word()?
            } else {
                self.twist(tok)?.word.clone()
            };
            let piece = FlipWord::new(w.target().clone(), piece.gens().to_vec(), 0)?;
            w = w.compose(&piece)?;
        }
        Ok(w)
    }

    pub fn script(&self, name: &str) -> Option<&ScriptFile> {
        self.file.scripts.iter().find(|s| s.name == name)
    }

    pub fn relation(&self, kind: RelationKind) -> Option<&RelationSpec> {
        self.file.relations.iter().find(|r| r.kind == kind)
    }

    /// Rebuilds every derived script from its waypoints.
    pub fn derive_scripts(&self, limits: ConnectLimits, budget: u64) -> Result<Vec<(ScriptFile, Vec<Leg>)>, TwistError> {
        let mut out = Vec::new();
        for d in &self.file.derivations {
            let fail = |e: &dyn std::fmt::Display| TwistError::Format(format!("{}: {e}", d.name));
            // a relator script rewrites lhs rhs⁻¹: every waypoint carries the
            // rhs⁻¹ tail and the final leg cancels rhs rhs⁻¹
            let (tail, from_tokens, to_tokens) = match d.relation {
                None => (Vec::new(), d.from.clone(), d.to.clone()),
                Some(kind) => {
                    let rel = self.relation(kind).ok_or_else(|| TwistError::Format(format!("{}: no relation {kind}", d.name)))?;
                    let tail: Vec<String> = rel.rhs.iter().rev().map(|n| invert_token(n)).collect();
                    (tail, rel.relator_tokens(), Vec::new())
                }
            };
            let with_tail = |tokens: &[String], zexp: i64| -> Result<FlipWord, TwistError> {
                Ok(self.resolve(&[tokens, &tail[..]].concat())?.with_zexp(zexp))
            };
            let from = self.resolve(&from_tokens)?;
            let mut waypoints = d.lines.iter().map(|l| with_tail(&l.word, l.zexp)).collect::<Result<Vec<_>, _>>()?;
            let to = if d.relation.is_some() {
                waypoints.push(with_tail(&d.to, d.zexp)?);
                FlipWord::empty(self.triangulation.clone()).with_zexp(d.zexp)
            } else {
                self.resolve(&d.to)?.with_zexp(d.zexp)
            };
            let (script, legs) = derive_path(&from, &waypoints, &to, limits, budget).map_err(|e| fail(&e))?;
            let delta = script.phase();
            out.push((ScriptFile { name: d.name.clone(), from: from_tokens, to: to_tokens, delta, steps: script.steps }, legs));
        }
        Ok(out)
    }
}

pub fn invert_token(tok: &str) -> String {
    if let Ok(g) = tok.parse::<Generator>() {
        return g.inverse().to_string();
    }
    match tok.strip_suffix("^-1") {
        Some(name) => name.to_string(),
        None => format!("{tok}^-1"),
    }
}

/// Splits `"Da F3 P(2 4)"` into tokens; spaces inside parentheses are kept.
pub fn split_tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_tokens(tokens: &[String]) -> Result<Vec<Generator>, TwistError> {
    tokens.iter().map(|t| t.parse::<Generator>().map_err(|_| TwistError::BadToken(t.clone()))).collect()
}

/// Outcome of one constraint of [`validate_fixture`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub constraint: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FixtureReport {
    pub checks: Vec<Check>,
}

impl FixtureReport {
    fn push(&mut self, constraint: impl Into<String>, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check { constraint: constraint.into(), passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Samples used to compare two expressions of the same twist.
const SHEAR_SAMPLES: usize = 100;
const SHEAR_SEED: u64 = 0x5eed;
const SHEAR_TOLERANCE: f64 = 1e-9;

/// Certifies a dataset: (i) every flip of every twist word is applicable,
/// (ii) every twist word closes up, (iii) every script replays with its
/// recorded phase, (iv) every conjugation form has a script rewriting it
/// into the twist word, and both expressions act identically on shear
/// coordinates. Failures are reported, never raised.
pub fn validate_fixture(file: &DatasetFile) -> FixtureReport {
    let mut report = FixtureReport::default();
    let tri = match file.triangulation.build() {
        Ok(t) => Arc::new(t),
        Err(e) => {
            report.push("triangulation", Err(e.to_string()));
            return report;
        }
    };
    report.push("triangulation", Ok(format!("{} arcs, {} boundary segments", tri.arc_count(), tri.boundary_count())));
    let samples = seeded_samples(tri.arc_count() as usize, SHEAR_SAMPLES, SHEAR_SEED);

    let mut built = DatasetFile { twists: Vec::new(), scripts: Vec::new(), derivations: Vec::new(), ..file.clone() };
    for t in &file.twists {
        let word = parse_tokens(&t.gens).map_err(|e| e.to_string()).and_then(|g| {
            FlipWord::new(tri.clone(), g, 0).map_err(|e| e.to_string())
        });
        let closes = match &word {
            Ok(w) => {
                report.push(format!("twist {}: applicable", t.name), Ok(format!("{} generators", w.len())));
                if w.is_automorphism() {
                    Ok("returns to the fixture".to_string())
                } else {
                    Err("target differs from the fixture".to_string())
                }
            }
            Err(e) => {
                report.push(format!("twist {}: applicable", t.name), Err(e.clone()));
                Err("not applicable".to_string())
            }
        };
        let ok = closes.is_ok();
        report.push(format!("twist {}: closes", t.name), closes);
        if ok {
            built.twists.push(t.clone());
        }
    }
    let data = match FixtureDataset::build(built) {
        Ok(d) => d,
        Err(e) => {
            report.push("dataset", Err(e.to_string()));
            return report;
        }
    };
    for t in &file.twists {
        let Some(ad) = &t.ad else { continue };
        let Ok(entry) = data.twist(&t.name) else { continue };
        let ad_word = match entry.ad_word() {
            Ok(w) => w,
            Err(e) => {
                report.push(format!("twist {}: conjugation form", t.name), Err(e.to_string()));
                continue;
            }
        };
        let agree = relator_residual(&tri, ad_word.compose(&entry.word.invert()).unwrap_or_else(|_| ad_word.clone()).gens(), &samples);
        report.push(
            format!("twist {}: conjugation form", t.name),
            match agree {
                Ok(Some(r)) if r < SHEAR_TOLERANCE => Ok(format!("Ad({}) F{} ({} {}), shear residual {r:.1e}", ad.prefix.join(" "), ad.arcs[1], ad.arcs[0], ad.arcs[1])),
                Ok(Some(r)) => Err(format!("expressions differ on shear coordinates (residual {r:.1e})")),
                Ok(None) => Err("conjugation form is a different mapping".to_string()),
                Err(e) => Err(e.to_string()),
            },
        );
        let name = format!("{}.ad", t.name);
        report.push(
            format!("twist {}: conjugation script", t.name),
            match file.scripts.iter().find(|s| s.name == name) {
                Some(s) => Ok(format!("script {name}, phase {}", s.delta)),
                None => Err(format!("missing script {name}")),
            },
        );
    }
    for rel in &file.relations {
        let names = rel.lhs.iter().chain(&rel.rhs).find(|n| data.twist(n).is_err());
        report.push(
            format!("relation {}: twists", rel.kind),
            match names {
                None => Ok(format!("{} = {}", rel.lhs.join(" "), rel.rhs.join(" "))),
                Some(n) => Err(format!("unknown twist {n}")),
            },
        );
    }
    for s in &file.scripts {
        let result = (|| {
            let from = data.resolve(&s.from).map_err(|e| e.to_string())?;
            let to = data.resolve(&s.to).map_err(|e| e.to_string())?;
            let delta = check_script(&from, &s.script(), &to).map_err(|e| e.to_string())?;
            if delta != s.delta {
                return Err(format!("phase {delta}, recorded {}", s.delta));
            }
            Ok(format!("{} steps, phase {delta}", s.steps.len()))
        })();
        report.push(format!("script {}: replays", s.name), result);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Arc<Triangulation> {
        Arc::new(Triangulation::build_standard(1, 1).unwrap())
    }

    #[test]
    fn elementary_twist_on_the_torus() {
        // on the one-punctured torus every pair of arcs bounds both triangles
        let t = torus();
        let w = elementary_twist(&t, ArcLabel(1), ArcLabel(2)).unwrap();
        assert_eq!(w.to_string(), "F2 P(1 2)");
        assert!(w.is_automorphism());
    }

    #[test]
    fn two_arc_configuration_is_enforced() {
        let hex = Arc::new(Triangulation::from_signed(3, 6, &[[-1, -2, 1], [1, -3, 2], [2, -4, 3], [3, -5, -6]]).unwrap());
        assert_eq!(
            elementary_twist(&hex, ArcLabel(1), ArcLabel(2)),
            Err(TwistError::NotTwoArcConfiguration { a: ArcLabel(1), b: ArcLabel(2) })
        );
        assert!(elementary_twist(&torus(), ArcLabel(1), ArcLabel(1)).is_err());
    }

    #[test]
    fn empty_prefix_gives_the_elementary_twist() {
        let t = torus();
        let prefix = FlipWord::empty(t.clone());
        assert_eq!(conjugated_twist(&prefix, ArcLabel(1), ArcLabel(2)).unwrap(), elementary_twist(&t, ArcLabel(1), ArcLabel(2)).unwrap());
    }

    #[test]
    fn tokens_keep_cycles_together() {
        assert_eq!(split_tokens(" Da F3  P(2 4)(1 3) Db^-1"), ["Da", "F3", "P(2 4)(1 3)", "Db^-1"]);
    }

    #[test]
    fn token_inversion() {
        assert_eq!(invert_token("Da"), "Da^-1");
        assert_eq!(invert_token("Da^-1"), "Da");
        assert_eq!(invert_token("P(1 2 3)"), "P(1 3 2)");
        assert_eq!(invert_token("F4"), "F4");
    }
}
