//! Central exponents of the mapping class group relations.
//!
//! A relation `lhs = rhs` between products of twist lifts becomes the
//! relator `lhs rhs⁻¹`, which reduces to a pure power `z^k`. The exponents
//! of the five relations fix a uniform rescaling of the lifts, and the
//! rescaled exponents give the coefficients of the extension class.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewrite::replay;
use crate::shear::{relator_residual, seeded_samples};
use crate::simplify::relator_phase;
use crate::twist::{FixtureDataset, TwistError};
use crate::word::FlipWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Braid0,
    Braid1,
    Lantern,
    Chain,
    Puncture,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [Self::Braid0, Self::Braid1, Self::Chain, Self::Lantern, Self::Puncture];

    pub fn name(self) -> &'static str {
        match self {
            Self::Braid0 => "braid0",
            Self::Braid1 => "braid1",
            Self::Lantern => "lantern",
            Self::Chain => "chain",
            Self::Puncture => "puncture",
        }
    }

    /// Exponent the relation is expected to carry, in the orientation the
    /// fixtures store.
    pub fn expected_exponent(self) -> i64 {
        match self {
            Self::Braid0 | Self::Braid1 => 0,
            Self::Lantern | Self::Puncture => -12,
            Self::Chain => -24,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = ExtensionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| ExtensionError::UnknownRelation(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation {0} is not part of the fixture")]
    MissingRelation(RelationKind),
    #[error("relator is not composable: {0}")]
    NonComposable(String),
    #[error("inconsistent exponents: {0}")]
    InconsistentSystem(String),
    #[error("non-integral coefficient: {0}")]
    NonIntegralCoefficient(String),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

/// `lhs = rhs` as lists of twist names, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub kind: RelationKind,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

impl RelationSpec {
    pub fn lhs_count(&self) -> usize {
        self.lhs.len()
    }

    pub fn rhs_count(&self) -> usize {
        self.rhs.len()
    }

    /// Token list of the relator `lhs rhs⁻¹`.
    pub fn relator_tokens(&self) -> Vec<String> {
        let mut out = self.lhs.clone();
        out.extend(self.rhs.iter().rev().map(|n| crate::twist::invert_token(n)));
        out
    }
}

pub fn build_relator(spec: &RelationSpec, d: &FixtureDataset) -> Result<FlipWord, ExtensionError> {
    for name in spec.lhs.iter().chain(&spec.rhs) {
        d.twist(name.trim_end_matches("^-1"))?;
    }
    d.resolve(&spec.relator_tokens()).map_err(|e| match e {
        TwistError::Word(w) => ExtensionError::NonComposable(w.to_string()),
        other => ExtensionError::Twist(other),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub budget: u64,
    /// Also reduce the relator with the simplifier.
    pub search: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { samples: 100, seed: 0, tolerance: 1e-9, budget: crate::simplify::DEFAULT_BUDGET, search: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub relation: RelationKind,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub lhs_count: usize,
    pub rhs_count: usize,
    pub valid: bool,
    pub closes: bool,
    /// Largest relative displacement of the shear samples.
    pub residual: Option<f64>,
    pub zexp: Option<i64>,
    pub script_zexp: Option<i64>,
    pub search_zexp: Option<i64>,
    pub orientation_note: String,
    /// Set when the exponent was not obtained from a relator of its own.
    pub flagged: Option<String>,
    pub failures: Vec<String>,
}

fn orientation_note(lhs: &[String], rhs: &[String], k: Option<i64>) -> String {
    let (l, r) = (lhs.join(" "), rhs.join(" "));
    match k {
        Some(k) => format!("{l} = z^{k} {r}; reversed: {r} = z^{} {l}", -k),
        None => format!("{l} = z^? {r}"),
    }
}

/// Checks a relation on a fixture: the relator closes up, fixes the shear
/// samples, and reduces to a power of `z` by the bundled script named after
/// the relation and, when enabled, by the simplifier.
pub fn verify_relation(d: &FixtureDataset, kind: RelationKind, config: &VerifyConfig) -> Result<RelationReport, ExtensionError> {
    let spec = d.relation(kind).ok_or(ExtensionError::MissingRelation(kind))?;
    let mut failures = Vec::new();
    let relator = build_relator(spec, d)?;
    let closes = relator.is_automorphism();
    if !closes {
        failures.push("relator does not return to the fixture".to_string());
    }
    let samples = seeded_samples(d.triangulation.arc_count() as usize, config.samples, config.seed);
    let residual = match relator_residual(&d.triangulation, relator.gens(), &samples) {
        Ok(r) => r,
        Err(e) => {
            failures.push(format!("shear oracle: {e}"));
            None
        }
    };
    match residual {
        Some(r) if r >= config.tolerance => failures.push(format!("shear residual {r:.3e} exceeds {:.1e}", config.tolerance)),
        None if closes => failures.push("shear oracle did not run".to_string()),
        _ => {}
    }

    let script_zexp = match d.script(kind.name()) {
        None => None,
        Some(s) if s.from != spec.relator_tokens() => {
            failures.push(format!("script {} starts from a different word", s.name));
            None
        }
        Some(s) => match replay(&relator, &s.script()) {
            Ok(end) if end.is_empty() => Some(end.zexp() - relator.zexp()),
            Ok(end) => {
                failures.push(format!("script {} ends at `{end}`", s.name));
                None
            }
            Err(e) => {
                failures.push(format!("script {}: {e}", s.name));
                None
            }
        },
    };
    let search_zexp = if config.search && closes {
        match relator_phase(&relator, None, config.budget) {
            Ok(k) => Some(k),
            Err(e) => {
                if script_zexp.is_none() {
                    failures.push(format!("simplifier: {e}"));
                }
                None
            }
        }
    } else {
        None
    };
    if let (Some(a), Some(b)) = (script_zexp, search_zexp) {
        if a != b {
            failures.push(format!("script phase {a} differs from search phase {b}"));
        }
    }
    let zexp = script_zexp.or(search_zexp);
    if zexp.is_none() && failures.is_empty() {
        failures.push("no reduction found".to_string());
    }
    let valid = failures.is_empty();
    let zexp = if valid { zexp } else { None };
    Ok(RelationReport {
        relation: kind,
        lhs: spec.lhs.clone(),
        rhs: spec.rhs.clone(),
        lhs_count: spec.lhs_count(),
        rhs_count: spec.rhs_count(),
        valid,
        closes,
        residual,
        zexp,
        script_zexp,
        search_zexp,
        orientation_note: orientation_note(&spec.lhs, &spec.rhs, zexp),
        flagged: None,
        failures,
    })
}

/// The puncture relation is the lantern relation with one boundary curve
/// collapsed to a puncture, three twists on each side. Without a fixture of
/// its own its exponent is read off the lantern.
pub fn puncture_from_lantern(lantern: &RelationReport) -> RelationReport {
    let note = match lantern.zexp {
        Some(k) => format!("three twists on each side; exponent {k} of the lantern relator, reversed {}", -k),
        None => "three twists on each side; the lantern relator has no exponent".to_string(),
    };
    RelationReport {
        relation: RelationKind::Puncture,
        lhs: Vec::new(),
        rhs: Vec::new(),
        lhs_count: 3,
        rhs_count: 3,
        valid: lantern.valid,
        closes: lantern.closes,
        residual: None,
        zexp: lantern.zexp,
        script_zexp: lantern.script_zexp,
        search_zexp: None,
        orientation_note: note,
        flagged: Some("taken from the lantern reduction; no puncture fixture".to_string()),
        failures: lantern.failures.clone(),
    }
}

/// Exponent of a relation together with its twist counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RawExponent {
    pub exponent: i64,
    pub lhs_count: usize,
    pub rhs_count: usize,
}

impl RawExponent {
    pub fn of(report: &RelationReport) -> Option<Self> {
        report.zexp.map(|exponent| Self { exponent, lhs_count: report.lhs_count, rhs_count: report.rhs_count })
    }

    fn imbalance(&self) -> i64 {
        self.lhs_count as i64 - self.rhs_count as i64
    }
}

/// Merges reports from several fixtures; a relation seen twice must carry
/// the same exponent.
pub fn collect_raw<'a>(reports: impl IntoIterator<Item = &'a RelationReport>) -> Result<BTreeMap<RelationKind, RawExponent>, ExtensionError> {
    let mut raw: BTreeMap<RelationKind, RawExponent> = BTreeMap::new();
    for r in reports {
        let Some(e) = RawExponent::of(r) else {
            return Err(ExtensionError::InconsistentSystem(format!("{} has no exponent", r.relation)));
        };
        if let Some(prev) = raw.get(&r.relation) {
            if prev.exponent != e.exponent {
                return Err(ExtensionError::InconsistentSystem(format!("{} found as both {} and {}", r.relation, prev.exponent, e.exponent)));
            }
        }
        raw.insert(r.relation, e);
    }
    Ok(raw)
}

/// Rescaling every lift by `z^k` shifts an exponent by `k·(lhs − rhs)`.
/// Picks the `k` that makes the lantern exponent vanish.
pub fn normalize_lifts(raw: &BTreeMap<RelationKind, RawExponent>) -> Result<(i64, BTreeMap<RelationKind, i64>), ExtensionError> {
    let lantern = raw.get(&RelationKind::Lantern).ok_or(ExtensionError::MissingRelation(RelationKind::Lantern))?;
    let d = lantern.imbalance();
    let k = match (d, lantern.exponent) {
        (0, 0) => 0,
        (0, e) => return Err(ExtensionError::InconsistentSystem(format!("lantern exponent {e} with balanced twist counts"))),
        (d, e) if e % d != 0 => {
            return Err(ExtensionError::InconsistentSystem(format!("lantern exponent {e} is not a multiple of {d}")));
        }
        (d, e) => -e / d,
    };
    let mut normalized = BTreeMap::new();
    for (&kind, r) in raw {
        let e = r.exponent + k * r.imbalance();
        if matches!(kind, RelationKind::Braid0 | RelationKind::Braid1) && e != 0 {
            return Err(ExtensionError::InconsistentSystem(format!("{kind} exponent {e} is not 0")));
        }
        normalized.insert(kind, e);
    }
    Ok((k, normalized))
}

/// `c = chi_coefficient·chi + Σ e_i` with values in the group generated by
/// `w = z^w_zexp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionClass {
    pub w_zexp: i64,
    /// `w` is trivial, so the class carries no information.
    pub degenerate: bool,
    pub chi_coefficient: i64,
    pub euler_coefficients: Vec<i64>,
}

impl fmt::Display for ExtensionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·chi", self.chi_coefficient)?;
        for (i, e) in self.euler_coefficients.iter().enumerate() {
            match e {
                1 => write!(f, " + e_{}", i + 1)?,
                e => write!(f, " + {e}·e_{}", i + 1)?,
            }
        }
        write!(f, " over A = <z^{{{}}}>", self.w_zexp)?;
        if self.degenerate {
            f.write_str(" (degenerate)")?;
        }
        Ok(())
    }
}

fn w_coefficient(kind: RelationKind, exponent: i64, k: i64) -> Result<i64, ExtensionError> {
    match k {
        0 if exponent == 0 => Ok(0),
        0 => Err(ExtensionError::NonIntegralCoefficient(format!("{kind} exponent {exponent} with trivial w"))),
        k if exponent % k != 0 => Err(ExtensionError::NonIntegralCoefficient(format!("{kind} exponent {exponent} is not a power of z^{k}"))),
        k => Ok(exponent / k),
    }
}

/// Reads the class off the normalized chain and puncture exponents, written
/// as powers of `w = z^k`: the chain gives the coefficient of chi, the
/// puncture relation the coefficient of every `e_i`.
pub fn cohomology_class(normalized: &BTreeMap<RelationKind, i64>, k: i64, punctures: usize) -> Result<ExtensionClass, ExtensionError> {
    let get = |kind| normalized.get(&kind).copied().ok_or(ExtensionError::MissingRelation(kind));
    let chi = w_coefficient(RelationKind::Chain, get(RelationKind::Chain)?, k)?;
    let e = w_coefficient(RelationKind::Puncture, get(RelationKind::Puncture)?, k)?;
    Ok(ExtensionClass { w_zexp: k, degenerate: k == 0, chi_coefficient: chi, euler_coefficients: vec![e; punctures] })
}

/// Everything `verify` reports, in a stable order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionDocument {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub fixtures: Vec<FixtureStamp>,
    pub relations: Vec<RelationEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ExtensionClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureStamp {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationEntry {
    pub fixture: String,
    #[serde(flatten)]
    pub report: RelationReport,
    pub normalized: Option<i64>,
}

impl ExtensionDocument {
    pub fn all_valid(&self) -> bool {
        self.relations.iter().all(|r| r.report.valid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}  samples {}  tolerance {:e}\n", self.seed, self.samples, self.tolerance);
        for f in &self.fixtures {
            out += &format!("fixture {}  sha256 {}\n", f.name, f.sha256);
        }
        out += &format!("\n{:<22} {:<9} {:<6} {:>10} {:>6} {:>7} {:>7} {:>10}\n", "fixture", "relation", "valid", "residual", "zexp", "script", "search", "normalized");
        let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
        for e in &self.relations {
            let r = &e.report;
            out += &format!(
                "{:<22} {:<9} {:<6} {:>10} {:>6} {:>7} {:>7} {:>10}\n",
                e.fixture,
                r.relation.name(),
                if r.valid { "yes" } else { "NO" },
                r.residual.map_or("-".to_string(), |x| format!("{x:.1e}")),
                opt(r.zexp),
                opt(r.script_zexp),
                opt(r.search_zexp),
                opt(e.normalized),
            );
        }
        out += "\n";
        for e in &self.relations {
            out += &format!("{} ({}): {}\n", e.report.relation, e.fixture, e.report.orientation_note);
            if let Some(flag) = &e.report.flagged {
                out += &format!("  flagged: {flag}\n");
            }
            for f in &e.report.failures {
                out += &format!("  failure: {f}\n");
            }
        }
        if let Some(k) = self.shift {
            out += &format!("\nlift rescaling D -> z^{{{k}}} D\n");
        }
        if self.class.is_some() || self.class_error.is_some() {
            out += "class (chain exponent / w gives the chi coefficient, puncture exponent / w each e_i)\n";
        }
        if let Some(c) = &self.class {
            out += &format!("class: {c}\n");
        }
        if let Some(err) = &self.class_error {
            out += &format!("class: {err}\n");
        }
        out
    }
}
