//! `ptolemy`: validate fixtures, replay scripts and compute the central
//! exponents of twist relations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};

use ptolemy_core::extension::{
    cohomology_class, collect_raw, normalize_lifts, puncture_from_lantern, verify_relation, ExtensionDocument, FixtureStamp,
    RelationEntry, RelationKind, RelationReport, VerifyConfig,
};
use ptolemy_core::reconstruct::{reconstruct_triangulation, SearchLimits, Topology};
use ptolemy_core::rewrite::check_script;
use ptolemy_core::simplify::{auto_simplify, Bridge, ConnectLimits, DEFAULT_BUDGET};
use ptolemy_core::twist::{split_tokens, validate_fixture, DatasetFile, FixtureDataset};
use ptolemy_core::word::parse_gens;

/// Directory searched for `*.json` fixtures when `--fixture` is not given.
const FIXTURE_DIR_VAR: &str = "PTOLEMY_FIXTURES";

#[derive(Parser)]
#[command(name = "ptolemy", version, about = "Phase-tracked flip words and central charges of twist relations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check every constraint of the fixture datasets.
    Validate(FixtureArgs),
    /// Verify relations and report their exponents.
    Verify(VerifyArgs),
    /// Replay a bundled script.
    Script(ScriptArgs),
    /// Search for triangulations on which the given words close up.
    Reconstruct(ReconstructArgs),
    /// Reduce a word with the simplifier.
    Simplify(SimplifyArgs),
    /// Rebuild the bundled scripts from the derivation waypoints.
    Derive(DeriveArgs),
}

#[derive(Args)]
struct FixtureArgs {
    /// Dataset files; defaults to every `*.json` in $PTOLEMY_FIXTURES or ./fixtures.
    #[arg(long)]
    fixture: Vec<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    fixtures: FixtureArgs,
    #[arg(long, value_parser = parse_relation)]
    relation: Vec<RelationKind>,
    #[arg(long)]
    all: bool,
    /// Normalize the lifts and print the extension class.
    #[arg(long)]
    class: bool,
    /// Number of punctures in the class line.
    #[arg(long, default_value_t = 4)]
    punctures: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Skip the simplifier and rely on the bundled scripts.
    #[arg(long)]
    no_search: bool,
}

#[derive(Args)]
struct ScriptArgs {
    #[arg(long)]
    fixture: PathBuf,
    #[arg(long)]
    script: String,
    /// Start word as tokens; defaults to the script's own.
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Boundary circles, one marked point each.
    #[arg(long, conflicts_with = "punctures")]
    holes: Option<u32>,
    #[arg(long)]
    punctures: Option<u32>,
    /// A word such as "F3 F4 F3 P(2 4)"; repeatable.
    #[arg(long, required = true)]
    word: Vec<String>,
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
}

#[derive(Args)]
struct SimplifyArgs {
    #[arg(long)]
    fixture: PathBuf,
    /// Tokens: generators, twist names, `Name^-1`, `Name@ad`.
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(long)]
    fixture: PathBuf,
    /// Write the scripts back into the dataset.
    #[arg(long)]
    write: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Node limit of the bidirectional search per leg.
    #[arg(long, default_value_t = 200_000)]
    nodes: usize,
}

fn parse_relation(s: &str) -> Result<RelationKind, String> {
    s.parse().map_err(|e: ptolemy_core::extension::ExtensionError| e.to_string())
}

#[derive(Debug)]
enum Failure {
    /// Exit 1: something did not verify.
    Check(String),
    /// Exit 2: unreadable input or bad arguments.
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(&a, cli.format),
        Command::Verify(a) => cmd_verify(&a, cli.format),
        Command::Script(a) => cmd_script(&a, cli.format),
        Command::Reconstruct(a) => cmd_reconstruct(&a, cli.format),
        Command::Simplify(a) => cmd_simplify(&a, cli.format),
        Command::Derive(a) => cmd_derive(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check(m) | Failure::Input(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn fixture_paths(args: &FixtureArgs) -> Result<Vec<PathBuf>, Failure> {
    if !args.fixture.is_empty() {
        return Ok(args.fixture.clone());
    }
    let dir = std::env::var_os(FIXTURE_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixtures"));
    let entries = std::fs::read_dir(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> =
        entries.filter_map(|e| e.ok()).map(|e| e.path()).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Input(format!("no fixtures in {}", dir.display())));
    }
    Ok(paths)
}

struct Loaded {
    path: PathBuf,
    text: String,
    file: DatasetFile,
}

impl Loaded {
    fn stamp(&self) -> FixtureStamp {
        FixtureStamp { name: self.file.name.clone(), sha256: format!("{:x}", Sha256::digest(self.text.as_bytes())) }
    }

    fn dataset(&self) -> Result<FixtureDataset, Failure> {
        FixtureDataset::build(self.file.clone()).map_err(|e| Failure::Check(format!("{}: {e}", self.path.display())))
    }
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file = DatasetFile::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { path: path.to_path_buf(), text, file })
}

fn cmd_validate(args: &FixtureArgs, format: Format) -> CliResult {
    let mut first_failure = None;
    let mut docs = Vec::new();
    for path in fixture_paths(args)? {
        let loaded = load(&path)?;
        let report = validate_fixture(&loaded.file);
        if first_failure.is_none() {
            if let Some(c) = report.failures().next() {
                first_failure = Some(format!("{}: {}: {}", path.display(), c.constraint, c.detail));
            }
        }
        match format {
            Format::Text => {
                println!("{} ({})  sha256 {}", loaded.file.name, path.display(), loaded.stamp().sha256);
                for c in &report.checks {
                    println!("  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.constraint, c.detail);
                }
            }
            Format::Json => docs.push(json!({"fixture": loaded.stamp(), "passed": report.passed(), "checks": report.checks})),
        }
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&docs).expect("reports serialize"));
    }
    match first_failure {
        None => Ok(()),
        Some(f) => Err(Failure::Check(f)),
    }
}

fn cmd_verify(args: &VerifyArgs, format: Format) -> CliResult {
    if args.tol <= 0.0 || args.tol.is_nan() {
        return Err(Failure::Input("--tol must be positive".into()));
    }
    if args.samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    let wanted: Vec<RelationKind> = if args.all || args.relation.is_empty() { RelationKind::ALL.to_vec() } else { args.relation.clone() };
    let config = VerifyConfig { samples: args.samples, seed: args.seed, tolerance: args.tol, budget: args.budget, search: !args.no_search };

    let loaded = fixture_paths(&args.fixtures)?.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let datasets = loaded.iter().map(Loaded::dataset).collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, RelationKind)> = datasets
        .iter()
        .enumerate()
        .flat_map(|(i, d)| wanted.iter().filter(|k| d.relation(**k).is_some()).map(move |&k| (i, k)))
        .collect();
    let results: Vec<Result<(usize, RelationReport), Failure>> = jobs
        .par_iter()
        .map(|&(i, k)| {
            verify_relation(&datasets[i], k, &config).map(|r| (i, r)).map_err(|e| Failure::Check(format!("{}: {k}: {e}", loaded[i].path.display())))
        })
        .collect();
    let mut entries = Vec::new();
    for r in results {
        let (i, report) = r?;
        entries.push(RelationEntry { fixture: loaded[i].file.name.clone(), report, normalized: None });
    }
    let needs_puncture = wanted.contains(&RelationKind::Puncture) && !entries.iter().any(|e| e.report.relation == RelationKind::Puncture);
    if needs_puncture || args.class {
        if let Some(lantern) = entries.iter().find(|e| e.report.relation == RelationKind::Lantern) {
            if !entries.iter().any(|e| e.report.relation == RelationKind::Puncture) {
                entries.push(RelationEntry { fixture: lantern.fixture.clone(), report: puncture_from_lantern(&lantern.report), normalized: None });
            }
        }
    }
    for k in &wanted {
        if !entries.iter().any(|e| e.report.relation == *k) && !args.all {
            return Err(Failure::Input(format!("no fixture carries the {k} relation")));
        }
    }
    entries.sort_by(|a, b| (a.report.relation.name(), &a.fixture).cmp(&(b.report.relation.name(), &b.fixture)));

    let mut doc = ExtensionDocument {
        seed: args.seed,
        samples: args.samples,
        tolerance: args.tol,
        fixtures: loaded.iter().map(Loaded::stamp).collect(),
        relations: entries,
        shift: None,
        class: None,
        class_error: None,
    };
    if args.class {
        let outcome = collect_raw(doc.relations.iter().map(|e| &e.report)).and_then(|raw| {
            let (k, normalized) = normalize_lifts(&raw)?;
            doc.shift = Some(k);
            for e in &mut doc.relations {
                e.normalized = normalized.get(&e.report.relation).copied();
            }
            cohomology_class(&normalized, k, args.punctures)
        });
        match outcome {
            Ok(c) => doc.class = Some(c),
            Err(e) => doc.class_error = Some(e.to_string()),
        }
    }
    match format {
        Format::Text => print!("{}", doc.to_text()),
        Format::Json => println!("{}", doc.to_json()),
    }
    if !doc.all_valid() {
        let bad: Vec<String> = doc.relations.iter().filter(|e| !e.report.valid).map(|e| format!("{} on {}", e.report.relation, e.fixture)).collect();
        return Err(Failure::Check(format!("invalid relators: {}", bad.join(", "))));
    }
    if let Some(e) = &doc.class_error {
        return Err(Failure::Check(e.clone()));
    }
    Ok(())
}

fn cmd_script(args: &ScriptArgs, format: Format) -> CliResult {
    let loaded = load(&args.fixture)?;
    let d = loaded.dataset()?;
    let s = d.script(&args.script).ok_or_else(|| Failure::Input(format!("no script named {}", args.script)))?;
    let from_tokens = args.from.as_deref().map(split_tokens).unwrap_or_else(|| s.from.clone());
    let to_tokens = args.to.as_deref().map(split_tokens).unwrap_or_else(|| s.to.clone());
    let from = d.resolve(&from_tokens).map_err(|e| Failure::Input(e.to_string()))?;
    let to = d.resolve(&to_tokens).map_err(|e| Failure::Input(e.to_string()))?;
    let delta = check_script(&from, &s.script(), &to).map_err(|e| Failure::Check(format!("script {}: {e}", s.name)))?;
    match format {
        Format::Text => {
            println!("script {} on {}  sha256 {}", s.name, loaded.file.name, loaded.stamp().sha256);
            println!("  from  {}", from_tokens.join(" "));
            println!("  to    {}", if to_tokens.is_empty() { "(empty)".to_string() } else { to_tokens.join(" ") });
            println!("  steps {}", s.steps.len());
            println!("  phase {delta}");
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "fixture": loaded.stamp(), "script": s.name, "from": from_tokens, "to": to_tokens,
                "steps": s.steps.len(), "phase": delta,
            }))
            .expect("reports serialize")
        ),
    }
    if delta != s.delta {
        return Err(Failure::Check(format!("phase {delta} differs from the recorded {}", s.delta)));
    }
    Ok(())
}

fn cmd_reconstruct(args: &ReconstructArgs, format: Format) -> CliResult {
    let topology = match (args.holes, args.punctures) {
        (Some(holes), _) => Topology::Bordered { genus: args.genus, holes },
        (None, Some(punctures)) => Topology::Punctured { genus: args.genus, punctures },
        (None, None) => return Err(Failure::Input("give --holes or --punctures".into())),
    };
    let words = args.word.iter().map(|w| parse_gens(w).map_err(|e| Failure::Input(format!("`{w}`: {e}")))).collect::<Result<Vec<_>, _>>()?;
    let limits = SearchLimits { budget: args.budget, ..SearchLimits::default() };
    let found = reconstruct_triangulation(&words, topology, limits).map_err(|e| Failure::Check(e.to_string()))?;
    match format {
        Format::Text => {
            println!("{} candidate(s)", found.len());
            for t in &found {
                println!("  {t}");
            }
        }
        Format::Json => {
            let files: Vec<_> = found.iter().map(|t| t.to_file()).collect();
            println!("{}", serde_json::to_string_pretty(&files).expect("triangulations serialize"));
        }
    }
    if found.is_empty() {
        return Err(Failure::Check("no triangulation carries all words".into()));
    }
    Ok(())
}

fn cmd_simplify(args: &SimplifyArgs, format: Format) -> CliResult {
    let d = load(&args.fixture)?.dataset()?;
    let w = d.resolve(&split_tokens(&args.word)).map_err(|e| Failure::Input(e.to_string()))?;
    let s = auto_simplify(&w, args.budget).map_err(|e| Failure::Check(e.to_string()))?;
    match format {
        Format::Text => {
            println!("input  {} letters", w.len());
            println!("result {}", if s.word.is_empty() { "(empty)".to_string() } else { s.word.to_string() });
            println!("steps  {}", s.script.steps.len());
            println!("phase  {}", s.delta);
            if s.exhausted {
                println!("budget exhausted");
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "input": w.to_string(), "result": s.word.to_string(), "steps": s.script.steps,
                "phase": s.delta, "exhausted": s.exhausted,
            }))
            .expect("reports serialize")
        ),
    }
    Ok(())
}

fn cmd_derive(args: &DeriveArgs) -> CliResult {
    let loaded = load(&args.fixture)?;
    let d = loaded.dataset()?;
    let limits = ConnectLimits { nodes: args.nodes, ..ConnectLimits::default() };
    let derived = d.derive_scripts(limits, args.budget).map_err(|e| Failure::Check(e.to_string()))?;
    for (s, legs) in &derived {
        println!("{}: {} steps, phase {}", s.name, s.steps.len(), s.delta);
        for leg in legs.iter().filter(|l| l.claimed != l.computed) {
            let via = match leg.bridge {
                Bridge::Search => "search",
                Bridge::Simplifier => "simplifier",
            };
            println!("  leg {}: claimed {}, found {} ({via})", leg.index, leg.claimed, leg.computed);
        }
    }
    if args.write {
        let mut file = loaded.file.clone();
        file.scripts = derived.into_iter().map(|(s, _)| s).collect();
        std::fs::write(&loaded.path, file.to_json() + "\n").map_err(|e| Failure::Input(format!("{}: {e}", loaded.path.display())))?;
    }
    Ok(())
}
