//! The bundled formalization library and its runner.
//!
//! `manifest.txt` lists `.sst` files in dependency order, each with the
//! expected outcome `ok` or `expected-error:CLASS`. Positive files extend one
//! shared environment. Each negative file is checked against a copy of the
//! environment built so far and must produce at least one error, all of the
//! declared class.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::kernel::{boundary_sweep, check_module, CheckResult, ErrorClass, Globals, Session, SweepReport};
use crate::shape::{self, ShapeInclusion};
use crate::surface;
use crate::tope::{IntervalTerm, Tope};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Ok,
    Error(ErrorClass),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Ok => f.write_str("ok"),
            Expected::Error(c) => write!(f, "expected-error:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn positive(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.expected == Expected::Ok)
    }

    pub fn negative(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.expected != Expected::Ok)
    }
}

/// Parses `FILE  EXPECTED` lines. Blank lines and `#` comments are skipped.
pub fn parse_manifest(text: &str) -> Result<Manifest, CorpusError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| CorpusError::Manifest { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [file, expected] = fields[..] else {
            return Err(bad(format!("expected `FILE EXPECTED`, found {line:?}")));
        };
        let expected = match expected {
            "ok" => Expected::Ok,
            other => match other.strip_prefix("expected-error:").and_then(ErrorClass::parse) {
                Some(c) => Expected::Error(c),
                None => return Err(bad(format!("unknown expectation {other:?}"))),
            },
        };
        if entries.iter().any(|e: &ManifestEntry| e.file == file) {
            return Err(bad(format!("{file} is listed twice")));
        }
        entries.push(ManifestEntry { file: file.to_string(), expected });
    }
    Ok(Manifest { entries })
}

/// `SSTT_CORPUS_DIR`, or the corpus shipped with this crate.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os("SSTT_CORPUS_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })
}

pub fn load_manifest(dir: &Path) -> Result<Manifest, CorpusError> {
    parse_manifest(&read(&dir.join("manifest.txt"))?)
}

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub file: String,
    pub expected: Expected,
    pub results: Vec<CheckResult>,
    /// Why the entry did not behave as expected.
    pub divergence: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    pub sweep: SweepReport,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.divergence.is_none()) && self.sweep.passed()
    }

    pub fn divergences(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.entries.iter().filter_map(|e| e.divergence.as_ref().map(|d| format!("{}: {d}", e.file))).collect();
        out.extend(self.sweep.failures.iter().map(|f| format!("boundary sweep: {f}")));
        out
    }

    pub fn all_results(&self) -> Vec<CheckResult> {
        self.entries.iter().flat_map(|e| e.results.iter().cloned()).collect()
    }

    /// Number of declarations in positive entries.
    pub fn positive_declarations(&self) -> usize {
        self.entries.iter().filter(|e| e.expected == Expected::Ok).map(|e| e.results.len()).sum()
    }
}

fn divergence(expected: Expected, results: &[CheckResult]) -> Option<String> {
    let errors: Vec<&CheckResult> = results.iter().filter(|r| !r.is_ok()).collect();
    match expected {
        Expected::Ok => {
            let lines: Vec<String> = errors
                .iter()
                .map(|r| {
                    let e = r.error().expect("filtered to errors");
                    format!("{} ({}): expected ok, got {}: {}", r.name, r.span, e.class, e.message)
                })
                .collect();
            (!lines.is_empty()).then(|| lines.join("; "))
        }
        Expected::Error(class) => {
            if errors.is_empty() {
                return Some(format!("expected {class}, but every declaration checked"));
            }
            let wrong: Vec<String> = errors
                .iter()
                .filter_map(|r| {
                    let e = r.error().expect("filtered to errors");
                    (e.class != class)
                        .then(|| format!("{} ({}): expected {class}, got {}: {}", r.name, r.span, e.class, e.message))
                })
                .collect();
            (!wrong.is_empty()).then(|| wrong.join("; "))
        }
    }
}

/// Checks one file against `globals`, returning its results.
pub fn check_file(globals: &mut Globals, session: &Session, file: &str, src: &str) -> Result<Vec<CheckResult>, CorpusError> {
    let decls = surface::read_module(file, src)
        .map_err(|e| CorpusError::Parse { file: file.to_string(), message: e.to_string() })?;
    Ok(check_module(globals, session, &decls))
}

/// Runs every manifest entry in order, then sweeps the boundaries of all
/// constants defined by positive entries.
pub fn run_corpus(dir: &Path, manifest: &Manifest, oracle: bool) -> Result<CorpusReport, CorpusError> {
    let session = Session::new(oracle);
    let mut globals = Globals::new();
    let mut entries = Vec::new();
    for entry in &manifest.entries {
        let src = read(&dir.join(&entry.file))?;
        let results = match entry.expected {
            Expected::Ok => check_file(&mut globals, &session, &entry.file, &src)?,
            Expected::Error(_) => check_file(&mut globals.clone(), &session, &entry.file, &src)?,
        };
        entries.push(EntryReport {
            file: entry.file.clone(),
            expected: entry.expected,
            divergence: divergence(entry.expected, &results),
            results,
        });
    }
    let sweep = boundary_sweep(&globals, &session).unwrap_or_else(|e| SweepReport {
        checked: 0,
        failures: vec![format!("sweep aborted: {}: {}", e.class, e.message)],
    });
    Ok(CorpusReport { entries, sweep })
}

/// The environment built from the positive entries.
pub fn load_globals(dir: &Path, manifest: &Manifest, session: &Session) -> Result<Globals, CorpusError> {
    let mut globals = Globals::new();
    for entry in manifest.positive() {
        let src = read(&dir.join(&entry.file))?;
        check_file(&mut globals, session, &entry.file, &src)?;
    }
    Ok(globals)
}

// ---------------------------------------------------------------------------
// Symbol index

/// Symbols that must each be attached to exactly one corpus declaration.
pub const REQUIRED_SYMBOLS: &[&str] = &[
    "isContr",
    "isProp",
    "isEquiv",
    "Equiv",
    "fib",
    "hom",
    "dhom",
    "idArrow",
    "isSegal",
    "isRezk",
    "comma",
    "fibComma",
    "isTranspRelLeftAdj",
    "relUnit",
    "transposeRel",
    "relUnitContrFibers",
    "isALLD",
    "isRelLARIAdj",
    "relAdjCharacterization",
    "relLeftAdjUnique",
    "isLARICell_i0",
    "hasUniqueLARIFillers_i0",
    "hasEnoughLARILifts_i0",
    "isLARIFunctor_i0",
    "lariFamilyCriterion_i0",
    "lariFunctorNaturality_i0",
    "isLARICell_b1",
    "hasUniqueLARIFillers_b1",
    "hasEnoughLARILifts_b1",
    "isLARIFunctor_b1",
    "lariFamilyCriterion_b1",
    "lariFunctorNaturality_b1",
    "isCocartArrow",
    "isCocartArrowStandard",
    "isCocartArrowCubical",
    "isCocartFamily",
    "isCocartFunctor",
    "cocartArrowCharacterization",
    "cocartFamilyCharacterization",
    "univalence",
    "shapeFunext",
    "segalComp",
];

/// `(symbol, file, declaration)` for every `-- @symbol NAME` marker. A marker
/// names the next `def` or `axiom` in its file.
pub fn symbol_index(dir: &Path, manifest: &Manifest) -> Result<Vec<(String, String, String)>, CorpusError> {
    let mut out = Vec::new();
    for entry in manifest.positive() {
        let src = read(&dir.join(&entry.file))?;
        let mut pending: Vec<String> = Vec::new();
        for line in src.lines() {
            let trimmed = line.trim();
            if let Some(sym) = trimmed.strip_prefix("-- @symbol ") {
                pending.push(sym.trim().to_string());
                continue;
            }
            let mut words = trimmed.split_whitespace();
            if let (Some("def" | "axiom"), Some(name)) = (words.next(), words.next()) {
                for sym in pending.drain(..) {
                    out.push((sym, entry.file.clone(), name.to_string()));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn render_index(index: &[(String, String, String)]) -> String {
    index.iter().map(|(sym, file, decl)| format!("{sym}  {file}  {decl}\n")).collect()
}

/// Required symbols that are missing or attached more than once.
pub fn coverage_problems(index: &[(String, String, String)]) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (sym, _, _) in index {
        *counts.entry(sym.as_str()).or_default() += 1;
    }
    let mut problems = Vec::new();
    for sym in REQUIRED_SYMBOLS {
        match counts.get(sym).copied().unwrap_or(0) {
            1 => {}
            0 => problems.push(format!("{sym} has no declaration")),
            n => problems.push(format!("{sym} is attached to {n} declarations")),
        }
    }
    for (sym, n) in counts {
        if n > 1 && !REQUIRED_SYMBOLS.contains(&sym) {
            problems.push(format!("{sym} is attached to {n} declarations"));
        }
    }
    problems
}

// ---------------------------------------------------------------------------
// Template instantiation for shape inclusions

/// The inclusions the `lari.sst.in` template is instantiated at, with the
/// suffix used for the generated names and file.
pub const LARI_INSTANCES: &[(&str, &str)] = &[("i0", "i0"), ("b1", "b1"), ("b1i0", "b1 (x) i0")];

/// Resolves an instance name to its inclusion.
pub fn lari_inclusion(suffix: &str) -> Option<ShapeInclusion> {
    match suffix {
        "i0" | "b1" => shape::standard_inclusion(suffix).ok(),
        "b1i0" => shape::leibniz_tensor(
            &shape::standard_inclusion("b1").ok()?,
            &shape::standard_inclusion("i0").ok()?,
        )
        .ok(),
        _ => None,
    }
}

fn conj_prefix(t: &Tope) -> String {
    match t {
        Tope::Top => String::new(),
        t => format!("({t}) /\\ "),
    }
}

/// Instantiates the template at an inclusion. Cube variables are renamed to
/// `s1, s2, ...` so they stay clear of the template's term names and of the
/// arrow direction `t`.
pub fn instantiate_lari(template: &str, suffix: &str, inc: &ShapeInclusion) -> String {
    let fresh: Vec<String> = (1..=inc.cube().len()).map(|i| format!("s{i}")).collect();
    let rename = |t: &Tope| {
        t.map_vars(&mut |v: &String| {
            let i = inc.cube().vars().iter().position(|w| w == v).expect("scoped variable");
            IntervalTerm::Var(fresh[i].clone())
        })
    };
    let (phi, psi) = (rename(inc.sub()), rename(inc.sup()));
    let described = LARI_INSTANCES.iter().find(|(s, _)| *s == suffix).map_or(suffix, |(_, d)| d);
    template
        .replace("@DESC@", described)
        .replace("@INCLUSION@", &format!("{{{} | {phi}}} <= {{{} | {psi}}}", fresh.join(" "), fresh.join(" ")))
        .replace("@J@", suffix)
        .replace("@VARS@", &fresh.join(" "))
        .replace("@PTS@", &fresh.join(", "))
        .replace("@PHI_AND@", &conj_prefix(&phi))
        .replace("@PSI_AND@", &conj_prefix(&psi))
        .replace("@PHI@", &phi.to_string())
        .replace("@PSI@", &psi.to_string())
}

/// `(file name, contents)` for every template instance.
pub fn generate_lari_files(dir: &Path) -> Result<Vec<(String, String)>, CorpusError> {
    let template = read(&dir.join("lari.sst.in"))?;
    Ok(LARI_INSTANCES
        .iter()
        .map(|(suffix, _)| {
            let inc = lari_inclusion(suffix).expect("instances are standard inclusions");
            (format!("lari_{suffix}.sst"), instantiate_lari(&template, suffix, &inc))
        })
        .collect())
}
