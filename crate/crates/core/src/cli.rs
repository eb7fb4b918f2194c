//! The `sstt` command-line driver. Everything is routed through [`run_cli`]
//! so tests can drive it without spawning a process.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::corpus::{self, CorpusReport};
use crate::kernel::{check_module, CheckResult, DeclBody, Globals, KernelError, Session};
use crate::shape::{self, Shape, ShapeError, ShapeInclusion};
use crate::surface::{self, parser::ShapeExpr, parser::ShapeSyntax, print_decl};
use crate::tope::{self, CubeContext, IntervalTerm, Tope, TopeError};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn usage(msg: impl std::fmt::Display) -> CliOutput {
        CliOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sstt", version, about = "Checker for simplicial type theory developments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check `.sst` files in order, sharing one environment.
    Check {
        files: Vec<PathBuf>,
        /// Machine-readable report on stdout.
        #[arg(long)]
        json: bool,
        /// Print the elaborated core of every declaration.
        #[arg(long)]
        dump: bool,
        /// Cross-check every tope entailment against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        /// Number of files parsed concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Read one module from standard input after the files.
        #[arg(long)]
        stdin: bool,
    },
    /// Tope queries.
    Tope {
        #[command(subcommand)]
        query: TopeQuery,
    },
    /// Shape calculus.
    Shape {
        #[command(subcommand)]
        query: ShapeQuery,
    },
    /// Run the bundled corpus manifest.
    Corpus {
        /// Cross-check every tope entailment against the brute-force oracle
        #[arg(long)]
        oracle: bool,
        /// Machine-readable report on stdout
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum TopeQuery {
    /// Decide `[vars] HYP => GOAL`.
    Entails {
        query: String,
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ShapeQuery {
    /// Leibniz tensor of two inclusions.
    Tensor { j: String, k: String },
    /// Decide `S ⊆ T`.
    Subseteq { s: String, t: String },
    /// Decide whether two shapes are equal.
    Eq { s: String, t: String },
}

/// Runs the tool on `argv` (including the program name).
pub fn run_cli<I, S>(argv: I, stdin: &mut dyn Read) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                CliOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match cli.command {
        Command::Check { files, json, dump, oracle, jobs, stdin: use_stdin } => {
            let mut sources = Vec::new();
            for f in &files {
                match fs::read_to_string(f) {
                    Ok(src) => sources.push((f.display().to_string(), src)),
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                        return CliOutput::usage(format!("file not found: {}", f.display()))
                    }
                    Err(e) => return CliOutput::usage(format!("cannot read {}: {e}", f.display())),
                }
            }
            if use_stdin {
                let mut src = String::new();
                if let Err(e) = stdin.read_to_string(&mut src) {
                    return CliOutput::usage(format!("cannot read stdin: {e}"));
                }
                sources.push(("<stdin>".to_string(), src));
            }
            if sources.is_empty() {
                return CliOutput::usage("no input files");
            }
            check_sources(&sources, CheckOptions { json, dump, oracle, jobs })
        }
        Command::Tope { query: TopeQuery::Entails { query, oracle } } => tope_entails(&query, oracle),
        Command::Shape { query } => match query {
            ShapeQuery::Tensor { j, k } => shape_tensor(&j, &k),
            ShapeQuery::Subseteq { s, t } => shape_subseteq(&s, &t),
            ShapeQuery::Eq { s, t } => shape_eq(&s, &t),
        },
        Command::Corpus { oracle, json } => run_bundled_corpus(oracle, json),
    }
}

// ---------------------------------------------------------------------------
// check

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub json: bool,
    pub dump: bool,
    pub oracle: bool,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonSpan {
    pub file: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonDiagnostic {
    pub severity: String,
    pub message: String,
    pub span: JsonSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonDeclaration {
    pub name: String,
    pub kind: String,
    pub status: String,
    pub diagnostics: Vec<JsonDiagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonSummary {
    pub declarations: usize,
    pub ok: usize,
    pub errors: usize,
}

/// The `--json` report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub declarations: Vec<JsonDeclaration>,
    pub summary: JsonSummary,
}

impl Report {
    pub fn from_results(results: &[CheckResult]) -> Report {
        let declarations: Vec<JsonDeclaration> = results
            .iter()
            .map(|r| JsonDeclaration {
                name: r.name.clone(),
                kind: r.kind.as_str().to_string(),
                status: if r.is_ok() { "ok" } else { "error" }.to_string(),
                diagnostics: r
                    .error()
                    .map(|e| JsonDiagnostic {
                        severity: "error".into(),
                        message: diagnostic_message(e),
                        span: JsonSpan { file: r.span.file.clone(), line: r.span.line, col: r.span.col },
                    })
                    .into_iter()
                    .collect(),
            })
            .collect();
        let errors = declarations.iter().filter(|d| d.status != "ok").count();
        Report {
            tool_version: TOOL_VERSION.to_string(),
            summary: JsonSummary { declarations: declarations.len(), ok: declarations.len() - errors, errors },
            declarations,
        }
    }
}

/// `[class] message`, with the countermodel appended when present.
pub fn diagnostic_message(e: &KernelError) -> String {
    match &e.countermodel {
        Some(cm) => format!("[{}] {} (countermodel: {cm})", e.class, e.message),
        None => format!("[{}] {}", e.class, e.message),
    }
}

fn parse_all(sources: &[(String, String)], jobs: usize) -> Vec<Result<Vec<surface::parser::Item>, surface::ParseError>> {
    let jobs = jobs.max(1);
    if jobs == 1 || sources.len() < 2 {
        return sources.iter().map(|(_, src)| surface::parse_items(src)).collect();
    }
    let mut out: Vec<Option<Result<_, _>>> = (0..sources.len()).map(|_| None).collect();
    let chunk = sources.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = sources
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|(_, src)| surface::parse_items(src)).collect::<Vec<_>>()))
            .collect();
        let mut i = 0;
        for h in handles {
            for r in h.join().expect("parser threads do not panic") {
                out[i] = Some(r);
                i += 1;
            }
        }
    });
    out.into_iter().map(|r| r.expect("every file parsed")).collect()
}

pub fn check_sources(sources: &[(String, String)], opts: CheckOptions) -> CliOutput {
    let parsed = parse_all(sources, opts.jobs);
    let mut globals = Globals::new();
    let session = Session::new(opts.oracle);
    let mut results = Vec::new();
    let mut out = CliOutput::default();
    for ((file, _), items) in sources.iter().zip(parsed) {
        // A file that does not even lex is reported as one failed declaration.
        let items = items.unwrap_or_else(|error| {
            vec![surface::parser::Item::Failed(surface::parser::FailedDecl { name: None, kind: None, error })]
        });
        let decls = surface::elaborate_items(file, &items);
        let rs = check_module(&mut globals, &session, &decls);
        if opts.dump {
            for (d, r) in decls.iter().zip(&rs) {
                if r.is_ok() && !matches!(d.body, DeclBody::Failed(_)) {
                    if let Some(s) = print_decl(d) {
                        out.stdout.push_str(&s);
                        out.stdout.push('\n');
                    }
                }
            }
        }
        results.extend(rs);
    }
    let report = Report::from_results(&results);
    if opts.json {
        out.stdout.push_str(&serde_json::to_string_pretty(&report).expect("reports serialize"));
        out.stdout.push('\n');
    } else {
        for r in &results {
            let status = if r.is_ok() { "ok" } else { "error" };
            out.stdout.push_str(&format!("{status:<5} {:<7} {}\n", r.kind.as_str(), r.name));
            if let Some(e) = r.error() {
                out.stderr.push_str(&format!("{}: error[{}]: {}\n", r.span, e.class, e.message));
                if let Some(cm) = &e.countermodel {
                    out.stderr.push_str(&format!("  countermodel: {cm}\n"));
                }
            }
        }
        let s = &report.summary;
        out.stdout.push_str(&format!("{} declarations, {} ok, {} errors\n", s.declarations, s.ok, s.errors));
    }
    if report.summary.errors > 0 {
        out.code = EXIT_FAILURE;
    }
    out
}

// ---------------------------------------------------------------------------
// tope and shape queries

fn names(t: &Tope<surface::ast::Ident>) -> Tope {
    t.map_vars(&mut |v| IntervalTerm::Var(v.name.clone()))
}

fn tope_entails(query: &str, oracle: bool) -> CliOutput {
    let (vars, hyp, goal) = match surface::parse_tope_query(query) {
        Ok(q) => q,
        Err(e) => return CliOutput::usage(e),
    };
    let cube = match CubeContext::new(vars.iter().map(|v| v.name.clone()).collect()) {
        Ok(c) => c,
        Err(e) => return CliOutput::usage(e),
    };
    let (hyp, goal) = (names(&hyp), names(&goal));
    let verdict = match tope::entails(&cube, &hyp, &goal) {
        Ok(v) => v,
        Err(e @ TopeError::BranchLimit) => {
            return CliOutput { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        Err(e) => return CliOutput::usage(e),
    };
    if oracle {
        let reference = tope::oracle_entails(&cube, &hyp, &goal).expect("scope already checked");
        if reference != verdict {
            return CliOutput {
                code: EXIT_FAILURE,
                stdout: String::new(),
                stderr: format!("error: solver says {verdict}, oracle says {reference}\n"),
            };
        }
    }
    let mut stdout = format!("{verdict}\n");
    if !verdict {
        if let Some(cm) = tope::countermodel(&cube, &hyp, &goal).expect("scope already checked") {
            stdout.push_str(&format!("countermodel: {cm}\n"));
        }
    }
    CliOutput { code: EXIT_OK, stdout, stderr: String::new() }
}

fn shape_of_syntax(s: &ShapeSyntax) -> Result<Shape, ShapeError> {
    match s {
        ShapeSyntax::Named(n) => shape::standard_shape(n),
        ShapeSyntax::Braces(binders, t) => {
            let cube = CubeContext::new(binders.iter().map(|b| b.name.clone()).collect())?;
            Shape::new(cube, names(t))
        }
    }
}

fn read_shape(src: &str) -> Result<Shape, String> {
    match surface::parse_shape_expr(src).map_err(|e| e.to_string())? {
        ShapeExpr::Shape(s) => shape_of_syntax(&s).map_err(|e| e.to_string()),
        ShapeExpr::Inclusion(..) => Err(format!("expected a shape, found the inclusion {src}")),
    }
}

/// An inclusion is a standard inclusion name or `S <= T`.
fn read_inclusion(src: &str) -> Result<ShapeInclusion, String> {
    match surface::parse_shape_expr(src).map_err(|e| e.to_string())? {
        ShapeExpr::Shape(ShapeSyntax::Named(n)) => shape::standard_inclusion(&n).map_err(|e| e.to_string()),
        ShapeExpr::Shape(ShapeSyntax::Braces(..)) => Err(format!("expected an inclusion, found the shape {src}")),
        ShapeExpr::Inclusion(a, b) => {
            let a = shape_of_syntax(&a).map_err(|e| e.to_string())?;
            let b = shape_of_syntax(&b).map_err(|e| e.to_string())?;
            shape::inclusion_of(&a, &b).map_err(|e| e.to_string())
        }
    }
}

fn shape_tensor(j: &str, k: &str) -> CliOutput {
    let (j, k) = match (read_inclusion(j), read_inclusion(k)) {
        (Ok(j), Ok(k)) => (j, k),
        (Err(e), _) | (_, Err(e)) => return CliOutput::usage(e),
    };
    let (cube, left, right, sup) = match shape::leibniz_halves(&j, &k) {
        Ok(h) => h,
        Err(e) => return CliOutput::usage(e),
    };
    let sub_text = shape::render_tensor_sub(&left, &right);
    match shape::is_inclusion(&cube, &Tope::or(left, right), &sup) {
        Ok(inc) => CliOutput {
            code: EXIT_OK,
            stdout: format!("{sub_text}\nsup: {}\ninclusion: {inc}\n", inc.sup()),
            stderr: String::new(),
        },
        Err(e) => CliOutput { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn shape_subseteq(s: &str, t: &str) -> CliOutput {
    let (a, b) = match (read_shape(s), read_shape(t)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CliOutput::usage(e),
    };
    match shape::inclusion_of(&a, &b) {
        Ok(_) => CliOutput { code: EXIT_OK, stdout: "true\n".into(), stderr: String::new() },
        Err(ShapeError::NotIncluded { countermodel, .. }) => {
            let mut stdout = "false\n".to_string();
            if let Some(cm) = countermodel {
                stdout.push_str(&format!("countermodel: {cm}\n"));
            }
            CliOutput { code: EXIT_OK, stdout, stderr: String::new() }
        }
        Err(e) => CliOutput::usage(e),
    }
}

fn shape_eq(s: &str, t: &str) -> CliOutput {
    let (a, b) = match (read_shape(s), read_shape(t)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CliOutput::usage(e),
    };
    let mut stdout = String::new();
    for (x, y) in [(&a, &b), (&b, &a)] {
        match shape::inclusion_of(x, y) {
            Ok(_) => {}
            Err(ShapeError::NotIncluded { countermodel, .. }) => {
                stdout.push_str("false\n");
                if let Some(cm) = countermodel {
                    stdout.push_str(&format!("countermodel: {cm}\n"));
                }
                return CliOutput { code: EXIT_OK, stdout, stderr: String::new() };
            }
            Err(e) => return CliOutput::usage(e),
        }
    }
    stdout.push_str("true\n");
    CliOutput { code: EXIT_OK, stdout, stderr: String::new() }
}

// ---------------------------------------------------------------------------
// corpus

fn run_bundled_corpus(oracle: bool, json: bool) -> CliOutput {
    let dir = corpus::corpus_dir();
    let manifest = match corpus::load_manifest(&dir) {
        Ok(m) => m,
        Err(e) => return CliOutput::usage(e),
    };
    let report = match corpus::run_corpus(&dir, &manifest, oracle) {
        Ok(r) => r,
        Err(e) => return CliOutput::usage(e),
    };
    let mut out = CliOutput::default();
    if json {
        out.stdout.push_str(&serde_json::to_string_pretty(&Report::from_results(&report.all_results())).expect("reports serialize"));
        out.stdout.push('\n');
    } else {
        out.stdout.push_str(&render_corpus(&report));
    }
    for d in report.divergences() {
        out.stderr.push_str(&format!("{d}\n"));
    }
    out.code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    out
}

pub fn render_corpus(report: &CorpusReport) -> String {
    let mut s = String::new();
    for e in &report.entries {
        let verdict = if e.divergence.is_none() { "pass" } else { "FAIL" };
        let ok = e.results.iter().filter(|r| r.is_ok()).count();
        s.push_str(&format!(
            "{verdict} {:<32} {:<36} {ok}/{} declarations ok\n",
            e.file,
            e.expected.to_string(),
            e.results.len()
        ));
    }
    s.push_str(&format!(
        "boundary sweep: {} endpoint checks, {} failures\n",
        report.sweep.checked,
        report.sweep.failures.len()
    ));
    s
}
