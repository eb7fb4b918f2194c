//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines are always printed.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sstt::cli::{run_cli, CliOutput, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use sstt::corpus::{corpus_dir, load_manifest, run_corpus, CorpusReport, Expected};
use sstt::shape::{inclusion_of, is_inclusion, leibniz_tensor, standard_inclusion, standard_shape, ShapeError};
use sstt::tope::{entails, equiv, oracle_entails, CubeContext, IntervalTerm, Tope};

type Outcome = Result<String, String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn cli(args: &[&str]) -> CliOutput {
    run_cli(std::iter::once("sstt").chain(args.iter().copied()), &mut std::io::empty())
}

fn corpus_report(oracle: bool) -> Result<CorpusReport, String> {
    let dir = corpus_dir();
    let manifest = load_manifest(&dir).map_err(|e| e.to_string())?;
    run_corpus(&dir, &manifest, oracle).map_err(|e| e.to_string())
}

fn solver_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut divergences = Vec::new();
    let mut exhaustive = 0usize;
    common::for_each_small_query(2, 3, |names, hyp, goal| {
        let ctx = CubeContext::of(names);
        if entails(&ctx, hyp, goal) != oracle_entails(&ctx, hyp, goal) {
            divergences.push(format!("[{}] {hyp} => {goal}", names.join(",")));
        }
        exhaustive += 1;
    });
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157_7054);
    let random = 500;
    for _ in 0..random {
        let (names, hyp, goal) = common::random_query(&mut rng);
        let ctx = CubeContext::new(names.clone()).map_err(|e| e.to_string())?;
        if entails(&ctx, &hyp, &goal) != oracle_entails(&ctx, &hyp, &goal) {
            divergences.push(format!("[{}] {hyp} => {goal}", names.join(",")));
        }
    }
    let elapsed = start.elapsed();
    ensure(divergences.is_empty(), || format!("{} divergences, first {}", divergences.len(), divergences[0]))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{exhaustive} exhaustive + {random} random queries agree in {:.1}s", elapsed.as_secs_f64()))
}

fn square_decomposition() -> Outcome {
    for query in ["[t,s] TOP => (s<=t)\\/(t<=s)", "[t,s] (s<=t)\\/(t<=s) => TOP"] {
        let out = cli(&["tope", "entails", query]);
        ensure(out.code == EXIT_OK && out.stdout == "true\n", || format!("{query} gave {:?}", out.stdout))?;
    }
    Ok("both directions print true".into())
}

fn tope(src: &str) -> Result<Tope, String> {
    let t = sstt::surface::parse_tope(src).map_err(|e| e.to_string())?;
    Ok(t.map_vars(&mut |v| IntervalTerm::Var(v.name.clone())))
}

fn tensor_goldens() -> Outcome {
    let inc = |n: &str| standard_inclusion(n).map_err(|e| e.to_string());
    let cases = [
        ("b1", "b1", "(t==0 \\/ t==1) \\/ (s==0 \\/ s==1)"),
        ("b1", "i0", "(t==0 \\/ t==1) \\/ (s==0)"),
        ("i0", "i0", "(t==0) \\/ (s==0)"),
    ];
    let square = standard_shape("square").map_err(|e| e.to_string())?;
    for (j, k, want) in cases {
        let r = leibniz_tensor(&inc(j)?, &inc(k)?).map_err(|e| e.to_string())?;
        ensure(r.verified(), || format!("{j} (x) {k} is not verified"))?;
        ensure(equiv(r.cube(), r.sub(), &tope(want)?).map_err(|e| e.to_string())?, || {
            format!("{j} (x) {k} has sub-tope {}", r.sub())
        })?;
        inclusion_of(&r.domain(), &square).map_err(|e| format!("{j} (x) {k} not in the square: {e}"))?;
    }
    let t = CubeContext::of(&["t"]);
    let id = is_inclusion(&t, &Tope::Top, &Tope::Top).map_err(|e| e.to_string())?;
    let r = leibniz_tensor(&id, &id).map_err(|e| e.to_string())?;
    ensure(equiv(r.cube(), r.sub(), r.sup()).map_err(|e| e.to_string())?, || "identity tensor is not an identity".into())?;
    Ok("three goldens and the identity case hold".into())
}

fn shape_algebra() -> Outcome {
    let s = |n: &str| standard_shape(n).map_err(|e| e.to_string());
    inclusion_of(&s("Λ²₁")?, &s("Δ2")?).map_err(|e| e.to_string())?;
    inclusion_of(&s("Δ2")?, &s("square")?).map_err(|e| e.to_string())?;
    let ts = CubeContext::of(&["t", "s"]);
    let union = Tope::or(s("Λ²₁")?.tope, tope("s<=t /\\ s==t")?);
    ensure(equiv(&ts, &s("∂Δ2")?.tope, &union).map_err(|e| e.to_string())?, || "boundary differs".into())?;
    match inclusion_of(&s("square")?, &s("Δ2")?) {
        Err(e @ ShapeError::NotIncluded { countermodel: Some(_), .. }) => {
            let printed = e.to_string();
            ensure(printed.contains("countermodel: t=⟂, s=⊤"), || printed.clone())?;
            let out = cli(&["shape", "subseteq", "square", "D2"]);
            ensure(out.stdout == "false\ncountermodel: t=⟂, s=⊤\n", || out.stdout.clone())?;
            Ok("horn <= triangle <= square; boundary = horn + diagonal; square !<= triangle at t=⟂, s=⊤".into())
        }
        other => Err(format!("square <= triangle gave {other:?}")),
    }
}

fn kernel_positive_suite() -> Outcome {
    let report = corpus_report(false)?;
    let positive: Vec<_> = report.entries.iter().filter(|e| e.expected == Expected::Ok).collect();
    for e in &positive {
        ensure(e.divergence.is_none(), || format!("{}: {}", e.file, e.divergence.clone().unwrap_or_default()))?;
    }
    ensure(report.sweep.passed(), || report.sweep.failures.join("; "))?;
    ensure(report.sweep.checked > 0, || "boundary sweep checked nothing".into())?;
    Ok(format!(
        "{} files, {} declarations ok; boundary sweep {} endpoint checks, 0 failures",
        positive.len(),
        report.positive_declarations(),
        report.sweep.checked
    ))
}

fn kernel_negative_suite() -> Outcome {
    let report = corpus_report(false)?;
    let negative: Vec<_> = report.entries.iter().filter(|e| e.expected != Expected::Ok).collect();
    ensure(negative.len() >= 10, || format!("only {} negative files", negative.len()))?;
    let mut classes = BTreeSet::new();
    for e in &negative {
        ensure(e.divergence.is_none(), || format!("{}: {}", e.file, e.divergence.clone().unwrap_or_default()))?;
        if let Expected::Error(c) = e.expected {
            classes.insert(c.as_str());
        }
    }
    for required in ["boundary-mismatch", "type-mismatch", "incompatible-cases", "scope-error", "non-inclusion"] {
        ensure(classes.contains(required), || format!("no negative file for {required}"))?;
    }
    Ok(format!("{} variants rejected with the expected class ({} classes)", negative.len(), classes.len()))
}

fn round_trip() -> Outcome {
    let dir = corpus_dir();
    let manifest = load_manifest(&dir).map_err(|e| e.to_string())?;
    let mut files = 0;
    for entry in manifest.positive() {
        let src = std::fs::read_to_string(dir.join(&entry.file)).map_err(|e| e.to_string())?;
        common::round_trip(&entry.file, &src)?;
        files += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let src = format!("{}\n{}", common::TERM_PRELUDE, common::random_definitions(&mut rng, 500));
    common::check_all("random.sst", &src)?;
    common::round_trip("random.sst", &src)?;
    Ok(format!("{files} corpus files and 500 random well-typed terms are stable"))
}

fn scratch(name: &str, contents: &str) -> Result<String, String> {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).map_err(|e| e.to_string())?;
    Ok(path.display().to_string())
}

fn cli_contract() -> Outcome {
    let good = scratch("accept-good.sst", "def a : U := U ;\n")?;
    let bad = scratch("accept-bad.sst", "def a : U := U ;\ndef b (A : U) (x y : A) : Id A x y := refl ;\n")?;
    let codes = [
        (cli(&["check", &good]).code, EXIT_OK),
        (cli(&["check", &bad]).code, EXIT_FAILURE),
        (cli(&["check", "accept-missing.sst"]).code, EXIT_USAGE),
        (cli(&["no-such-command"]).code, EXIT_USAGE),
    ];
    for (got, want) in codes {
        ensure(got == want, || format!("exit code {got}, expected {want}"))?;
    }
    let json = cli(&["check", "--json", &bad]);
    let problems = common::json_schema_problems(&json.stdout);
    ensure(problems.is_empty(), || problems.join("; "))?;

    let dir = corpus_dir();
    let manifest = load_manifest(&dir).map_err(|e| e.to_string())?;
    let files: Vec<String> = manifest.positive().map(|e| dir.join(&e.file).display().to_string()).collect();
    let mut args = vec!["check", "--json"];
    args.extend(files.iter().map(|s| s.as_str()));
    let plain = cli(&args);
    args.insert(1, "--oracle");
    let oracle = cli(&args);
    ensure(plain.code == EXIT_OK, || plain.stderr.clone())?;
    ensure(plain.stdout == oracle.stdout && plain.code == oracle.code, || "--oracle changed a verdict".into())?;
    let with = corpus_report(true)?;
    ensure(with.passed(), || with.divergences().join("; "))?;
    Ok("exit codes 0/1/2, JSON schema, and --oracle parity over the corpus".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("solver/oracle agreement", solver_oracle_agreement),
        ("square decomposition", square_decomposition),
        ("Leibniz tensor goldens", tensor_goldens),
        ("shape algebra", shape_algebra),
        ("kernel positive suite", kernel_positive_suite),
        ("kernel negative suite", kernel_negative_suite),
        ("round trip", round_trip),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
