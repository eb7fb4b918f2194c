//! Runs the bundled corpus against its manifest and prints a summary, with
//! or without cross-checking every tope query against the oracle.
//!
//! ```text
//! cargo run --example run_corpus -- [--oracle]
//! ```

use sstt::corpus::{corpus_dir, load_manifest, run_corpus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = std::env::args().any(|a| a == "--oracle");
    let dir = corpus_dir();
    let manifest = load_manifest(&dir)?;
    let report = run_corpus(&dir, &manifest, oracle)?;
    for entry in &report.entries {
        let status = if entry.divergence.is_none() { "pass" } else { "FAIL" };
        println!("{status}  {:<40} {}", entry.file, entry.expected);
    }
    println!(
        "{} positive declarations; boundary sweep checked {} endpoints with {} failures",
        report.positive_declarations(),
        report.sweep.checked,
        report.sweep.failures.len()
    );
    for d in report.divergences() {
        println!("divergence: {d}");
    }
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
