//! Rewrites the generated corpus files: the `lari_*.sst` instances of
//! `lari.sst.in` and `index.txt`.
//!
//! ```text
//! cargo run --example regenerate_corpus
//! ```

use std::fs;

use sstt::corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = corpus::corpus_dir();
    for (name, contents) in corpus::generate_lari_files(&dir)? {
        fs::write(dir.join(&name), contents)?;
        println!("wrote {name}");
    }
    let manifest = corpus::load_manifest(&dir)?;
    let index = corpus::symbol_index(&dir, &manifest)?;
    fs::write(dir.join("index.txt"), corpus::render_index(&index))?;
    println!("wrote index.txt ({} symbols)", index.len());
    for p in corpus::coverage_problems(&index) {
        println!("coverage: {p}");
    }
    Ok(())
}
