//! Regenerates `data/fixtures/*.json`: for each pattern that is not absorbed
//! by all retracts, the smallest generated SSL with a violating retract,
//! with the fibres of that retraction as blocks.
//!
//! cargo run --release --example find_counterexamples -- data/fixtures

use std::path::{Path, PathBuf};

use slimlat::generate::{generate_ssl, GeneratedSsl};
use slimlat::morphisms::{is_retract, RETRACTION_SIZE_BOUND};
use slimlat::properties::{builtin_pattern, check_retracts_property, Counterexample};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/fixtures".into()));
    let mut todo = vec![
        ("l82.json", "L82", "P82"),
        ("l82dual.json", "L82dual", "P82dual"),
        ("l94.json", "L94", "P94"),
        ("l94dual.json", "L94dual", "P94dual"),
    ];
    // Grow the size one step at a time so the first hit is a smallest one.
    for size in 1..=RETRACTION_SIZE_BOUND {
        if todo.is_empty() {
            break;
        }
        let corpus: Vec<_> = generate_ssl(size).into_iter().filter(|g| g.lattice.len() == size).collect();
        todo.retain(|&(file, name, pattern)| !write_first(&dir, &corpus, file, name, pattern));
    }
    for (_, _, pattern) in todo {
        eprintln!("{pattern}: no counterexample up to {RETRACTION_SIZE_BOUND} elements");
    }
}

fn write_first(dir: &Path, corpus: &[GeneratedSsl], file: &str, name: &str, pattern: &str) -> bool {
    let p = builtin_pattern(pattern).expect("pattern");
    let found = corpus.iter().find_map(|g| {
        let report = check_retracts_property(&g.lattice, &p).expect("within bound");
        report.failures.first().map(|f| (g, f.retract.clone()))
    });
    let Some((g, retract)) = found else {
        return false;
    };
    {
        let r = is_retract(&g.lattice, &retract).expect("sublattice").expect("retract");
        let fixture = Counterexample {
            name: name.into(),
            pattern: pattern.into(),
            lattice: g.lattice.clone(),
            layout: Some(g.layout.clone()),
            recipe: g.recipe.clone(),
            blocks: Counterexample::blocks_of(&r.map.assignment),
        };
        std::fs::write(dir.join(file), fixture.to_json()).expect("write fixture");
        println!("{pattern}: {} elements, {}", g.lattice.len(), g.form.hex());
    }
    true
}
