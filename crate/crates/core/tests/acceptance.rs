//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use slimlat::diagram::{regular_meet_check, theorem_part_ii_check, validate_c1};
use slimlat::generate::{exhaustive_small_lattices, generate_ssl, ssl_by_coordinates, GeneratedSsl};
use slimlat::lattice::standard::{b2, chain, n5};
use slimlat::morphisms::{
    enumerate_embeddings, enumerate_retractions, is_embedding, is_retract, oracle, retracts, LatticeMap,
};
use slimlat::properties::{
    builtin_counterexamples, builtin_pattern, builtin_pattern_p81, check_retracts_property, cogwheel_retraction,
    satisfies_absorption,
};
use slimlat::slim::{default_layout, grid, join_coordinates, theorem_part_i_check};
use slimlat::{Error, FiniteLattice};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { ok: true, detail: summary }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome { ok: false, detail: format!("{summary}; {} failures: {}", failures.len(), shown.join("; ")) }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// Generated SSLs ≤ 8 and the slim semimodular members of the brute-force
/// enumeration have the same canonical forms.
/// Beyond 8, recipes must also reach everything the coordinate enumeration
/// finds.
fn criterion_1(oracle8: &[FiniteLattice], oracle_time: Duration, corpus: &[GeneratedSsl]) -> Outcome {
    let start = Instant::now();
    let generated = generate_ssl(8);
    let elapsed = start.elapsed() + oracle_time;
    let mut failures = Vec::new();
    let counts: Vec<usize> = (1..=8).map(|n| oracle8.iter().filter(|l| l.len() == n).count()).collect();
    if counts != [1, 1, 1, 2, 5, 15, 53, 222] {
        failures.push(format!("oracle lattice counts {counts:?}"));
    }
    let from_oracle: BTreeSet<_> =
        oracle8.iter().filter(|l| l.is_slim() && l.is_semimodular()).map(|l| l.canonical_form()).collect();
    let from_gen: BTreeSet<_> = generated.iter().map(|g| g.form.clone()).collect();
    if from_gen.len() != generated.len() {
        failures.push("generator emitted isomorphic duplicates".into());
    }
    if from_oracle != from_gen {
        failures.push(format!(
            "missing {} extra {}",
            from_oracle.difference(&from_gen).count(),
            from_gen.difference(&from_oracle).count()
        ));
    }
    for g in &generated {
        if !g.lattice.is_slim() || !g.lattice.is_semimodular() {
            failures.push(format!("{} is not an SSL", g.form.hex()));
        }
    }
    if elapsed > Duration::from_secs(600) {
        failures.push(format!("took {}", secs(elapsed)));
    }
    let by_coords: BTreeSet<_> = ssl_by_coordinates(12).iter().map(|l| l.canonical_form()).collect();
    let by_recipe: BTreeSet<_> = corpus.iter().map(|g| g.form.clone()).collect();
    if by_coords != by_recipe || corpus.iter().any(|g| g.recipe.is_none() && g.lattice.len() > 2) {
        failures.push(format!("up to 12: {} by coordinates, {} by recipe", by_coords.len(), by_recipe.len()));
    }
    outcome(
        &failures,
        format!(
            "{} SSLs on both sides, lattice counts {counts:?}, {}; {} SSLs up to 12 agree with the coordinate enumeration",
            from_gen.len(),
            secs(elapsed),
            corpus.len()
        ),
    )
}

fn criterion_2(corpus: &[GeneratedSsl], oracle8: &[FiniteLattice]) -> Outcome {
    let mut lattices: Vec<&FiniteLattice> = corpus.iter().map(|g| &g.lattice).collect();
    let n5 = n5();
    lattices.push(&n5);
    lattices.extend(oracle8.iter().filter(|l| l.is_slim()));
    let mut failures = Vec::new();
    let mut pairs = 0;
    for l in &lattices {
        match theorem_part_i_check(l) {
            Ok(r) => {
                pairs += r.pairs_checked;
                failures.extend(r.violations.iter().map(|v| format!("{} ∥ {}", v.a, v.b)));
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    outcome(&failures, format!("{} slim lattices, {pairs} incomparable pairs", lattices.len()))
}

fn criterion_3(corpus: &[GeneratedSsl]) -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for g in corpus {
        match theorem_part_ii_check(&g.lattice, &g.layout) {
            Ok(r) => {
                pairs += r.pairs_checked;
                failures.extend(r.failures.iter().map(|f| format!("{}: {} ∥ {}", g.form.hex(), f.a, f.b)));
            }
            Err(e) => failures.push(format!("{}: {e}", g.form.hex())),
        }
    }
    let l = n5();
    let layout = default_layout(&l).expect("N5 is slim");
    let (z, y) = (l.elem("z").unwrap(), l.elem("y").unwrap());
    let control = regular_meet_check(&l, &layout, z, y).expect("incomparable");
    if control.failed_checks() != ["meet_reducible"] {
        failures.push(format!("N5 control failed {:?}", control.failed_checks()));
    }
    if theorem_part_ii_check(&l, &layout).unwrap_err() != Error::NotSemimodular {
        failures.push("N5 accepted by the sweep".into());
    }
    outcome(&failures, format!("{} SSLs, {pairs} pairs; N5 coatoms fail only meet_reducible", corpus.len()))
}

fn criterion_4(corpus: &[GeneratedSsl]) -> Outcome {
    let failures: Vec<String> = corpus
        .iter()
        .filter_map(|g| {
            let r = validate_c1(&g.lattice, &g.layout);
            (!r.passed()).then(|| format!("{}: {:?}", g.form.hex(), r.violations.first()))
        })
        .collect();
    outcome(&failures, format!("{} layouts validated", corpus.len()))
}

fn criterion_5(corpus: &[GeneratedSsl]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for name in ["P81", "P92"] {
        let p = builtin_pattern(name).unwrap();
        for g in corpus {
            match check_retracts_property(&g.lattice, &p) {
                Ok(r) => {
                    checked += r.retracts_checked;
                    if !r.passed() {
                        failures.push(format!("{name} on {}", g.form.hex()));
                    }
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(900) {
        failures.push(format!("took {}", secs(elapsed)));
    }
    outcome(&failures, format!("every SSL up to 12 elements, {checked} (retract, pattern) checks, {}", secs(elapsed)))
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for c in builtin_counterexamples() {
        let l = &c.lattice;
        let p = builtin_pattern(&c.pattern).unwrap();
        if !l.is_slim() || !l.is_semimodular() {
            failures.push(format!("{} is not an SSL", c.name));
        }
        let r = match cogwheel_retraction(l, &c.blocks) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{}: {e}", c.name));
                continue;
            }
        };
        let report = match check_retracts_property(l, &p) {
            Ok(rep) => rep,
            Err(e) => {
                failures.push(format!("{}: {e}", c.name));
                continue;
            }
        };
        if report.passed() {
            failures.push(format!("{} satisfies {}", c.name, c.pattern));
        }
        if !report.failures.iter().any(|f| f.retract == r.image) {
            failures.push(format!("{}: cog-wheel image not among the failing retracts", c.name));
        }
        for f in &report.failures {
            let g = LatticeMap::new(&p.k, l, f.witness.embedding.clone());
            let black_in = p.black.iter().all(|&x| f.retract.contains(&g.apply(x)));
            let star_out = !f.retract.contains(&g.apply(f.witness.star));
            if !is_embedding(&g) || !black_in || !star_out {
                failures.push(format!("{}: unsound witness", c.name));
            }
        }
        seen.push(format!("{}({} el.) fails {}", c.name, l.len(), c.pattern));
    }
    for needed in ["L82", "L94", "L94dual"] {
        if !seen.iter().any(|s| s.starts_with(&format!("{needed}("))) {
            failures.push(format!("{needed} missing"));
        }
    }
    outcome(&failures, seen.join(", "))
}

fn criterion_7() -> Outcome {
    let p81 = builtin_pattern_p81();
    let p92 = builtin_pattern("P92").unwrap();
    let k = &p81.k;
    let s = k.elems(&["a", "b", "c", "d", "y"]).unwrap();
    let mut sorted = s.clone();
    sorted.sort_unstable();
    let mut failures = Vec::new();
    if !satisfies_absorption(k, &s, &p81).unwrap().holds {
        failures.push("P81 fails".into());
    }
    if !satisfies_absorption(k, &s, &p92).unwrap().holds {
        failures.push("P92 fails".into());
    }
    if is_retract(k, &s).unwrap().is_some() {
        failures.push("S is a retract".into());
    }
    if retracts(k).unwrap().contains(&sorted) {
        failures.push("S among enumerated retracts".into());
    }
    outcome(&failures, "S = {a,b,c,d,y} satisfies P81 and P92 but is not a retract".into())
}

fn min_rule_holds(l: &FiniteLattice) -> bool {
    let Ok(jc) = join_coordinates(l) else { return false };
    l.elements().all(|x| {
        l.elements().all(|y| {
            let m = l.meet(x, y);
            jc.i[m] == jc.i[x].min(jc.i[y]) && jc.j[m] == jc.j[x].min(jc.j[y])
        })
    })
}

fn criterion_8(corpus: &[GeneratedSsl], oracle8: &[FiniteLattice]) -> Outcome {
    let mut failures = Vec::new();
    let c2 = chain(2);
    let b = b2();
    let (g33, _) = grid(3, 3).unwrap();
    let checks = [
        ("C2 retractions", enumerate_retractions(&c2).unwrap().len(), oracle::retraction_count(&c2), 3),
        ("B2 retractions", enumerate_retractions(&b).unwrap().len(), oracle::retraction_count(&b), 11),
        ("B2 into 3x3 embeddings", enumerate_embeddings(&b, &g33, None).len(), oracle::embedding_count(&b, &g33), 18),
    ];
    for (what, pruned, brute, expected) in checks {
        if pruned != expected || brute != expected {
            failures.push(format!("{what}: search {pruned}, brute force {brute}, expected {expected}"));
        }
    }
    let slim: Vec<&FiniteLattice> =
        corpus.iter().map(|g| &g.lattice).chain(oracle8.iter().filter(|l| l.is_slim())).collect();
    let bad = slim.iter().filter(|l| !min_rule_holds(l)).count();
    if bad > 0 {
        failures.push(format!("{bad} lattices break the min rule"));
    }
    outcome(&failures, format!("3 / 11 / 18 confirmed by brute force; min rule on {} slim lattices", slim.len()))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = slimlat::cli::run(args.iter().copied(), &mut out, &mut err);
    (code, out)
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let tmp = tempfile::tempdir().unwrap();
    let mut gens = Vec::new();
    for (k, jobs) in ["1", "4", "1"].iter().enumerate() {
        let dir = tmp.path().join(format!("run{k}"));
        let d = dir.to_str().unwrap();
        let (code, out) = run_cli(&["slimlat", "--jobs", jobs, "gen", "--max-size", "10", "--out", d]);
        if code != 0 {
            failures.push(format!("gen exit {code}"));
        }
        gens.push((out, snapshot(&dir)));
    }
    if gens.windows(2).any(|w| w[0] != w[1]) {
        failures.push("gen output differs between runs".into());
    }
    let verifies: [&[&str]; 2] =
        [&["verify", "--theorem", "--max-size", "10"], &["verify", "--pattern", "P81", "--max-size", "9"]];
    for args in verifies {
        let runs: Vec<(i32, Vec<u8>)> = ["1", "4", "1"]
            .iter()
            .map(|jobs| {
                let mut full = vec!["slimlat", "--jobs", jobs];
                full.extend(args);
                run_cli(&full)
            })
            .collect();
        if runs.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{} output differs between runs", args.join(" ")));
        }
        if runs[0].0 != 0 {
            failures.push(format!("{} exit {}", args.join(" "), runs[0].0));
        }
    }
    outcome(&failures, format!("gen ({} files) and verify byte-identical at 1 and 4 threads", gens[0].1.len()))
}

fn main() {
    let start = Instant::now();
    let t = Instant::now();
    let oracle8 = exhaustive_small_lattices(8).expect("within limit");
    let oracle_time = t.elapsed();
    let corpus = generate_ssl(12);
    let results = [
        ("structure theorem completeness", criterion_1(&oracle8, oracle_time, &corpus)),
        ("chain intervals below incomparable pairs", criterion_2(&corpus, &oracle8)),
        ("regular meets in the diagram", criterion_3(&corpus)),
        ("C1 validity of generated layouts", criterion_4(&corpus)),
        ("retracts absorb P81 and P92", criterion_5(&corpus)),
        ("counterexample fixtures", criterion_6()),
        ("absorption without retraction", criterion_7()),
        ("micro-oracles", criterion_8(&corpus, &oracle8)),
        ("determinism", criterion_9()),
    ];
    let mut all = true;
    for (k, (name, o)) in results.iter().enumerate() {
        all &= o.ok;
        println!("criterion {} ({name}): {} [{}]", k + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} in {}", if all { "PASS" } else { "FAIL" }, secs(start.elapsed()));
    if !all {
        std::process::exit(1);
    }
}
