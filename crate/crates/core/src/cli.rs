//! The `slimlat` command line. Reports are JSON lines on stdout; the exit
//! code is 0 when everything passed, 1 on a semantic failure and 2 on I/O or
//! schema problems.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::diagram::{theorem_part_ii_check, validate_c1, DiagramLayout};
use crate::error::Error;
use crate::generate::{exhaustive_small_lattices, generate_ssl, GeneratedSsl};
use crate::io::LatticeJson;
use crate::lattice::{Elem, FiniteLattice};
use crate::morphisms::{enumerate_retractions, LatticeMap};
use crate::par;
use crate::properties::{
    builtin_counterexamples, check_retracts_property, load_pattern, satisfies_absorption, AbsorptionPattern,
    RetractsReport,
};
use crate::render::{emit_svg, emit_tikz, Marks};
use crate::slim::{default_layout, theorem_part_i_check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ENV: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "slimlat", version, about = "Slim semimodular lattices: checks, enumeration, retracts")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test predicates on a lattice file.
    Check(CheckArgs),
    /// Write every SSL up to a size, one JSON file each.
    Gen(GenArgs),
    /// Sweep generated SSLs through the structural checks or a pattern.
    Verify(VerifyArgs),
    /// Draw a lattice or pattern.
    Render(RenderArgs),
    /// List the retractions of a lattice.
    Retracts(PathArg),
    /// Check an absorption pattern on the retracts of a lattice.
    Absorption(AbsorptionArgs),
    /// Enumerate all small lattices by brute force.
    OracleEnum(SizeArg),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub slim: bool,
    #[arg(long)]
    pub semimodular: bool,
    #[arg(long)]
    pub c1: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub max_size: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub max_size: usize,
    /// Run both parts of the structure theorem and the diagram validator.
    #[arg(long)]
    pub theorem: bool,
    /// Built-in pattern name or pattern file.
    #[arg(long)]
    pub pattern: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Tikz,
    Json,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Lattice file; omit when rendering `--pattern`.
    pub path: Option<PathBuf>,
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PathArg {
    pub path: PathBuf,
}

#[derive(Args, Debug)]
pub struct AbsorptionArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub pattern: String,
    /// Check only this sublattice (comma-separated identifiers).
    #[arg(long, value_delimiter = ',')]
    pub set: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct SizeArg {
    #[arg(long)]
    pub max_size: usize,
}

/// A failure carrying its exit code.
pub struct Fail(pub i32, pub String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Schema(_) => EXIT_ENV,
            _ => EXIT_FAIL,
        };
        Fail(code, e.to_string())
    }
}

fn env_fail(what: &Path, e: impl std::fmt::Display) -> Fail {
    Fail(EXIT_ENV, format!("{}: {e}", what.display()))
}

type Out<'a> = &'a mut dyn Write;

fn line(out: Out, v: &Value) -> Result<(), Fail> {
    writeln!(out, "{v}").map_err(|e| Fail(EXIT_ENV, e.to_string()))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ENV } else { EXIT_OK };
        }
    };
    let jobs = cli.jobs;
    let result = par::with_jobs(jobs, || {
        let mut buf = Vec::new();
        let r = dispatch(cli.command, &mut buf);
        (r, buf)
    });
    let (r, buf) = result;
    let _ = out.write_all(&buf);
    match r {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: Out) -> Result<i32, Fail> {
    match cmd {
        Command::Check(a) => cmd_check(&a, out),
        Command::Gen(a) => cmd_gen(a.max_size, &a.out, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Render(a) => cmd_render(&a, out),
        Command::Retracts(a) => cmd_retracts(&a.path, out),
        Command::Absorption(a) => cmd_absorption(&a, out),
        Command::OracleEnum(a) => cmd_oracle_enum(a.max_size, out),
    }
}

fn read_lattice(path: &Path) -> Result<(FiniteLattice, Option<DiagramLayout>), Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| env_fail(path, e))?;
    let j: LatticeJson = serde_json::from_str(&text).map_err(|e| env_fail(path, e))?;
    j.parts().map_err(|e| env_fail(path, e))
}

fn ids(l: &FiniteLattice, v: &[Elem]) -> Vec<String> {
    let mut out: Vec<String> = v.iter().map(|&x| l.id(x).to_string()).collect();
    out.sort();
    out
}

pub fn cmd_check(a: &CheckArgs, out: Out) -> Result<i32, Fail> {
    let (l, layout) = read_lattice(&a.path)?;
    let all = !(a.slim || a.semimodular || a.c1);
    let mut report = serde_json::Map::new();
    report.insert("path".into(), json!(a.path.display().to_string()));
    report.insert("elements".into(), json!(l.len()));
    let mut ok = true;
    if all || a.slim {
        let v = l.is_slim();
        ok &= v;
        report.insert("slim".into(), json!(v));
    }
    if all || a.semimodular {
        let v = l.is_semimodular();
        ok &= v;
        report.insert("semimodular".into(), json!(v));
    }
    if all || a.c1 {
        let layout = match layout {
            Some(lay) => Ok(lay),
            None => default_layout(&l),
        };
        match layout {
            Ok(lay) => {
                let r = validate_c1(&l, &lay);
                ok &= r.passed();
                report.insert("c1".into(), json!(r.passed()));
                if !r.passed() {
                    let v: Vec<String> = r.violations.iter().map(|v| v.describe(&l)).collect();
                    report.insert("violations".into(), json!(v));
                }
            }
            Err(e) => {
                ok = false;
                report.insert("c1".into(), json!(false));
                report.insert("violations".into(), json!([e.to_string()]));
            }
        }
    }
    line(out, &Value::Object(report))?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

/// The file written for one generated lattice.
pub fn generated_json(g: &GeneratedSsl) -> String {
    let mut j = LatticeJson::new(&g.lattice, Some(&g.layout));
    j.recipe = g.recipe.clone();
    serde_json::to_string(&j).expect("serialisable") + "\n"
}

pub fn cmd_gen(max_size: usize, dir: &Path, out: Out) -> Result<i32, Fail> {
    std::fs::create_dir_all(dir).map_err(|e| env_fail(dir, e))?;
    for g in generate_ssl(max_size) {
        let name = format!("{}.json", g.form.hex());
        let path = dir.join(&name);
        std::fs::write(&path, generated_json(&g)).map_err(|e| env_fail(&path, e))?;
        line(out, &json!({"file": name, "elements": g.lattice.len()}))?;
    }
    Ok(EXIT_OK)
}

fn theorem_record(g: &GeneratedSsl) -> Value {
    let l = &g.lattice;
    let c1 = validate_c1(l, &g.layout);
    let part_i = theorem_part_i_check(l).map(|r| r.passed()).unwrap_or(false);
    let part_ii =
        if c1.passed() { theorem_part_ii_check(l, &g.layout).map(|r| r.passed()).unwrap_or(false) } else { false };
    json!({
        "digest": g.form.hex(),
        "elements": l.len(),
        "c1": c1.passed(),
        "part_i": part_i,
        "part_ii": part_ii,
        "pass": c1.passed() && part_i && part_ii,
    })
}

fn pattern_record(l: &FiniteLattice, p: &AbsorptionPattern, r: &RetractsReport) -> Vec<Value> {
    r.failures
        .iter()
        .map(|f| {
            json!({
                "retract": ids(l, &f.retract),
                "witness": f.witness.to_json(p, l),
            })
        })
        .collect()
}

pub fn cmd_verify(a: &VerifyArgs, out: Out) -> Result<i32, Fail> {
    let pattern = match &a.pattern {
        Some(name) => Some(load_pattern(name)?),
        None => None,
    };
    let theorem = a.theorem || pattern.is_none();
    let corpus = generate_ssl(a.max_size);
    let mut ok = true;
    if theorem {
        for rec in par::map(&corpus, theorem_record) {
            ok &= rec["pass"] == json!(true);
            line(out, &rec)?;
        }
    }
    if let Some(p) = &pattern {
        let reports = par::map(&corpus, |g| check_retracts_property(&g.lattice, p));
        for (g, r) in corpus.iter().zip(reports) {
            let r = r?;
            ok &= r.passed();
            line(
                out,
                &json!({
                    "digest": g.form.hex(),
                    "elements": g.lattice.len(),
                    "pattern": p.name,
                    "retracts": r.retracts_checked,
                    "pass": r.passed(),
                    "failures": pattern_record(&g.lattice, p, &r),
                }),
            )?;
        }
        for c in builtin_counterexamples().into_iter().filter(|c| c.pattern == p.name) {
            let r = check_retracts_property(&c.lattice, p)?;
            ok &= r.passed();
            line(
                out,
                &json!({
                    "fixture": c.name,
                    "elements": c.lattice.len(),
                    "pattern": p.name,
                    "retracts": r.retracts_checked,
                    "pass": r.passed(),
                    "failures": pattern_record(&c.lattice, p, &r),
                }),
            )?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_render(a: &RenderArgs, out: Out) -> Result<i32, Fail> {
    let (l, layout, marks) = match (&a.path, &a.pattern) {
        (Some(path), None) => {
            let (l, layout) = read_lattice(path)?;
            (l, layout, None)
        }
        (None, Some(name)) => {
            let p = load_pattern(name).map_err(|e| Fail(EXIT_ENV, e.to_string()))?;
            let marks = Marks { black: p.black.clone(), stars: p.stars.clone() };
            (p.k, None, Some(marks))
        }
        _ => return Err(Fail(EXIT_ENV, "give either a lattice file or --pattern".into())),
    };
    let layout = match layout {
        Some(lay) => lay,
        None => default_layout(&l)?,
    };
    let text = match a.format {
        Format::Svg => emit_svg(&l, &layout, marks.as_ref())?,
        Format::Tikz => emit_tikz(&l, &layout, marks.as_ref())?,
        Format::Json => {
            crate::diagram::require_valid(&l, &layout)?;
            serde_json::to_string(&LatticeJson::new(&l, Some(&layout))).expect("serialisable") + "\n"
        }
    };
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(|e| env_fail(path, e))?,
        None => out.write_all(text.as_bytes()).map_err(|e| Fail(EXIT_ENV, e.to_string()))?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_retracts(path: &Path, out: Out) -> Result<i32, Fail> {
    let (l, _) = read_lattice(path)?;
    let name = path.display().to_string();
    for r in enumerate_retractions(&l)? {
        let map: &LatticeMap = &r.map;
        let mut v = map.to_json(&name, &name);
        v["image"] = json!(ids(&l, &r.image));
        line(out, &v)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_absorption(a: &AbsorptionArgs, out: Out) -> Result<i32, Fail> {
    let (l, _) = read_lattice(&a.path)?;
    let p = load_pattern(&a.pattern).map_err(|e| Fail(EXIT_ENV, e.to_string()))?;
    if let Some(set) = &a.set {
        let s = l.elems(set).map_err(|e| Fail(EXIT_ENV, e.to_string()))?;
        let v = satisfies_absorption(&l, &s, &p)?;
        let witness = v.witness.as_ref().map(|w| w.to_json(&p, &l));
        line(out, &json!({"pattern": p.name, "set": ids(&l, &s), "holds": v.holds, "witness": witness}))?;
        return Ok(if v.holds { EXIT_OK } else { EXIT_FAIL });
    }
    let r = check_retracts_property(&l, &p)?;
    line(
        out,
        &json!({
            "pattern": p.name,
            "retracts": r.retracts_checked,
            "pass": r.passed(),
            "failures": pattern_record(&l, &p, &r),
        }),
    )?;
    Ok(if r.passed() { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_oracle_enum(max_size: usize, out: Out) -> Result<i32, Fail> {
    let all = exhaustive_small_lattices(max_size)?;
    let mut counts = vec![0usize; max_size + 1];
    for l in &all {
        counts[l.len()] += 1;
        let slim = l.is_slim();
        line(
            out,
            &json!({
                "digest": l.canonical_form().hex(),
                "elements": l.len(),
                "slim": slim,
                "semimodular": l.is_semimodular(),
            }),
        )?;
    }
    line(out, &json!({"counts": &counts[1..]}))?;
    Ok(EXIT_OK)
}
