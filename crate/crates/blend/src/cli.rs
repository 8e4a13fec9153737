//! Command-line front end. Exit status: 0 success, 1 check or verification
//! failure, 2 usage, I/O or parse error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use blend_core::{
    explain_mismatch, find_isomorphism, parse_library_in, pretty_print_with, DeclKind, Diagnostic, Environment,
    PrintStyle, SignatureMorphism, Theory,
};
use clap::{Parser, Subcommand};

use crate::corpus::Corpus;
use crate::dot::derivation_graph;
use crate::pipeline::run_pipeline;

#[derive(Debug, Parser)]
#[command(name = "conceptblend", version, about = "Check, blend and compare mini-CASL theories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and check libraries; later files may refer to earlier ones.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compute a `combine` declaration and write the blend.
    Blend {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Name of the combination.
        #[arg(long)]
        name: String,
        #[arg(short, long)]
        output: PathBuf,
        /// Print with ASCII connectives.
        #[arg(long)]
        ascii: bool,
    },
    /// Run the corpus derivation and verify each step.
    Pipeline {
        /// Directory for the derived theories.
        #[arg(short, long)]
        output: PathBuf,
        /// Read the corpus from this directory instead of the built-in copy.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
    /// Compare two theories up to renaming. Each argument is a file holding
    /// one theory, or `file#Name`.
    Diff { a: String, b: String },
    /// Write the derivation graph in DOT format.
    Graph {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

/// Parses `std::env::args` and runs the command.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Check { files } => check(&files),
        Command::Blend {
            files,
            name,
            output,
            ascii,
        } => blend(&files, &name, &output, PrintStyle { ascii }),
        Command::Pipeline { output, corpus, ascii } => pipeline(&output, corpus.as_deref(), PrintStyle { ascii }),
        Command::Diff { a, b } => diff(&a, &b),
        Command::Graph { output, corpus } => graph(&output, corpus.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

struct Loaded {
    env: Environment,
    decls: Vec<(String, bool)>,
    diagnostics: Vec<Diagnostic>,
}

/// Parses the files in order into one environment. `decls` lists every
/// declared name and whether it denotes a theory.
fn load_files(files: &[PathBuf]) -> Result<Loaded> {
    let mut env = Environment::new();
    let mut known = BTreeSet::new();
    let mut decls = Vec::new();
    let mut diagnostics = Vec::new();
    for path in files {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let lib = parse_library_in(&path.display().to_string(), &text, &known).map_err(|e| anyhow!("{}", e.0))?;
        for d in &lib.decls {
            known.insert(d.name().to_string());
            decls.push((d.name().to_string(), !matches!(d.kind, DeclKind::View(_))));
        }
        diagnostics.extend(env.load(&lib));
    }
    Ok(Loaded {
        env,
        decls,
        diagnostics,
    })
}

fn report(diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{d}");
    }
}

fn check(files: &[PathBuf]) -> Result<i32> {
    let l = load_files(files)?;
    report(&l.diagnostics);
    if l.diagnostics.is_empty() {
        println!("ok: {} declarations", l.decls.len());
        Ok(0)
    } else {
        println!("{} problem(s)", l.diagnostics.len());
        Ok(1)
    }
}

fn blend(files: &[PathBuf], name: &str, output: &Path, style: PrintStyle) -> Result<i32> {
    let l = load_files(files)?;
    if !l.decls.iter().any(|(n, _)| n == name) {
        bail!("no declaration named `{name}`");
    }
    report(&l.diagnostics);
    let Some(result) = l.env.blend(name) else {
        if l.diagnostics.is_empty() {
            bail!("`{name}` is not a combination");
        }
        return Ok(1);
    };
    if !l.diagnostics.is_empty() {
        return Ok(1);
    }
    fs::write(output, pretty_print_with(&result.theory, style))
        .with_context(|| format!("writing {}", output.display()))?;
    println!("wrote {}", output.display());
    Ok(0)
}

fn pipeline(output: &Path, corpus: Option<&Path>, style: PrintStyle) -> Result<i32> {
    let corpus = match corpus {
        Some(dir) => Corpus::from_dir(dir)?,
        None => Corpus::embedded(),
    };
    let loaded = corpus.load()?;
    if !loaded.diagnostics.is_empty() {
        report(&loaded.diagnostics);
        println!("the corpus does not check");
        return Ok(1);
    }
    let report = run_pipeline(&loaded);
    fs::create_dir_all(output).with_context(|| format!("creating {}", output.display()))?;
    for step in &report.steps {
        if let Some(t) = &step.theory {
            let path = output.join(format!("{}.casl", step.name));
            fs::write(&path, pretty_print_with(t, style)).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    print!("{}", report.render());
    Ok(if report.all_ok() { 0 } else { 1 })
}

/// Splits `file#Name` unless the whole argument names an existing file.
fn theory_arg(arg: &str) -> Result<(Theory, Vec<Diagnostic>)> {
    let (path, wanted) = match arg.rsplit_once('#') {
        Some((p, n)) if !Path::new(arg).exists() => (p, Some(n)),
        _ => (arg, None),
    };
    let l = load_files(&[PathBuf::from(path)])?;
    let name = match wanted {
        Some(n) => n.to_string(),
        None => {
            let theories: Vec<&String> = l.decls.iter().filter(|(_, t)| *t).map(|(n, _)| n).collect();
            match theories[..] {
                [one] => one.clone(),
                _ => bail!(
                    "{path} declares {} theories; pick one with {path}#Name",
                    theories.len()
                ),
            }
        }
    };
    let t = l
        .env
        .theory(&name)
        .cloned()
        .ok_or_else(|| anyhow!("{path} has no theory named `{name}`"))?;
    Ok((t, l.diagnostics))
}

fn diff(a: &str, b: &str) -> Result<i32> {
    let (ta, da) = theory_arg(a)?;
    let (tb, db) = theory_arg(b)?;
    if !da.is_empty() || !db.is_empty() {
        report(&da);
        report(&db);
        return Ok(1);
    }
    match find_isomorphism(&ta, &tb) {
        Some(m) => {
            println!("isomorphic");
            for line in witness(&m) {
                println!("  {line}");
            }
            Ok(0)
        }
        None => {
            println!("not isomorphic: {}", explain_mismatch(&ta, &tb));
            Ok(1)
        }
    }
}

/// The renamed symbols of an isomorphism.
fn witness(m: &SignatureMorphism) -> Vec<String> {
    let mut out = Vec::new();
    for (kind, map) in [("sort", &m.sorts), ("op", &m.ops), ("pred", &m.preds)] {
        for (a, b) in map {
            if a != b {
                out.push(format!("{kind} {a} ↦ {b}"));
            }
        }
    }
    out
}

fn graph(output: &Path, corpus: Option<&Path>) -> Result<i32> {
    let corpus = match corpus {
        Some(dir) => Corpus::from_dir(dir)?,
        None => Corpus::embedded(),
    };
    let g = derivation_graph(&corpus.load()?)?;
    fs::write(output, g.to_dot()).with_context(|| format!("writing {}", output.display()))?;
    println!("wrote {}", output.display());
    Ok(0)
}
