//! The bundled corpus: input libraries, expected results and the
//! discrepancy ledger.
//!
//! Input files are chained: each may refer to any name declared by the
//! files before it. Goldens are self-contained.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use blend_core::{parse_library_in, DeclKind, Diagnostic, Environment, Library, Theory, ViewDecl};

use crate::ledger::{parse_ledger, verify_entry, DiscrepancyEntry};
use crate::pipeline::{default_pipeline, PipelineStep};

/// Input libraries in load order.
pub const INPUT_FILES: [&str; 3] = ["cont_bin_func.casl", "quasi_top_group.casl", "top_group.casl"];
pub const GOLDEN_FILES: [&str; 2] = ["golden/cont_bin_func.casl", "golden/top_group.casl"];
pub const LEDGER_FILE: &str = "ledger.txt";

const EMBEDDED: [(&str, &str); 6] = [
    (INPUT_FILES[0], include_str!("../../../corpus/cont_bin_func.casl")),
    (INPUT_FILES[1], include_str!("../../../corpus/quasi_top_group.casl")),
    (INPUT_FILES[2], include_str!("../../../corpus/top_group.casl")),
    (GOLDEN_FILES[0], include_str!("../../../corpus/golden/cont_bin_func.casl")),
    (GOLDEN_FILES[1], include_str!("../../../corpus/golden/top_group.casl")),
    (LEDGER_FILE, include_str!("../../../corpus/ledger.txt")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFile {
    /// Path relative to the corpus root.
    pub path: String,
    pub text: String,
}

/// A spec inside a corpus file, written `file#Spec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenRef {
    pub file: String,
    pub spec: String,
}

impl GoldenRef {
    pub fn new(file: &str, spec: &str) -> Self {
        GoldenRef {
            file: file.into(),
            spec: spec.into(),
        }
    }
}

impl std::fmt::Display for GoldenRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.file, self.spec)
    }
}

/// Raw corpus text.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub files: Vec<CorpusFile>,
}

impl Corpus {
    /// The copy compiled into the binary.
    pub fn embedded() -> Self {
        Corpus {
            files: EMBEDDED
                .iter()
                .map(|(path, text)| CorpusFile {
                    path: (*path).into(),
                    text: (*text).into(),
                })
                .collect(),
        }
    }

    /// Reads the same layout from a directory.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let files = EMBEDDED
            .iter()
            .map(|(path, _)| {
                let full = dir.join(path);
                let text = fs::read_to_string(&full).with_context(|| format!("reading {}", full.display()))?;
                Ok(CorpusFile {
                    path: (*path).into(),
                    text,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Corpus { files })
    }

    pub fn file(&self, path: &str) -> Option<&CorpusFile> {
        self.files.iter().find(|f| f.path == path)
    }

    pub fn file_mut(&mut self, path: &str) -> Option<&mut CorpusFile> {
        self.files.iter_mut().find(|f| f.path == path)
    }

    /// Writes every file under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        for f in &self.files {
            let full = dir.join(&f.path);
            if let Some(parent) = full.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(&full, &f.text).with_context(|| format!("writing {}", full.display()))?;
        }
        Ok(())
    }

    /// Parses and elaborates everything. Parse errors are fatal; check
    /// diagnostics are collected.
    pub fn load(&self) -> Result<LoadedCorpus> {
        let mut env = Environment::new();
        let mut known = BTreeSet::new();
        let mut libraries = Vec::new();
        let mut diagnostics = Vec::new();
        for path in INPUT_FILES {
            let file = self.file(path).ok_or_else(|| anyhow!("missing corpus file {path}"))?;
            let lib = parse_library_in(path, &file.text, &known).map_err(|e| anyhow!("{}", e.0))?;
            known.extend(lib.decls.iter().map(|d| d.name().to_string()));
            diagnostics.extend(env.load(&lib));
            libraries.push(lib);
        }
        let mut goldens = BTreeMap::new();
        for path in GOLDEN_FILES {
            let file = self.file(path).ok_or_else(|| anyhow!("missing corpus file {path}"))?;
            let lib = parse_library_in(path, &file.text, &BTreeSet::new()).map_err(|e| anyhow!("{}", e.0))?;
            diagnostics.extend(Environment::new().load(&lib));
            goldens.insert(path.to_string(), lib);
        }
        let ledger_text = &self.file(LEDGER_FILE).ok_or_else(|| anyhow!("missing {LEDGER_FILE}"))?.text;
        Ok(LoadedCorpus {
            libraries,
            env,
            goldens,
            diagnostics,
            ledger: parse_ledger(ledger_text)?,
            pipeline: default_pipeline(),
        })
    }
}

/// Position of a declaration in the input chain: file index, decl index.
pub type DeclPos = (usize, usize);

pub struct LoadedCorpus {
    /// Input libraries in load order.
    pub libraries: Vec<Library>,
    /// Everything in the inputs, later declarations shadowing earlier ones.
    pub env: Environment,
    pub goldens: BTreeMap<String, Library>,
    pub diagnostics: Vec<Diagnostic>,
    pub ledger: Vec<DiscrepancyEntry>,
    pub pipeline: Vec<PipelineStep>,
}

impl LoadedCorpus {
    /// Theory named by a golden reference, in a golden or an input file.
    pub fn golden(&self, r: &GoldenRef) -> Option<&Theory> {
        if let Some(lib) = self.goldens.get(&r.file) {
            return lib.spec(&r.spec);
        }
        let i = INPUT_FILES.iter().position(|f| *f == r.file)?;
        self.libraries.get(i)?.spec(&r.spec)
    }

    /// The last declaration of `name` strictly before `pos`.
    pub fn lookup(&self, name: &str, pos: DeclPos) -> Option<(DeclPos, &DeclKind)> {
        for (i, lib) in self.libraries.iter().enumerate().take(pos.0 + 1).rev() {
            let end = if i == pos.0 { pos.1 } else { lib.decls.len() };
            for (j, d) in lib.decls[..end].iter().enumerate().rev() {
                if d.name() == name {
                    return Some(((i, j), &d.kind));
                }
            }
        }
        None
    }

    /// The last declaration of `name` anywhere in the chain.
    pub fn find(&self, name: &str) -> Option<(DeclPos, &DeclKind)> {
        self.lookup(name, (self.libraries.len() - 1, self.libraries.last()?.decls.len()))
    }

    /// Theory visible under `name` before `pos`: a spec, or the computed
    /// result of a combination.
    pub fn theory_before(&self, name: &str, pos: DeclPos) -> Option<Theory> {
        match self.lookup(name, pos)? {
            (_, DeclKind::Spec { theory, .. }) => Some(theory.clone()),
            (_, DeclKind::Combine { .. }) => self.env.blend(name).map(|b| b.theory.clone()),
            _ => None,
        }
    }

    pub fn view_before(&self, name: &str, pos: DeclPos) -> Option<(DeclPos, &ViewDecl)> {
        match self.lookup(name, pos)? {
            (p, DeclKind::View(v)) => Some((p, v)),
            _ => None,
        }
    }

    /// Every theory in the corpus, goldens keyed `file#Spec`.
    pub fn theories(&self) -> Vec<(String, &Theory)> {
        let mut out = Vec::new();
        for lib in self.libraries.iter().chain(self.goldens.values()) {
            for d in &lib.decls {
                if let DeclKind::Spec { theory, .. } = &d.kind {
                    out.push((format!("{}#{}", lib.file, theory.name), theory));
                }
            }
        }
        out
    }

    /// Ledger rows that do not match the files they name.
    pub fn ledger_failures(&self, corpus: &Corpus) -> Vec<String> {
        let mut out = Vec::new();
        for entry in &self.ledger {
            match corpus.file(entry.file()) {
                Some(f) => {
                    if let Err(e) = verify_entry(entry, &f.text) {
                        out.push(e);
                    }
                }
                None => out.push(format!("{}: no such corpus file", entry.location)),
            }
        }
        out
    }
}

/// Loads the embedded corpus.
pub fn load_corpus() -> Result<LoadedCorpus> {
    Corpus::embedded().load()
}
