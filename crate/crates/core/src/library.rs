//! Parsed libraries and their elaboration into named theories and views.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::checker::{check_formula, check_signature, check_view};
use crate::colimit::{pushout, BlendResult, BlendSpan};
use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::morphism::SignatureMorphism;
use crate::theory::Theory;

/// Symbol pairs of a view as written, with infix and prefix markers removed.
/// The namespace of each pair is only known once the source is resolved.
pub type SymbolMap = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: SymbolMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclKind {
    Spec {
        theory: Theory,
        /// One span per axiom, in order.
        axiom_spans: Vec<SourceSpan>,
    },
    View(ViewDecl),
    /// `spec name = combine left, right`
    Combine { name: String, left: String, right: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: SourceSpan,
}

impl Decl {
    pub fn name(&self) -> &str {
        match &self.kind {
            DeclKind::Spec { theory, .. } => &theory.name,
            DeclKind::View(v) => &v.name,
            DeclKind::Combine { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    pub file: Arc<str>,
    pub decls: Vec<Decl>,
}

impl Library {
    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().rev().find(|d| d.name() == name)
    }

    /// The theory of a spec declared in this library with a body.
    pub fn spec(&self, name: &str) -> Option<&Theory> {
        match &self.decl(name)?.kind {
            DeclKind::Spec { theory, .. } => Some(theory),
            _ => None,
        }
    }
}

/// A view after its symbol map has been resolved against its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct View {
    pub name: String,
    pub source: String,
    pub target: String,
    pub morphism: SignatureMorphism,
}

/// Named theories, views and blends accumulated from one or more libraries.
/// Later declarations shadow earlier ones of the same name.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    theories: BTreeMap<String, Theory>,
    views: BTreeMap<String, View>,
    blends: BTreeMap<String, BlendResult>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn theory(&self, name: &str) -> Option<&Theory> {
        self.theories.get(name)
    }

    pub fn view(&self, name: &str) -> Option<&View> {
        self.views.get(name)
    }

    /// Cocone of a `combine` declaration.
    pub fn blend(&self, name: &str) -> Option<&BlendResult> {
        self.blends.get(name)
    }

    pub fn insert_theory(&mut self, theory: Theory) {
        self.theories.insert(theory.name.clone(), theory);
    }

    pub fn theory_names(&self) -> impl Iterator<Item = &str> {
        self.theories.keys().map(String::as_str)
    }

    /// Elaborates every declaration in order and returns all diagnostics.
    /// Declarations with errors are still entered where possible.
    pub fn load(&mut self, lib: &Library) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for decl in &lib.decls {
            let at = Some(decl.span.clone());
            match &decl.kind {
                DeclKind::Spec { theory, axiom_spans } => {
                    out.extend(check_signature(&theory.signature).into_iter().map(|d| d.at(at.clone())));
                    for (i, ax) in theory.axioms.iter().enumerate() {
                        let span = axiom_spans.get(i).cloned().or_else(|| at.clone());
                        for mut d in check_formula(&theory.signature, &ax.formula) {
                            d.message = format!("axiom {}: {}", ax.label, d.message);
                            out.push(d.at(span.clone()));
                        }
                    }
                    self.insert_theory(theory.clone());
                }
                DeclKind::View(v) => match self.resolve_view(v) {
                    Ok((view, diags)) => {
                        out.extend(diags.into_iter().map(|d| d.at(at.clone())));
                        self.views.insert(view.name.clone(), view);
                    }
                    Err(d) => out.push(d.at(at)),
                },
                DeclKind::Combine { name, left, right } => {
                    if let Err(d) = self.combine(name, left, right) {
                        out.push(d.at(at));
                    }
                }
            }
        }
        out
    }

    fn lookup(&self, name: &str, what: &str) -> Result<&Theory, Diagnostic> {
        self.theories
            .get(name)
            .ok_or_else(|| Diagnostic::new(Code::P003, format!("{what} `{name}` is not declared")))
    }

    /// Sorts the pairs of `v` into namespaces. Source symbols the map leaves
    /// out go to the target symbol of the same name, if there is one.
    pub fn resolve_view(&self, v: &ViewDecl) -> Result<(View, Vec<Diagnostic>), Diagnostic> {
        let src = self.lookup(&v.source, "spec")?;
        let tgt = self.lookup(&v.target, "spec")?;
        let (s, t) = (&src.signature, &tgt.signature);
        let mut m = SignatureMorphism::new();
        let mut diags = Vec::new();
        for (a, b) in &v.map {
            if s.sorts.contains(a) {
                m.sorts.insert(a.clone(), b.clone());
            } else if s.ops.contains_key(a) {
                m.ops.insert(a.clone(), b.clone());
            } else if s.preds.contains_key(a) {
                m.preds.insert(a.clone(), b.clone());
            } else {
                diags.push(Diagnostic::new(
                    Code::V002,
                    format!("view `{}` maps `{a}`, which `{}` does not declare", v.name, v.source),
                ));
            }
        }
        for x in &s.sorts {
            if !m.sorts.contains_key(x) && t.sorts.contains(x) {
                m.sorts.insert(x.clone(), x.clone());
            }
        }
        for x in s.ops.keys() {
            if !m.ops.contains_key(x) && t.ops.contains_key(x) {
                m.ops.insert(x.clone(), x.clone());
            }
        }
        for x in s.preds.keys() {
            if !m.preds.contains_key(x) && t.preds.contains_key(x) {
                m.preds.insert(x.clone(), x.clone());
            }
        }
        diags.extend(check_view(&m, src, tgt).into_iter().map(|mut d| {
            d.message = format!("view `{}`: {}", v.name, d.message);
            d
        }));
        let view = View {
            name: v.name.clone(),
            source: v.source.clone(),
            target: v.target.clone(),
            morphism: m,
        };
        Ok((view, diags))
    }

    fn combine(&mut self, name: &str, left: &str, right: &str) -> Result<(), Diagnostic> {
        let get = |v: &str| {
            self.views
                .get(v)
                .ok_or_else(|| Diagnostic::new(Code::P003, format!("view `{v}` is not declared")))
        };
        let (l, r) = (get(left)?, get(right)?);
        if l.source != r.source {
            return Err(Diagnostic::new(
                Code::C001,
                format!(
                    "`{left}` starts at `{}` but `{right}` starts at `{}`",
                    l.source, r.source
                ),
            ));
        }
        let span = BlendSpan {
            generic: self.lookup(&l.source, "spec")?,
            left: (&l.morphism, self.lookup(&l.target, "spec")?),
            right: (&r.morphism, self.lookup(&r.target, "spec")?),
        };
        let blend = pushout(&span, name)
            .map_err(|e| Diagnostic::new(Code::C002, format!("cannot blend `{name}`: {e}")))?;
        self.insert_theory(blend.theory.clone());
        self.blends.insert(String::from(name), blend);
        Ok(())
    }
}
