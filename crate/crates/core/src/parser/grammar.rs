use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::lexer::{Kw, Tok, Token};
use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::formula::{free_vars, Formula, Quantifier, Term, Var};
use crate::library::{Decl, DeclKind, Library, ViewDecl};
use crate::signature::{Fixity, OpProfile, Signature};
use crate::theory::{Axiom, Theory};

type PResult<T> = Result<T, Diagnostic>;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    file: Arc<str>,
    /// Names declared before this library, plus those declared so far in it.
    known: BTreeSet<String>,
    sig: Signature,
    env: Vec<Var>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Sorts,
    Ops,
    Preds,
}

struct PendingAxiom {
    label: Option<(String, SourceSpan)>,
    formula: Formula,
    doc: Option<String>,
    span: SourceSpan,
}

impl Parser {
    pub(crate) fn new(file: Arc<str>, toks: Vec<Token>, externs: &BTreeSet<String>) -> Self {
        Parser {
            toks,
            pos: 0,
            file,
            known: externs.clone(),
            sig: Signature::new(),
            env: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, code: Code, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::new(code, msg).at(Some(self.span())))
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        self.err(
            Code::P002,
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(what),
        }
    }

    fn skip_docs(&mut self) {
        while matches!(self.peek(), Tok::Doc(_)) {
            self.bump();
        }
    }

    pub(crate) fn library(mut self) -> PResult<Library> {
        let mut decls = Vec::new();
        loop {
            self.skip_docs();
            match self.peek() {
                Tok::Eof => break,
                Tok::Kw(Kw::Spec) => decls.push(self.spec()?),
                Tok::Kw(Kw::View) => decls.push(self.view()?),
                _ => return self.unexpected("`spec` or `view`"),
            }
        }
        Ok(Library {
            file: self.file,
            decls,
        })
    }

    fn declare(&mut self, name: &str) {
        self.known.insert(name.to_string());
    }

    fn reference(&self, name: &str, what: &str, span: SourceSpan) -> PResult<()> {
        if self.known.contains(name) {
            Ok(())
        } else {
            Err(Diagnostic::new(Code::P003, format!("{what} `{name}` is not declared")).at(Some(span)))
        }
    }

    fn spec(&mut self) -> PResult<Decl> {
        let start = self.span();
        self.bump();
        let name = self.ident("spec name")?;
        self.expect(Tok::Eq, "`=`")?;
        self.skip_docs();
        if self.eat(&Tok::Kw(Kw::Combine)) {
            let ls = self.span();
            let left = self.ident("view name")?;
            self.reference(&left, "view", ls)?;
            self.expect(Tok::Comma, "`,`")?;
            let rs = self.span();
            let right = self.ident("view name")?;
            self.reference(&right, "view", rs)?;
            self.declare(&name);
            return Ok(Decl {
                kind: DeclKind::Combine { name, left, right },
                span: start.to(&self.prev_span()),
            });
        }
        self.sig = Signature::new();
        let (axioms, axiom_spans) = self.spec_body()?;
        self.expect(Tok::Kw(Kw::End), "`end`")?;
        self.declare(&name);
        let mut theory = Theory::new(name, core::mem::take(&mut self.sig));
        theory.axioms = axioms;
        Ok(Decl {
            kind: DeclKind::Spec { theory, axiom_spans },
            span: start.to(&self.prev_span()),
        })
    }

    fn spec_body(&mut self) -> PResult<(Vec<Axiom>, Vec<SourceSpan>)> {
        let mut section = Section::None;
        let mut doc: Option<String> = None;
        let mut pending: Vec<PendingAxiom> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Kw(Kw::End) | Tok::Eof => break,
                Tok::Kw(Kw::Sorts) => {
                    self.bump();
                    section = Section::Sorts;
                    doc = None;
                }
                Tok::Kw(Kw::Ops) => {
                    self.bump();
                    section = Section::Ops;
                    doc = None;
                }
                Tok::Kw(Kw::Preds) => {
                    self.bump();
                    section = Section::Preds;
                    doc = None;
                }
                Tok::Doc(text) => {
                    self.bump();
                    doc = Some(match doc.take() {
                        Some(d) => format!("{d}\n{text}"),
                        None => text,
                    });
                }
                Tok::Forall | Tok::Exists | Tok::Dot => {
                    section = Section::None;
                    self.axiom_group(doc.take(), &mut pending)?;
                }
                Tok::Ident(_) | Tok::Sym(_) if section != Section::None => {
                    doc = None;
                    match section {
                        Section::Sorts => self.sort_item()?,
                        Section::Ops => self.op_item()?,
                        _ => self.pred_item()?,
                    }
                    self.eat(&Tok::Semi);
                }
                _ => return self.unexpected("a declaration, an axiom or `end`"),
            }
        }
        assign_labels(pending)
    }

    fn sort_item(&mut self) -> PResult<()> {
        let mut names = alloc::vec![self.ident("sort name")?];
        while self.eat(&Tok::Comma) {
            names.push(self.ident("sort name")?);
        }
        if self.eat(&Tok::Lt) {
            let parent = self.ident("sort name")?;
            self.sig.add_sort(parent.clone());
            for n in &names {
                self.sig.add_subsort(n.clone(), parent.clone());
            }
        }
        for n in names {
            self.sig.add_sort(n);
        }
        Ok(())
    }

    /// A declared symbol name: `f`, `++`, `__w__`, `__ w __` or `w__`.
    fn symbol_name(&mut self) -> PResult<(String, Fixity, SourceSpan)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Sym(s) => {
                self.bump();
                Ok((s, Fixity::Ordinary, span))
            }
            Tok::Ident(s) if s == "__" => {
                self.bump();
                let inner = match self.peek().clone() {
                    Tok::Ident(w) if !w.contains("__") => w,
                    Tok::Sym(w) => w,
                    _ => return Err(unsupported_mixfix(span)),
                };
                self.bump();
                match self.peek() {
                    Tok::Ident(s) if s == "__" => {
                        self.bump();
                        Ok((inner, Fixity::Infix, span.to(&self.prev_span())))
                    }
                    _ => Err(unsupported_mixfix(span.to(&self.prev_span()))),
                }
            }
            Tok::Ident(s) => {
                self.bump();
                let (name, fixity) = split_pattern(&s).ok_or_else(|| unsupported_mixfix(span.clone()))?;
                Ok((name, fixity, span))
            }
            _ => self.unexpected("symbol name"),
        }
    }

    fn symbol_names(&mut self) -> PResult<Vec<(String, Fixity, SourceSpan)>> {
        let mut names = alloc::vec![self.symbol_name()?];
        while self.eat(&Tok::Comma) {
            names.push(self.symbol_name()?);
        }
        self.expect(Tok::Colon, "`:`")?;
        Ok(names)
    }

    fn sort_list(&mut self) -> PResult<Vec<String>> {
        let mut sorts = alloc::vec![self.ident("sort name")?];
        while self.eat(&Tok::Times) {
            sorts.push(self.ident("sort name")?);
        }
        Ok(sorts)
    }

    fn check_fixity(&self, name: &str, fixity: Fixity, arity: usize, span: &SourceSpan) -> PResult<()> {
        let ok = match fixity {
            Fixity::Ordinary => true,
            Fixity::Infix => arity == 2,
            Fixity::Prefix => arity == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Diagnostic::new(
                Code::P004,
                format!("`{name}` is declared {fixity:?} but has {arity} argument(s)"),
            )
            .at(Some(span.clone())))
        }
    }

    fn op_item(&mut self) -> PResult<()> {
        let names = self.symbol_names()?;
        let first = self.sort_list()?;
        let profile = if self.eat(&Tok::Arrow) {
            OpProfile::new(first, self.ident("result sort")?)
        } else if first.len() == 1 {
            OpProfile::constant(first[0].clone())
        } else {
            return self.unexpected("`→`");
        };
        for (name, fixity, span) in names {
            self.check_fixity(&name, fixity, profile.arity(), &span)?;
            if let Some(old) = self.sig.ops.get(&name) {
                if *old != profile {
                    return Err(Diagnostic::new(
                        Code::P005,
                        format!("operation `{name}` is declared again with a different profile"),
                    )
                    .at(Some(span)));
                }
            }
            self.sig.add_op(name.clone(), profile.clone());
            self.sig.set_fixity(name, fixity);
        }
        Ok(())
    }

    fn pred_item(&mut self) -> PResult<()> {
        let names = self.symbol_names()?;
        let args = self.sort_list()?;
        for (name, fixity, span) in names {
            self.check_fixity(&name, fixity, args.len(), &span)?;
            if let Some(old) = self.sig.preds.get(&name) {
                if *old != args {
                    return Err(Diagnostic::new(
                        Code::P005,
                        format!("predicate `{name}` is declared again with a different profile"),
                    )
                    .at(Some(span)));
                }
            }
            self.sig.add_pred(name.clone(), args.clone());
            self.sig.set_fixity(name, fixity);
        }
        Ok(())
    }

    fn binders(&mut self) -> PResult<Vec<Var>> {
        let mut vars = Vec::new();
        loop {
            let mut names = alloc::vec![self.ident("variable name")?];
            while self.eat(&Tok::Comma) {
                names.push(self.ident("variable name")?);
            }
            self.expect(Tok::Colon, "`:`")?;
            let sort = self.ident("sort name")?;
            vars.extend(names.into_iter().map(|n| Var::new(n, sort.clone())));
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        Ok(vars)
    }

    fn dots(&mut self) -> PResult<()> {
        self.expect(Tok::Dot, "`.`")?;
        while self.eat(&Tok::Dot) {}
        Ok(())
    }

    fn label(&mut self) -> Option<(String, SourceSpan)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Label(l) => {
                self.bump();
                Some((l, span))
            }
            _ => None,
        }
    }

    /// `∀ binders . φ₁ . φ₂ ...` or `. φ`. Each bullet becomes one axiom.
    fn axiom_group(&mut self, mut doc: Option<String>, out: &mut Vec<PendingAxiom>) -> PResult<()> {
        let start = self.span();
        let head = match self.peek() {
            Tok::Forall | Tok::Exists => {
                let q = if self.bump() == Tok::Forall {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                Some((q, self.binders()?))
            }
            _ => None,
        };
        let mut bullets = Vec::new();
        loop {
            let bullet_start = self.span();
            self.dots()?;
            let saved = self.env.len();
            if let Some((_, vars)) = &head {
                self.env.extend(vars.iter().cloned());
            }
            let body = self.formula();
            self.env.truncate(saved);
            let body = body?;
            let span = if bullets.is_empty() { start.clone() } else { bullet_start };
            let span = span.to(&self.prev_span());
            let label = self.label();
            let closed = label.is_some();
            bullets.push((body, span, label));
            if closed || head.is_none() || *self.peek() != Tok::Dot {
                break;
            }
        }
        let several = bullets.len() > 1;
        for (body, span, label) in bullets {
            let formula = match &head {
                Some((q, vars)) => {
                    let vars: Vec<Var> = if several {
                        let used: BTreeSet<String> = free_vars(&body).into_iter().map(|v| v.name).collect();
                        vars.iter().filter(|v| used.contains(&v.name)).cloned().collect()
                    } else {
                        vars.clone()
                    };
                    if vars.is_empty() {
                        body
                    } else {
                        Formula::Quant(*q, vars, alloc::boxed::Box::new(body))
                    }
                }
                None => body,
            };
            out.push(PendingAxiom {
                label,
                formula,
                doc: doc.take(),
                span,
            });
        }
        Ok(())
    }

    // Formulas, loosest first.

    pub(crate) fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Implies => {
                self.bump();
                Ok(Formula::implies(lhs, self.formula()?))
            }
            Tok::Iff => {
                self.bump();
                Ok(Formula::iff(lhs, self.formula()?))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.negation()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.negation()?);
        }
        Ok(f)
    }

    fn negation(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.negation()?))
            }
            Tok::Forall | Tok::Exists => {
                let q = if self.bump() == Tok::Forall {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let vars = self.binders()?;
                self.dots()?;
                let saved = self.env.len();
                self.env.extend(vars.iter().cloned());
                let body = self.formula();
                self.env.truncate(saved);
                Ok(Formula::Quant(q, vars, alloc::boxed::Box::new(body?)))
            }
            _ => self.atom(),
        }
    }

    fn bound(&self, name: &str) -> Option<&Var> {
        self.env.iter().rev().find(|v| v.name == name)
    }

    fn name_token(&self) -> Option<String> {
        match self.peek() {
            Tok::Ident(s) | Tok::Sym(s) => Some(s.clone()),
            _ => None,
        }
    }

    fn is_pred(&self, name: &str) -> bool {
        self.bound(name).is_none() && self.sig.preds.contains_key(name)
    }

    /// Whether the next token would extend a term into a larger atom.
    fn continues_term(&self) -> bool {
        match self.peek() {
            Tok::Eq | Tok::In => true,
            Tok::Ident(s) | Tok::Sym(s) => {
                self.sig.fixity_of(s) == Fixity::Infix
                    && (self.sig.ops.contains_key(s) || self.sig.preds.contains_key(s))
            }
            _ => false,
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::LParen {
            let saved = (self.pos, self.env.len());
            self.bump();
            let attempt = self.formula().and_then(|f| {
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            });
            match attempt {
                Ok(f) if !self.continues_term() => return Ok(f),
                Ok(_) => {
                    self.pos = saved.0;
                    self.env.truncate(saved.1);
                }
                Err(first) => {
                    self.pos = saved.0;
                    self.env.truncate(saved.1);
                    return self.term_atom().map_err(|second| {
                        if later(&first, &second) {
                            first
                        } else {
                            second
                        }
                    });
                }
            }
        }
        self.term_atom()
    }

    fn term_atom(&mut self) -> PResult<Formula> {
        if let Some(name) = self.name_token() {
            if self.is_pred(&name) {
                match self.sig.fixity_of(&name) {
                    Fixity::Ordinary => {
                        self.bump();
                        let args = if *self.peek() == Tok::LParen {
                            self.arguments()?
                        } else {
                            Vec::new()
                        };
                        return Ok(Formula::pred(name, args));
                    }
                    Fixity::Prefix => {
                        self.bump();
                        let arg = self.prefix_term()?;
                        return Ok(Formula::pred(name, alloc::vec![arg]));
                    }
                    Fixity::Infix => {}
                }
            }
        }
        let lhs = self.term()?;
        match self.peek().clone() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::In => {
                self.bump();
                Ok(Formula::member(lhs, self.ident("sort name")?))
            }
            Tok::Ident(p) | Tok::Sym(p) if self.is_pred(&p) && self.sig.fixity_of(&p) == Fixity::Infix => {
                self.bump();
                Ok(Formula::pred(p, alloc::vec![lhs, self.term()?]))
            }
            _ => self.unexpected("`=`, `∈` or a predicate"),
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = alloc::vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    // Terms: infix operations (one left-associative level) over prefix applications.

    pub(crate) fn term(&mut self) -> PResult<Term> {
        let mut t = self.prefix_term()?;
        while let Some(op) = self.name_token() {
            if self.bound(&op).is_some()
                || self.sig.fixity_of(&op) != Fixity::Infix
                || !self.sig.ops.contains_key(&op)
            {
                break;
            }
            self.bump();
            let rhs = self.prefix_term()?;
            t = Term::app(op, alloc::vec![t, rhs]);
        }
        Ok(t)
    }

    fn prefix_term(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let t = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(t);
        }
        let Some(name) = self.name_token() else {
            return self.unexpected("a term");
        };
        if let Tok::Ident(_) = self.peek() {
            if let Some(v) = self.bound(&name) {
                if *self.peek_at(1) != Tok::LParen {
                    let v = v.clone();
                    self.bump();
                    return Ok(Term::Var(v));
                }
            }
        }
        if self.sig.preds.contains_key(&name) && !self.sig.ops.contains_key(&name) {
            return self.unexpected("a term");
        }
        if self.sig.fixity_of(&name) == Fixity::Infix && self.sig.ops.contains_key(&name) {
            return self.unexpected("a term");
        }
        self.bump();
        if *self.peek() == Tok::LParen {
            return Ok(Term::app(name, self.arguments()?));
        }
        if self.sig.fixity_of(&name) == Fixity::Prefix {
            let arg = self.prefix_term()?;
            return Ok(Term::app(name, alloc::vec![arg]));
        }
        Ok(Term::constant(name))
    }

    fn view(&mut self) -> PResult<Decl> {
        let start = self.span();
        self.bump();
        let name = self.ident("view name")?;
        self.expect(Tok::Colon, "`:`")?;
        let ss = self.span();
        let source = self.ident("spec name")?;
        self.reference(&source, "spec", ss)?;
        self.expect(Tok::Kw(Kw::To), "`to`")?;
        let ts = self.span();
        let target = self.ident("spec name")?;
        self.reference(&target, "spec", ts)?;
        self.expect(Tok::Eq, "`=`")?;
        self.skip_docs();
        let mut map = Vec::new();
        if *self.peek() != Tok::Kw(Kw::End) {
            loop {
                self.skip_docs();
                let (from, _, _) = self.symbol_name()?;
                self.expect(Tok::MapsTo, "`↦`")?;
                let (to, _, _) = self.symbol_name()?;
                map.push((from, to));
                self.skip_docs();
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Kw(Kw::End), "`end`")?;
        self.declare(&name);
        Ok(Decl {
            kind: DeclKind::View(ViewDecl {
                name,
                source,
                target,
                map,
            }),
            span: start.to(&self.prev_span()),
        })
    }
}

fn later(a: &Diagnostic, b: &Diagnostic) -> bool {
    match (&a.span, &b.span) {
        (Some(x), Some(y)) => x.start > y.start,
        _ => false,
    }
}

fn unsupported_mixfix(span: SourceSpan) -> Diagnostic {
    Diagnostic::new(
        Code::P004,
        "unsupported mixfix form; only `__ w __`, `__w__` and `w__` are allowed",
    )
    .at(Some(span))
}

/// Splits a one-token name into its symbol and fixity, or `None` for a
/// mixfix form other than infix and prefix.
pub(crate) fn split_pattern(s: &str) -> Option<(String, Fixity)> {
    if !s.contains("__") {
        return Some((s.to_string(), Fixity::Ordinary));
    }
    if let Some(inner) = s.strip_prefix("__").and_then(|r| r.strip_suffix("__")) {
        if !inner.is_empty() && !inner.contains("__") {
            return Some((inner.to_string(), Fixity::Infix));
        }
        return None;
    }
    if let Some(inner) = s.strip_suffix("__") {
        if !inner.is_empty() && !inner.contains("__") && !inner.starts_with('_') {
            return Some((inner.to_string(), Fixity::Prefix));
        }
    }
    None
}

fn assign_labels(pending: Vec<PendingAxiom>) -> PResult<(Vec<Axiom>, Vec<SourceSpan>)> {
    let mut taken = BTreeMap::new();
    for p in &pending {
        if let Some((l, span)) = &p.label {
            if taken.insert(l.clone(), ()).is_some() {
                return Err(Diagnostic::new(Code::P005, format!("axiom label `{l}` is used more than once"))
                    .at(Some(span.clone())));
            }
        }
    }
    let mut axioms = Vec::with_capacity(pending.len());
    let mut spans = Vec::with_capacity(pending.len());
    let mut suffix = 0usize;
    for (i, p) in pending.into_iter().enumerate() {
        let label = match p.label {
            Some((l, _)) => l,
            None => {
                let base = format!("Ax{}", i + 1);
                let mut label = base.clone();
                while taken.contains_key(&label) {
                    suffix += 1;
                    label = format!("{base}_{suffix}");
                }
                taken.insert(label.clone(), ());
                label
            }
        };
        axioms.push(Axiom {
            label,
            formula: p.formula,
            doc: p.doc,
        });
        spans.push(p.span);
    }
    Ok((axioms, spans))
}
