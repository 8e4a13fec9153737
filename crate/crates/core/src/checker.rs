//! Well-formedness of signatures, sort checking of axioms with implicit
//! subsort coercion, and validation of signature morphisms and views.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::diagnostic::{Code, Diagnostic};
use crate::formula::{canonical_form, Formula, Term};
use crate::morphism::{translate_formula, SignatureMorphism};
use crate::signature::{Signature, SortOrder};
use crate::theory::Theory;

/// Returns one diagnostic per violated signature invariant, naming the symbol.
pub fn check_signature(sig: &Signature) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let missing = |sort: &str, what: String, out: &mut Vec<Diagnostic>| {
        out.push(Diagnostic::new(
            Code::S001,
            format!("sort `{sort}` used by {what} is not declared"),
        ));
    };

    for (c, p) in &sig.subsorts {
        for s in [c, p] {
            if !sig.has_sort(s) {
                missing(s, format!("subsort pair {c} < {p}"), &mut out);
            }
        }
        if c == p {
            out.push(Diagnostic::new(
                Code::S002,
                format!("subsort cycle: `{c}` is declared a subsort of itself"),
            ));
        }
    }
    for (a, b) in sig.order().cycles() {
        out.push(Diagnostic::new(
            Code::S002,
            format!("subsort cycle between `{a}` and `{b}`"),
        ));
    }
    for (name, profile) in &sig.ops {
        for s in profile.sorts() {
            if !sig.has_sort(s) {
                missing(s, format!("operation `{name}`"), &mut out);
            }
        }
    }
    for (name, args) in &sig.preds {
        for s in args {
            if !sig.has_sort(s) {
                missing(s, format!("predicate `{name}`"), &mut out);
            }
        }
    }
    for name in sig.ops.keys() {
        if sig.sorts.contains(name) {
            out.push(Diagnostic::new(
                Code::S003,
                format!("`{name}` is declared both as a sort and as an operation"),
            ));
        }
        if sig.preds.contains_key(name) {
            out.push(Diagnostic::new(
                Code::S003,
                format!("`{name}` is declared both as an operation and as a predicate"),
            ));
        }
    }
    for name in sig.preds.keys() {
        if sig.sorts.contains(name) {
            out.push(Diagnostic::new(
                Code::S003,
                format!("`{name}` is declared both as a sort and as a predicate"),
            ));
        }
    }
    out
}

/// Why a term does not sort-check. Argument positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{name}` is bound at sort {bound} but used at sort {used}")]
    VariableSort { name: String, bound: String, used: String },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("operation `{op}` expects {expected} argument(s), found {found}")]
    Arity { op: String, expected: usize, found: usize },
    #[error("argument {position} of `{op}` has sort {found}, which is not a subsort of {expected}")]
    NotCoercible {
        op: String,
        position: usize,
        found: String,
        expected: String,
    },
}

impl SortError {
    fn code(&self) -> Code {
        match self {
            SortError::UnknownVariable(_) => Code::F001,
            SortError::VariableSort { .. } => Code::F008,
            SortError::UnknownOp(_) => Code::F002,
            SortError::Arity { .. } => Code::F003,
            SortError::NotCoercible { .. } => Code::F004,
        }
    }
}

/// Result sort of `t`, after checking every argument against its parameter
/// sort modulo the subsort closure.
pub fn infer_sort(sig: &Signature, env: &BTreeMap<String, String>, t: &Term) -> Result<String, SortError> {
    infer(sig, &sig.order(), env, t)
}

fn infer(sig: &Signature, order: &SortOrder, env: &BTreeMap<String, String>, t: &Term) -> Result<String, SortError> {
    match t {
        Term::Var(v) => match env.get(&v.name) {
            None => Err(SortError::UnknownVariable(v.name.clone())),
            Some(bound) if *bound != v.sort => Err(SortError::VariableSort {
                name: v.name.clone(),
                bound: bound.clone(),
                used: v.sort.clone(),
            }),
            Some(bound) => Ok(bound.clone()),
        },
        Term::App { op, args } => {
            let profile = sig.ops.get(op).ok_or_else(|| SortError::UnknownOp(op.clone()))?;
            if profile.arity() != args.len() {
                return Err(SortError::Arity {
                    op: op.clone(),
                    expected: profile.arity(),
                    found: args.len(),
                });
            }
            for (i, (arg, param)) in args.iter().zip(&profile.args).enumerate() {
                let found = infer(sig, order, env, arg)?;
                if !order.leq(&found, param) {
                    return Err(SortError::NotCoercible {
                        op: op.clone(),
                        position: i + 1,
                        found,
                        expected: param.clone(),
                    });
                }
            }
            Ok(profile.result.clone())
        }
    }
}

/// Sort-checks a sentence. Free variables are reported as an open formula.
pub fn check_formula(sig: &Signature, f: &Formula) -> Vec<Diagnostic> {
    let mut cx = FormulaCheck {
        sig,
        order: sig.order(),
        env: BTreeMap::new(),
        out: Vec::new(),
    };
    cx.formula(f);
    cx.out
}

struct FormulaCheck<'a> {
    sig: &'a Signature,
    order: SortOrder,
    env: BTreeMap<String, String>,
    out: Vec<Diagnostic>,
}

impl FormulaCheck<'_> {
    fn term(&mut self, t: &Term) -> Option<String> {
        match infer(self.sig, &self.order, &self.env, t) {
            Ok(s) => Some(s),
            Err(e) => {
                let message = match &e {
                    SortError::UnknownVariable(v) => format!("formula is not closed: free variable `{v}`"),
                    other => other.to_string(),
                };
                self.out.push(Diagnostic::new(e.code(), message));
                None
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Quant(_, vars, body) => {
                let saved = self.env.clone();
                for v in vars {
                    if !self.sig.has_sort(&v.sort) {
                        self.out.push(Diagnostic::new(
                            Code::F007,
                            format!("variable `{}` is declared at unknown sort `{}`", v.name, v.sort),
                        ));
                    }
                    self.env.insert(v.name.clone(), v.sort.clone());
                }
                self.formula(body);
                self.env = saved;
            }
            Formula::Not(a) => self.formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.formula(a);
                self.formula(b);
            }
            Formula::Eq(l, r) => {
                let (ls, rs) = (self.term(l), self.term(r));
                if let (Some(ls), Some(rs)) = (ls, rs) {
                    if !self.order.have_upper_bound(&ls, &rs) {
                        self.out.push(Diagnostic::new(
                            Code::F006,
                            format!("equation between sorts {ls} and {rs}, which have no common supersort"),
                        ));
                    }
                }
            }
            Formula::Pred { pred, args } => {
                let Some(params) = self.sig.preds.get(pred) else {
                    self.out
                        .push(Diagnostic::new(Code::F005, format!("unknown predicate `{pred}`")));
                    args.iter().for_each(|a| {
                        self.term(a);
                    });
                    return;
                };
                if params.len() != args.len() {
                    self.out.push(Diagnostic::new(
                        Code::F003,
                        format!(
                            "predicate `{pred}` expects {} argument(s), found {}",
                            params.len(),
                            args.len()
                        ),
                    ));
                    return;
                }
                for (i, (arg, param)) in args.iter().zip(params).enumerate() {
                    if let Some(found) = self.term(arg) {
                        if !self.order.leq(&found, param) {
                            self.out.push(Diagnostic::new(
                                Code::F004,
                                format!(
                                    "argument {} of `{pred}` has sort {found}, which is not a subsort of {param}",
                                    i + 1
                                ),
                            ));
                        }
                    }
                }
            }
            Formula::Member(t, sort) => {
                if !self.sig.has_sort(sort) {
                    self.out
                        .push(Diagnostic::new(Code::F007, format!("membership in unknown sort `{sort}`")));
                }
                self.term(t);
            }
        }
    }
}

/// Signature diagnostics followed by the diagnostics of every axiom, each
/// prefixed with the axiom's label.
pub fn check_theory(t: &Theory) -> Vec<Diagnostic> {
    let mut out = check_signature(&t.signature);
    let mut labels = BTreeSet::new();
    for ax in &t.axioms {
        if !labels.insert(ax.label.as_str()) {
            out.push(Diagnostic::new(
                Code::P005,
                format!("axiom label `{}` is used more than once in `{}`", ax.label, t.name),
            ));
        }
        for mut d in check_formula(&t.signature, &ax.formula) {
            d.message = format!("axiom {}: {}", ax.label, d.message);
            out.push(d);
        }
    }
    out
}

/// Totality, profile preservation and subsort preservation of `m : src → tgt`.
pub fn check_morphism(m: &SignatureMorphism, src: &Signature, tgt: &Signature) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for s in &src.sorts {
        match m.sort(s) {
            None => out.push(Diagnostic::new(Code::M001, format!("sort `{s}` is not mapped"))),
            Some(img) if !tgt.has_sort(img) => out.push(Diagnostic::new(
                Code::M004,
                format!("sort `{s}` is mapped to `{img}`, which the target does not declare"),
            )),
            Some(_) => {}
        }
    }
    let map_sorts = |sorts: &[String]| -> Option<Vec<String>> {
        sorts.iter().map(|s| m.sort(s).map(String::from)).collect()
    };
    for (op, profile) in &src.ops {
        let Some(img) = m.op(op) else {
            out.push(Diagnostic::new(Code::M001, format!("operation `{op}` is not mapped")));
            continue;
        };
        let Some(target) = tgt.ops.get(img) else {
            out.push(Diagnostic::new(
                Code::M004,
                format!("operation `{op}` is mapped to `{img}`, which the target does not declare"),
            ));
            continue;
        };
        let (Some(args), Some(result)) = (map_sorts(&profile.args), m.sort(&profile.result)) else {
            continue;
        };
        if target.args != args || target.result != result {
            out.push(Diagnostic::new(
                Code::M002,
                format!(
                    "operation `{op}` : {} is mapped to `{img}` : {}, expected {}",
                    show_profile(&profile.args, Some(&profile.result)),
                    show_profile(&target.args, Some(&target.result)),
                    show_profile(&args, Some(result)),
                ),
            ));
        }
    }
    for (pred, params) in &src.preds {
        let Some(img) = m.pred(pred) else {
            out.push(Diagnostic::new(Code::M001, format!("predicate `{pred}` is not mapped")));
            continue;
        };
        let Some(target) = tgt.preds.get(img) else {
            out.push(Diagnostic::new(
                Code::M004,
                format!("predicate `{pred}` is mapped to `{img}`, which the target does not declare"),
            ));
            continue;
        };
        let Some(args) = map_sorts(params) else { continue };
        if *target != args {
            out.push(Diagnostic::new(
                Code::M002,
                format!(
                    "predicate `{pred}` : {} is mapped to `{img}` : {}, expected {}",
                    show_profile(params, None),
                    show_profile(target, None),
                    show_profile(&args, None),
                ),
            ));
        }
    }
    let tgt_order = tgt.order();
    for (a, b) in src.order().strict_pairs() {
        if let (Some(ma), Some(mb)) = (m.sort(&a), m.sort(&b)) {
            if !tgt_order.leq(ma, mb) {
                out.push(Diagnostic::new(
                    Code::M003,
                    format!("subsort {a} < {b} is not preserved: {ma} is not a subsort of {mb}"),
                ));
            }
        }
    }
    out
}

fn show_profile(args: &[String], result: Option<&str>) -> String {
    let mut s = args.join(" × ");
    if let Some(r) = result {
        if s.is_empty() {
            s = r.to_string();
        } else {
            s = format!("{s} → {r}");
        }
    }
    s
}

/// [`check_morphism`] plus axiom preservation: every source axiom, translated
/// along `m`, must be alpha-equivalent to some target axiom.
pub fn check_view(m: &SignatureMorphism, source: &Theory, target: &Theory) -> Vec<Diagnostic> {
    let mut out = check_morphism(m, &source.signature, &target.signature);
    let target_axioms: BTreeSet<Formula> = target.axioms.iter().map(|a| canonical_form(&a.formula)).collect();
    for ax in &source.axioms {
        let Ok(image) = translate_formula(m, &ax.formula) else {
            continue;
        };
        if !target_axioms.contains(&canonical_form(&image)) {
            out.push(Diagnostic::new(
                Code::V001,
                format!(
                    "axiom {} of `{}` has no alpha-equivalent counterpart in `{}`",
                    ax.label, source.name, target.name
                ),
            ));
        }
    }
    out
}
