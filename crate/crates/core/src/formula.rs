//! Sorted first-order terms and formulas, free variables and canonical forms.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// A sorted variable. Variables are identified by name and sort together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: sort.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    /// Application of an operation symbol. Constants have no arguments.
    App { op: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App { op: op.into(), args }
    }

    pub fn constant(op: impl Into<String>) -> Self {
        Term::App {
            op: op.into(),
            args: Vec::new(),
        }
    }

    fn collect_free(&self, bound: &[Var], out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                if !bound.iter().any(|b| b.name == v.name) {
                    out.insert(v.clone());
                }
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_free(bound, out)),
        }
    }

    /// Calls `f` on every operation name, in pre-order.
    pub fn for_each_op<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        if let Term::App { op, args } = self {
            f(op);
            args.iter().for_each(|a| a.for_each_op(f));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// The variable list is never empty.
    Quant(Quantifier, Vec<Var>, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Eq(Term, Term),
    Pred { pred: String, args: Vec<Term> },
    /// Sort membership `t ∈ s`, distinct from any user predicate.
    Member(Term, String),
}

impl Formula {
    pub fn forall(vars: Vec<Var>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, vars, Box::new(body))
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, vars, Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn pred(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred {
            pred: pred.into(),
            args,
        }
    }

    pub fn member(t: Term, sort: impl Into<String>) -> Self {
        Formula::Member(t, sort.into())
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Quant(_, vars, body) => {
                let mark = bound.len();
                bound.extend(vars.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(mark);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Eq(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Pred { args, .. } => args.iter().for_each(|a| a.collect_free(bound, out)),
            Formula::Member(t, _) => t.collect_free(bound, out),
        }
    }

    /// Calls `f` on every operation name, in pre-order.
    pub fn for_each_op<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        self.walk_terms(&mut |t| t.for_each_op(f));
    }

    /// Calls `f` on every predicate name, in pre-order.
    pub fn for_each_pred<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Formula::Quant(_, _, body) | Formula::Not(body) => body.for_each_pred(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_pred(f);
                b.for_each_pred(f);
            }
            Formula::Pred { pred, .. } => f(pred),
            Formula::Eq(..) | Formula::Member(..) => {}
        }
    }

    fn walk_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Quant(_, _, body) | Formula::Not(body) => body.walk_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.walk_terms(f);
                b.walk_terms(f);
            }
            Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Pred { args, .. } => args.iter().for_each(f),
            Formula::Member(t, _) => f(t),
        }
    }
}

/// Variables occurring in `f` outside the scope of any binder for their name.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    f.collect_free(&mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula is not closed: free variable {}", .free.iter().map(|v| format!("{}:{}", v.name, v.sort)).collect::<Vec<_>>().join(", "))]
pub struct OpenFormula {
    pub free: Vec<Var>,
}

/// Canonical representative of the alpha-equivalence class of a closed formula.
///
/// Quantifiers over several variables are split into directly nested
/// single-variable quantifiers (`∀x, y : s . φ` is `∀x : s . ∀y : s . φ`), and
/// bound variables are renamed `_0`, `_1`, ... in binder order. The result is
/// deterministic and `canonicalize` is idempotent on it.
pub fn canonicalize(f: &Formula) -> Result<Formula, OpenFormula> {
    let free = free_vars(f);
    if !free.is_empty() {
        return Err(OpenFormula {
            free: free.into_iter().collect(),
        });
    }
    Ok(canonical_form(f))
}

/// Like [`canonicalize`], but free variables are kept as they are.
pub(crate) fn canonical_form(f: &Formula) -> Formula {
    let mut scope: Vec<(String, String)> = Vec::new();
    let mut counter = 0usize;
    canon_formula(f, &mut scope, &mut counter)
}

fn canon_term(t: &Term, scope: &[(String, String)]) -> Term {
    match t {
        Term::Var(v) => match scope.iter().rev().find(|(orig, _)| *orig == v.name) {
            Some((_, fresh)) => Term::var(fresh.clone(), v.sort.clone()),
            None => t.clone(),
        },
        Term::App { op, args } => Term::App {
            op: op.clone(),
            args: args.iter().map(|a| canon_term(a, scope)).collect(),
        },
    }
}

fn canon_formula(f: &Formula, scope: &mut Vec<(String, String)>, counter: &mut usize) -> Formula {
    let bin = |a: &Formula, b: &Formula, scope: &mut Vec<(String, String)>, counter: &mut usize| {
        let a = canon_formula(a, scope, counter);
        let b = canon_formula(b, scope, counter);
        (Box::new(a), Box::new(b))
    };
    match f {
        Formula::Quant(q, vars, body) => {
            let mark = scope.len();
            let mut fresh_vars = Vec::with_capacity(vars.len());
            for v in vars {
                let fresh = format!("_{}", *counter);
                *counter += 1;
                scope.push((v.name.clone(), fresh.clone()));
                fresh_vars.push(Var::new(fresh, v.sort.clone()));
            }
            let mut out = canon_formula(body, scope, counter);
            scope.truncate(mark);
            for v in fresh_vars.into_iter().rev() {
                out = Formula::Quant(*q, alloc::vec![v], Box::new(out));
            }
            out
        }
        Formula::Not(a) => Formula::Not(Box::new(canon_formula(a, scope, counter))),
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, scope, counter);
            Formula::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, scope, counter);
            Formula::Or(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = bin(a, b, scope, counter);
            Formula::Implies(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = bin(a, b, scope, counter);
            Formula::Iff(a, b)
        }
        Formula::Eq(l, r) => Formula::Eq(canon_term(l, scope), canon_term(r, scope)),
        Formula::Pred { pred, args } => Formula::Pred {
            pred: pred.clone(),
            args: args.iter().map(|a| canon_term(a, scope)).collect(),
        },
        Formula::Member(t, s) => Formula::Member(canon_term(t, scope), s.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn v(n: &str, s: &str) -> Term {
        Term::var(n, s)
    }

    fn el(a: Term, b: Term) -> Formula {
        Formula::pred("el", vec![a, b])
    }

    #[test]
    fn closed_axiom_has_no_free_vars() {
        // ∀x : Sets . ¬(x el EmpSet)
        let f = Formula::forall(
            vec![Var::new("x", "Sets")],
            Formula::not(el(v("x", "Sets"), Term::constant("EmpSet"))),
        );
        assert!(free_vars(&f).is_empty());
    }

    #[test]
    fn unbound_vars_are_free() {
        let f = el(v("x", "Sets"), v("y", "Sets"));
        let fv: Vec<_> = free_vars(&f).into_iter().map(|v| v.name).collect();
        assert_eq!(fv, ["x", "y"]);
    }

    #[test]
    fn nested_scopes() {
        // ∀x:S. ∃y:S. P(x,y,z) leaves only z free
        let f = Formula::forall(
            vec![Var::new("x", "S")],
            Formula::exists(
                vec![Var::new("y", "S")],
                Formula::pred("P", vec![v("x", "S"), v("y", "S"), v("z", "S")]),
            ),
        );
        assert_eq!(free_vars(&f).into_iter().collect::<Vec<_>>(), [Var::new("z", "S")]);
    }

    #[test]
    fn alpha_variants_share_canonical_form() {
        let mk = |n: &str| {
            Formula::forall(vec![Var::new(n, "Sets")], el(v(n, "Sets"), Term::constant("X'")))
        };
        assert_eq!(canonicalize(&mk("x")).unwrap(), canonicalize(&mk("q")).unwrap());
    }

    #[test]
    fn grouped_and_nested_binders_agree() {
        let body = |a: &str, b: &str| el(v(a, "XX"), Term::app("inversef", vec![v(b, "TX")]));
        let grouped = Formula::forall(vec![Var::new("y", "TX"), Var::new("x", "XX")], body("x", "y"));
        let nested = Formula::forall(
            vec![Var::new("b", "TX")],
            Formula::forall(vec![Var::new("a", "XX")], body("a", "b")),
        );
        assert_eq!(canonicalize(&grouped).unwrap(), canonicalize(&nested).unwrap());
    }

    #[test]
    fn shadowing_is_respected() {
        // ∀x:S. ∀x:S. P(x)  is alpha-equal to  ∀y:S. ∀x:S. P(x), not to ∀x:S. ∀y:S. P(x)
        let p = |n: &str| Formula::pred("P", vec![v(n, "S")]);
        let shadow = Formula::forall(
            vec![Var::new("x", "S")],
            Formula::forall(vec![Var::new("x", "S")], p("x")),
        );
        let inner = Formula::forall(
            vec![Var::new("y", "S")],
            Formula::forall(vec![Var::new("x", "S")], p("x")),
        );
        let outer = Formula::forall(
            vec![Var::new("x", "S")],
            Formula::forall(vec![Var::new("y", "S")], p("x")),
        );
        let c = canonicalize(&shadow).unwrap();
        assert_eq!(c, canonicalize(&inner).unwrap());
        assert_ne!(c, canonicalize(&outer).unwrap());
    }

    #[test]
    fn open_formula_is_rejected() {
        let err = canonicalize(&el(v("x", "Sets"), v("y", "Sets"))).unwrap_err();
        assert_eq!(err.free.len(), 2);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let f = Formula::forall(
            vec![Var::new("x", "S"), Var::new("y", "S")],
            Formula::exists(vec![Var::new("z", "S")], Formula::Eq(v("x", "S"), v("z", "S"))),
        );
        let once = canonicalize(&f).unwrap();
        assert_eq!(canonicalize(&once).unwrap(), once);
    }
}
