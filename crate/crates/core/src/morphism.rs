//! Signature morphisms and the translation of terms and formulas along them.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::{Formula, Term, Var};
use crate::signature::Signature;

/// Symbol-wise map between signatures. Names are mapped, never occurrences,
/// and variable names are left alone.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignatureMorphism {
    pub sorts: BTreeMap<String, String>,
    pub ops: BTreeMap<String, String>,
    pub preds: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("sort `{0}` is not mapped by the morphism")]
    UnmappedSort(String),
    #[error("operation `{0}` is not mapped by the morphism")]
    UnmappedOp(String),
    #[error("predicate `{0}` is not mapped by the morphism")]
    UnmappedPred(String),
}

impl SignatureMorphism {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(sig: &Signature) -> Self {
        SignatureMorphism {
            sorts: sig.sorts.iter().map(|s| (s.clone(), s.clone())).collect(),
            ops: sig.ops.keys().map(|s| (s.clone(), s.clone())).collect(),
            preds: sig.preds.keys().map(|s| (s.clone(), s.clone())).collect(),
        }
    }

    pub fn map_sort(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.sorts.insert(from.into(), to.into());
        self
    }

    pub fn map_op(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.ops.insert(from.into(), to.into());
        self
    }

    pub fn map_pred(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.preds.insert(from.into(), to.into());
        self
    }

    pub fn sort(&self, name: &str) -> Option<&str> {
        self.sorts.get(name).map(String::as_str)
    }

    pub fn op(&self, name: &str) -> Option<&str> {
        self.ops.get(name).map(String::as_str)
    }

    pub fn pred(&self, name: &str) -> Option<&str> {
        self.preds.get(name).map(String::as_str)
    }

    /// `then ∘ self`: first `self`, then `then`. Entries whose image `then`
    /// does not map are dropped.
    pub fn then(&self, then: &SignatureMorphism) -> SignatureMorphism {
        fn chain(a: &BTreeMap<String, String>, b: &BTreeMap<String, String>) -> BTreeMap<String, String> {
            a.iter()
                .filter_map(|(k, v)| b.get(v).map(|w| (k.clone(), w.clone())))
                .collect()
        }
        SignatureMorphism {
            sorts: chain(&self.sorts, &then.sorts),
            ops: chain(&self.ops, &then.ops),
            preds: chain(&self.preds, &then.preds),
        }
    }

    /// Two-sided inverse, if the morphism is injective in every namespace.
    pub fn inverse(&self) -> Option<SignatureMorphism> {
        fn inv(m: &BTreeMap<String, String>) -> Option<BTreeMap<String, String>> {
            let out: BTreeMap<_, _> = m.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
            (out.len() == m.len()).then_some(out)
        }
        Some(SignatureMorphism {
            sorts: inv(&self.sorts)?,
            ops: inv(&self.ops)?,
            preds: inv(&self.preds)?,
        })
    }

    /// Every entry maps a name to itself.
    pub fn is_identity(&self) -> bool {
        self.sorts.iter().all(|(k, v)| k == v)
            && self.ops.iter().all(|(k, v)| k == v)
            && self.preds.iter().all(|(k, v)| k == v)
    }

    fn sort_or_err(&self, s: &str) -> Result<String, TranslateError> {
        self.sorts
            .get(s)
            .cloned()
            .ok_or_else(|| TranslateError::UnmappedSort(s.to_string()))
    }

    fn var(&self, v: &Var) -> Result<Var, TranslateError> {
        Ok(Var::new(v.name.clone(), self.sort_or_err(&v.sort)?))
    }
}

pub fn translate_term(m: &SignatureMorphism, t: &Term) -> Result<Term, TranslateError> {
    match t {
        Term::Var(v) => Ok(Term::Var(m.var(v)?)),
        Term::App { op, args } => {
            let op = m
                .ops
                .get(op)
                .cloned()
                .ok_or_else(|| TranslateError::UnmappedOp(op.clone()))?;
            let args = args
                .iter()
                .map(|a| translate_term(m, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::App { op, args })
        }
    }
}

/// Applies `m` homomorphically to every symbol of `f`, including quantifier
/// sorts and membership sorts.
pub fn translate_formula(m: &SignatureMorphism, f: &Formula) -> Result<Formula, TranslateError> {
    let tr = |g: &Formula| translate_formula(m, g).map(alloc::boxed::Box::new);
    Ok(match f {
        Formula::Quant(q, vars, body) => Formula::Quant(
            *q,
            vars.iter().map(|v| m.var(v)).collect::<Result<_, _>>()?,
            tr(body)?,
        ),
        Formula::Not(a) => Formula::Not(tr(a)?),
        Formula::And(a, b) => Formula::And(tr(a)?, tr(b)?),
        Formula::Or(a, b) => Formula::Or(tr(a)?, tr(b)?),
        Formula::Implies(a, b) => Formula::Implies(tr(a)?, tr(b)?),
        Formula::Iff(a, b) => Formula::Iff(tr(a)?, tr(b)?),
        Formula::Eq(l, r) => Formula::Eq(translate_term(m, l)?, translate_term(m, r)?),
        Formula::Pred { pred, args } => Formula::Pred {
            pred: m
                .preds
                .get(pred)
                .cloned()
                .ok_or_else(|| TranslateError::UnmappedPred(pred.clone()))?,
            args: args.iter().map(|a| translate_term(m, a)).collect::<Result<_, _>>()?,
        },
        Formula::Member(t, s) => Formula::Member(translate_term(m, t)?, m.sort_or_err(s)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::OpProfile;
    use alloc::vec;

    #[test]
    fn identity_leaves_terms_alone() {
        let mut sig = Signature::new();
        sig.add_sort("Sets")
            .add_op("inter", OpProfile::new(["Sets", "Sets"], "Sets"));
        let t = Term::app("inter", vec![Term::var("x", "Sets"), Term::var("y", "Sets")]);
        assert_eq!(translate_term(&SignatureMorphism::identity(&sig), &t).unwrap(), t);
    }

    #[test]
    fn variable_sorts_follow_the_sort_map() {
        // f : A → B injected into the blend as f : XX → X
        let m = SignatureMorphism::new().map_op("f", "f").map_sort("A", "XX");
        let t = Term::app("f", vec![Term::var("x", "A")]);
        assert_eq!(
            translate_term(&m, &t).unwrap(),
            Term::app("f", vec![Term::var("x", "XX")])
        );
    }

    #[test]
    fn renaming_a_constant_argument() {
        // g(c) with g ↦ h and c ↦ c, expected tree built by hand
        let m = SignatureMorphism::new().map_op("g", "h").map_op("c", "c");
        let t = Term::app("g", vec![Term::constant("c")]);
        let expected = Term::App {
            op: "h".into(),
            args: vec![Term::App {
                op: "c".into(),
                args: vec![],
            }],
        };
        assert_eq!(translate_term(&m, &t).unwrap(), expected);
    }

    #[test]
    fn unmapped_op_is_named() {
        let m = SignatureMorphism::new();
        let err = translate_term(&m, &Term::constant("EmpSet")).unwrap_err();
        assert_eq!(err, TranslateError::UnmappedOp("EmpSet".into()));
    }

    #[test]
    fn predicate_rename() {
        let m = SignatureMorphism::new().map_sort("S", "S").map_pred("P", "Q");
        let f = Formula::forall(vec![Var::new("x", "S")], Formula::pred("P", vec![Term::var("x", "S")]));
        let expected = Formula::Quant(
            crate::formula::Quantifier::Forall,
            vec![Var {
                name: "x".into(),
                sort: "S".into(),
            }],
            alloc::boxed::Box::new(Formula::Pred {
                pred: "Q".into(),
                args: vec![Term::Var(Var {
                    name: "x".into(),
                    sort: "S".into(),
                })],
            }),
        );
        assert_eq!(translate_formula(&m, &f).unwrap(), expected);
    }

    #[test]
    fn membership_sort_is_translated() {
        let m = SignatureMorphism::new().map_sort("Sets", "Sets").map_sort("TB", "TX");
        let f = Formula::forall(
            vec![Var::new("x", "Sets")],
            Formula::member(Term::var("x", "Sets"), "TB"),
        );
        let g = translate_formula(&m, &f).unwrap();
        assert_eq!(
            g,
            Formula::forall(vec![Var::new("x", "Sets")], Formula::member(Term::var("x", "Sets"), "TX"))
        );
        assert_eq!(
            translate_formula(&SignatureMorphism::new(), &f).unwrap_err(),
            TranslateError::UnmappedSort("Sets".into())
        );
    }

    #[test]
    fn composition_and_inverse() {
        let a = SignatureMorphism::new().map_sort("s", "t").map_op("c", "d");
        let b = SignatureMorphism::new().map_sort("t", "u").map_op("d", "e");
        let ab = a.then(&b);
        assert_eq!(ab.sort("s"), Some("u"));
        assert_eq!(ab.op("c"), Some("e"));
        let inv = ab.inverse().unwrap();
        assert!(ab.then(&inv).is_identity());

        let collapsing = SignatureMorphism::new().map_sort("p", "r").map_sort("q", "r");
        assert!(collapsing.inverse().is_none());
    }
}
