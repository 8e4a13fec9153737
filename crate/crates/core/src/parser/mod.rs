//! The mini-CASL surface syntax: a library is a sequence of `spec` and
//! `view` declarations.
//!
//! ```text
//! spec Name =
//! sorts S, T; T < S
//! ops c : S; __ f __ : S × S → S; g__ : S → S
//! preds __ p __ : S × T
//! ∀x, y : S; z : T . x f y p z  %(Label)%
//! . c p c
//! end
//! view V : Name to Other = S ↦ S', c ↦ d end
//! spec Blend = combine V, W
//! ```
//!
//! Both the unicode connectives and their ASCII spellings (`forall`,
//! `exists`, `<=>`, `=>`, `/\`, `\/`, `not`, `isin`, `*`, `->`, `|->`) are
//! accepted. A quantifier head followed by several `.` bullets yields one
//! axiom per bullet, each quantified over the variables it uses. `%%` lines
//! above an axiom are kept as its documentation; other comments are dropped.
//! Unlabeled axioms are named `Ax<n>` after their position.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::library::Library;

mod grammar;
mod lexer;
mod printer;

pub use printer::{axiom_text, formula_text, pretty_print, pretty_print_with, term_text, PrintStyle};

/// The first lexical or syntax error in a library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ParseError(pub Diagnostic);

/// Parses a self-contained library.
pub fn parse_library(text: &str) -> Result<Library, ParseError> {
    parse_library_in("<input>", text, &BTreeSet::new())
}

/// Parses `text` as file `file`. Views and combinations may refer to any
/// name in `externs` as well as to names declared earlier in the file.
pub fn parse_library_in(file: &str, text: &str, externs: &BTreeSet<String>) -> Result<Library, ParseError> {
    let file: Arc<str> = Arc::from(file);
    let toks = lexer::tokenize(&file, text).map_err(ParseError)?;
    grammar::Parser::new(file, toks, externs).library().map_err(ParseError)
}

/// Whether `name` can be printed and read back as a symbol or variable name.
pub fn is_plain_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    if lexer::is_ident_start(first) {
        name.chars().all(lexer::is_ident_char) && !name.contains("__") && !lexer::is_reserved_word(name)
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::Code;
    use crate::formula::{Formula, Term, Var};
    use crate::library::DeclKind;
    use crate::signature::Fixity;
    use crate::theory::Theory;
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    fn one_spec(text: &str) -> Theory {
        let lib = parse_library(text).unwrap();
        match &lib.decls[0].kind {
            DeclKind::Spec { theory, .. } => theory.clone(),
            other => panic!("not a spec: {other:?}"),
        }
    }

    const SETS: &str = "spec S =
sorts Sets, A; A < Sets
ops EmpSet, A' : Sets;
__ inter __ : Sets × Sets → Sets
Uni__ : Sets → Sets
f : A → A
preds __ el __ : Sets × Sets
";

    fn with_axioms(axioms: &str) -> Theory {
        one_spec(&(SETS.to_string() + axioms + "\nend"))
    }

    fn el(a: Term, b: Term) -> Formula {
        Formula::pred("el", vec![a, b])
    }

    #[test]
    fn declarations() {
        let t = with_axioms("");
        let sig = &t.signature;
        assert_eq!(sig.sorts.len(), 2);
        assert!(sig.subsorts.contains(&("A".into(), "Sets".into())));
        assert_eq!(sig.fixity_of("inter"), Fixity::Infix);
        assert_eq!(sig.fixity_of("Uni"), Fixity::Prefix);
        assert_eq!(sig.ops["f"].args, ["A"]);
        assert_eq!(sig.preds["el"].len(), 2);
    }

    #[test]
    fn bullets_share_a_head() {
        let t = with_axioms("∀x : Sets\n.x el A'\n..¬(x el EmpSet)\n.A' el A'");
        assert_eq!(t.axioms.len(), 3);
        let x = || Term::var("x", "Sets");
        assert_eq!(
            t.axioms[1].formula,
            Formula::forall(vec![Var::new("x", "Sets")], Formula::not(el(x(), Term::constant("EmpSet"))))
        );
        // A bullet that does not use the head's variable is not quantified.
        assert_eq!(t.axioms[2].formula, el(Term::constant("A'"), Term::constant("A'")));
        assert_eq!(t.axioms[2].label, "Ax3");
    }

    #[test]
    fn precedence() {
        let t = with_axioms("∀x, y : Sets . x el Uni y ⇔ ∃ z : Sets . z el y ∧ x el z");
        let (x, y, z) = (Term::var("x", "Sets"), Term::var("y", "Sets"), Term::var("z", "Sets"));
        let expected = Formula::forall(
            vec![Var::new("x", "Sets"), Var::new("y", "Sets")],
            Formula::iff(
                el(x.clone(), Term::app("Uni", vec![y.clone()])),
                Formula::exists(
                    vec![Var::new("z", "Sets")],
                    Formula::and(el(z.clone(), y), el(x, z)),
                ),
            ),
        );
        assert_eq!(t.axioms[0].formula, expected);
    }

    #[test]
    fn implication_is_right_associative() {
        let t = with_axioms("∀x : Sets . x el A' ⇒ x el x ⇔ x el EmpSet");
        let Formula::Quant(_, _, body) = &t.axioms[0].formula else { panic!() };
        assert!(matches!(&**body, Formula::Implies(_, r) if matches!(**r, Formula::Iff(..))));
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        let t = with_axioms("∀x, y : Sets . (x inter y) inter x = x ∨ (x el y)");
        let Formula::Quant(_, _, body) = &t.axioms[0].formula else { panic!() };
        let Formula::Or(l, r) = &**body else { panic!("{body:?}") };
        assert!(matches!(&**l, Formula::Eq(Term::App { op, .. }, _) if op == "inter"));
        assert!(matches!(&**r, Formula::Pred { .. }));
    }

    #[test]
    fn labels_and_docs() {
        let t = with_axioms("%% first\n%% second\n. A' el A' %(Mine)%\n. EmpSet el A'");
        assert_eq!(t.axioms[0].label, "Mine");
        assert_eq!(t.axioms[0].doc.as_deref(), Some("first\nsecond"));
        assert_eq!(t.axioms[1].label, "Ax2");
        assert_eq!(t.axioms[1].doc, None);
    }

    #[test]
    fn generated_label_avoids_explicit_one() {
        let t = with_axioms(". A' el A' %(Ax2)%\n. EmpSet el A'");
        assert_eq!(t.axioms[1].label, "Ax2_1");
    }

    #[test]
    fn duplicate_label_is_rejected() {
        let e = parse_library(&(SETS.to_string() + ". A' el A' %(L)%\n. EmpSet el A' %(L)%\nend")).unwrap_err();
        assert_eq!(e.0.code, Code::P005);
    }

    #[test]
    fn mixfix_forms() {
        let e = parse_library("spec T = sorts S ops __ ! : S → S end").unwrap_err();
        assert_eq!(e.0.code, Code::P004);
        let e = parse_library("spec T = sorts S ops if__then__ : S × S → S end").unwrap_err();
        assert_eq!(e.0.code, Code::P004);
        let t = one_spec("spec T = sorts S ops __+__ : S × S → S; ++ : S → S end");
        assert_eq!(t.signature.fixity_of("+"), Fixity::Infix);
        assert_eq!(t.signature.fixity_of("++"), Fixity::Ordinary);
    }

    #[test]
    fn ascii_spelling() {
        let a = with_axioms("forall x : Sets . x el A' <=> not x el EmpSet /\\ x isin A");
        let b = with_axioms("∀x : Sets . x el A' ⇔ ¬x el EmpSet ∧ x ∈ A");
        assert_eq!(a.axioms, b.axioms);
    }

    #[test]
    fn undeclared_reference() {
        let e = parse_library("view V : A to B = end").unwrap_err();
        assert_eq!(e.0.code, Code::P003);
        let mut externs = BTreeSet::new();
        externs.insert("A".to_string());
        externs.insert("B".to_string());
        assert!(parse_library_in("f", "view V : A to B = end", &externs).is_ok());
    }

    #[test]
    fn view_symbols_drop_markers() {
        let lib = parse_library(
            "spec T = sorts S preds __ p __ : S × S end
             view V : T to T = S ↦ S, __ p __ ↦ __p__ end",
        )
        .unwrap();
        let DeclKind::View(v) = &lib.decls[1].kind else { panic!() };
        assert_eq!(v.map, [("S".into(), "S".into()), ("p".into(), "p".into())]);
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_library("spec T =\nsorts S\nops c : S\n. c = \nend").unwrap_err();
        assert_eq!(e.0.code, Code::P002);
        assert_eq!(e.0.span.unwrap().start.0, 5);
    }

    #[test]
    fn print_then_parse() {
        let t = with_axioms(
            "∀x, y : Sets; z : A . (x inter y) inter z = Uni (x inter y) ⇒ (∀w : Sets . w el x) ∧ ¬(z ∈ A)
%% doc
. A' el EmpSet ⇔ (EmpSet el A' ⇒ A' el A') %(D)%
∀x : A . f(f(x)) = x",
        );
        for style in [PrintStyle::default(), PrintStyle { ascii: true }] {
            let text = pretty_print_with(&t, style);
            let back = one_spec(&text);
            assert_eq!(back, t, "{text}");
        }
    }

    #[test]
    fn plain_names() {
        assert!(is_plain_name("X'"));
        assert!(!is_plain_name("end"));
        assert!(!is_plain_name("a__b"));
        let lines: Vec<_> = pretty_print(&with_axioms("")).lines().map(String::from).collect();
        assert!(lines.contains(&"op __inter__ : Sets × Sets → Sets".to_string()));
        assert!(lines.contains(&"op Uni__ : Sets → Sets".to_string()));
    }
}
