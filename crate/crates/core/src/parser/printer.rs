use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::formula::{Formula, Quantifier, Term, Var};
use crate::signature::{Fixity, Signature};
use crate::theory::Theory;

/// Output options for [`pretty_print_with`]. The default uses the unicode
/// connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PrintStyle {
    pub ascii: bool,
}

struct Glyphs {
    forall: &'static str,
    exists: &'static str,
    iff: &'static str,
    implies: &'static str,
    and: &'static str,
    or: &'static str,
    not: &'static str,
    member: &'static str,
    times: &'static str,
    arrow: &'static str,
}

const UNICODE: Glyphs = Glyphs {
    forall: "∀",
    exists: "∃",
    iff: "⇔",
    implies: "⇒",
    and: "∧",
    or: "∨",
    not: "¬",
    member: "∈",
    times: "×",
    arrow: "→",
};

const ASCII: Glyphs = Glyphs {
    forall: "forall ",
    exists: "exists ",
    iff: "<=>",
    implies: "=>",
    and: "/\\",
    or: "\\/",
    not: "not ",
    member: "isin",
    times: "*",
    arrow: "->",
};

impl PrintStyle {
    fn glyphs(&self) -> &'static Glyphs {
        if self.ascii {
            &ASCII
        } else {
            &UNICODE
        }
    }
}

pub fn pretty_print(t: &Theory) -> String {
    pretty_print_with(t, PrintStyle::default())
}

/// Canonical text of a theory: sorts, subsorts grouped by parent, one line
/// per symbol, then the axioms with their comments and labels.
pub fn pretty_print_with(t: &Theory, style: PrintStyle) -> String {
    let g = style.glyphs();
    let sig = &t.signature;
    let mut out = String::new();
    let _ = writeln!(out, "spec {} =\n", t.name);

    if !sig.sorts.is_empty() {
        let sorts: Vec<&str> = sig.sorts.iter().map(String::as_str).collect();
        let _ = writeln!(out, "sorts {}", sorts.join(", "));
    }
    if !sig.subsorts.is_empty() {
        let mut by_parent: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (c, p) in &sig.subsorts {
            by_parent.entry(p).or_default().push(c);
        }
        let groups: Vec<String> = by_parent
            .iter()
            .map(|(p, cs)| format!("{} < {p}", cs.join(", ")))
            .collect();
        let _ = writeln!(out, "sorts {}", groups.join("; "));
    }
    if !sig.sorts.is_empty() {
        out.push('\n');
    }

    for (name, profile) in &sig.ops {
        let shown = declared_name(sig, name);
        if profile.args.is_empty() {
            let _ = writeln!(out, "op {shown} : {}", profile.result);
        } else {
            let args = profile.args.join(&format!(" {} ", g.times));
            let _ = writeln!(out, "op {shown} : {args} {} {}", g.arrow, profile.result);
        }
    }
    for (name, args) in &sig.preds {
        let args = args.join(&format!(" {} ", g.times));
        let _ = writeln!(out, "pred {} : {args}", declared_name(sig, name));
    }
    if !sig.ops.is_empty() || !sig.preds.is_empty() {
        out.push('\n');
    }

    for ax in &t.axioms {
        if let Some(doc) = &ax.doc {
            for line in doc.lines() {
                if line.is_empty() {
                    out.push_str("%%\n");
                } else {
                    let _ = writeln!(out, "%% {line}");
                }
            }
        }
        let _ = writeln!(out, "{} %({})%", axiom_text(sig, &ax.formula, style), ax.label);
    }
    if !t.axioms.is_empty() {
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

fn declared_name(sig: &Signature, name: &str) -> String {
    match sig.fixity_of(name) {
        Fixity::Ordinary => String::from(name),
        Fixity::Infix => format!("__{name}__"),
        Fixity::Prefix => format!("{name}__"),
    }
}

/// One axiom as a line: `∀x : s . φ` for a quantified sentence, `. φ` otherwise.
pub fn axiom_text(sig: &Signature, f: &Formula, style: PrintStyle) -> String {
    let p = Printer {
        sig,
        g: style.glyphs(),
    };
    let mut out = String::new();
    match f {
        Formula::Quant(..) => p.formula(f, 0, true, &mut out),
        _ => {
            out.push_str(". ");
            p.formula(f, 0, true, &mut out);
        }
    }
    out
}

/// A formula on its own, without the leading bullet.
pub fn formula_text(sig: &Signature, f: &Formula, style: PrintStyle) -> String {
    let p = Printer {
        sig,
        g: style.glyphs(),
    };
    let mut out = String::new();
    p.formula(f, 0, true, &mut out);
    out
}

pub fn term_text(sig: &Signature, t: &Term) -> String {
    let p = Printer { sig, g: &UNICODE };
    let mut out = String::new();
    p.term(t, &mut out);
    out
}

struct Printer<'a> {
    sig: &'a Signature,
    g: &'static Glyphs,
}

// Binding strength: 0 quantifier, 1 ⇒ ⇔, 2 ∨, 3 ∧, 4 ¬, 5 atom.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => 0,
        Formula::Implies(..) | Formula::Iff(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(..) => 4,
        _ => 5,
    }
}

impl Printer<'_> {
    fn binders(&self, vars: &[Var], out: &mut String) {
        let mut groups: Vec<(Vec<&str>, &str)> = Vec::new();
        for v in vars {
            match groups.last_mut() {
                Some((names, sort)) if *sort == v.sort => names.push(&v.name),
                _ => groups.push((alloc::vec![v.name.as_str()], v.sort.as_str())),
            }
        }
        let parts: Vec<String> = groups
            .iter()
            .map(|(names, sort)| format!("{} : {sort}", names.join(", ")))
            .collect();
        out.push_str(&parts.join("; "));
    }

    /// Prints `f` where the context needs binding strength `min`. `tail`
    /// says nothing follows `f` up to the enclosing bracket or line end.
    fn formula(&self, f: &Formula, min: u8, tail: bool, out: &mut String) {
        let needs_parens = if matches!(f, Formula::Quant(..)) {
            !tail
        } else {
            level(f) < min
        };
        if needs_parens {
            out.push('(');
            self.formula(f, 0, true, out);
            out.push(')');
            return;
        }
        match f {
            Formula::Quant(q, vars, body) => {
                out.push_str(match q {
                    Quantifier::Forall => self.g.forall,
                    Quantifier::Exists => self.g.exists,
                });
                self.binders(vars, out);
                out.push_str(" . ");
                self.formula(body, 0, true, out);
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let glyph = if matches!(f, Formula::Implies(..)) {
                    self.g.implies
                } else {
                    self.g.iff
                };
                self.formula(a, 2, false, out);
                out.push(' ');
                out.push_str(glyph);
                out.push(' ');
                let mixed = matches!(
                    (f, &**b),
                    (Formula::Implies(..), Formula::Iff(..)) | (Formula::Iff(..), Formula::Implies(..))
                );
                self.formula(b, if mixed { 2 } else { 1 }, tail, out);
            }
            Formula::Or(a, b) => self.binary(a, b, self.g.or, 2, tail, out),
            Formula::And(a, b) => self.binary(a, b, self.g.and, 3, tail, out),
            Formula::Not(a) => {
                out.push_str(self.g.not);
                self.formula(a, 4, tail, out);
            }
            Formula::Eq(l, r) => {
                self.term(l, out);
                out.push_str(" = ");
                self.term(r, out);
            }
            Formula::Member(t, s) => {
                self.term(t, out);
                let _ = write!(out, " {} {s}", self.g.member);
            }
            Formula::Pred { pred, args } => self.application(pred, args, out),
        }
    }

    fn binary(&self, a: &Formula, b: &Formula, glyph: &str, lvl: u8, tail: bool, out: &mut String) {
        self.formula(a, lvl, false, out);
        out.push(' ');
        out.push_str(glyph);
        out.push(' ');
        self.formula(b, lvl + 1, tail, out);
    }

    fn is_infix_app(&self, t: &Term) -> bool {
        matches!(t, Term::App { op, args } if args.len() == 2 && self.sig.fixity_of(op) == Fixity::Infix)
    }

    fn operand(&self, t: &Term, out: &mut String) {
        if self.is_infix_app(t) {
            out.push('(');
            self.term(t, out);
            out.push(')');
        } else {
            self.term(t, out);
        }
    }

    fn application(&self, name: &str, args: &[Term], out: &mut String) {
        match (self.sig.fixity_of(name), args) {
            (Fixity::Infix, [l, r]) => {
                self.operand(l, out);
                let _ = write!(out, " {name} ");
                self.operand(r, out);
            }
            (Fixity::Prefix, [a]) => {
                out.push_str(name);
                out.push(' ');
                self.operand(a, out);
            }
            (_, []) => out.push_str(name),
            _ => {
                out.push_str(name);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.term(a, out);
                }
                out.push(')');
            }
        }
    }

    fn term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&v.name),
            Term::App { op, args } => self.application(op, args, out),
        }
    }
}
