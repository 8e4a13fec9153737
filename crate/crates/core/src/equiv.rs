//! Equivalence of theories up to alpha-conversion and renaming of symbols.
//!
//! Two theories are isomorphic when some bijection of sorts, operations and
//! predicates preserves profiles, reflects and preserves the subsort order,
//! and maps the set of canonical axioms of one onto that of the other.
//! Labels, axiom order, duplicate axioms and fixity are irrelevant.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::formula::{canonical_form, Formula, Term};
use crate::morphism::{translate_formula, SignatureMorphism};
use crate::parser::{formula_text, PrintStyle};
use crate::signature::{Signature, SortOrder};
use crate::theory::Theory;

/// Equal up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    canonical_form(a) == canonical_form(b)
}

fn canonical_axioms(t: &Theory) -> BTreeSet<Formula> {
    t.axioms.iter().map(|a| canonical_form(&a.formula)).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Ns {
    Sort,
    Op,
    Pred,
}

/// Formula with every symbol replaced by a placeholder of its namespace.
/// Symbol positions are recorded in pre-order.
fn shape(f: &Formula, occ: &mut Vec<(Ns, String)>) -> Formula {
    fn term(t: &Term, occ: &mut Vec<(Ns, String)>) -> Term {
        match t {
            Term::Var(v) => {
                occ.push((Ns::Sort, v.sort.clone()));
                Term::var(v.name.clone(), "")
            }
            Term::App { op, args } => {
                occ.push((Ns::Op, op.clone()));
                Term::app("", args.iter().map(|a| term(a, occ)).collect())
            }
        }
    }
    use alloc::boxed::Box;
    match f {
        Formula::Quant(q, vars, body) => {
            let vars = vars
                .iter()
                .map(|v| {
                    occ.push((Ns::Sort, v.sort.clone()));
                    crate::formula::Var::new(v.name.clone(), "")
                })
                .collect();
            Formula::Quant(*q, vars, Box::new(shape(body, occ)))
        }
        Formula::Not(a) => Formula::Not(Box::new(shape(a, occ))),
        Formula::And(a, b) => Formula::And(Box::new(shape(a, occ)), Box::new(shape(b, occ))),
        Formula::Or(a, b) => Formula::Or(Box::new(shape(a, occ)), Box::new(shape(b, occ))),
        Formula::Implies(a, b) => Formula::Implies(Box::new(shape(a, occ)), Box::new(shape(b, occ))),
        Formula::Iff(a, b) => Formula::Iff(Box::new(shape(a, occ)), Box::new(shape(b, occ))),
        Formula::Eq(l, r) => Formula::Eq(term(l, occ), term(r, occ)),
        Formula::Pred { pred, args } => {
            occ.push((Ns::Pred, pred.clone()));
            Formula::pred("", args.iter().map(|a| term(a, occ)).collect())
        }
        Formula::Member(t, s) => {
            let t = term(t, occ);
            occ.push((Ns::Sort, s.clone()));
            Formula::Member(t, String::new())
        }
    }
}

/// Per-symbol invariants that any isomorphism must preserve.
type Fingerprint = Vec<(usize, usize, usize)>;

struct Profile<'a> {
    sig: &'a Signature,
    order: SortOrder,
    axioms: BTreeSet<Formula>,
    fp: BTreeMap<(Ns, String), Fingerprint>,
}

impl<'a> Profile<'a> {
    fn new(t: &'a Theory, with_axioms: bool, shapes: &mut BTreeMap<Formula, usize>) -> Self {
        let sig = &t.signature;
        let order = sig.order();
        let axioms = if with_axioms { canonical_axioms(t) } else { BTreeSet::new() };
        let mut fp: BTreeMap<(Ns, String), Fingerprint> = BTreeMap::new();
        for s in &sig.sorts {
            let (below, above) = order.degree(s);
            fp.entry((Ns::Sort, s.clone())).or_default().push((usize::MAX, below, above));
        }
        for (o, p) in &sig.ops {
            fp.entry((Ns::Op, o.clone())).or_default().push((usize::MAX, p.arity(), 0));
            for (i, s) in p.args.iter().enumerate() {
                fp.entry((Ns::Sort, s.clone())).or_default().push((usize::MAX - 1, p.arity(), i));
            }
            fp.entry((Ns::Sort, p.result.clone())).or_default().push((usize::MAX - 1, p.arity(), usize::MAX));
        }
        for (name, args) in &sig.preds {
            fp.entry((Ns::Pred, name.clone())).or_default().push((usize::MAX, args.len(), 0));
            for (i, s) in args.iter().enumerate() {
                fp.entry((Ns::Sort, s.clone())).or_default().push((usize::MAX - 2, args.len(), i));
            }
        }
        for ax in &axioms {
            let mut occ = Vec::new();
            let sh = shape(ax, &mut occ);
            let n = shapes.len();
            let id = *shapes.entry(sh).or_insert(n);
            for (pos, key) in occ.into_iter().enumerate() {
                fp.entry(key).or_default().push((id, pos, 0));
            }
        }
        for v in fp.values_mut() {
            v.sort_unstable();
        }
        Profile { sig, order, axioms, fp }
    }

    fn fingerprint(&self, ns: Ns, name: &str) -> &[(usize, usize, usize)] {
        self.fp.get(&(ns, name.to_string())).map(Vec::as_slice).unwrap_or(&[])
    }

    fn candidates(&self, other: &Profile<'_>, ns: Ns, name: &str, pool: &[&'a str]) -> Vec<&'a str> {
        let want = other.fingerprint(ns, name);
        let mut out: Vec<&str> = pool.iter().copied().filter(|c| self.fingerprint(ns, c) == want).collect();
        // Same-name candidates first, so the identity is found at once.
        if let Some(i) = out.iter().position(|c| *c == name) {
            out.swap(0, i);
        }
        out
    }
}

struct Search<'a, 'b> {
    a: &'b Profile<'a>,
    b: &'b Profile<'a>,
    sorts: Vec<(&'a str, Vec<&'a str>)>,
    ops: Vec<&'a str>,
    preds: Vec<&'a str>,
    check_axioms: bool,
    m: SignatureMorphism,
    used: BTreeSet<(Ns, &'a str)>,
    budget: u64,
}

impl<'a> Search<'a, '_> {
    fn sorts_from(&mut self, i: usize) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        if i == self.sorts.len() {
            return self.ops_from(0);
        }
        let (s, cands) = self.sorts[i].clone();
        for c in cands {
            if self.used.contains(&(Ns::Sort, c)) || !self.order_consistent(s, c) {
                continue;
            }
            self.m.sorts.insert(s.into(), c.into());
            self.used.insert((Ns::Sort, c));
            if self.sorts_from(i + 1) {
                return true;
            }
            self.used.remove(&(Ns::Sort, c));
            self.m.sorts.remove(s);
        }
        false
    }

    fn order_consistent(&self, s: &str, c: &str) -> bool {
        self.m.sorts.iter().all(|(t, d)| {
            self.a.order.leq(s, t) == self.b.order.leq(c, d) && self.a.order.leq(t, s) == self.b.order.leq(d, c)
        })
    }

    fn map_sorts(&self, xs: &[String]) -> Vec<String> {
        xs.iter().map(|s| self.sort_image(s)).collect()
    }

    /// Sorts a profile mentions but the signature lacks map to no candidate.
    fn sort_image(&self, s: &str) -> String {
        self.m.sorts.get(s).cloned().unwrap_or_else(|| format!("?{s}"))
    }

    fn ops_from(&mut self, i: usize) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        if i == self.ops.len() {
            return self.preds_from(0);
        }
        let o = self.ops[i];
        let p = &self.a.sig.ops[o];
        let (args, result) = (self.map_sorts(&p.args), self.sort_image(&p.result));
        let pool: Vec<&str> = self
            .b
            .sig
            .ops
            .iter()
            .filter(|(_, q)| q.args == args && q.result == result)
            .map(|(n, _)| n.as_str())
            .collect();
        for c in self.b.candidates(self.a, Ns::Op, o, &pool) {
            if self.used.contains(&(Ns::Op, c)) {
                continue;
            }
            self.m.ops.insert(o.into(), c.into());
            self.used.insert((Ns::Op, c));
            if self.ops_from(i + 1) {
                return true;
            }
            self.used.remove(&(Ns::Op, c));
            self.m.ops.remove(o);
        }
        false
    }

    fn preds_from(&mut self, i: usize) -> bool {
        if i == self.preds.len() {
            return self.axioms_match();
        }
        let p = self.preds[i];
        let args = self.map_sorts(&self.a.sig.preds[p]);
        let pool: Vec<&str> = self
            .b
            .sig
            .preds
            .iter()
            .filter(|(_, q)| **q == args)
            .map(|(n, _)| n.as_str())
            .collect();
        for c in self.b.candidates(self.a, Ns::Pred, p, &pool) {
            if self.used.contains(&(Ns::Pred, c)) {
                continue;
            }
            self.m.preds.insert(p.into(), c.into());
            self.used.insert((Ns::Pred, c));
            if self.preds_from(i + 1) {
                return true;
            }
            self.used.remove(&(Ns::Pred, c));
            self.m.preds.remove(p);
        }
        false
    }

    fn axioms_match(&self) -> bool {
        if !self.check_axioms {
            return true;
        }
        let mut image = BTreeSet::new();
        for f in &self.a.axioms {
            match translate_formula(&self.m, f) {
                Ok(g) if self.b.axioms.contains(&g) => {
                    image.insert(g);
                }
                _ => return false,
            }
        }
        image.len() == self.b.axioms.len()
    }
}

fn counts(t: &Signature) -> (usize, usize, usize, usize) {
    (t.sorts.len(), t.ops.len(), t.preds.len(), t.order().strict_pairs().len())
}

fn search(a: &Theory, b: &Theory, check_axioms: bool) -> Option<SignatureMorphism> {
    let (sa, sb) = (&a.signature, &b.signature);
    if counts(sa) != counts(sb) {
        return None;
    }
    let mut shapes = BTreeMap::new();
    let pa = Profile::new(a, check_axioms, &mut shapes);
    let pb = Profile::new(b, check_axioms, &mut shapes);
    if pa.axioms.len() != pb.axioms.len() {
        return None;
    }
    let sort_pool: Vec<&str> = sb.sorts.iter().map(String::as_str).collect();
    let mut sorts: Vec<(&str, Vec<&str>)> = sa
        .sorts
        .iter()
        .map(|s| (s.as_str(), pb.candidates(&pa, Ns::Sort, s, &sort_pool)))
        .collect();
    if sorts.iter().any(|(_, c)| c.is_empty()) {
        return None;
    }
    sorts.sort_by_key(|(_, c)| c.len());
    let mut ops: Vec<&str> = sa.ops.keys().map(String::as_str).collect();
    ops.sort_by_key(|o| {
        let pool: Vec<&str> = sb.ops.keys().map(String::as_str).collect();
        pb.candidates(&pa, Ns::Op, o, &pool).len()
    });
    let preds: Vec<&str> = sa.preds.keys().map(String::as_str).collect();
    let mut s = Search {
        a: &pa,
        b: &pb,
        sorts,
        ops,
        preds,
        check_axioms,
        m: SignatureMorphism::new(),
        used: BTreeSet::new(),
        budget: 5_000_000,
    };
    if s.sorts_from(0) {
        Some(s.m)
    } else {
        None
    }
}

/// A symbol bijection from `a` to `b` under which the theories coincide.
pub fn find_isomorphism(a: &Theory, b: &Theory) -> Option<SignatureMorphism> {
    search(a, b, true)
}

/// A bijection preserving profiles and the subsort order. Axioms are ignored.
pub fn find_signature_isomorphism(a: &Signature, b: &Signature) -> Option<SignatureMorphism> {
    search(&Theory::new("a", a.clone()), &Theory::new("b", b.clone()), false)
}

const SHOWN_AXIOMS: usize = 5;

/// Human-readable reason why `a` and `b` are not isomorphic: the first count
/// that differs, or the axioms that do not correspond under the
/// name-preserving map.
pub fn explain_mismatch(a: &Theory, b: &Theory) -> String {
    let (sa, sb) = (&a.signature, &b.signature);
    let rows = [
        ("sorts", sa.sorts.len(), sb.sorts.len()),
        ("operations", sa.ops.len(), sb.ops.len()),
        ("predicates", sa.preds.len(), sb.preds.len()),
        (
            "strict subsort pairs",
            sa.order().strict_pairs().len(),
            sb.order().strict_pairs().len(),
        ),
        ("distinct axioms", canonical_axioms(a).len(), canonical_axioms(b).len()),
    ];
    let mut out = String::new();
    if let Some((what, x, y)) = rows.iter().find(|(_, x, y)| x != y) {
        out = format!("`{}` has {x} {what}, `{}` has {y}", a.name, b.name);
    }
    let names_a: BTreeSet<_> = sa.sorts.iter().chain(sa.ops.keys()).chain(sa.preds.keys()).collect();
    let names_b: BTreeSet<_> = sb.sorts.iter().chain(sb.ops.keys()).chain(sb.preds.keys()).collect();
    let only_a: Vec<_> = names_a.difference(&names_b).map(|s| s.as_str()).collect();
    let only_b: Vec<_> = names_b.difference(&names_a).map(|s| s.as_str()).collect();
    let mut push = |line: String| {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&line);
    };
    if !only_a.is_empty() || !only_b.is_empty() {
        push(format!(
            "symbols only in `{}`: {}; only in `{}`: {}",
            a.name,
            only_a.join(", "),
            b.name,
            only_b.join(", ")
        ));
    }
    for (name, profile) in &sa.ops {
        if let Some(other) = sb.ops.get(name) {
            if other != profile {
                push(format!("operation `{name}` has different profiles"));
            }
        }
    }
    let (ca, cb) = (canonical_axioms(a), canonical_axioms(b));
    let style = PrintStyle::default();
    for (x, y, t, sig) in [(&ca, &cb, a, sa), (&cb, &ca, b, sb)] {
        let missing: Vec<&Formula> = x.difference(y).collect();
        for f in missing.iter().take(SHOWN_AXIOMS) {
            let label = t
                .axioms
                .iter()
                .find(|ax| canonical_form(&ax.formula) == **f)
                .map(|ax| ax.label.as_str())
                .unwrap_or("?");
            push(format!(
                "axiom {label} of `{}` has no counterpart: {}",
                t.name,
                formula_text(sig, f, style)
            ));
        }
        if missing.len() > SHOWN_AXIOMS {
            push(format!(
                "... and {} more axioms of `{}` without counterpart",
                missing.len() - SHOWN_AXIOMS,
                t.name
            ));
        }
    }
    if out.is_empty() {
        out = String::from("the theories are equal up to symbol names");
    }
    out
}
