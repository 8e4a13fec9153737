//! Blends: the pushout of a span `left ← generic → right`, and conceptual
//! identification, the quotient of one theory by chosen symbol pairs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::checker::{check_morphism, check_signature};
use crate::diagnostic::Diagnostic;
use crate::formula::{canonical_form, Formula};
use crate::morphism::{translate_formula, SignatureMorphism};
use crate::signature::{Fixity, OpProfile, Signature};
use crate::theory::{Axiom, Theory};

/// Disjoint sets over `0..n`. The root of a set is its first member, as
/// [`UnionFind::union`] attaches the second argument's set below the first.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, keep: usize, other: usize) {
        let (a, b) = (self.find(keep), self.find(other));
        if a != b {
            self.parent[b] = a;
        }
    }
}

/// `left ← generic → right`, with each leg given as a morphism into its theory.
#[derive(Debug, Clone, Copy)]
pub struct BlendSpan<'a> {
    pub generic: &'a Theory,
    pub left: (&'a SignatureMorphism, &'a Theory),
    pub right: (&'a SignatureMorphism, &'a Theory),
}

/// The blended theory and the two injections of the cocone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlendResult {
    pub theory: Theory,
    pub left: SignatureMorphism,
    pub right: SignatureMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PushoutError {
    #[error("the {side} leg is not a signature morphism: {}", first_message(.diagnostics))]
    InvalidLeg {
        side: &'static str,
        diagnostics: Vec<Diagnostic>,
    },
    /// Cannot happen for legs that pass [`check_morphism`]; kept as a guard.
    #[error("generic symbol `{symbol}` is sent to `{left}` and `{right}`, whose profiles differ after merging sorts")]
    IncompatibleMerge {
        symbol: String,
        left: String,
        right: String,
    },
    #[error("merging sorts creates a subsort cycle between `{0}` and `{1}`")]
    SubsortCycle(String, String),
}

fn first_message(d: &[Diagnostic]) -> String {
    d.first().map(|d| d.message.clone()).unwrap_or_default()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Left,
    Right,
}

/// One namespace of the disjoint union `left + right`.
struct Classes<'a> {
    members: Vec<(Side, &'a str)>,
    index: BTreeMap<(Side, &'a str), usize>,
    uf: UnionFind,
}

impl<'a> Classes<'a> {
    fn new(left: impl Iterator<Item = &'a str>, right: impl Iterator<Item = &'a str>) -> Self {
        let members: Vec<_> = left
            .map(|s| (Side::Left, s))
            .chain(right.map(|s| (Side::Right, s)))
            .collect();
        let index = members.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let n = members.len();
        Classes {
            members,
            index,
            uf: UnionFind::new(n),
        }
    }

    fn merge(&mut self, l: &str, r: &str) {
        let (Some(&a), Some(&b)) = (self.index.get(&(Side::Left, l)), self.index.get(&(Side::Right, r))) else {
            return;
        };
        self.uf.union(a, b);
    }

    fn root(&mut self, side: Side, name: &str) -> usize {
        let i = self.index[&(side, name)];
        self.uf.find(i)
    }
}

/// Assigns a name to every class, avoiding names already in `taken`.
/// Classes hit by the generic signature take the smallest generic name,
/// then come the remaining left symbols, then the right ones.
fn name_classes(
    classes: &mut Classes<'_>,
    generic_names: &BTreeMap<usize, BTreeSet<String>>,
    taken: &mut BTreeSet<String>,
) -> BTreeMap<usize, String> {
    let mut names = BTreeMap::new();
    let claim = |base: &str, taken: &mut BTreeSet<String>| {
        let mut candidate = String::from(base);
        let mut k = 0;
        while taken.contains(&candidate) {
            k += 1;
            candidate = format!("{base}_{k}");
        }
        taken.insert(candidate.clone());
        candidate
    };
    for (root, gnames) in generic_names {
        let base = gnames.iter().next().expect("non-empty");
        names.insert(*root, claim(base, taken));
    }
    for side in [Side::Left, Side::Right] {
        for i in 0..classes.members.len() {
            let (s, name) = classes.members[i];
            if s != side {
                continue;
            }
            let root = classes.uf.find(i);
            names.entry(root).or_insert_with(|| claim(name, taken));
        }
    }
    names
}

fn injection_entries(
    classes: &mut Classes<'_>,
    names: &BTreeMap<usize, String>,
    side: Side,
) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for i in 0..classes.members.len() {
        let (s, name) = classes.members[i];
        if s == side {
            let root = classes.uf.find(i);
            out.insert(String::from(name), names[&root].clone());
        }
    }
    out
}

/// The pushout of `span`, named `name`.
///
/// Symbols are identified exactly when the generic theory sends a common
/// symbol to them, transitively. Merged sorts keep the generic name; the
/// other symbols keep their own, with `_k` appended on a clash. Subsort
/// pairs are the images of both sides, transitively reduced. Axioms are the
/// images of both sides, left first, without alpha-equivalent duplicates.
pub fn pushout(span: &BlendSpan<'_>, name: &str) -> Result<BlendResult, PushoutError> {
    let g = &span.generic.signature;
    let (ml, tl) = span.left;
    let (mr, tr) = span.right;
    let (ls, rs) = (&tl.signature, &tr.signature);
    for (side, m, t) in [("left", ml, ls), ("right", mr, rs)] {
        let diagnostics = check_morphism(m, g, t);
        if !diagnostics.is_empty() {
            return Err(PushoutError::InvalidLeg { side, diagnostics });
        }
    }

    let mut sorts = Classes::new(ls.sorts.iter().map(String::as_str), rs.sorts.iter().map(String::as_str));
    let mut ops = Classes::new(ls.ops.keys().map(String::as_str), rs.ops.keys().map(String::as_str));
    let mut preds = Classes::new(ls.preds.keys().map(String::as_str), rs.preds.keys().map(String::as_str));
    for s in &g.sorts {
        sorts.merge(ml.sort(s).unwrap(), mr.sort(s).unwrap());
    }
    for o in g.ops.keys() {
        ops.merge(ml.op(o).unwrap(), mr.op(o).unwrap());
    }
    for p in g.preds.keys() {
        preds.merge(ml.pred(p).unwrap(), mr.pred(p).unwrap());
    }

    let generic_names = |classes: &mut Classes<'_>, items: &mut dyn Iterator<Item = (&String, &str)>| {
        let mut out: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for (gname, limg) in items {
            let root = classes.root(Side::Left, limg);
            out.entry(root).or_default().insert(gname.clone());
        }
        out
    };
    let gs = generic_names(&mut sorts, &mut g.sorts.iter().map(|s| (s, ml.sort(s).unwrap())));
    let go = generic_names(&mut ops, &mut g.ops.keys().map(|s| (s, ml.op(s).unwrap())));
    let gp = generic_names(&mut preds, &mut g.preds.keys().map(|s| (s, ml.pred(s).unwrap())));

    let mut taken = BTreeSet::new();
    let sort_names = name_classes(&mut sorts, &gs, &mut taken);
    let op_names = name_classes(&mut ops, &go, &mut taken);
    let pred_names = name_classes(&mut preds, &gp, &mut taken);

    let left = SignatureMorphism {
        sorts: injection_entries(&mut sorts, &sort_names, Side::Left),
        ops: injection_entries(&mut ops, &op_names, Side::Left),
        preds: injection_entries(&mut preds, &pred_names, Side::Left),
    };
    let right = SignatureMorphism {
        sorts: injection_entries(&mut sorts, &sort_names, Side::Right),
        ops: injection_entries(&mut ops, &op_names, Side::Right),
        preds: injection_entries(&mut preds, &pred_names, Side::Right),
    };

    let map_sorts = |m: &SignatureMorphism, xs: &[String]| -> Vec<String> {
        xs.iter().map(|s| m.sort(s).unwrap().into()).collect()
    };
    for o in g.ops.keys() {
        let (lo, ro) = (ml.op(o).unwrap(), mr.op(o).unwrap());
        let (lp, rp) = (&ls.ops[lo], &rs.ops[ro]);
        if map_sorts(&left, &lp.args) != map_sorts(&right, &rp.args)
            || left.sort(&lp.result) != right.sort(&rp.result)
        {
            return Err(PushoutError::IncompatibleMerge {
                symbol: o.clone(),
                left: lo.into(),
                right: ro.into(),
            });
        }
    }
    for p in g.preds.keys() {
        let (lo, ro) = (ml.pred(p).unwrap(), mr.pred(p).unwrap());
        if map_sorts(&left, &ls.preds[lo]) != map_sorts(&right, &rs.preds[ro]) {
            return Err(PushoutError::IncompatibleMerge {
                symbol: p.clone(),
                left: lo.into(),
                right: ro.into(),
            });
        }
    }

    let mut sig = Signature::new();
    for s in sort_names.values() {
        sig.add_sort(s.clone());
    }
    for (side_sig, inj) in [(ls, &left), (rs, &right)] {
        for (c, p) in &side_sig.subsorts {
            let (c, p) = (inj.sort(c).unwrap(), inj.sort(p).unwrap());
            if c != p {
                sig.add_subsort(c, p);
            }
        }
    }
    let order = sig.order();
    if let Some((a, b)) = order.cycles().into_iter().next() {
        return Err(PushoutError::SubsortCycle(a, b));
    }
    sig.subsorts = order.reduction();

    // The fixity of a merged symbol follows the symbol that gave its name.
    let fixity_for = |from_generic: bool, gen_fix: Fixity, side_fix: Fixity| {
        if from_generic {
            gen_fix
        } else {
            side_fix
        }
    };
    for (side_sig, inj) in [(ls, &left), (rs, &right)] {
        for (o, prof) in &side_sig.ops {
            let img = inj.op(o).unwrap();
            let profile = OpProfile::new(map_sorts(inj, &prof.args), inj.sort(&prof.result).unwrap());
            if !sig.ops.contains_key(img) {
                sig.add_op(img, profile);
                let from_generic = g.ops.contains_key(img);
                let fix = fixity_for(from_generic, g.fixity_of(img), side_sig.fixity_of(o));
                sig.set_fixity(img, fix);
            }
        }
        for (p, args) in &side_sig.preds {
            let img = inj.pred(p).unwrap();
            if !sig.preds.contains_key(img) {
                sig.add_pred(img, map_sorts(inj, args));
                let from_generic = g.preds.contains_key(img);
                let fix = fixity_for(from_generic, g.fixity_of(img), side_sig.fixity_of(p));
                sig.set_fixity(img, fix);
            }
        }
    }

    let mut sink = AxiomSink::new(Theory::new(name, sig));
    for (t, inj) in [(tl, &left), (tr, &right)] {
        for ax in &t.axioms {
            let formula = translate_formula(inj, &ax.formula).expect("injection is total");
            sink.push(ax, formula);
        }
    }
    Ok(BlendResult {
        theory: sink.theory,
        left,
        right,
    })
}

/// Appends `formula` unless an alpha-equivalent axiom is already present.
/// A clashing label gets `_k`, with `k` counted across the whole theory.
struct AxiomSink {
    theory: Theory,
    seen: BTreeSet<Formula>,
    labels: BTreeSet<String>,
    suffix: usize,
}

impl AxiomSink {
    fn new(theory: Theory) -> Self {
        AxiomSink {
            theory,
            seen: BTreeSet::new(),
            labels: BTreeSet::new(),
            suffix: 0,
        }
    }

    fn push(&mut self, ax: &Axiom, formula: Formula) {
        if self.seen.insert(canonical_form(&formula)) {
            self.push_always(ax, formula);
        }
    }

    fn push_always(&mut self, ax: &Axiom, formula: Formula) {
        let mut label = ax.label.clone();
        while self.labels.contains(&label) {
            self.suffix += 1;
            label = format!("{}_{}", ax.label, self.suffix);
        }
        self.labels.insert(label.clone());
        self.theory.push_axiom(Axiom {
            label,
            formula,
            doc: ax.doc.clone(),
        });
    }
}

/// Pairs to merge inside one theory. In every pair the first name survives.
/// `renames` apply to the merged theory, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentificationRequest {
    pub sorts: Vec<(String, String)>,
    /// Operation or predicate pairs.
    pub symbols: Vec<(String, String)>,
    pub renames: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentifyError {
    #[error("`{0}` is not declared in the theory")]
    UnknownSymbol(String),
    #[error("`{0}` and `{1}` are in different namespaces")]
    NamespaceMismatch(String, String),
    #[error("`{0}` and `{1}` have different profiles once sorts are merged")]
    IncompatibleProfiles(String, String),
    #[error("cannot rename `{from}` to `{to}`: the name is already used")]
    RenameCollision { from: String, to: String },
    #[error("merging sorts creates a subsort cycle between `{0}` and `{1}`")]
    SubsortCycle(String, String),
    #[error("the identified theory is ill-formed: {}", first_message(.0))]
    IllFormed(Vec<Diagnostic>),
}

fn merge_names(
    universe: &[String],
    pairs: &[(String, String)],
) -> Result<BTreeMap<String, String>, IdentifyError> {
    let index: BTreeMap<&str, usize> = universe.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut uf = UnionFind::new(universe.len());
    for (a, b) in pairs {
        let ia = *index.get(a.as_str()).ok_or_else(|| IdentifyError::UnknownSymbol(a.clone()))?;
        let ib = *index.get(b.as_str()).ok_or_else(|| IdentifyError::UnknownSymbol(b.clone()))?;
        uf.union(ia, ib);
    }
    Ok(universe
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), universe[uf.find(i)].clone()))
        .collect())
}

/// Quotient of `theory` by `request`, named `name`, and the quotient map.
pub fn identify(
    theory: &Theory,
    request: &IdentificationRequest,
    name: &str,
) -> Result<(Theory, SignatureMorphism), IdentifyError> {
    let sig = &theory.signature;
    let sorts: Vec<String> = sig.sorts.iter().cloned().collect();
    let mut q = SignatureMorphism {
        sorts: merge_names(&sorts, &request.sorts)?,
        ..SignatureMorphism::new()
    };

    let (mut op_pairs, mut pred_pairs) = (Vec::new(), Vec::new());
    for (a, b) in &request.symbols {
        match (sig.ops.contains_key(a), sig.ops.contains_key(b)) {
            (true, true) => op_pairs.push((a.clone(), b.clone())),
            (false, false) if sig.preds.contains_key(a) && sig.preds.contains_key(b) => {
                pred_pairs.push((a.clone(), b.clone()))
            }
            _ if !sig.declares(a) || sig.sorts.contains(a) => return Err(IdentifyError::UnknownSymbol(a.clone())),
            _ if !sig.declares(b) || sig.sorts.contains(b) => return Err(IdentifyError::UnknownSymbol(b.clone())),
            _ => return Err(IdentifyError::NamespaceMismatch(a.clone(), b.clone())),
        }
    }
    let op_names: Vec<String> = sig.ops.keys().cloned().collect();
    let pred_names: Vec<String> = sig.preds.keys().cloned().collect();
    q.ops = merge_names(&op_names, &op_pairs)?;
    q.preds = merge_names(&pred_names, &pred_pairs)?;

    let map_sorts = |q: &SignatureMorphism, xs: &[String]| -> Vec<String> {
        xs.iter().map(|s| q.sort(s).unwrap().into()).collect()
    };
    for (a, b) in &op_pairs {
        let (pa, pb) = (&sig.ops[a], &sig.ops[b]);
        if map_sorts(&q, &pa.args) != map_sorts(&q, &pb.args) || q.sort(&pa.result) != q.sort(&pb.result) {
            return Err(IdentifyError::IncompatibleProfiles(a.clone(), b.clone()));
        }
    }
    for (a, b) in &pred_pairs {
        if map_sorts(&q, &sig.preds[a]) != map_sorts(&q, &sig.preds[b]) {
            return Err(IdentifyError::IncompatibleProfiles(a.clone(), b.clone()));
        }
    }

    for (from, to) in &request.renames {
        let in_image = |m: &BTreeMap<String, String>, n: &str| m.values().any(|v| v == n);
        let used = |q: &SignatureMorphism, n: &str| {
            in_image(&q.sorts, n) || in_image(&q.ops, n) || in_image(&q.preds, n)
        };
        if !used(&q, from) {
            return Err(IdentifyError::UnknownSymbol(from.clone()));
        }
        if from == to {
            continue;
        }
        if used(&q, to) {
            return Err(IdentifyError::RenameCollision {
                from: from.clone(),
                to: to.clone(),
            });
        }
        for m in [&mut q.sorts, &mut q.ops, &mut q.preds] {
            for v in m.values_mut() {
                if v == from {
                    *v = to.clone();
                }
            }
        }
    }

    let mut out = Signature::new();
    for s in q.sorts.values() {
        out.add_sort(s.clone());
    }
    for (c, p) in &sig.subsorts {
        let (c, p) = (q.sort(c).unwrap(), q.sort(p).unwrap());
        if c != p {
            out.add_subsort(c, p);
        }
    }
    if let Some((a, b)) = out.order().cycles().into_iter().next() {
        return Err(IdentifyError::SubsortCycle(a, b));
    }
    for (o, prof) in &sig.ops {
        let img = q.op(o).unwrap();
        if !out.ops.contains_key(img) {
            out.add_op(img, OpProfile::new(map_sorts(&q, &prof.args), q.sort(&prof.result).unwrap()));
            out.set_fixity(img, sig.fixity_of(o));
        }
    }
    for (p, args) in &sig.preds {
        let img = q.pred(p).unwrap();
        if !out.preds.contains_key(img) {
            out.add_pred(img, map_sorts(&q, args));
            out.set_fixity(img, sig.fixity_of(p));
        }
    }
    let diags = check_signature(&out);
    if !diags.is_empty() {
        return Err(IdentifyError::IllFormed(diags));
    }

    // Only duplicates created by the merge are dropped.
    let mut sink = AxiomSink::new(Theory::new(name, out));
    let mut before = BTreeSet::new();
    for ax in &theory.axioms {
        let formula = translate_formula(&q, &ax.formula).expect("quotient map is total");
        if before.insert(canonical_form(&ax.formula)) {
            sink.push(ax, formula);
        } else {
            sink.push_always(ax, formula);
        }
    }
    Ok((sink.theory, q))
}
