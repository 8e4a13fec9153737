//! Seeded generators for theories and spans, and brute-force oracles for
//! signature morphisms. Shared by the integration tests of both crates.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use blend_core::{
    translate_formula, Axiom, BlendSpan, Fixity, Formula, OpProfile, Signature, SignatureMorphism, Term, Theory, Var,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Reflexive-transitive closure of the declared subsorts, computed directly.
pub fn leq(sig: &Signature, a: &str, b: &str) -> bool {
    let mut seen = BTreeSet::new();
    let mut todo = vec![a.to_string()];
    while let Some(s) = todo.pop() {
        if s == b {
            return true;
        }
        if seen.insert(s.clone()) {
            for (c, p) in &sig.subsorts {
                if *c == s {
                    todo.push(p.clone());
                }
            }
        }
    }
    false
}

pub fn acyclic(sig: &Signature) -> bool {
    sig.subsorts.iter().all(|(c, p)| c != p && !leq(sig, p, c))
}

fn map_sorts<'a>(m: &BTreeMap<String, String>, xs: impl IntoIterator<Item = &'a String>) -> Option<Vec<String>> {
    xs.into_iter().map(|s| m.get(s).cloned()).collect()
}

/// All signature morphisms from `src` to `tgt`, by exhaustive enumeration.
pub fn morphisms(src: &Signature, tgt: &Signature) -> Vec<SignatureMorphism> {
    let ss: Vec<&String> = src.sorts.iter().collect();
    let ts: Vec<&String> = tgt.sorts.iter().collect();
    let mut out = Vec::new();
    if ts.is_empty() {
        if ss.is_empty() && src.ops.is_empty() && src.preds.is_empty() {
            out.push(SignatureMorphism::new());
        }
        return out;
    }
    let total = ts.len().pow(ss.len() as u32);
    for code in 0..total {
        let mut sorts = BTreeMap::new();
        let mut c = code;
        for s in &ss {
            sorts.insert((*s).clone(), ts[c % ts.len()].clone());
            c /= ts.len();
        }
        if !src.subsorts.iter().all(|(a, b)| leq(tgt, &sorts[a], &sorts[b])) {
            continue;
        }
        let mut partial = vec![SignatureMorphism {
            sorts: sorts.clone(),
            ..SignatureMorphism::new()
        }];
        for (op, p) in &src.ops {
            let args = map_sorts(&sorts, &p.args).unwrap();
            let res = sorts[&p.result].clone();
            let cands: Vec<&String> = tgt
                .ops
                .iter()
                .filter(|(_, q)| q.args == args && q.result == res)
                .map(|(n, _)| n)
                .collect();
            partial = partial
                .into_iter()
                .flat_map(|m| {
                    cands.iter().map(move |c| {
                        let mut m = m.clone();
                        m.ops.insert(op.clone(), (*c).clone());
                        m
                    })
                })
                .collect();
        }
        for (pred, args) in &src.preds {
            let args = map_sorts(&sorts, args).unwrap();
            let cands: Vec<&String> = tgt.preds.iter().filter(|(_, q)| **q == args).map(|(n, _)| n).collect();
            partial = partial
                .into_iter()
                .flat_map(|m| {
                    cands.iter().map(move |c| {
                        let mut m = m.clone();
                        m.preds.insert(pred.clone(), (*c).clone());
                        m
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

/// `first` followed by `second`, on the symbols `first` maps.
pub fn compose(first: &SignatureMorphism, second: &SignatureMorphism) -> SignatureMorphism {
    let go = |a: &BTreeMap<String, String>, b: &BTreeMap<String, String>| {
        a.iter()
            .map(|(k, v)| (k.clone(), b.get(v).cloned().unwrap_or_else(|| format!("?{v}"))))
            .collect::<BTreeMap<_, _>>()
    };
    SignatureMorphism {
        sorts: go(&first.sorts, &second.sorts),
        ops: go(&first.ops, &second.ops),
        preds: go(&first.preds, &second.preds),
    }
}

/// A signature with one sort per name, ordered by `subsorts`, and exactly one
/// op for every profile of arity at most 2 and one pred for every profile of
/// arity 1 or 2.
pub fn full_signature(sorts: &[&str], subsorts: &[(&str, &str)]) -> Signature {
    let mut sig = Signature::new();
    for s in sorts {
        sig.add_sort(*s);
    }
    for (c, p) in subsorts {
        sig.add_subsort(*c, *p);
    }
    let mut profiles: Vec<Vec<&str>> = vec![vec![]];
    for _ in 0..2 {
        let longer: Vec<Vec<&str>> = profiles
            .iter()
            .filter(|p| p.len() < 2)
            .flat_map(|p| {
                sorts.iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
        for p in longer {
            if !profiles.contains(&p) {
                profiles.push(p);
            }
        }
    }
    for args in &profiles {
        for r in sorts {
            sig.add_op(format!("o_{}_{r}", args.join("_")), OpProfile::new(args.iter().copied(), *r));
        }
        if !args.is_empty() {
            sig.add_pred(format!("p_{}", args.join("_")), args.iter().copied());
        }
    }
    sig
}

pub struct SynthSpan {
    pub generic: Theory,
    pub left: (SignatureMorphism, Theory),
    pub right: (SignatureMorphism, Theory),
}

impl SynthSpan {
    pub fn span(&self) -> BlendSpan<'_> {
        BlendSpan {
            generic: &self.generic,
            left: (&self.left.0, &self.left.1),
            right: (&self.right.0, &self.right.1),
        }
    }

    pub fn swapped(&self) -> BlendSpan<'_> {
        BlendSpan {
            generic: &self.generic,
            left: (&self.right.0, &self.right.1),
            right: (&self.left.0, &self.left.1),
        }
    }
}

const SPAN_SORTS: [&str; 3] = ["S", "T", "U"];
const SPAN_OPS: [&str; 3] = ["f", "g", "h"];
const SPAN_PREDS: [&str; 3] = ["p", "q", "r"];

fn random_symbol(rng: &mut impl Rng, sig: &mut Signature, sorts: &[String]) -> bool {
    let pick = |rng: &mut dyn rand::RngCore| sorts[rng.gen_range(0..sorts.len())].clone();
    if rng.gen_bool(0.6) {
        let Some(name) = SPAN_OPS.iter().find(|n| !sig.ops.contains_key(**n)) else { return false };
        let args: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| pick(rng)).collect();
        sig.add_op(*name, OpProfile::new(args, pick(rng)));
    } else {
        let Some(name) = SPAN_PREDS.iter().find(|n| !sig.preds.contains_key(**n)) else { return false };
        let args: Vec<String> = (0..rng.gen_range(1..=2)).map(|_| pick(rng)).collect();
        sig.add_pred(*name, args);
    }
    true
}

/// `∀ vars . P(vars)` or its negation, for some predicate of `sig`.
fn pred_axiom(rng: &mut impl Rng, sig: &Signature) -> Option<Formula> {
    let preds: Vec<(&String, &Vec<String>)> = sig.preds.iter().collect();
    let (p, args) = preds.choose(rng)?;
    let vars: Vec<Var> = args.iter().enumerate().map(|(i, s)| Var::new(format!("x{i}"), s)).collect();
    let atom = Formula::pred(*p, vars.iter().map(|v| Term::Var(v.clone())).collect());
    let body = if rng.gen_bool(0.5) { atom } else { Formula::not(atom) };
    Some(Formula::forall(vars, body))
}

fn sort_names(sig: &Signature) -> Vec<String> {
    sig.sorts.iter().cloned().collect()
}

/// Image of `generic` under a random sort map, plus extra symbols, as a
/// theory with a morphism from `generic`.
fn random_leg(rng: &mut impl Rng, generic: &Theory, name: &str, axioms: bool) -> (SignatureMorphism, Theory) {
    loop {
        let gs = &generic.signature;
        let n = rng.gen_range(1..=3);
        let mut pool = SPAN_SORTS.to_vec();
        pool.shuffle(rng);
        let own: Vec<String> = pool[..n].iter().map(|s| s.to_string()).collect();
        let mut m = SignatureMorphism::new();
        for s in &gs.sorts {
            m.sorts.insert(s.clone(), own[rng.gen_range(0..n)].clone());
        }
        let mut sig = Signature::new();
        for s in &own {
            sig.add_sort(s.clone());
        }
        for (c, p) in &gs.subsorts {
            if m.sorts[c] != m.sorts[p] {
                sig.add_subsort(m.sorts[c].clone(), m.sorts[p].clone());
            }
        }
        if rng.gen_bool(0.3) && n > 1 {
            let (a, b) = (own[0].clone(), own[1].clone());
            sig.add_subsort(a, b);
        }
        if !acyclic(&sig) {
            continue;
        }
        let mut fresh_ops = SPAN_OPS.to_vec();
        fresh_ops.shuffle(rng);
        for (op, p) in &gs.ops {
            let prof = OpProfile::new(map_sorts(&m.sorts, &p.args).unwrap(), m.sorts[&p.result].clone());
            let reuse = sig.ops.iter().find(|(_, q)| **q == prof).map(|(n, _)| n.clone());
            let target = match reuse {
                Some(n) if rng.gen_bool(0.3) => n,
                _ => {
                    let n = fresh_ops.iter().find(|n| !sig.ops.contains_key(**n)).unwrap().to_string();
                    sig.add_op(n.clone(), prof);
                    n
                }
            };
            m.ops.insert(op.clone(), target);
        }
        let mut fresh_preds = SPAN_PREDS.to_vec();
        fresh_preds.shuffle(rng);
        for (pred, args) in &gs.preds {
            let args = map_sorts(&m.sorts, args).unwrap();
            let reuse = sig.preds.iter().find(|(_, q)| **q == args).map(|(n, _)| n.clone());
            let target = match reuse {
                Some(n) if rng.gen_bool(0.3) => n,
                _ => {
                    let n = fresh_preds.iter().find(|n| !sig.preds.contains_key(**n)).unwrap().to_string();
                    sig.add_pred(n.clone(), args);
                    n
                }
            };
            m.preds.insert(pred.clone(), target);
        }
        let sorts = sort_names(&sig);
        while sig.symbol_count() < 3 && rng.gen_bool(0.5) {
            if !random_symbol(rng, &mut sig, &sorts) {
                break;
            }
        }
        let mut t = Theory::new(name, sig);
        if axioms {
            for (i, ax) in generic.axioms.iter().enumerate() {
                let f = translate_formula(&m, &ax.formula).unwrap();
                t.push_axiom(Axiom::new(format!("G{i}"), f));
            }
            if let Some(f) = pred_axiom(rng, &t.signature.clone()).filter(|_| rng.gen_bool(0.5)) {
                t.push_axiom(Axiom::new("Own", f));
            }
        }
        return (m, t);
    }
}

/// A span with at most 2 generic sorts and at most 3 symbols per theory.
pub fn random_span(rng: &mut impl Rng, axioms: bool) -> SynthSpan {
    let n = rng.gen_range(1..=2);
    let mut sig = Signature::new();
    let sorts: Vec<String> = SPAN_SORTS[..n].iter().map(|s| s.to_string()).collect();
    for s in &sorts {
        sig.add_sort(s.clone());
    }
    if n == 2 && rng.gen_bool(0.4) {
        sig.add_subsort("T", "S");
    }
    for _ in 0..rng.gen_range(0..=3) {
        random_symbol(rng, &mut sig, &sorts);
    }
    let mut generic = Theory::new("G", sig);
    if axioms && rng.gen_bool(0.5) {
        if let Some(f) = pred_axiom(rng, &generic.signature) {
            generic.push_axiom(Axiom::new("Base", f));
        }
    }
    let left = random_leg(rng, &generic, "L", axioms);
    let right = random_leg(rng, &generic, "R", axioms);
    SynthSpan { generic, left, right }
}

const THEORY_SORTS: [&str; 5] = ["A", "B", "Sets", "X'", "s2"];
const PREFIX_OPS: [&str; 3] = ["Uni", "neg", "inv'"];
const INFIX_OPS: [&str; 4] = ["+", "**", "inter", "ordpair"];
const PLAIN_OPS: [&str; 5] = ["f", "g2", "Addinv", "c", "0"];
const INFIX_PREDS: [&str; 3] = ["el", "subset", "<<"];
const PLAIN_PREDS: [&str; 2] = ["P", "isOpen"];
const VARS: [&str; 4] = ["x", "y", "z", "w'"];

struct FormulaGen<'a> {
    sig: &'a Signature,
}

impl FormulaGen<'_> {
    fn term(&self, rng: &mut impl Rng, env: &[Var], sort: &str, depth: u32) -> Option<Term> {
        let vars: Vec<&Var> = env.iter().filter(|v| v.sort == sort).collect();
        let ops: Vec<(&String, &OpProfile)> = self
            .sig
            .ops
            .iter()
            .filter(|(_, p)| p.result == sort && (depth > 0 || p.args.is_empty()))
            .collect();
        for _ in 0..4 {
            if !vars.is_empty() && (ops.is_empty() || rng.gen_bool(0.5)) {
                return Some(Term::Var((*vars.choose(rng).unwrap()).clone()));
            }
            let (name, p) = ops.choose(rng)?;
            let args: Option<Vec<Term>> = p.args.iter().map(|a| self.term(rng, env, a, depth - 1)).collect();
            if let Some(args) = args {
                return Some(Term::app(*name, args));
            }
        }
        None
    }

    fn any_term(&self, rng: &mut impl Rng, env: &[Var], depth: u32) -> (Term, String) {
        for _ in 0..8 {
            let s = self.sig.sorts.iter().collect::<Vec<_>>().choose(rng).unwrap().to_string();
            if let Some(t) = self.term(rng, env, &s, depth) {
                return (t, s);
            }
        }
        let v = env.choose(rng).unwrap();
        (Term::Var(v.clone()), v.sort.clone())
    }

    fn atom(&self, rng: &mut impl Rng, env: &[Var]) -> Formula {
        match rng.gen_range(0..4) {
            0 | 1 if !self.sig.preds.is_empty() => {
                let preds: Vec<_> = self.sig.preds.iter().collect();
                let (p, args) = preds.choose(rng).unwrap();
                let ts: Option<Vec<Term>> = args.iter().map(|a| self.term(rng, env, a, 2)).collect();
                match ts {
                    Some(ts) => Formula::pred(*p, ts),
                    None => self.membership(rng, env),
                }
            }
            2 => {
                let (l, s) = self.any_term(rng, env, 2);
                let r = self.term(rng, env, &s, 2).unwrap_or_else(|| l.clone());
                Formula::Eq(l, r)
            }
            _ => self.membership(rng, env),
        }
    }

    fn membership(&self, rng: &mut impl Rng, env: &[Var]) -> Formula {
        let (t, _) = self.any_term(rng, env, 1);
        let s = self.sig.sorts.iter().collect::<Vec<_>>().choose(rng).unwrap().to_string();
        Formula::member(t, s)
    }

    fn formula(&self, rng: &mut impl Rng, env: &mut Vec<Var>, depth: u32) -> Formula {
        if depth == 0 {
            return self.atom(rng, env);
        }
        match rng.gen_range(0..8) {
            0 => Formula::not(self.formula(rng, env, depth - 1)),
            1 => Formula::and(self.formula(rng, env, depth - 1), self.formula(rng, env, depth - 1)),
            2 => Formula::or(self.formula(rng, env, depth - 1), self.formula(rng, env, depth - 1)),
            3 => Formula::implies(self.formula(rng, env, depth - 1), self.formula(rng, env, depth - 1)),
            4 => Formula::iff(self.formula(rng, env, depth - 1), self.formula(rng, env, depth - 1)),
            5 => self.quantified(rng, env, depth),
            _ => self.atom(rng, env),
        }
    }

    fn quantified(&self, rng: &mut impl Rng, env: &mut Vec<Var>, depth: u32) -> Formula {
        let sorts: Vec<&String> = self.sig.sorts.iter().collect();
        let mut names = VARS.to_vec();
        names.shuffle(rng);
        let vars: Vec<Var> = names[..rng.gen_range(1..=2)]
            .iter()
            .map(|n| Var::new(*n, sorts.choose(rng).unwrap().as_str()))
            .collect();
        // Shadowed variables cannot be referred to in the text syntax.
        let saved = env.clone();
        env.retain(|v| vars.iter().all(|w| w.name != v.name));
        env.extend(vars.iter().cloned());
        let body = self.formula(rng, env, depth - 1);
        *env = saved;
        if rng.gen_bool(0.7) {
            Formula::forall(vars, body)
        } else {
            Formula::exists(vars, body)
        }
    }
}

/// A random well-formed theory with mixfix symbols, subsorts, documented and
/// labelled axioms.
pub fn random_theory(rng: &mut impl Rng, name: &str) -> Theory {
    let mut sig = Signature::new();
    let mut pool = THEORY_SORTS.to_vec();
    pool.shuffle(rng);
    let sorts: Vec<&str> = pool[..rng.gen_range(1..=4)].to_vec();
    for s in &sorts {
        sig.add_sort(*s);
    }
    for i in 0..sorts.len() {
        for j in i + 1..sorts.len() {
            if rng.gen_bool(0.25) {
                sig.add_subsort(sorts[i], sorts[j]);
            }
        }
    }
    let pick = |rng: &mut dyn rand::RngCore| sorts[rng.gen_range(0..sorts.len())];
    for name in PLAIN_OPS {
        if rng.gen_bool(0.4) {
            let args: Vec<&str> = (0..rng.gen_range(0..=2)).map(|_| pick(rng)).collect();
            sig.add_op(name, OpProfile::new(args, pick(rng)));
        }
    }
    for name in PREFIX_OPS {
        if rng.gen_bool(0.3) {
            sig.add_op(name, OpProfile::new([pick(rng)], pick(rng)));
            sig.set_fixity(name, Fixity::Prefix);
        }
    }
    for name in INFIX_OPS {
        if rng.gen_bool(0.3) {
            sig.add_op(name, OpProfile::new([pick(rng), pick(rng)], pick(rng)));
            sig.set_fixity(name, Fixity::Infix);
        }
    }
    for name in INFIX_PREDS {
        if rng.gen_bool(0.4) {
            sig.add_pred(name, [pick(rng), pick(rng)]);
            sig.set_fixity(name, Fixity::Infix);
        }
    }
    for name in PLAIN_PREDS {
        if rng.gen_bool(0.3) {
            let args: Vec<&str> = (0..rng.gen_range(1..=2)).map(|_| pick(rng)).collect();
            sig.add_pred(name, args);
        }
    }
    let mut t = Theory::new(name, sig);
    let g = FormulaGen { sig: &t.signature };
    let mut axioms = Vec::new();
    for i in 0..rng.gen_range(0..=5) {
        let ground = g.sig.sorts.iter().find_map(|s| g.term(rng, &[], s, 1));
        let f = match ground {
            Some(t) if rng.gen_bool(0.2) => {
                let s = g.sig.sorts.iter().next().unwrap().clone();
                Formula::member(t, s)
            }
            _ => {
                let depth = rng.gen_range(1..=4);
                g.quantified(rng, &mut Vec::new(), depth)
            }
        };
        let label = if rng.gen_bool(0.5) { format!("Ax{}", i + 1) } else { format!("L_{i}") };
        let mut ax = Axiom::new(label, f);
        if rng.gen_bool(0.3) {
            ax = ax.with_doc(format!("note {i}\nsecond line"));
        }
        axioms.push(ax);
    }
    for ax in axioms {
        t.push_axiom(ax);
    }
    t
}
