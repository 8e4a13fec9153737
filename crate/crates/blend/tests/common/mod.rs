#![allow(dead_code)]

#[path = "../../../core/tests/common/gen.rs"]
pub mod gen;

use std::collections::BTreeMap;

use blend_core::{pushout, PushoutError, Signature};
use conceptblend::corpus::Corpus;
use rand::Rng;

use gen::{acyclic, compose, full_signature, morphisms, SynthSpan};

/// Targets for cocones over a blend: fixed full signatures of up to three
/// sorts, and a random collapse of the blend onto at most three sorts with
/// every symbol doubled.
fn cocone_targets(rng: &mut impl Rng, blend: &Signature) -> Vec<Signature> {
    let mut out = vec![
        full_signature(&["A"], &[]),
        full_signature(&["A", "B"], &[]),
        full_signature(&["A", "B"], &[("A", "B")]),
        full_signature(&["A", "B", "C"], &[("A", "B"), ("B", "C")]),
    ];
    for _ in 0..10 {
        let names = ["A", "B", "C"];
        let k = rng.gen_range(1..=3);
        let m: BTreeMap<&String, &str> = blend.sorts.iter().map(|s| (s, names[rng.gen_range(0..k)])).collect();
        let mut sig = Signature::new();
        for s in m.values() {
            sig.add_sort(*s);
        }
        for (c, p) in &blend.subsorts {
            if m[c] != m[p] {
                sig.add_subsort(m[c], m[p]);
            }
        }
        if !acyclic(&sig) {
            continue;
        }
        for (o, p) in &blend.ops {
            let args: Vec<&str> = p.args.iter().map(|a| m[a]).collect();
            for copy in ["", "_2"] {
                sig.add_op(format!("{o}{copy}"), blend_core::OpProfile::new(args.clone(), m[&p.result]));
            }
        }
        for (q, args) in &blend.preds {
            for copy in ["", "_2"] {
                sig.add_pred(format!("{q}{copy}"), args.iter().map(|a| m[a]));
            }
        }
        out.push(sig);
        break;
    }
    out
}

/// Counts the cocones of `span` into each target and checks that every one
/// factors through the pushout in exactly one way. `Ok(None)` when the span
/// has no pushout because the merged subsorts form a cycle.
pub fn universal_property(rng: &mut impl Rng, span: &SynthSpan) -> Result<Option<usize>, String> {
    let b = match pushout(&span.span(), "B") {
        Ok(b) => b,
        Err(PushoutError::SubsortCycle(..)) => return Ok(None),
        Err(e) => return Err(e.to_string()),
    };
    let (l, r) = (&span.left.1.signature, &span.right.1.signature);
    let mut cocones = 0;
    for target in cocone_targets(rng, &b.theory.signature) {
        let mut mediating: BTreeMap<String, usize> = BTreeMap::new();
        for u in morphisms(&b.theory.signature, &target) {
            let key = format!("{:?}{:?}", compose(&b.left, &u), compose(&b.right, &u));
            *mediating.entry(key).or_default() += 1;
        }
        let rights = morphisms(r, &target);
        for cl in morphisms(l, &target) {
            let via_left = compose(&span.left.0, &cl);
            for cr in &rights {
                if compose(&span.right.0, cr) != via_left {
                    continue;
                }
                cocones += 1;
                let n = mediating.get(&format!("{cl:?}{cr:?}")).copied().unwrap_or(0);
                if n != 1 {
                    return Err(format!("a cocone has {n} mediating morphisms\n{cl:?}\n{cr:?}"));
                }
            }
        }
    }
    Ok(Some(cocones))
}

/// A corpus with one axiom changed, and the pipeline step expected to catch it.
pub struct Mutation {
    pub description: String,
    pub corpus: Corpus,
    pub expected_step: &'static str,
}

/// Specs whose axioms feed a golden check, and the step that checks them.
const WATCHED: [(&str, &str, &str); 6] = [
    ("cont_bin_func.casl", "ContFunc", "ContBinFunc"),
    ("cont_bin_func.casl", "PerfSqTopSp", "ContBinFunc"),
    ("top_group.casl", "QuasiTopGroup", "TopGroup"),
    ("top_group.casl", "ContEndo", "ContEndo"),
    ("golden/cont_bin_func.casl", "contBinFunc", "ContBinFunc"),
    ("golden/top_group.casl", "TopGroup", "TopGroup"),
];

fn with_line(base: &Corpus, file: &str, line: usize, text: String) -> Corpus {
    let mut c = base.clone();
    let f = c.file_mut(file).unwrap();
    let mut lines: Vec<String> = f.text.lines().map(String::from).collect();
    lines[line] = text;
    f.text = lines.join("\n") + "\n";
    c
}

/// Single-axiom mutations of the embedded corpus: weaken `⇔` to `⇒`, turn
/// `∀` into `∃`, or add an axiom.
pub fn axiom_mutations(every: usize) -> Vec<Mutation> {
    let base = Corpus::embedded();
    let mut out = Vec::new();
    for (file, spec, step) in WATCHED {
        let text = base.file(file).unwrap().text.clone();
        let mut current = String::new();
        let mut seen = 0;
        for (i, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix("spec ") {
                current = rest.split_whitespace().next().unwrap_or_default().to_string();
                continue;
            }
            if current != spec || line.trim_start().starts_with("%%") {
                continue;
            }
            if line.trim() == "end" {
                out.push(Mutation {
                    description: format!("{file}#{spec}: extra axiom before line {}", i + 1),
                    corpus: with_line(&base, file, i, format!("∀s : Sets . s el s\n{line}")),
                    expected_step: step,
                });
                continue;
            }
            let kind = if line.contains('⇔') {
                Some(("⇔", "⇒"))
            } else if line.starts_with('∀') && line.contains(" . ") {
                Some(("∀", "∃"))
            } else {
                None
            };
            let Some((from, to)) = kind else { continue };
            seen += 1;
            if seen % every != 0 {
                continue;
            }
            out.push(Mutation {
                description: format!("{file}#{spec} line {}: {from} → {to}", i + 1),
                corpus: with_line(&base, file, i, line.replacen(from, to, 1)),
                expected_step: step,
            });
        }
    }
    out
}
