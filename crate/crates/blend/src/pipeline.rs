//! The derivation pipeline: blends and identifications applied in order,
//! each checked against an expected theory or a set of invariants.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Result};
use blend_core::{
    alpha_eq, check_morphism, check_theory, explain_mismatch, find_isomorphism, find_signature_isomorphism, identify,
    pushout, translate_formula, BlendSpan, DeclKind, Environment, IdentificationRequest, SignatureMorphism, Theory,
    View,
};

use crate::corpus::{DeclPos, GoldenRef, LoadedCorpus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    /// Computes the colimit of a `combine` declaration.
    Blend { combine: String },
    /// Quotients a theory.
    Identify { source: String, request: IdentificationRequest },
}

impl StepKind {
    pub fn label(&self) -> &'static str {
        match self {
            StepKind::Blend { .. } => "blend",
            StepKind::Identify { .. } => "identify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineStep {
    /// Name of the resulting theory.
    pub name: String,
    pub kind: StepKind,
    /// Theories the step consumes: the two view targets of a blend, or the
    /// source of an identification.
    pub inputs: Vec<String>,
    /// Expected result, up to symbol renaming.
    pub golden: Option<GoldenRef>,
    /// A theory whose signature the result must match when there is no
    /// golden.
    pub signature_of: Option<GoldenRef>,
    /// Later steps see the result under this name instead of the corpus
    /// theory of that name.
    pub binding: Option<String>,
}

fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
    xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// The four steps that derive the topological group.
pub fn default_pipeline() -> Vec<PipelineStep> {
    vec![
        PipelineStep {
            name: "ContBinFunc".into(),
            kind: StepKind::Blend { combine: "Colimit".into() },
            inputs: vec!["PerfSqTopSp".into(), "ContFunc".into()],
            golden: Some(GoldenRef::new("golden/cont_bin_func.casl", "contBinFunc")),
            signature_of: None,
            binding: Some("Colimit".into()),
        },
        PipelineStep {
            name: "QuasiTopGroup".into(),
            kind: StepKind::Blend {
                combine: "QuasiTopGroupBlend".into(),
            },
            inputs: vec!["Colimit".into(), "Group".into()],
            golden: None,
            signature_of: Some(GoldenRef::new("top_group.casl", "QuasiTopGroup")),
            binding: None,
        },
        PipelineStep {
            name: "ContEndo".into(),
            kind: StepKind::Identify {
                source: "ContFunc".into(),
                request: IdentificationRequest {
                    sorts: pairs(&[("A", "B"), ("TA", "TB"), ("PA", "PB")]),
                    symbols: pairs(&[("A'", "B'"), ("TA'", "TB'"), ("PA'", "PB'")]),
                    renames: pairs(&[("f", "Addinv"), ("inversef", "inverseAddinv")]),
                },
            },
            inputs: vec!["ContFunc".into()],
            golden: Some(GoldenRef::new("top_group.casl", "ContEndo")),
            signature_of: None,
            binding: Some("ContEndo".into()),
        },
        PipelineStep {
            name: "TopGroup".into(),
            kind: StepKind::Blend {
                combine: "TopGroup".into(),
            },
            inputs: vec!["QuasiTopGroup".into(), "ContEndo".into()],
            golden: Some(GoldenRef::new("golden/top_group.casl", "TopGroup")),
            signature_of: None,
            binding: Some("TopGroup".into()),
        },
    ]
}

/// Where a `combine` sits in the corpus and what its views connect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlendShape {
    pub generic: String,
    /// View name and target, left then right.
    pub legs: [(String, String); 2],
    /// Positions of the two view declarations.
    pub view_pos: [DeclPos; 2],
}

pub fn blend_shape(corpus: &LoadedCorpus, combine: &str) -> Result<BlendShape> {
    let (pos, kind) = corpus.find(combine).ok_or_else(|| anyhow!("no combination named `{combine}`"))?;
    let DeclKind::Combine { left, right, .. } = kind else {
        bail!("`{combine}` is not a combination");
    };
    let mut legs = Vec::new();
    for v in [left, right] {
        let (vpos, decl) = corpus
            .view_before(v, pos)
            .ok_or_else(|| anyhow!("view `{v}` is not declared before `{combine}`"))?;
        legs.push((vpos, decl.clone()));
    }
    if legs[0].1.source != legs[1].1.source {
        bail!("`{left}` and `{right}` start at different theories");
    }
    Ok(BlendShape {
        generic: legs[0].1.source.clone(),
        legs: [
            (legs[0].1.name.clone(), legs[0].1.target.clone()),
            (legs[1].1.name.clone(), legs[1].1.target.clone()),
        ],
        view_pos: [legs[0].0, legs[1].0],
    })
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    /// 1-based.
    pub index: usize,
    pub name: String,
    pub kind: &'static str,
    pub theory: Option<Theory>,
    pub ok: bool,
    /// Why the step failed, or which checks it passed.
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl StepOutcome {
    pub fn line(&self) -> String {
        let verdict = if self.ok { "OK" } else { "FAIL" };
        format!("STEP {} {} {} → {verdict}", self.index, self.kind, self.name)
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineReport {
    pub steps: Vec<StepOutcome>,
    /// Steps not run because an earlier one failed.
    pub skipped: Vec<String>,
}

impl PipelineReport {
    pub fn all_ok(&self) -> bool {
        self.skipped.is_empty() && self.steps.iter().all(|s| s.ok)
    }

    pub fn step(&self, name: &str) -> Option<&StepOutcome> {
        self.steps.iter().find(|s| s.name == name)
    }

    /// One status line per step, failure details indented below.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.line());
            out.push('\n');
            if !s.ok {
                for d in &s.details {
                    for l in d.lines() {
                        out.push_str("    ");
                        out.push_str(l);
                        out.push('\n');
                    }
                }
            }
        }
        for name in &self.skipped {
            out.push_str(&format!("skipped {name}\n"));
        }
        out
    }
}

/// Runs the corpus pipeline, stopping at the first failed step.
pub fn run_pipeline(corpus: &LoadedCorpus) -> PipelineReport {
    let mut report = PipelineReport::default();
    let mut bindings: BTreeMap<String, Theory> = BTreeMap::new();
    for (i, step) in corpus.pipeline.iter().enumerate() {
        let start = Instant::now();
        let (theory, details) = match run_step(corpus, step, &bindings) {
            Ok((t, problems)) => (Some(t), problems),
            Err(e) => (None, vec![format!("{e:#}")]),
        };
        let ok = theory.is_some() && details.is_empty();
        if ok {
            if let (Some(b), Some(t)) = (&step.binding, &theory) {
                bindings.insert(b.clone(), t.clone());
            }
        }
        report.steps.push(StepOutcome {
            index: i + 1,
            name: step.name.clone(),
            kind: step.kind.label(),
            theory,
            ok,
            details,
            elapsed: start.elapsed(),
        });
        if !ok {
            report.skipped = corpus.pipeline[i + 1..].iter().map(|s| s.name.clone()).collect();
            break;
        }
    }
    report
}

/// The result and the list of failed checks.
fn run_step(
    corpus: &LoadedCorpus,
    step: &PipelineStep,
    bindings: &BTreeMap<String, Theory>,
) -> Result<(Theory, Vec<String>)> {
    let (theory, inputs, problems) = match &step.kind {
        StepKind::Blend { combine } => blend_step(corpus, step, combine, bindings)?,
        StepKind::Identify { source, request } => {
            let src = bindings
                .get(source)
                .cloned()
                .or_else(|| corpus.env.theory(source).cloned())
                .ok_or_else(|| anyhow!("no theory named `{source}`"))?;
            let (t, q) = identify(&src, request, &step.name)?;
            (t, vec![(src, q)], Vec::new())
        }
    };
    let mut problems = problems;
    for d in check_theory(&theory) {
        problems.push(format!("result does not check: {d}"));
    }
    problems.extend(provenance_problems(&theory, &inputs));
    if let Some(r) = &step.golden {
        let golden = corpus.golden(r).ok_or_else(|| anyhow!("no golden theory {r}"))?;
        if find_isomorphism(&theory, golden).is_none() {
            problems.push(format!("not isomorphic to {r}: {}", explain_mismatch(&theory, golden)));
        }
    }
    if let Some(r) = &step.signature_of {
        let reference = corpus.golden(r).ok_or_else(|| anyhow!("no reference theory {r}"))?;
        if find_signature_isomorphism(&theory.signature, &reference.signature).is_none() {
            problems.push(format!(
                "signature differs from {r}: {}",
                explain_mismatch(
                    &Theory::new(&theory.name, theory.signature.clone()),
                    &Theory::new(&reference.name, reference.signature.clone())
                )
            ));
        }
    }
    Ok((theory, problems))
}

type Leg = (Theory, SignatureMorphism);

/// A `combine` with its views resolved against concrete theories.
#[derive(Debug, Clone)]
pub struct ResolvedSpan {
    pub generic: Theory,
    pub left: (View, Theory),
    pub right: (View, Theory),
}

impl ResolvedSpan {
    pub fn span(&self) -> BlendSpan<'_> {
        BlendSpan {
            generic: &self.generic,
            left: (&self.left.0.morphism, &self.left.1),
            right: (&self.right.0.morphism, &self.right.1),
        }
    }
}

/// Resolves the views of `combine`. View targets named in `bindings` are
/// replaced by the bound theories; everything else is looked up in scope.
pub fn resolve_blend(
    corpus: &LoadedCorpus,
    combine: &str,
    bindings: &BTreeMap<String, Theory>,
) -> Result<ResolvedSpan> {
    let shape = blend_shape(corpus, combine)?;
    let mut problems = Vec::new();
    let mut resolved: Vec<(Theory, View, Theory)> = Vec::new();
    for ((view, target), pos) in shape.legs.iter().zip(shape.view_pos) {
        let Some((_, DeclKind::View(decl))) = corpus.lookup(view, (pos.0, pos.1 + 1)) else {
            bail!("view `{view}` is not declared");
        };
        let source = corpus
            .theory_before(&decl.source, pos)
            .ok_or_else(|| anyhow!("no theory named `{}`", decl.source))?;
        let mut tgt = match bindings.get(target) {
            Some(t) => t.clone(),
            None => corpus
                .theory_before(target, pos)
                .ok_or_else(|| anyhow!("no theory named `{target}`"))?,
        };
        tgt.name = target.clone();
        let mut scope = Environment::new();
        scope.insert_theory(source.clone());
        scope.insert_theory(tgt.clone());
        let (v, diags) = scope.resolve_view(decl).map_err(|d| anyhow!("{d}"))?;
        problems.extend(diags.iter().map(|d| d.to_string()));
        resolved.push((source, v, tgt));
    }
    if !problems.is_empty() {
        bail!("{}", problems.join("\n"));
    }
    let [(generic, lv, lt), (_, rv, rt)] = <[_; 2]>::try_from(resolved).expect("two legs");
    Ok(ResolvedSpan {
        generic,
        left: (lv, lt),
        right: (rv, rt),
    })
}

fn blend_step(
    corpus: &LoadedCorpus,
    step: &PipelineStep,
    combine: &str,
    bindings: &BTreeMap<String, Theory>,
) -> Result<(Theory, Vec<Leg>, Vec<String>)> {
    let shape = blend_shape(corpus, combine)?;
    let targets: Vec<&str> = shape.legs.iter().map(|(_, t)| t.as_str()).collect();
    if targets != step.inputs {
        bail!("`{combine}` combines {targets:?}, the step expects {:?}", step.inputs);
    }
    let rs = resolve_blend(corpus, combine, bindings)?;
    let blend = pushout(&rs.span(), &step.name)?;

    let mut problems = Vec::new();
    for (side, inj, src) in [("left", &blend.left, &rs.left.1), ("right", &blend.right, &rs.right.1)] {
        for d in check_morphism(inj, &src.signature, &blend.theory.signature) {
            problems.push(format!("{side} injection: {d}"));
        }
    }
    let via_left = rs.left.0.morphism.then(&blend.left);
    let via_right = rs.right.0.morphism.then(&blend.right);
    if via_left != via_right {
        problems.push(format!("the cocone over `{}` does not commute", rs.generic.name));
    }
    let ResolvedSpan { left, right, .. } = rs;
    Ok((blend.theory, vec![(left.1, blend.left), (right.1, blend.right)], problems))
}

/// Every input axiom is carried into the result, and every result axiom
/// comes from an input.
fn provenance_problems(result: &Theory, inputs: &[Leg]) -> Vec<String> {
    let mut problems = Vec::new();
    let mut carried = Vec::new();
    for (src, m) in inputs {
        for ax in &src.axioms {
            match translate_formula(m, &ax.formula) {
                Ok(f) => {
                    if !result.axioms.iter().any(|r| alpha_eq(&r.formula, &f)) {
                        problems.push(format!("axiom {} of `{}` is not in the result", ax.label, src.name));
                    }
                    carried.push(f);
                }
                Err(e) => problems.push(format!("axiom {} of `{}` does not translate: {e}", ax.label, src.name)),
            }
        }
    }
    for ax in &result.axioms {
        if !carried.iter().any(|f| alpha_eq(f, &ax.formula)) {
            problems.push(format!("axiom {} of the result comes from no input", ax.label));
        }
    }
    problems
}
