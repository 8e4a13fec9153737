//! Graphviz rendering of the derivation: corpus theories, the generic space
//! of each blend, and every pipeline result.

use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::Result;

use crate::corpus::LoadedCorpus;
use crate::pipeline::{blend_shape, StepKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Input,
    Generic,
    Result,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeKind {
    /// A view from a generic space, labelled with the view name.
    View(String),
    /// An injection into a blend.
    Injection,
    /// The quotient map of an identification.
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Default)]
pub struct DerivationGraph {
    /// Node id to label and role.
    pub nodes: BTreeMap<String, (String, NodeRole)>,
    pub edges: Vec<Edge>,
}

impl DerivationGraph {
    /// Injection and quotient edges into `node`.
    pub fn in_degree(&self, node: &str) -> usize {
        self.edges
            .iter()
            .filter(|e| e.to == node && !matches!(e.kind, EdgeKind::View(_)))
            .count()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph derivation {\n  rankdir=BT;\n  node [shape=box];\n");
        for (id, (label, role)) in &self.nodes {
            let attrs = match role {
                NodeRole::Input => "",
                NodeRole::Generic => ", shape=ellipse",
                NodeRole::Result => ", style=bold",
            };
            let _ = writeln!(out, "  {} [label={}{attrs}];", quote(id), quote(label));
        }
        for e in &self.edges {
            let attrs = match &e.kind {
                EdgeKind::View(v) => format!(" [style=dashed, label={}]", quote(v)),
                EdgeKind::Injection => String::new(),
                EdgeKind::Quotient => " [label=\"≅\"]".into(),
            };
            let _ = writeln!(out, "  {} -> {}{attrs};", quote(&e.from), quote(&e.to));
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The graph of the corpus pipeline. Structure only: nothing is computed.
pub fn derivation_graph(corpus: &LoadedCorpus) -> Result<DerivationGraph> {
    let mut g = DerivationGraph::default();
    // Names bound by earlier steps resolve to those steps' nodes.
    let mut bound: BTreeMap<String, String> = BTreeMap::new();
    for step in &corpus.pipeline {
        match &step.kind {
            StepKind::Blend { combine } => {
                let shape = blend_shape(corpus, combine)?;
                let generic = format!("{}@{}", shape.generic, step.name);
                g.nodes.insert(generic.clone(), (shape.generic.clone(), NodeRole::Generic));
                for (view, target) in &shape.legs {
                    let t = node(&mut g, &bound, target);
                    g.edges.push(Edge {
                        from: generic.clone(),
                        to: t.clone(),
                        kind: EdgeKind::View(view.clone()),
                    });
                    g.edges.push(Edge {
                        from: t,
                        to: step.name.clone(),
                        kind: EdgeKind::Injection,
                    });
                }
            }
            StepKind::Identify { source, .. } => {
                let s = node(&mut g, &bound, source);
                g.edges.push(Edge {
                    from: s,
                    to: step.name.clone(),
                    kind: EdgeKind::Quotient,
                });
            }
        }
        g.nodes.insert(step.name.clone(), (step.name.clone(), NodeRole::Result));
        if let Some(b) = &step.binding {
            bound.insert(b.clone(), step.name.clone());
        }
    }
    Ok(g)
}

fn node(g: &mut DerivationGraph, bound: &BTreeMap<String, String>, name: &str) -> String {
    let id = bound.get(name).cloned().unwrap_or_else(|| name.to_string());
    g.nodes.entry(id.clone()).or_insert((name.to_string(), NodeRole::Input));
    id
}
