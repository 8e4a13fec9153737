use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::signature::Signature;

/// A labeled sentence. `doc` holds the `%%` comment lines written above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub label: String,
    pub formula: Formula,
    pub doc: Option<String>,
}

impl Axiom {
    pub fn new(label: impl Into<String>, formula: Formula) -> Self {
        Axiom {
            label: label.into(),
            formula,
            doc: None,
        }
    }

    pub fn with_doc(mut self, doc: impl Into<String>) -> Self {
        self.doc = Some(doc.into());
        self
    }
}

/// A theory presentation: a signature plus an ordered list of labeled axioms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature) -> Self {
        Theory {
            name: name.into(),
            signature,
            axioms: Vec::new(),
        }
    }

    pub fn axiom(&self, label: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.label == label)
    }

    pub fn push_axiom(&mut self, axiom: Axiom) -> &mut Self {
        self.axioms.push(axiom);
        self
    }
}
