//! File formats, corpus, derivation pipeline and command-line front end for
//! [`blend_core`].

pub mod cli;
pub mod corpus;
pub mod dot;
pub mod ledger;
pub mod pipeline;

pub use corpus::{load_corpus, Corpus, CorpusFile, GoldenRef, LoadedCorpus};
pub use ledger::{parse_ledger, verify_entry, DiscrepancyEntry};
pub use pipeline::{blend_shape, default_pipeline, resolve_blend, run_pipeline, ResolvedSpan, PipelineReport, PipelineStep, StepKind, StepOutcome};
