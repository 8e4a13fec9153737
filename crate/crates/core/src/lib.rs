//! Many-sorted first-order theory presentations and the operations that blend
//! them: signature morphisms, pushouts of spans over a generic theory, and
//! conceptual identification (quotients of a single theory).
//!
//! The crate is `no_std` and only needs `alloc`. Parsing and printing of the
//! mini-CASL surface syntax live in [`parser`]; everything else works on the
//! in-memory model.
//!
//! ```
//! use blend_core::{parse_library, Environment};
//!
//! let lib = parse_library(
//!     "spec T = sorts S ops a : S end
//!      view V : T to T = S |-> S, a |-> a end
//!      spec B = combine V, V",
//! )
//! .unwrap();
//! let mut env = Environment::new();
//! assert!(env.load(&lib).is_empty());
//! assert_eq!(env.theory("B").unwrap().signature.ops.len(), 1);
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod checker;
pub mod colimit;
pub mod diagnostic;
pub mod equiv;
pub mod formula;
pub mod library;
pub mod morphism;
pub mod parser;
pub mod signature;
pub mod theory;

pub use checker::{check_formula, check_morphism, check_signature, check_theory, check_view, infer_sort};
pub use colimit::{identify, pushout, BlendResult, BlendSpan, IdentificationRequest, IdentifyError, PushoutError};
pub use diagnostic::{Code, Diagnostic, SourceSpan};
pub use equiv::{alpha_eq, explain_mismatch, find_isomorphism, find_signature_isomorphism};
pub use formula::{canonicalize, free_vars, Formula, OpenFormula, Quantifier, Term, Var};
pub use library::{Decl, DeclKind, Environment, Library, SymbolMap, View, ViewDecl};
pub use morphism::{translate_formula, translate_term, SignatureMorphism, TranslateError};
pub use parser::{parse_library, parse_library_in, pretty_print, pretty_print_with, ParseError, PrintStyle};
pub use signature::{Fixity, OpProfile, Signature, SortOrder};
pub use theory::{Axiom, Theory};
