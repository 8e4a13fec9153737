//! Source locations and checker/parser diagnostics.
//!
//! Diagnostics render as one line, `CODE file:line:col message`. The codes are
//! stable:
//!
//! | code | meaning |
//! |------|---------|
//! | P001 | lexical error |
//! | P002 | syntax error |
//! | P003 | reference to an undeclared spec or view |
//! | P004 | unsupported mixfix form |
//! | P005 | duplicate declaration or axiom label |
//! | S001 | undeclared sort in a profile or subsort pair |
//! | S002 | subsort cycle |
//! | S003 | name declared in more than one namespace |
//! | F001 | free variable (formula is not closed) |
//! | F002 | unknown operation |
//! | F003 | wrong number of arguments |
//! | F004 | argument sort is not a subsort of the parameter sort |
//! | F005 | unknown predicate |
//! | F006 | sides of an equation have no common supersort |
//! | F007 | unknown sort in a quantifier or membership |
//! | F008 | variable used at a sort different from its binder |
//! | M001 | morphism is not total |
//! | M002 | profile not preserved |
//! | M003 | subsort not preserved |
//! | M004 | image symbol is not declared in the target |
//! | V001 | translated axiom has no counterpart in the target |
//! | V002 | view mentions a symbol its source does not declare |
//! | C001 | combined views do not share a source |
//! | C002 | the blend could not be computed |

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    /// 1-based line and column of the first character.
    pub start: (u32, u32),
    /// 1-based line and column just past the last character.
    pub end: (u32, u32),
}

impl SourceSpan {
    pub fn new(file: Arc<str>, start: (u32, u32), end: (u32, u32)) -> Self {
        debug_assert!(start <= end);
        SourceSpan { file, start, end }
    }

    /// Smallest span covering both.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start.0, self.start.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    P001,
    P002,
    P003,
    P004,
    P005,
    S001,
    S002,
    S003,
    F001,
    F002,
    F003,
    F004,
    F005,
    F006,
    F007,
    F008,
    M001,
    M002,
    M003,
    M004,
    V001,
    V002,
    C001,
    C002,
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
            span: None,
        }
    }

    pub fn at(mut self, span: Option<SourceSpan>) -> Self {
        if self.span.is_none() {
            self.span = span;
        }
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.span {
            Some(span) => write!(f, "{} {} {}", self.code, span, self.message),
            None => write!(f, "{} <input>:0:0 {}", self.code, self.message),
        }
    }
}
