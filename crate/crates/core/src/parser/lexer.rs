use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::diagnostic::{Code, Diagnostic, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kw {
    Spec,
    View,
    To,
    End,
    Combine,
    Sorts,
    Ops,
    Preds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Symbolic name such as `+` or `++`.
    Sym(String),
    Kw(Kw),
    Forall,
    Exists,
    Iff,
    Implies,
    And,
    Or,
    Not,
    In,
    Times,
    Arrow,
    MapsTo,
    Eq,
    Lt,
    Dot,
    Comma,
    Colon,
    Semi,
    LParen,
    RParen,
    Label(String),
    /// A `%%` comment that starts its line.
    Doc(String),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Sym(s) => format!("`{s}`"),
            Tok::Kw(k) => format!("keyword `{}`", format!("{k:?}").to_lowercase()),
            Tok::Label(l) => format!("label %({l})%"),
            Tok::Doc(_) => "comment".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => {
                let s = match other {
                    Tok::Forall => "∀",
                    Tok::Exists => "∃",
                    Tok::Iff => "⇔",
                    Tok::Implies => "⇒",
                    Tok::And => "∧",
                    Tok::Or => "∨",
                    Tok::Not => "¬",
                    Tok::In => "∈",
                    Tok::Times => "×",
                    Tok::Arrow => "→",
                    Tok::MapsTo => "↦",
                    Tok::Eq => "=",
                    Tok::Lt => "<",
                    Tok::Dot => ".",
                    Tok::Comma => ",",
                    Tok::Colon => ":",
                    Tok::Semi => ";",
                    Tok::LParen => "(",
                    _ => ")",
                };
                format!("`{s}`")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "spec" => Tok::Kw(Kw::Spec),
        "view" => Tok::Kw(Kw::View),
        "to" => Tok::Kw(Kw::To),
        "end" => Tok::Kw(Kw::End),
        "combine" => Tok::Kw(Kw::Combine),
        "sorts" | "sort" => Tok::Kw(Kw::Sorts),
        "ops" | "op" => Tok::Kw(Kw::Ops),
        "preds" | "pred" => Tok::Kw(Kw::Preds),
        "forall" => Tok::Forall,
        "exists" => Tok::Exists,
        "not" => Tok::Not,
        "isin" => Tok::In,
        _ => return None,
    })
}

pub(crate) fn is_reserved_word(word: &str) -> bool {
    keyword(word).is_some()
}

fn reserved_symbol(run: &str) -> Option<Tok> {
    Some(match run {
        "=" => Tok::Eq,
        "=>" => Tok::Implies,
        "<=>" => Tok::Iff,
        "->" => Tok::Arrow,
        "<" => Tok::Lt,
        "*" => Tok::Times,
        "/\\" => Tok::And,
        "\\/" => Tok::Or,
        "|->" => Tok::MapsTo,
        _ => return None,
    })
}

pub(crate) fn is_symbol_char(c: char) -> bool {
    "+-*/\\<>=|~^&!?#@$".contains(c)
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: u32,
    col: u32,
    line_blank: bool,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.line_blank = true;
        } else {
            self.col += 1;
            if !c.is_whitespace() {
                self.line_blank = false;
            }
        }
        Some(c)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

pub(crate) fn tokenize(file: &Arc<str>, text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
        line_blank: true,
    };
    let mut out = Vec::new();
    let span = |s: (u32, u32), e: (u32, u32)| SourceSpan::new(file.clone(), s, e);

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let at_line_start = cur.line_blank;
        let start = cur.pos();
        let tok = if c == '%' {
            cur.bump();
            match cur.peek() {
                Some('%') => {
                    cur.bump();
                    let mut text = String::new();
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        text.push(c);
                        cur.bump();
                    }
                    if !at_line_start {
                        continue;
                    }
                    Tok::Doc(text.trim().to_string())
                }
                Some('(') => {
                    cur.bump();
                    let mut label = String::new();
                    loop {
                        match cur.bump() {
                            Some(')') if cur.peek() == Some('%') => {
                                cur.bump();
                                break;
                            }
                            Some('\n') | None => {
                                return Err(Diagnostic::new(Code::P001, "unterminated label"))
                                    .map_err(|d| d.at(Some(span(start, cur.pos()))));
                            }
                            Some(c) => label.push(c),
                        }
                    }
                    Tok::Label(label.trim().to_string())
                }
                _ => {
                    return Err(Diagnostic::new(Code::P001, "stray `%`").at(Some(span(start, cur.pos()))));
                }
            }
        } else if is_ident_start(c) {
            let mut word = String::new();
            while let Some(c) = cur.peek().filter(|&c| is_ident_char(c)) {
                word.push(c);
                cur.bump();
            }
            keyword(&word).unwrap_or(Tok::Ident(word))
        } else if is_symbol_char(c) {
            let mut run = String::new();
            while let Some(c) = cur.peek().filter(|&c| is_symbol_char(c)) {
                run.push(c);
                cur.bump();
            }
            reserved_symbol(&run).unwrap_or(Tok::Sym(run))
        } else {
            cur.bump();
            match c {
                '∀' => Tok::Forall,
                '∃' => Tok::Exists,
                '⇔' => Tok::Iff,
                '⇒' => Tok::Implies,
                '∧' => Tok::And,
                '∨' => Tok::Or,
                '¬' => Tok::Not,
                '∈' => Tok::In,
                '×' => Tok::Times,
                '→' => Tok::Arrow,
                '↦' => Tok::MapsTo,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(Diagnostic::new(Code::P001, format!("unexpected character `{other}`"))
                        .at(Some(span(start, cur.pos()))));
                }
            }
        };
        out.push(Token {
            tok,
            span: span(start, cur.pos()),
        });
    }
    let end = cur.pos();
    out.push(Token {
        tok: Tok::Eof,
        span: span(end, end),
    });
    Ok(out)
}
