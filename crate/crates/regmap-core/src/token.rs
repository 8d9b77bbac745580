//! Tokenizer for the Verilog subset the scanner understands.
//!
//! Comments and whitespace never produce tokens but advance line/col, so
//! every token points back into the original source.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Keywords the scanner cares about. Everything else lexes as an identifier;
/// the body scan only needs enough structure to stay balanced.
const KEYWORDS: &[&str] = &[
    "module",
    "endmodule",
    "input",
    "output",
    "inout",
    "signed",
    "begin",
    "end",
    "case",
    "casex",
    "casez",
    "endcase",
    "function",
    "endfunction",
    "task",
    "endtask",
    "generate",
    "endgenerate",
    "fork",
    "join",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    Number,
    Str,
    Punct,
    /// `(*` opening an attribute instance (never the `(*)` port form).
    AttrOpen,
    /// `*)`
    AttrClose,
    /// Backtick macro use, e.g. `` `AUTOMATIC_prng `` or `` `include ``.
    MacroUse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source slice, quotes and backtick included.
    pub text: String,
    pub line: u32,
    pub col: u32,
}

impl Token {
    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == k
    }

    /// Macro name without the backtick; empty for non-macro tokens.
    pub fn macro_name(&self) -> &str {
        if self.kind == TokenKind::MacroUse {
            &self.text[1..]
        } else {
            ""
        }
    }

    /// String literal contents without quotes, escapes collapsed.
    pub fn string_value(&self) -> String {
        debug_assert_eq!(self.kind, TokenKind::Str);
        let inner = &self.text[1..self.text.len() - 1];
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                if let Some(e) = chars.next() {
                    out.push(match e {
                        'n' => '\n',
                        't' => '\t',
                        other => other,
                    });
                }
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Parse a decimal number token, underscores allowed.
    pub fn number_value(&self) -> Option<i64> {
        if self.kind != TokenKind::Number {
            return None;
        }
        let mut v: i64 = 0;
        for c in self.text.chars() {
            if c == '_' {
                continue;
            }
            v = v.checked_mul(10)?.checked_add(c.to_digit(10)? as i64)?;
        }
        Some(v)
    }
}

struct Cursor<'a> {
    rest: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn peek2(&self) -> Option<char> {
        self.rest.chars().nth(1)
    }

    fn peek3(&self) -> Option<char> {
        self.rest.chars().nth(2)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.rest.chars().next()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_ident_cont(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$'
}

/// Tokenize Verilog source. CRLF is accepted (the `\r` is treated as
/// whitespace); callers normally normalize line endings first.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor {
        rest: text,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, col) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek2() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek2() == Some('*') {
            cur.bump();
            cur.bump();
            let mut closed = false;
            while let Some(c) = cur.bump() {
                if c == '*' && cur.peek() == Some('/') {
                    cur.bump();
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(Error::lex(line, col, "unterminated block comment"));
            }
            continue;
        }
        if c == '"' {
            let mut text = String::from('"');
            cur.bump();
            loop {
                match cur.peek() {
                    None | Some('\n') => {
                        return Err(Error::lex(line, col, "unterminated string literal"));
                    }
                    Some('\\') => {
                        text.push(cur.bump().unwrap());
                        match cur.peek() {
                            None | Some('\n') => {
                                return Err(Error::lex(line, col, "unterminated string literal"));
                            }
                            Some(_) => text.push(cur.bump().unwrap()),
                        }
                    }
                    Some('"') => {
                        text.push(cur.bump().unwrap());
                        break;
                    }
                    Some(_) => text.push(cur.bump().unwrap()),
                }
            }
            out.push(Token {
                kind: TokenKind::Str,
                text,
                line,
                col,
            });
            continue;
        }
        if c == '(' {
            // `(*` opens an attribute unless it is the `(*)` form, which is
            // three plain punctuation tokens.
            if cur.peek2() == Some('*') {
                if cur.peek3() == Some(')') {
                    for p in ["(", "*", ")"] {
                        let (line, col) = (cur.line, cur.col);
                        cur.bump();
                        out.push(Token {
                            kind: TokenKind::Punct,
                            text: String::from(p),
                            line,
                            col,
                        });
                    }
                } else {
                    cur.bump();
                    cur.bump();
                    out.push(Token {
                        kind: TokenKind::AttrOpen,
                        text: String::from("(*"),
                        line,
                        col,
                    });
                }
            } else {
                cur.bump();
                out.push(Token {
                    kind: TokenKind::Punct,
                    text: String::from("("),
                    line,
                    col,
                });
            }
            continue;
        }
        if c == '*' && cur.peek2() == Some(')') {
            cur.bump();
            cur.bump();
            out.push(Token {
                kind: TokenKind::AttrClose,
                text: String::from("*)"),
                line,
                col,
            });
            continue;
        }
        if c == '`' {
            cur.bump();
            if cur.peek().map(is_ident_start) == Some(true) {
                let mut text = String::from('`');
                while cur.peek().map(is_ident_cont) == Some(true) {
                    text.push(cur.bump().unwrap());
                }
                out.push(Token {
                    kind: TokenKind::MacroUse,
                    text,
                    line,
                    col,
                });
            } else {
                out.push(Token {
                    kind: TokenKind::Punct,
                    text: String::from("`"),
                    line,
                    col,
                });
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_digit() || c == '_' {
                    text.push(cur.bump().unwrap());
                } else {
                    break;
                }
            }
            out.push(Token {
                kind: TokenKind::Number,
                text,
                line,
                col,
            });
            continue;
        }
        if is_ident_start(c) {
            let mut text = String::new();
            while cur.peek().map(is_ident_cont) == Some(true) {
                text.push(cur.bump().unwrap());
            }
            let kind = if KEYWORDS.contains(&text.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            out.push(Token {
                kind,
                text,
                line,
                col,
            });
            continue;
        }
        // Anything else is a single-char punctuation token.
        let mut text = String::new();
        text.push(cur.bump().unwrap());
        out.push(Token {
            kind: TokenKind::Punct,
            text,
            line,
            col,
        });
    }

    Ok(out)
}
