use alloc::string::String;
use core::fmt;

/// Tool-wide error type. Lexical and syntactic errors carry a 1-based
/// line/col into the offending source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Tokenizer error (unterminated string/comment, stray byte).
    Lex {
        path: String,
        line: u32,
        col: u32,
        msg: String,
    },
    /// Parse error in a module header, attribute list, or instantiation.
    Parse {
        path: String,
        line: u32,
        col: u32,
        msg: String,
    },
    /// Module resolution / hierarchy elaboration error.
    Hier(String),
    /// Register collection error (bad attribute, bad strobe sibling, ...).
    Collect(String),
    /// Address allocation error.
    Alloc(String),
    /// Code generation error.
    Emit(String),
    /// Oracle input error (malformed HIT header or JSON map).
    OracleInput(String),
}

impl Error {
    pub fn lex(line: u32, col: u32, msg: impl Into<String>) -> Self {
        Error::Lex {
            path: String::new(),
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn parse(line: u32, col: u32, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: String::new(),
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Attach a file path to a positional error after the fact.
    pub fn with_path(mut self, p: &str) -> Self {
        match &mut self {
            Error::Lex { path, .. } | Error::Parse { path, .. } => {
                if path.is_empty() {
                    *path = String::from(p);
                }
            }
            _ => {}
        }
        self
    }

    pub fn position(&self) -> Option<(u32, u32)> {
        match self {
            Error::Lex { line, col, .. } | Error::Parse { line, col, .. } => Some((*line, *col)),
            _ => None,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Lex {
                path,
                line,
                col,
                msg,
            } => {
                if path.is_empty() {
                    write!(f, "{line}:{col}: lexical error: {msg}")
                } else {
                    write!(f, "{path}:{line}:{col}: lexical error: {msg}")
                }
            }
            Error::Parse {
                path,
                line,
                col,
                msg,
            } => {
                if path.is_empty() {
                    write!(f, "{line}:{col}: parse error: {msg}")
                } else {
                    write!(f, "{path}:{line}:{col}: parse error: {msg}")
                }
            }
            Error::Hier(msg) => write!(f, "hierarchy error: {msg}"),
            Error::Collect(msg) => write!(f, "register collection error: {msg}"),
            Error::Alloc(msg) => write!(f, "allocation error: {msg}"),
            Error::Emit(msg) => write!(f, "code generation error: {msg}"),
            Error::OracleInput(msg) => write!(f, "oracle input error: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
