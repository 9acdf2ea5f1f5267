use std::fmt;
use std::path::Path;

use super::ast::IdentityAst;
use super::{parse, ParseError};

/// The corpus shipped at `crates/core/corpus/oresme_identities.txt`.
pub const SHIPPED_CORPUS: &str = include_str!("../../corpus/oresme_identities.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    /// 1-based line in the corpus file.
    pub line: usize,
    pub ast: IdentityAst,
}

#[derive(Debug)]
pub enum CorpusError {
    Io(std::io::Error),
    /// Every bad line, with the entries that did parse.
    Parse {
        errors: Vec<ParseError>,
        parsed: Vec<CorpusEntry>,
    },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Io(e) => write!(f, "cannot read corpus: {e}"),
            CorpusError::Parse { errors, .. } => {
                write!(f, "{} corpus line(s) failed to parse", errors.len())?;
                for e in errors {
                    write!(f, "\n  {e}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for CorpusError {}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(CorpusError::Io)?;
    parse_corpus(&text)
}

/// Parses corpus text: one identity per line, `#` comments, optional `name:` prefix.
/// Unnamed entries are called `line<N>`.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut parsed = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let (name, body, offset) = split_name(content);
        let name = name.map_or_else(|| format!("line{line}"), str::to_string);
        match parse(body) {
            Ok(ast) => parsed.push(CorpusEntry { name, line, ast }),
            Err(mut e) => {
                e.line = line;
                e.column += offset;
                errors.push(e);
            }
        }
    }
    if errors.is_empty() {
        Ok(parsed)
    } else {
        Err(CorpusError::Parse { errors, parsed })
    }
}

/// Splits `NAME: body`, returning the body's column offset in characters.
fn split_name(content: &str) -> (Option<&str>, &str, usize) {
    if let Some((head, body)) = content.split_once(':') {
        let name = head.trim();
        if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return (Some(name), body, head.chars().count() + 1);
        }
    }
    (None, content, 0)
}
