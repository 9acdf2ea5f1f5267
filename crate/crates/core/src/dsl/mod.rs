//! A small textual language for sequence identities.
//!
//! ```text
//! O[n+1]*O[n-1] - O[n]^2 == -x^(-2*n) where n=1..50
//! Sum(j=0..n, O[j]) == x^2*(1/x - O[n+2]) where n=0..30
//! ```
//!
//! Indices, binomial arguments, exponents and sum bounds are affine forms in
//! integer variables. Sum bounds may also be `floor(affine/INT)`.

mod ast;
mod corpus;
mod eval;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{Affine, Bound, Cmp, Constraint, Expr, IdentityAst, SeqKind};
pub use corpus::{load_corpus, parse_corpus, CorpusEntry, CorpusError, SHIPPED_CORPUS};
pub use eval::{check_ast, check_ast_with, expectation_for, EvaluationError};
pub use lexer::Pos;
pub use parser::{parse, MAX_DEPTH};

/// Positioned syntax error; `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
    /// Source text of the offending token, or `end of input`.
    pub token: String,
}

impl ParseError {
    pub(crate) fn new(message: impl Into<String>, pos: Pos, token: &str) -> Self {
        Self {
            message: message.into(),
            line: pos.line,
            column: pos.column,
            token: token.to_string(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {} (at `{}`)",
            self.line, self.column, self.message, self.token
        )
    }
}

impl std::error::Error for ParseError {}
