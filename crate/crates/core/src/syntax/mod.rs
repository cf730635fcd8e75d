//! Lexing, parsing, pretty-printing and linking of query source.

pub mod ast;
pub mod lexer;
mod parser;
pub mod render;
pub mod resolve;

use std::fmt;

pub use ast::*;
pub use lexer::{tokenize, Keyword, Tok, Token};
pub use parser::{parse_literal, parse_module, parse_query};

/// A 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}
