//! Parsing, instantiation and rendering of the textual model notation.
//!
//! Sources are UTF-8 text (conventionally `.imds` files) made of server
//! or agent template blocks, `agents:`/`servers:` instance declarations
//! and a final `init -> { ... }.` clause. See the grammar reference in the
//! repository documentation for the full syntax.

pub mod ast;
mod instantiate;
mod lexer;
mod parser;
mod render;

use thiserror::Error;

pub use instantiate::{instantiate, InstantiateError, Loaded};
pub use render::render;

/// Syntax error with source position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: u32, col: u32, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
}

/// Parses source text into the raw syntax tree.
pub fn parse(text: &str) -> Result<ast::SourceAst, ParseError> {
    parser::parse_text(text)
}

/// Parses and instantiates source text into a flat spec.
pub fn load_source(text: &str) -> Result<Loaded, LoadError> {
    let ast = parse(text)?;
    Ok(instantiate(&ast)?)
}
