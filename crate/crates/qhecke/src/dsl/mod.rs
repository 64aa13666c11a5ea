//! A small expression language for q-series, so catalog entries and ad-hoc
//! CLI queries are data rather than code.
//!
//! ```text
//! f(1,2,1; q,q; q) - Jm(1)^2
//! 2*m(q; 3; -1)
//! q^4 * sub(g(6,3,2; -q^5,-q^3; q) - q*g(6,3,2; -q^7,-q^4; q); q^3)
//! ```
//!
//! Call arguments come in semicolon-separated groups of comma-separated
//! items, mirroring `f_{a,b,c}(x, y, q)`: the form triple, the monomial
//! pair, the base.  Precedence is `^`, then unary minus, then `*` `/`, then
//! `+` `-`; `^` takes an integer literal exponent.  Bases are written as
//! monomial literals (`q`, `-q`, `q^2`, `-q^3`).  `sub(expr; base)`
//! substitutes the base into a whole subexpression.  There are no variables
//! or bindings.
//!
//! Every error — lexical, syntactic, or evaluation — carries the byte span
//! of the offending token or subexpression.

mod eval;
mod lexer;
mod parser;

pub use eval::{eval, EvalError, EvalErrorKind};
pub use lexer::{tokenize, Span, Token, TokenKind};
pub use parser::{parse, print_expr, BinOp, Expr, ExprKind};

/// Positioned lexical or syntax error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {}..{}: {message}", span.start, span.end)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

/// Tokenize and parse a single expression line.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse(&tokenize(text)?)
}
