//! Tokenizer for the expression language.

use super::ParseError;

/// Byte range of a token or expression in the source line.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Nonnegative integer literal (rational values arise through `/`).
    Int(i64),
    /// The formal variable.
    Q,
    /// Function or tag name; may contain digits, `_` and `.` after the
    /// first letter (tags like `e1.1a`).
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
    Comma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Tokenize one expression line; positions are byte offsets.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let value: i64 = lit.parse().map_err(|_| ParseError {
                    span: Span::new(start, i),
                    message: format!("integer literal `{}` is too large", lit),
                })?;
                tokens.push(Token { kind: TokenKind::Int(value), span: Span::new(start, i) });
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'.')
                {
                    i += 1;
                }
                let name = &text[start..i];
                let kind = if name == "q" {
                    TokenKind::Q
                } else {
                    TokenKind::Ident(name.to_string())
                };
                tokens.push(Token { kind, span: Span::new(start, i) });
            }
            _ => {
                let kind = match b {
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    b';' => TokenKind::Semi,
                    b',' => TokenKind::Comma,
                    _ => {
                        return Err(ParseError {
                            span: Span::new(start, start + 1),
                            message: format!("unknown character `{}`", text[start..].chars().next().unwrap()),
                        })
                    }
                };
                i += 1;
                tokens.push(Token { kind, span: Span::new(start, i) });
            }
        }
    }
    Ok(tokens)
}
