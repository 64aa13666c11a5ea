//! Recursive-descent parser and canonical printer.

use super::lexer::{Span, Token, TokenKind};
use super::ParseError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression AST; every node carries its source span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    /// Integer constant.
    Int(i64),
    /// The formal variable `q`.
    Q,
    /// Bare identifier, meaningful only as a call argument (e.g. `alt`).
    Tag(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer-literal exponent only.
    Pow(Box<Expr>, i64),
    /// `name(group; group; ...)` with comma-separated items per group.
    Call(String, Vec<Vec<Expr>>),
    /// `sub(expr; base)`: evaluate `expr` with the base substituted for `q`.
    Subst(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    eof: Span,
}

/// Parse a token stream into an expression.
pub fn parse(tokens: &[Token]) -> Result<Expr, ParseError> {
    let eof = tokens.last().map_or(Span::new(0, 0), |t| Span::new(t.span.end, t.span.end));
    let mut p = Parser { tokens, pos: 0, eof };
    let expr = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseError {
            span: t.span,
            message: format!("unexpected {} after expression", describe(&t.kind)),
        });
    }
    Ok(expr)
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Int(v) => format!("integer `{}`", v),
        TokenKind::Q => "`q`".into(),
        TokenKind::Ident(s) => format!("identifier `{}`", s),
        TokenKind::Plus => "`+`".into(),
        TokenKind::Minus => "`-`".into(),
        TokenKind::Star => "`*`".into(),
        TokenKind::Slash => "`/`".into(),
        TokenKind::Caret => "`^`".into(),
        TokenKind::LParen => "`(`".into(),
        TokenKind::RParen => "`)`".into(),
        TokenKind::Semi => "`;`".into(),
        TokenKind::Comma => "`,`".into(),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> Span {
        self.peek().map_or(self.eof, |t| t.span)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { span: self.here(), message: message.into() })
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.pos += 1;
                Ok(t.span)
            }
            Some(t) => Err(ParseError {
                span: t.span,
                message: format!("expected {}, found {}", what, describe(&t.kind)),
            }),
            None => Err(ParseError { span: self.eof, message: format!("expected {}", what) }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => break,
            };
            self.advance();
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => break,
            };
            self.advance();
            let rhs = self.unary()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Minus {
                let start = t.span;
                self.advance();
                let inner = self.unary()?;
                let span = start.join(inner.span);
                return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
            }
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&TokenKind::Minus);
        let (value, vspan) = match self.advance() {
            Some(Token { kind: TokenKind::Int(v), span }) => (*v, *span),
            Some(t) => {
                return Err(ParseError {
                    span: t.span,
                    message: format!("expected integer exponent, found {}", describe(&t.kind)),
                })
            }
            None => return self.error("expected integer exponent"),
        };
        if self.peek().is_some_and(|t| t.kind == TokenKind::Caret) {
            return self.error("chained `^` requires parentheses");
        }
        let span = base.span.join(vspan);
        Ok(Expr {
            kind: ExprKind::Pow(Box::new(base), if negative { -value } else { value }),
            span,
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.advance() {
            Some(Token { kind: TokenKind::Int(v), span }) => {
                Ok(Expr { kind: ExprKind::Int(*v), span: *span })
            }
            Some(Token { kind: TokenKind::Q, span }) => Ok(Expr { kind: ExprKind::Q, span: *span }),
            Some(Token { kind: TokenKind::LParen, span }) => {
                let inner = self.expr()?;
                let close = self.expect(TokenKind::RParen, "`)`")?;
                Ok(Expr { kind: inner.kind, span: span.join(close) })
            }
            Some(Token { kind: TokenKind::Ident(name), span }) => {
                if self.peek().is_some_and(|t| t.kind == TokenKind::LParen) {
                    self.call(name, *span)
                } else {
                    Ok(Expr { kind: ExprKind::Tag(name.clone()), span: *span })
                }
            }
            Some(t) => Err(ParseError {
                span: t.span,
                message: format!("expected an expression, found {}", describe(&t.kind)),
            }),
            None => self.error("expected an expression"),
        }
    }

    fn call(&mut self, name: &str, name_span: Span) -> Result<Expr, ParseError> {
        self.expect(TokenKind::LParen, "`(`")?;
        let mut groups: Vec<Vec<Expr>> = Vec::new();
        if self.peek().is_some_and(|t| t.kind == TokenKind::RParen) {
            let close = self.advance().unwrap().span;
            return self.finish_call(name, name_span.join(close), groups);
        }
        loop {
            let mut group = Vec::new();
            loop {
                group.push(self.expr()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
            groups.push(group);
            if self.eat(&TokenKind::Semi) {
                continue;
            }
            let close = self.expect(TokenKind::RParen, "`)`, `;`, or `,`")?;
            return self.finish_call(name, name_span.join(close), groups);
        }
    }

    fn finish_call(
        &self,
        name: &str,
        span: Span,
        mut groups: Vec<Vec<Expr>>,
    ) -> Result<Expr, ParseError> {
        if name == "sub" {
            // substitute-base wrapper: sub(expr; base)
            if groups.len() != 2 || groups[0].len() != 1 || groups[1].len() != 1 {
                return Err(ParseError {
                    span,
                    message: "sub expects two groups: sub(expression; base)".into(),
                });
            }
            let base = groups.pop().unwrap().pop().unwrap();
            let inner = groups.pop().unwrap().pop().unwrap();
            return Ok(Expr { kind: ExprKind::Subst(Box::new(inner), Box::new(base)), span });
        }
        Ok(Expr { kind: ExprKind::Call(name.to_string(), groups), span })
    }
}

/// Canonical printer: `parse(print_expr(e))` reproduces `e` up to spans.
pub fn print_expr(expr: &Expr) -> String {
    let mut out = String::new();
    print_prec(expr, 0, &mut out);
    out
}

fn precedence(expr: &Expr) -> u8 {
    match &expr.kind {
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        ExprKind::Neg(..) => 3,
        ExprKind::Pow(..) => 4,
        _ => 5,
    }
}

fn print_prec(expr: &Expr, min_prec: u8, out: &mut String) {
    let prec = precedence(expr);
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match &expr.kind {
        ExprKind::Int(v) => out.push_str(&v.to_string()),
        ExprKind::Q => out.push('q'),
        ExprKind::Tag(name) => out.push_str(name),
        ExprKind::Neg(inner) => {
            out.push('-');
            print_prec(inner, 4, out);
        }
        ExprKind::Binary(op, lhs, rhs) => {
            print_prec(lhs, prec, out);
            out.push_str(match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => "*",
                BinOp::Div => "/",
            });
            // a right operand at equal precedence keeps its parentheses so
            // the printed shape reparses to the same tree
            print_prec(rhs, prec + 1, out);
        }
        ExprKind::Pow(base, exponent) => {
            print_prec(base, 5, out);
            out.push('^');
            out.push_str(&exponent.to_string());
        }
        ExprKind::Call(name, groups) => {
            out.push_str(name);
            out.push('(');
            for (gi, group) in groups.iter().enumerate() {
                if gi > 0 {
                    out.push_str("; ");
                }
                for (ii, item) in group.iter().enumerate() {
                    if ii > 0 {
                        out.push(',');
                    }
                    print_prec(item, 0, out);
                }
            }
            out.push(')');
        }
        ExprKind::Subst(inner, base) => {
            out.push_str("sub(");
            print_prec(inner, 0, out);
            out.push_str("; ");
            print_prec(base, 0, out);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_expr, tokenize};
    use super::*;

    fn roundtrips(text: &str) {
        let ast = parse_expr(text).unwrap();
        let printed = print_expr(&ast);
        let reparsed = parse_expr(&printed).unwrap();
        assert_eq!(print_expr(&reparsed), printed, "source: {}", text);
    }

    #[test]
    fn difference_of_call_and_product() {
        let ast = parse_expr("f(1,2,1;q,q;q) - J(1)*J(1)").unwrap();
        match &ast.kind {
            ExprKind::Binary(BinOp::Sub, lhs, rhs) => {
                assert!(matches!(&lhs.kind, ExprKind::Call(name, groups) if name == "f" && groups.len() == 3));
                assert!(matches!(&rhs.kind, ExprKind::Binary(BinOp::Mul, ..)));
            }
            other => panic!("unexpected shape: {:?}", other),
        }
    }

    #[test]
    fn scalar_times_appell() {
        let ast = parse_expr("2*m(q;3;-1)").unwrap();
        match &ast.kind {
            ExprKind::Binary(BinOp::Mul, lhs, rhs) => {
                assert!(matches!(lhs.kind, ExprKind::Int(2)));
                assert!(matches!(&rhs.kind, ExprKind::Call(name, groups)
                    if name == "m" && groups.len() == 3 && groups[2].len() == 1));
            }
            other => panic!("unexpected shape: {:?}", other),
        }
    }

    #[test]
    fn monomial_arguments() {
        let ast = parse_expr("g(1,2,2; q, -q^3; q)").unwrap();
        match &ast.kind {
            ExprKind::Call(name, groups) => {
                assert_eq!(name, "g");
                assert_eq!(groups[1].len(), 2);
                match &groups[1][1].kind {
                    ExprKind::Neg(inner) => {
                        assert!(matches!(inner.kind, ExprKind::Pow(ref b, 3) if matches!(b.kind, ExprKind::Q)));
                    }
                    other => panic!("expected -q^3, got {:?}", other),
                }
            }
            other => panic!("unexpected shape: {:?}", other),
        }
    }

    #[test]
    fn unbalanced_parens_positioned() {
        let err = parse_expr("(1 + q").unwrap_err();
        assert_eq!(err.span.start, 6);
    }

    #[test]
    fn missing_group_reported() {
        assert!(parse_expr("f(1,2,1;;q)").is_err());
        assert!(parse_expr("f(1,2,1; q,)").is_err());
    }

    #[test]
    fn chained_caret_rejected() {
        assert!(parse_expr("q^2^3").is_err());
    }

    #[test]
    fn negative_exponent_literal() {
        let ast = parse_expr("q^-1").unwrap();
        assert!(matches!(ast.kind, ExprKind::Pow(_, -1)));
    }

    #[test]
    fn trailing_tokens_rejected() {
        assert!(parse_expr("1 + q )").is_err());
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn substitute_wrapper() {
        let ast = parse_expr("sub(q + q^2; -q^3)").unwrap();
        assert!(matches!(ast.kind, ExprKind::Subst(..)));
        assert!(parse_expr("sub(q)").is_err());
        assert!(parse_expr("sub(q; q; q)").is_err());
    }

    #[test]
    fn printer_roundtrips() {
        for text in [
            "f(1,2,1; q,q; q) - Jm(1)^2",
            "2*m(q; 3; -1)",
            "(1 + 2*q^2*ft(8,8,0; alt; nonneg))/(1 + q^2)",
            "q^4 * sub(g(6,3,2; -q^5,-q^3; q) - q*g(6,3,2; -q^7,-q^4; q); q^3)",
            "a - (b - c)",
            "-(-1)",
            "1/q - ft(6,4,-1; plus; nonneg)",
            "phi()",
            "aw(e1.1a)",
        ] {
            roundtrips(text);
        }
    }

    #[test]
    fn parser_survives_random_noise() {
        // no panic on arbitrary byte soup; errors must carry positions
        let mut state: u64 = 0x9e3779b97f4a7c15;
        for _ in 0..2000 {
            let mut text = String::new();
            let len = (state % 24) as usize;
            for _ in 0..len {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let c = (state >> 33) as u8 % 96 + 32;
                text.push(c as char);
            }
            match tokenize(&text).and_then(|t| parse(&t)) {
                Ok(_) => {}
                Err(e) => assert!(e.span.end <= text.len() + 1),
            }
        }
    }
}
