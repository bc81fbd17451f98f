//! Text syntax for polynomials, plus the token stream the command language
//! shares with it.
//!
//! Grammar (integers reduced mod p, `-` folds into coefficients):
//!
//! ```text
//! poly   := [ '-' ] term { ('+' | '-') term }
//! term   := factor { '*' factor }
//! factor := base [ '^' INT ]
//! base   := INT | VAR | '(' poly ')'
//! ```

use super::{PolyContext, PrimePoly};
use std::fmt;
use std::sync::Arc;

/// Byte range in the source text, for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Colon,
    Equals,
    Slash,
    Arrow,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(n) => write!(f, "{n}"),
            Token::Ident(s) => write!(f, "{s}"),
            Token::Plus => write!(f, "+"),
            Token::Minus => write!(f, "-"),
            Token::Star => write!(f, "*"),
            Token::Caret => write!(f, "^"),
            Token::LParen => write!(f, "("),
            Token::RParen => write!(f, ")"),
            Token::LBrace => write!(f, "{{"),
            Token::RBrace => write!(f, "}}"),
            Token::LBracket => write!(f, "["),
            Token::RBracket => write!(f, "]"),
            Token::Comma => write!(f, ","),
            Token::Semicolon => write!(f, ";"),
            Token::Colon => write!(f, ":"),
            Token::Equals => write!(f, "="),
            Token::Slash => write!(f, "/"),
            Token::Arrow => write!(f, "->"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    pub message: String,
    pub span: Span,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at bytes {}..{}", self.message, self.span.start, self.span.end)
    }
}

impl std::error::Error for PolyParseError {}

fn err(message: impl Into<String>, span: Span) -> PolyParseError {
    PolyParseError { message: message.into(), span }
}

/// Tokenize; `#` starts a comment running to end of line.
pub fn lex(src: &str) -> Result<Vec<(Token, Span)>, PolyParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let sp = |end: usize| Span { start: i, end };
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                let start = i;
                let mut value: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as u64))
                        .ok_or_else(|| {
                            err("integer literal too large", Span { start, end: i + 1 })
                        })?;
                    i += 1;
                }
                out.push((Token::Int(value), Span { start, end: i }));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Ident(src[start..i].to_string()), Span { start, end: i }));
            }
            b'-' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                    out.push((Token::Arrow, sp(i + 2)));
                    i += 2;
                } else {
                    out.push((Token::Minus, sp(i + 1)));
                    i += 1;
                }
            }
            b'+' => {
                out.push((Token::Plus, sp(i + 1)));
                i += 1;
            }
            b'*' => {
                out.push((Token::Star, sp(i + 1)));
                i += 1;
            }
            b'^' => {
                out.push((Token::Caret, sp(i + 1)));
                i += 1;
            }
            b'(' => {
                out.push((Token::LParen, sp(i + 1)));
                i += 1;
            }
            b')' => {
                out.push((Token::RParen, sp(i + 1)));
                i += 1;
            }
            b'{' => {
                out.push((Token::LBrace, sp(i + 1)));
                i += 1;
            }
            b'}' => {
                out.push((Token::RBrace, sp(i + 1)));
                i += 1;
            }
            b'[' => {
                out.push((Token::LBracket, sp(i + 1)));
                i += 1;
            }
            b']' => {
                out.push((Token::RBracket, sp(i + 1)));
                i += 1;
            }
            b',' => {
                out.push((Token::Comma, sp(i + 1)));
                i += 1;
            }
            b';' => {
                out.push((Token::Semicolon, sp(i + 1)));
                i += 1;
            }
            b':' => {
                out.push((Token::Colon, sp(i + 1)));
                i += 1;
            }
            b'=' => {
                out.push((Token::Equals, sp(i + 1)));
                i += 1;
            }
            b'/' => {
                out.push((Token::Slash, sp(i + 1)));
                i += 1;
            }
            other => {
                return Err(err(
                    format!("unexpected character {:?}", other as char),
                    Span { start: i, end: i + 1 },
                ))
            }
        }
    }
    Ok(out)
}

/// Token cursor used here and by the command-language parser.
pub struct TokenCursor<'a> {
    tokens: &'a [(Token, Span)],
    pos: usize,
    src_len: usize,
}

impl<'a> TokenCursor<'a> {
    pub fn new(tokens: &'a [(Token, Span)], src_len: usize) -> Self {
        TokenCursor { tokens, pos: 0, src_len }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    pub fn peek_span(&self) -> Span {
        self.tokens
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(Span { start: self.src_len, end: self.src_len })
    }

    pub fn next(&mut self) -> Option<&(Token, Span)> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn expect(&mut self, want: &Token) -> Result<Span, PolyParseError> {
        let span = self.peek_span();
        match self.next() {
            Some((t, s)) if t == want => Ok(*s),
            Some((t, s)) => Err(err(format!("expected `{want}`, found `{t}`"), *s)),
            None => Err(err(format!("expected `{want}`, found end of input"), span)),
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Span), PolyParseError> {
        let span = self.peek_span();
        match self.next() {
            Some((Token::Ident(name), s)) => Ok((name.clone(), *s)),
            Some((t, s)) => Err(err(format!("expected a name, found `{t}`"), *s)),
            None => Err(err("expected a name, found end of input", span)),
        }
    }

    pub fn expect_int(&mut self) -> Result<(u64, Span), PolyParseError> {
        let span = self.peek_span();
        match self.next() {
            Some((Token::Int(n), s)) => Ok((*n, *s)),
            Some((t, s)) => Err(err(format!("expected an integer, found `{t}`"), *s)),
            None => Err(err("expected an integer, found end of input", span)),
        }
    }
}

/// Parse a polynomial expression from a token cursor, consuming as far as the
/// expression grammar reaches. Used standalone and inside command parsing.
pub fn parse_poly_tokens(
    cur: &mut TokenCursor<'_>,
    ctx: &Arc<PolyContext>,
) -> Result<PrimePoly, PolyParseError> {
    parse_sum(cur, ctx)
}

fn parse_sum(
    cur: &mut TokenCursor<'_>,
    ctx: &Arc<PolyContext>,
) -> Result<PrimePoly, PolyParseError> {
    let mut negate = false;
    if matches!(cur.peek(), Some(Token::Minus)) {
        cur.next();
        negate = true;
    }
    let first = parse_product(cur, ctx)?;
    let mut acc = if negate { first.neg() } else { first };
    loop {
        match cur.peek() {
            Some(Token::Plus) => {
                cur.next();
                let t = parse_product(cur, ctx)?;
                acc = acc.add(&t).expect("same context");
            }
            Some(Token::Minus) => {
                cur.next();
                let t = parse_product(cur, ctx)?;
                acc = acc.sub(&t).expect("same context");
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_product(
    cur: &mut TokenCursor<'_>,
    ctx: &Arc<PolyContext>,
) -> Result<PrimePoly, PolyParseError> {
    let mut acc = parse_factor(cur, ctx)?;
    while matches!(cur.peek(), Some(Token::Star)) {
        cur.next();
        let f = parse_factor(cur, ctx)?;
        acc = acc
            .mul(&f)
            .map_err(|e| err(e.to_string(), cur.peek_span()))?;
    }
    Ok(acc)
}

fn parse_factor(
    cur: &mut TokenCursor<'_>,
    ctx: &Arc<PolyContext>,
) -> Result<PrimePoly, PolyParseError> {
    let base = parse_base(cur, ctx)?;
    if matches!(cur.peek(), Some(Token::Caret)) {
        cur.next();
        let (k, span) = cur.expect_int()?;
        return base.pow(k).map_err(|e| err(e.to_string(), span));
    }
    Ok(base)
}

fn parse_base(
    cur: &mut TokenCursor<'_>,
    ctx: &Arc<PolyContext>,
) -> Result<PrimePoly, PolyParseError> {
    let span = cur.peek_span();
    match cur.next() {
        Some((Token::Int(n), _)) => Ok(PrimePoly::constant(ctx, *n)),
        Some((Token::Ident(name), s)) => match ctx.var_index(name) {
            Some(i) => Ok(PrimePoly::var(ctx, i)),
            None => Err(err(
                format!(
                    "unknown variable `{}` (ring variables: {})",
                    name,
                    ctx.vars().join(", ")
                ),
                *s,
            )),
        },
        Some((Token::Minus, _)) => {
            let inner = parse_base(cur, ctx)?;
            Ok(inner.neg())
        }
        Some((Token::LParen, _)) => {
            let inner = parse_sum(cur, ctx)?;
            cur.expect(&Token::RParen)?;
            Ok(inner)
        }
        Some((t, s)) => Err(err(format!("expected a polynomial, found `{t}`"), *s)),
        None => Err(err("expected a polynomial, found end of input", span)),
    }
}

/// Parse a complete string as one polynomial over `ctx`.
pub fn parse_poly(src: &str, ctx: &Arc<PolyContext>) -> Result<PrimePoly, PolyParseError> {
    let tokens = lex(src)?;
    let mut cur = TokenCursor::new(&tokens, src.len());
    let poly = parse_poly_tokens(&mut cur, ctx)?;
    if !cur.at_end() {
        let span = cur.peek_span();
        return Err(err("trailing input after polynomial", span));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::MonomialOrder;

    fn ctx() -> Arc<PolyContext> {
        PolyContext::new(5, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        let ctx = ctx();
        for src in ["x^2*y+x+1", "4*x+3", "0", "x^10+y^10", "2"] {
            let p = parse_poly(src, &ctx).unwrap();
            assert_eq!(p.to_text(&MonomialOrder::GrevLex), src);
        }
    }

    #[test]
    fn minus_and_parens_normalize() {
        let ctx = ctx();
        let p = parse_poly("x - y", &ctx).unwrap();
        assert_eq!(p.to_text(&MonomialOrder::GrevLex), "x+4*y");
        let q = parse_poly("(x+y)^2 - x^2 - y^2", &ctx).unwrap();
        assert_eq!(q.to_text(&MonomialOrder::GrevLex), "2*x*y");
        let r = parse_poly("-x", &ctx).unwrap();
        assert_eq!(r.to_text(&MonomialOrder::GrevLex), "4*x");
        let s = parse_poly("7", &ctx).unwrap();
        assert_eq!(s.to_text(&MonomialOrder::GrevLex), "2");
    }

    #[test]
    fn unknown_variable_is_reported_with_span() {
        let ctx = ctx();
        let e = parse_poly("x + z", &ctx).unwrap_err();
        assert!(e.message.contains("unknown variable `z`"));
        assert_eq!(e.span.start, 4);
    }

    #[test]
    fn trailing_garbage_rejected() {
        let ctx = ctx();
        assert!(parse_poly("x + y )", &ctx).is_err());
        assert!(parse_poly("x ^", &ctx).is_err());
        assert!(parse_poly("", &ctx).is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let ctx = ctx();
        let p = parse_poly("x # the first variable\n + y", &ctx).unwrap();
        assert_eq!(p.to_text(&MonomialOrder::GrevLex), "x+y");
    }
}
