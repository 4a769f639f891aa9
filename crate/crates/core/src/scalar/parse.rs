//! Text syntax for scalars.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') ['-'] term)*
//! term   := factor (('*' | '/')? factor)*
//! factor := atom ('^' INT)*
//! atom   := INT | PARAM | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies (`2p` is `2*p`). `/` is accepted so rational
//! functions print and parse symmetrically.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => return Err(ParseError { offset: i, message: format!("unexpected character `{other}`") }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.signed_term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.signed_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<Scalar, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.term()?.neg());
        }
        self.term()
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.factor()?;
                    acc = acc.div(&d).ok_or(ParseError { offset: at, message: "division by zero".into() })?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = match u32::try_from(&e) {
                        Ok(e) if e <= 64 => e,
                        _ => return self.err("exponent too large"),
                    };
                    base = base.pow(e);
                }
                _ => return self.err("expected integer exponent after `^`"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Scalar::from(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Scalar::var(&name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, parameter or `(`"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses an expression in the scalar grammar.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parses a rational literal such as `3`, `-2` or `1/2`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let v = parse_scalar(text)?;
    v.as_rational().ok_or(ParseError { offset: 0, message: format!("`{text}` is not a rational constant") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_juxtaposition() {
        let a = parse_scalar("2p+q^2").unwrap();
        let b = parse_scalar("2*p + q*q").unwrap();
        assert_eq!(a, b);
        let c = parse_scalar("-(p-q)^2").unwrap();
        let d = parse_scalar("-p^2 + 2*p*q - q^2").unwrap();
        assert_eq!(c, d);
        let e = parse_scalar("p - -q").unwrap();
        assert_eq!(e, parse_scalar("p+q").unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_scalar("p + * q").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_scalar("(p + q").is_err());
        assert!(parse_scalar("p^q").is_err());
        assert!(parse_scalar("p $ q").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-1/2").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("p").is_err());
    }
}
