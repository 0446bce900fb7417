//! Text syntax for word-algebra expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*
//! factor := 'e'<k> | 'E'<n>','<m> | 'b' ['^' int] | 'q' ['^' int] | int | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies, so `e1 e0 e1` is a single product.

use super::coeff::TLCoefficient;
use super::element::{chain_word, TLElement};
use super::word::Gen;
use crate::error::ParseError;

const MAX_GENERATOR: u32 = 4096;
const MAX_EXPONENT: i64 = 4096;
const MAX_DEPTH: usize = 256;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Gen(Gen),
    Chain(Gen, Gen),
    Beta(i64),
    Q(i64),
    Int(i64),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { position: pos, message: msg.into() }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, "expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| self.err(start, "number too large"))
    }

    fn index(&mut self) -> Result<Gen, ParseError> {
        let start = self.pos;
        let n = self.number()?;
        if n > MAX_GENERATOR {
            return Err(self.err(start, format!("generator index {n} exceeds {MAX_GENERATOR}")));
        }
        Ok(n as Gen)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        if self.src.get(self.pos) != Some(&b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            self.pos += 1;
        }
        let start = self.pos;
        let n = self.number()? as i64;
        if n > MAX_EXPONENT {
            return Err(self.err(start, format!("exponent {n} exceeds {MAX_EXPONENT}")));
        }
        Ok(if neg { -n } else { n })
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let start = self.pos;
            if c.is_ascii_whitespace() {
                self.pos += 1;
                continue;
            }
            let tok = match c {
                b'e' => {
                    self.pos += 1;
                    Tok::Gen(self.index()?)
                }
                b'E' => {
                    self.pos += 1;
                    let n = self.index()?;
                    if self.src.get(self.pos) != Some(&b',') {
                        return Err(self.err(self.pos, "expected ',' in chain E<n>,<m>"));
                    }
                    self.pos += 1;
                    Tok::Chain(n, self.index()?)
                }
                b'b' => {
                    self.pos += 1;
                    Tok::Beta(self.exponent()?)
                }
                b'q' => {
                    self.pos += 1;
                    Tok::Q(self.exponent()?)
                }
                b'0'..=b'9' => Tok::Int(self.number()? as i64),
                b'+' => {
                    self.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    self.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    self.pos += 1;
                    Tok::Star
                }
                b'(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                _ => return Err(self.err(start, format!("unexpected character {:?}", c as char))),
            };
            out.push((start, tok));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { position: self.pos(), message: msg.into() }
    }

    fn expr(&mut self) -> Result<TLElement, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.idx += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Gen(_) | Tok::Chain(..) | Tok::Beta(_) | Tok::Q(_) | Tok::Int(_) | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<TLElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.idx += 1;
                acc = &acc * &self.factor()?;
            } else if self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<TLElement, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        self.idx += 1;
        Ok(match tok {
            Tok::Gen(k) => TLElement::generator(k),
            Tok::Chain(n, m) => chain_word(n, m),
            Tok::Beta(k) => TLElement::scalar(TLCoefficient::beta_pow(k)),
            Tok::Q(k) => TLElement::scalar(TLCoefficient::q_pow(k)),
            Tok::Int(n) => TLElement::scalar(TLCoefficient::from_int(n)),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.idx += 1;
                inner
            }
            _ => {
                self.idx -= 1;
                return Err(self.err("expected a factor"));
            }
        })
    }
}

/// Parses an expression into its normal form.
pub fn parse_expression(src: &str) -> Result<TLElement, ParseError> {
    let toks = Lexer { src: src.as_bytes(), pos: 0 }.tokens()?;
    let mut p = Parser { toks, idx: 0, end: src.len(), depth: 0 };
    if p.toks.is_empty() {
        return Err(ParseError { position: 0, message: "empty expression".into() });
    }
    let e = p.expr()?;
    if p.idx != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn juxtaposition_is_product() {
        let x = parse_expression("e1 e0 e1").unwrap();
        assert_eq!(x.to_string(), "b^-1 * e1");
    }

    #[test]
    fn chains_scalars_and_sums() {
        assert_eq!(parse_expression("E2,0").unwrap().to_string(), "e2 e1 e0");
        assert_eq!(parse_expression("b * e0 e1 e0").unwrap().to_string(), "e0");
        assert_eq!(parse_expression("2 * (e0 + 1) - e0").unwrap().to_string(), "2 + e0");
        assert_eq!(parse_expression("b^-1").unwrap().to_string(), "b^-1");
        assert_eq!(parse_expression("q^2 b^-1").unwrap().to_string(), "1");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expression("e1 + ").unwrap_err();
        assert_eq!(err.position, 5);
        let err = parse_expression("e1 $").unwrap_err();
        assert_eq!(err.position, 3);
        assert!(parse_expression("E2 0").is_err());
        assert!(parse_expression("(e0").is_err());
        assert!(parse_expression("").is_err());
        assert!(parse_expression("e99999999999").is_err());
    }
}
