//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | base ('^' nat)?
//! base     := rational | identifier | '(' expr ')'
//! rational := int ('/' posint)?
//! ```
//!
//! Expressions are expanded eagerly into a [`MultiPoly`]; identifiers are
//! resolved through a caller-supplied table, which is how `theta` becomes
//! the field generator in one context and an ordinary variable in another.

use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{Token, TokenKind};
use super::{ParseError, ParseErrorKind, Position};
use crate::poly::{Coefficient, MultiPoly};
use crate::Rational;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 256;
const MAX_DEPTH: usize = 128;

/// Identifier table: name to the polynomial it stands for.
pub type Bindings<'a, C> = &'a [(&'a str, MultiPoly<C>)];

pub struct Parser<'t, 'b, C: Coefficient> {
    tokens: &'t [Token],
    at: usize,
    depth: usize,
    bindings: Bindings<'b, C>,
    /// The zero polynomial of the target ring; also carries variables and ring.
    zero: MultiPoly<C>,
}

impl<'t, 'b, C: Coefficient> Parser<'t, 'b, C> {
    pub fn new(tokens: &'t [Token], bindings: Bindings<'b, C>, zero: MultiPoly<C>) -> Self {
        Parser { tokens, at: 0, depth: 0, bindings, zero }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.at.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.at < self.tokens.len() - 1 {
            self.at += 1;
        }
        t
    }

    pub fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[kind.to_string()]))
        }
    }

    pub fn unexpected(&self, expected: &[String]) -> ParseError {
        let t = self.peek();
        let found = if t.kind == TokenKind::Eof { "end of input".to_string() } else { format!("'{}'", t.lexeme) };
        ParseError { pos: t.pos, kind: ParseErrorKind::Syntax { expected: expected.to_vec(), found } }
    }

    /// A whole expression followed by the end of input.
    pub fn parse_complete(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let p = self.expr()?;
        if self.peek().kind != TokenKind::Eof {
            return Err(self.unexpected(&["'+'".into(), "'-'".into(), "'*'".into(), "'^'".into(), "end of input".into()]));
        }
        Ok(p)
    }

    pub fn expr(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    acc.add_assign_unchecked(&self.term()?);
                }
                TokenKind::Minus => {
                    self.bump();
                    acc.add_assign_unchecked(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().kind == TokenKind::Star {
            self.bump();
            acc = acc.mul_unchecked(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let mut negate = false;
        while self.peek().kind == TokenKind::Minus {
            self.bump();
            negate = !negate;
        }
        let base = self.base()?;
        let value = if self.peek().kind == TokenKind::Caret {
            self.bump();
            base.pow(self.exponent()?)
        } else {
            base
        };
        Ok(if negate { value.neg() } else { value })
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let t = self.peek().clone();
        if t.kind != TokenKind::Int {
            let shown = if t.kind == TokenKind::Eof { "end of input".to_string() } else { t.lexeme.clone() };
            return Err(ParseError { pos: t.pos, kind: ParseErrorKind::ExponentNotNatural(shown) });
        }
        self.bump();
        match t.lexeme.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(ParseError { pos: t.pos, kind: ParseErrorKind::ExponentTooLarge(t.lexeme) }),
        }
    }

    fn base(&mut self) -> Result<MultiPoly<C>, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Int => {
                let c = self.rational()?;
                let ring = self.zero.ring().clone();
                Ok(MultiPoly::constant(self.zero.shared_vars(), ring.clone(), C::from_rational(&ring, c)))
            }
            TokenKind::Ident => {
                self.bump();
                self.bindings
                    .iter()
                    .find(|(name, _)| *name == t.lexeme)
                    .map(|(_, p)| p.clone())
                    .ok_or(ParseError { pos: t.pos, kind: ParseErrorKind::UnknownIdentifier(t.lexeme) })
            }
            TokenKind::LParen => {
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(ParseError { pos: t.pos, kind: ParseErrorKind::TooDeep });
                }
                self.bump();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                self.depth -= 1;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["number".into(), "identifier".into(), "'('".into(), "'-'".into()])),
        }
    }

    /// `int ('/' posint)?`
    pub fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = self.expect(TokenKind::Int)?;
        let num: BigInt = num.lexeme.parse().expect("digits");
        if self.peek().kind != TokenKind::Slash {
            return Ok(Rational::from_integer(num));
        }
        self.bump();
        let den_tok = self.peek().clone();
        let den = self.expect(TokenKind::Int)?;
        let den: BigInt = den.lexeme.parse().expect("digits");
        if den.is_zero() {
            return Err(ParseError {
                pos: den_tok.pos,
                kind: ParseErrorKind::Syntax { expected: vec!["positive integer".into()], found: "0".into() },
            });
        }
        Ok(Rational::new(num, den))
    }

    pub fn position(&self) -> Position {
        self.peek().pos
    }
}
