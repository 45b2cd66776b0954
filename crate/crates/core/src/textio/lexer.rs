use std::fmt;

use super::{ParseError, ParseErrorKind, Position};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Int,
    Ident,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    /// `;`, between a weight and its polynomial.
    Separator,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Int => "integer",
            TokenKind::Ident => "identifier",
            TokenKind::Plus => "'+'",
            TokenKind::Minus => "'-'",
            TokenKind::Star => "'*'",
            TokenKind::Caret => "'^'",
            TokenKind::Slash => "'/'",
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::Separator => "';'",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub pos: Position,
}

/// Splits one line of text into tokens; `start` is the position of its first
/// character. Always ends with an `Eof` token.
pub fn tokenize(text: &str, start: Position) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let at = |i: usize| Position { line: start.line, column: start.column + i };
    while i < chars.len() {
        let c = chars[i];
        if c == ' ' || c == '\t' || c == '\r' {
            i += 1;
            continue;
        }
        let begin = i;
        let kind = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            TokenKind::Int
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            TokenKind::Ident
        } else {
            i += 1;
            match c {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '^' => TokenKind::Caret,
                '/' => TokenKind::Slash,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                ';' => TokenKind::Separator,
                other => {
                    return Err(ParseError {
                        pos: at(begin),
                        kind: ParseErrorKind::Syntax {
                            expected: vec!["number".into(), "identifier".into(), "operator".into()],
                            found: format!("{other:?}"),
                        },
                    })
                }
            }
        };
        out.push(Token { kind, lexeme: chars[begin..i].iter().collect(), pos: at(begin) });
    }
    out.push(Token { kind: TokenKind::Eof, lexeme: String::new(), pos: at(chars.len()) });
    Ok(out)
}
