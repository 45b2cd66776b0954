//! Problem (`.sos`) and certificate (`.cert`) files.
//!
//! Both formats are line oriented, UTF-8, with `#` starting a comment:
//!
//! ```text
//! # problem
//! minpoly: theta^3 - 3*theta + 1
//! vars: x y
//! square: x^3 + theta^2*y + (2 - theta - theta^2)*x*y^2 - 1
//! target: 3*x^6 + ...            (optional)
//!
//! # certificate
//! certificate: v1
//! minpoly: theta^3 - 3*theta + 1
//! vars: x y
//! degree: 3
//! inputs: 3
//! mode: weighted                 (or expanded)
//! compressed: yes                (or no)
//! term: 9/2 ; -x*y^2 + y         (weighted terms)
//! sq: 3/2*y                      (pure squares, expanded mode only)
//! ```
//!
//! Sections may come in any order; repeated `square:`, `term:` and `sq:`
//! lines keep their relative order. The reserved identifier `theta` is the
//! field generator and cannot be declared in `vars`.

mod expr;
mod lexer;
mod print;

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::descent::{Certificate, SosProblem, WeightedSos, WeightedTerm};
use crate::field::{FieldError, NumberField};
use crate::poly::{KPoly, QPoly, Rationals};
use crate::Rational;

pub use expr::MAX_EXPONENT;
pub use lexer::{tokenize, Token, TokenKind};
pub use print::{print_kpoly, print_qpoly, print_theta_poly};

/// Name of the field generator in every file.
pub const THETA: &str = "theta";

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub const START: Position = Position { line: 1, column: 1 };
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Position,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax { expected: Vec<String>, found: String },
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("exponent must be a natural number, found {0}")]
    ExponentNotNatural(String),
    #[error("exponent {0} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge(String),
    #[error("parentheses nested too deeply")]
    TooDeep,
    #[error("invalid UTF-8")]
    InvalidUtf8,
    #[error("unknown section '{0}'")]
    UnknownSection(String),
    #[error("duplicate section '{0}'")]
    DuplicateSection(String),
    #[error("missing section '{0}'")]
    MissingSection(&'static str),
    #[error("'theta' is reserved for the field generator")]
    ReservedVariable,
    #[error("invalid variable name '{0}'")]
    InvalidVariable(String),
    #[error("variable '{0}' declared twice")]
    DuplicateVariable(String),
    #[error("weight {0} is not positive")]
    NonPositiveWeight(String),
    #[error("bad minimal polynomial: {0}")]
    Field(FieldError),
    #[error("{0}")]
    Inconsistent(String),
}

impl ParseError {
    fn at(pos: Position, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }
}

/// Checks UTF-8 and reports the position of the first bad byte.
pub fn decode_utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let good = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
        let line = good.matches('\n').count() + 1;
        let column = good.rsplit('\n').next().unwrap_or("").chars().count() + 1;
        ParseError::at(Position { line, column }, ParseErrorKind::InvalidUtf8)
    })
}

fn var_bindings<C: crate::poly::Coefficient>(
    vars: &Arc<[String]>,
    ring: &C::Ring,
) -> Vec<(String, crate::poly::MultiPoly<C>)> {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), crate::poly::MultiPoly::var(vars.clone(), ring.clone(), i)))
        .collect()
}

fn parse_with<C: crate::poly::Coefficient>(
    text: &str,
    start: Position,
    bindings: &[(String, crate::poly::MultiPoly<C>)],
    zero: crate::poly::MultiPoly<C>,
) -> Result<crate::poly::MultiPoly<C>, ParseError> {
    let tokens = tokenize(text, start)?;
    let table: Vec<(&str, crate::poly::MultiPoly<C>)> =
        bindings.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    expr::Parser::new(&tokens, &table, zero).parse_complete()
}

/// Parses a polynomial in `vars` and `theta` over `field`, expanded and
/// reduced modulo the minimal polynomial.
pub fn parse_poly(text: &str, vars: &Arc<[String]>, field: &NumberField) -> Result<KPoly, ParseError> {
    parse_poly_at(text, Position::START, vars, field)
}

fn parse_poly_at(text: &str, start: Position, vars: &Arc<[String]>, field: &NumberField) -> Result<KPoly, ParseError> {
    let mut bindings = var_bindings::<crate::FieldElement>(vars, field);
    bindings.push((THETA.to_string(), KPoly::constant(vars.clone(), field.clone(), field.generator())));
    parse_with(text, start, &bindings, KPoly::zero(vars.clone(), field.clone()))
}

/// Parses a polynomial over `Q` in `vars` (no `theta`).
pub fn parse_rational_poly(text: &str, vars: &Arc<[String]>) -> Result<QPoly, ParseError> {
    parse_rational_poly_at(text, Position::START, vars)
}

fn parse_rational_poly_at(text: &str, start: Position, vars: &Arc<[String]>) -> Result<QPoly, ParseError> {
    let bindings = var_bindings::<Rational>(vars, &Rationals);
    parse_with(text, start, &bindings, QPoly::rational_zero(vars.clone()))
}

/// Parses a univariate polynomial in `theta` and builds the field.
pub fn parse_minpoly(text: &str) -> Result<NumberField, ParseError> {
    parse_minpoly_at(text, Position::START)
}

fn parse_minpoly_at(text: &str, start: Position) -> Result<NumberField, ParseError> {
    let theta: Arc<[String]> = Arc::from(vec![THETA.to_string()]);
    let p = parse_rational_poly_at(text, start, &theta)?;
    let degree = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Rational::zero(); degree + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[0] as usize] = c.clone();
    }
    NumberField::new(coeffs).map_err(|e| ParseError::at(start, ParseErrorKind::Field(e)))
}

/// A rational literal `[-]int[/posint]`, as accepted by `foursquare`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let tokens = tokenize(text, Position::START)?;
    let table: [(&str, QPoly); 0] = [];
    let mut parser = expr::Parser::new(&tokens, &table, QPoly::rational_zero(Arc::from(Vec::<String>::new())));
    let negative = parser.peek().kind == TokenKind::Minus;
    if negative {
        parser.expect(TokenKind::Minus)?;
    }
    let value = parser.rational()?;
    parser.expect(TokenKind::Eof)?;
    Ok(if negative { -value } else { value })
}

/// A `key: value` line with the position of the value's first character.
struct Line<'a> {
    key: &'a str,
    key_pos: Position,
    value: &'a str,
    value_pos: Position,
}

fn split_lines(text: &str) -> Result<(Vec<Line<'_>>, Position), ParseError> {
    let mut out = Vec::new();
    let mut end = Position::START;
    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        end = Position { line, column: raw.chars().count() + 1 };
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.chars().take_while(|c| c.is_whitespace()).count();
        let key_pos = Position { line, column: indent + 1 };
        let Some(colon) = content.find(':') else {
            let column = content.trim_end().chars().count() + 1;
            return Err(ParseError::at(
                Position { line, column },
                ParseErrorKind::Syntax { expected: vec!["':'".into()], found: "end of line".into() },
            ));
        };
        let key = content[..colon].trim();
        let rest = &content[colon + 1..];
        let lead = rest.chars().take_while(|c| c.is_whitespace()).count();
        let value_col = content[..colon + 1].chars().count() + lead + 1;
        out.push(Line {
            key,
            key_pos,
            value: rest.trim(),
            value_pos: Position { line, column: value_col },
        });
    }
    Ok((out, end))
}

/// Collects singleton sections and rejects duplicates or unknown keys.
struct Sections<'a> {
    lines: Vec<Line<'a>>,
    end: Position,
}

impl<'a> Sections<'a> {
    fn new(text: &'a str, known: &[&str], repeatable: &[&str]) -> Result<Self, ParseError> {
        let (lines, end) = split_lines(text)?;
        let mut seen: Vec<&str> = Vec::new();
        for l in &lines {
            if !known.contains(&l.key) {
                return Err(ParseError::at(l.key_pos, ParseErrorKind::UnknownSection(l.key.to_string())));
            }
            if !repeatable.contains(&l.key) {
                if seen.contains(&l.key) {
                    return Err(ParseError::at(l.key_pos, ParseErrorKind::DuplicateSection(l.key.to_string())));
                }
                seen.push(l.key);
            }
        }
        Ok(Sections { lines, end })
    }

    fn single(&self, key: &'static str) -> Result<&Line<'a>, ParseError> {
        self.lines
            .iter()
            .find(|l| l.key == key)
            .ok_or(ParseError::at(self.end, ParseErrorKind::MissingSection(key)))
    }

    fn optional(&self, key: &str) -> Option<&Line<'a>> {
        self.lines.iter().find(|l| l.key == key)
    }

    fn all(&self, key: &'a str) -> impl Iterator<Item = &Line<'a>> + '_ {
        self.lines.iter().filter(move |l| l.key == key)
    }
}

fn parse_vars(line: &Line<'_>) -> Result<Arc<[String]>, ParseError> {
    let mut vars: Vec<String> = Vec::new();
    let mut column = line.value_pos.column;
    let mut rest = line.value;
    while !rest.is_empty() {
        let word_len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let word = &rest[..word_len];
        let pos = Position { line: line.value_pos.line, column };
        let valid = word.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && word.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(ParseError::at(pos, ParseErrorKind::InvalidVariable(word.to_string())));
        }
        if word == THETA {
            return Err(ParseError::at(pos, ParseErrorKind::ReservedVariable));
        }
        if vars.iter().any(|v| v == word) {
            return Err(ParseError::at(pos, ParseErrorKind::DuplicateVariable(word.to_string())));
        }
        vars.push(word.to_string());
        let after = &rest[word_len..];
        let gap = after.len() - after.trim_start().len();
        column += word.chars().count() + after[..gap].chars().count();
        rest = after.trim_start();
    }
    Ok(Arc::from(vars))
}

pub fn parse_problem(text: &str) -> Result<SosProblem, ParseError> {
    let sections = Sections::new(text, &["minpoly", "vars", "square", "target"], &["square"])?;
    let minpoly = sections.single("minpoly")?;
    let field = parse_minpoly_at(minpoly.value, minpoly.value_pos)?;
    let vars = parse_vars(sections.single("vars")?)?;
    let squares: Vec<KPoly> = sections
        .all("square")
        .map(|l| parse_poly_at(l.value, l.value_pos, &vars, &field))
        .collect::<Result<_, _>>()?;
    if squares.is_empty() {
        return Err(ParseError::at(sections.end, ParseErrorKind::MissingSection("square")));
    }
    let target = sections
        .optional("target")
        .map(|l| parse_rational_poly_at(l.value, l.value_pos, &vars))
        .transpose()?;
    Ok(SosProblem::new(field, vars, squares, target).expect("all polynomials parsed over the same ring"))
}

pub fn parse_problem_bytes(bytes: &[u8]) -> Result<SosProblem, ParseError> {
    parse_problem(decode_utf8(bytes)?)
}

pub fn print_problem(p: &SosProblem) -> String {
    let mut out = String::new();
    out.push_str(&format!("minpoly: {}\n", print_theta_poly(p.field().minpoly())));
    out.push_str(&format!("vars: {}\n", p.vars().join(" ")));
    for s in p.squares() {
        out.push_str(&format!("square: {}\n", print_kpoly(s)));
    }
    if let Some(t) = p.target() {
        out.push_str(&format!("target: {}\n", print_qpoly(t)));
    }
    out
}

fn parse_count(line: &Line<'_>) -> Result<usize, ParseError> {
    line.value.parse().map_err(|_| {
        ParseError::at(
            line.value_pos,
            ParseErrorKind::Syntax { expected: vec!["natural number".into()], found: format!("'{}'", line.value) },
        )
    })
}

fn parse_choice<'v>(line: &Line<'_>, choices: &[&'v str]) -> Result<&'v str, ParseError> {
    choices.iter().copied().find(|c| *c == line.value).ok_or_else(|| {
        ParseError::at(
            line.value_pos,
            ParseErrorKind::Syntax {
                expected: choices.iter().map(|c| format!("'{c}'")).collect(),
                found: format!("'{}'", line.value),
            },
        )
    })
}

/// `<rational> ; <poly>`; the weight may carry a sign so that non-positive
/// weights are reported as such rather than as syntax errors.
fn parse_term(line: &Line<'_>, vars: &Arc<[String]>) -> Result<WeightedTerm, ParseError> {
    let tokens = tokenize(line.value, line.value_pos)?;
    let bindings = var_bindings::<Rational>(vars, &Rationals);
    let table: Vec<(&str, QPoly)> = bindings.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    let mut parser = expr::Parser::new(&tokens, &table, QPoly::rational_zero(vars.clone()));
    let weight_pos = parser.position();
    let negative = parser.peek().kind == TokenKind::Minus;
    if negative {
        parser.expect(TokenKind::Minus)?;
    }
    let mut weight = parser.rational()?;
    if negative {
        weight = -weight;
    }
    parser.expect(TokenKind::Separator)?;
    let poly = parser.parse_complete()?;
    if !weight.is_positive() {
        return Err(ParseError::at(weight_pos, ParseErrorKind::NonPositiveWeight(weight.to_string())));
    }
    Ok(WeightedTerm { weight, poly })
}

pub fn parse_certificate(text: &str) -> Result<Certificate, ParseError> {
    let sections = Sections::new(
        text,
        &["certificate", "minpoly", "vars", "degree", "inputs", "mode", "compressed", "term", "sq"],
        &["term", "sq"],
    )?;
    parse_choice(sections.single("certificate")?, &["v1"])?;
    let minpoly = sections.single("minpoly")?;
    let field = parse_minpoly_at(minpoly.value, minpoly.value_pos)?;
    let vars = parse_vars(sections.single("vars")?)?;
    let degree_line = sections.single("degree")?;
    let degree = parse_count(degree_line)?;
    if degree != field.degree() {
        return Err(ParseError::at(
            degree_line.value_pos,
            ParseErrorKind::Inconsistent(format!("degree {degree} but minpoly has degree {}", field.degree())),
        ));
    }
    let inputs = parse_count(sections.single("inputs")?)?;
    let mode = parse_choice(sections.single("mode")?, &["weighted", "expanded"])?;
    let compressed = parse_choice(sections.single("compressed")?, &["yes", "no"])? == "yes";

    let terms: Vec<WeightedTerm> =
        sections.all("term").map(|l| parse_term(l, &vars)).collect::<Result<_, _>>()?;
    let squares: Vec<QPoly> = sections
        .all("sq")
        .map(|l| parse_rational_poly_at(l.value, l.value_pos, &vars))
        .collect::<Result<_, _>>()?;
    let expanded = match mode {
        "expanded" => Some(squares),
        _ => {
            if let Some(l) = sections.all("sq").next() {
                return Err(ParseError::at(
                    l.key_pos,
                    ParseErrorKind::Inconsistent("'sq' lines require 'mode: expanded'".into()),
                ));
            }
            None
        }
    };
    Ok(Certificate { field, vars, inputs, compressed, weighted: WeightedSos { terms }, expanded })
}

pub fn parse_certificate_bytes(bytes: &[u8]) -> Result<Certificate, ParseError> {
    parse_certificate(decode_utf8(bytes)?)
}

pub fn print_certificate(c: &Certificate) -> String {
    let mut out = String::from("certificate: v1\n");
    out.push_str(&format!("minpoly: {}\n", print_theta_poly(c.field.minpoly())));
    out.push_str(&format!("vars: {}\n", c.vars.join(" ")));
    out.push_str(&format!("degree: {}\n", c.degree()));
    out.push_str(&format!("inputs: {}\n", c.inputs));
    out.push_str(&format!("mode: {}\n", if c.expanded.is_some() { "expanded" } else { "weighted" }));
    out.push_str(&format!("compressed: {}\n", if c.compressed { "yes" } else { "no" }));
    for t in &c.weighted.terms {
        out.push_str(&format!("term: {} ; {}\n", t.weight, print_qpoly(&t.poly)));
    }
    for h in c.expanded.iter().flatten() {
        out.push_str(&format!("sq: {}\n", print_qpoly(h)));
    }
    out
}
