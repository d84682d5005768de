//! Text format for polynomials and polynomial maps.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*'? factor)*        -- '*' may be omitted before a variable
//! factor   := rational | variable ('^' nat)?
//! rational := int ('/' posint)?
//! ```
//!
//! Whitespace is insignificant. Printing always emits the explicit `*` and
//! orders terms by descending graded-lex order, so `parse(print(p)) == p`.
//!
//! A map file holds one polynomial per line after a `vars: x,y,z` header;
//! `#` starts a comment and blank lines are skipped.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    MalformedRational(String),
    ExponentOverflow,
    InvalidVariables(String),
    MissingHeader,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::MalformedRational(msg) => write!(f, "malformed rational: {msg}"),
            ParseErrorKind::ExponentOverflow => f.write_str("exponent overflow"),
            ParseErrorKind::InvalidVariables(msg) => write!(f, "invalid variable list: {msg}"),
            ParseErrorKind::MissingHeader => f.write_str("expected a `vars:` header line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) | Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str, first_line: usize) -> Result<(Vec<Spanned>, (usize, usize)), ParseError> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut column = 1;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        let single = |tok| Spanned {
            tok,
            line: l,
            column: c,
        };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(single(Tok::Plus));
            }
            '-' => {
                chars.next();
                out.push(single(Tok::Minus));
            }
            '*' => {
                chars.next();
                out.push(single(Tok::Star));
            }
            '/' => {
                chars.next();
                out.push(single(Tok::Slash));
            }
            '^' => {
                chars.next();
                out.push(single(Tok::Caret));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                column += s.len() - 1;
                out.push(single(Tok::Int(s)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                column += s.chars().count() - 1;
                out.push(single(Tok::Ident(s)));
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                })
            }
        }
        column += 1;
    }
    Ok((out, (line, column)))
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.column))
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        let (line, column) = self.here();
        ParseError { line, column, kind }
    }

    fn error_at(&self, at: (usize, usize), kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: at.0,
            column: at.1,
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        let msg = match self.peek() {
            Some(t) => format!("unexpected {t}"),
            None => "unexpected end of input".to_string(),
        };
        self.error(ParseErrorKind::Syntax(msg))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn arity(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = Polynomial::zero(self.arity());
        loop {
            let (c, m) = self.term()?;
            let c = if negate { -c } else { c };
            acc = &acc + &Polynomial::monomial(m, c);
            negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                None => return Ok(acc),
                Some(_) => return Err(self.unexpected()),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<(Rational, Monomial), ParseError> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.arity()];
        self.factor(&mut coeff, &mut exps)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    self.factor(&mut coeff, &mut exps)?;
                }
                Some(Tok::Ident(_)) => self.factor(&mut coeff, &mut exps)?,
                _ => break,
            }
        }
        Ok((coeff, Monomial::new(exps)))
    }

    fn factor(&mut self, coeff: &mut Rational, exps: &mut [u32]) -> Result<(), ParseError> {
        let start = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let numer: BigInt = n.parse().expect("lexer yields digits");
                let value = if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let denom_at = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            let denom: BigInt = d.parse().expect("lexer yields digits");
                            if denom.is_zero() {
                                return Err(self.error_at(
                                    denom_at,
                                    ParseErrorKind::MalformedRational("zero denominator".into()),
                                ));
                            }
                            Rational::new(numer, denom)
                        }
                        _ => {
                            return Err(self.error_at(
                                denom_at,
                                ParseErrorKind::MalformedRational(
                                    "expected a positive integer denominator".into(),
                                ),
                            ))
                        }
                    }
                } else {
                    Rational::from_integer(numer)
                };
                *coeff *= value;
                Ok(())
            }
            Some(Tok::Ident(name)) => {
                let vars = self
                    .resolve(&name)
                    .ok_or_else(|| self.error_at(start, ParseErrorKind::UnknownIdentifier(name)))?;
                let power = if self.peek() == Some(&Tok::Caret) {
                    self.bump();
                    let at = self.here();
                    match self.bump() {
                        Some(Tok::Int(e)) => e
                            .parse::<u32>()
                            .map_err(|_| self.error_at(at, ParseErrorKind::ExponentOverflow))?,
                        _ => {
                            return Err(self.error_at(
                                at,
                                ParseErrorKind::Syntax("expected a natural-number exponent".into()),
                            ))
                        }
                    }
                } else {
                    1
                };
                let last = vars.len() - 1;
                for (k, v) in vars.into_iter().enumerate() {
                    let e = if k == last { power } else { 1 };
                    exps[v] = exps[v]
                        .checked_add(e)
                        .ok_or_else(|| self.error_at(start, ParseErrorKind::ExponentOverflow))?;
                }
                Ok(())
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    /// Maps an identifier to variable indices. An undeclared identifier is
    /// accepted when it spells a product of declared names, as in `xy`.
    fn resolve(&self, ident: &str) -> Option<Vec<usize>> {
        if let Some(i) = self.names.iter().position(|n| n == ident) {
            return Some(vec![i]);
        }
        let mut out = Vec::new();
        let mut rest = ident;
        while !rest.is_empty() {
            let (i, name) = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len())?;
            out.push(i);
            rest = &rest[name.len()..];
        }
        Some(out)
    }
}

fn validate_names(names: &[String], line: usize) -> Result<(), ParseError> {
    let bad = |msg: String| ParseError {
        line,
        column: 1,
        kind: ParseErrorKind::InvalidVariables(msg),
    };
    if names.is_empty() {
        return Err(bad("no variables".into()));
    }
    for (i, n) in names.iter().enumerate() {
        let mut chars = n.chars();
        let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && chars.all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(bad(format!("`{n}` is not an identifier")));
        }
        if names[..i].contains(n) {
            return Err(bad(format!("`{n}` is declared twice")));
        }
    }
    Ok(())
}

fn parse_at(src: &str, names: &[String], line: usize) -> Result<Polynomial, ParseError> {
    validate_names(names, line)?;
    let (toks, end) = lex(src, line)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        names,
    };
    p.expr()
}

/// Parses `src` as a polynomial in the given ordered variables.
pub fn parse_polynomial<S: AsRef<str>>(
    src: &str,
    variables: &[S],
) -> Result<Polynomial, ParseError> {
    let names: Vec<String> = variables.iter().map(|s| s.as_ref().to_string()).collect();
    parse_at(src, &names, 1)
}

/// Canonical text of `p`: descending graded-lex terms, explicit `*`.
pub fn print_polynomial<S: AsRef<str>>(p: &Polynomial, variables: &[S]) -> String {
    assert_eq!(variables.len(), p.arity(), "one name per variable");
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if m.is_one() || !abs.is_one() {
            factors.push(abs.to_string());
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            let name = variables[i].as_ref();
            match e {
                0 => {}
                1 => factors.push(name.to_string()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Splits a `vars:` header into names.
fn parse_header(line: &str, line_no: usize) -> Result<Vec<String>, ParseError> {
    let rest = line.trim().strip_prefix("vars:").ok_or(ParseError {
        line: line_no,
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let names: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
    validate_names(&names, line_no)?;
    Ok(names)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Content lines of a file as `(line number, text)`, comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// A parsed map file: declared variable names and one polynomial per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile {
    pub variables: Vec<String>,
    pub polynomials: Vec<Polynomial>,
}

pub fn parse_map_file(text: &str) -> Result<MapFile, ParseError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let variables = parse_header(header, line_no)?;
    let polynomials = lines
        .map(|(n, l)| parse_at(l, &variables, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MapFile {
        variables,
        polynomials,
    })
}

pub fn print_map_file<S: AsRef<str>>(polys: &[Polynomial], variables: &[S]) -> String {
    let mut out = format!(
        "vars: {}\n",
        variables
            .iter()
            .map(|s| s.as_ref())
            .collect::<Vec<_>>()
            .join(",")
    );
    for p in polys {
        out.push_str(&print_polynomial(p, variables));
        out.push('\n');
    }
    out
}

/// Declared names, if any, and the numbered content lines after them.
pub(crate) type HeaderSplit<'a> = (Option<Vec<String>>, Vec<(usize, &'a str)>);

/// Optional `vars:` header followed by the remaining content lines.
pub(crate) fn split_optional_header(text: &str) -> Result<HeaderSplit<'_>, ParseError> {
    let mut lines: Vec<(usize, &str)> = content_lines(text).collect();
    match lines.first() {
        Some((n, l)) if l.starts_with("vars:") => {
            let names = parse_header(l, *n)?;
            lines.remove(0);
            Ok((Some(names), lines))
        }
        _ => Ok((None, lines)),
    }
}

/// Parses a polynomial starting at a known file position, for word files.
pub(crate) fn parse_polynomial_at(
    src: &str,
    names: &[String],
    line: usize,
) -> Result<Polynomial, ParseError> {
    parse_at(src, names, line)
}
