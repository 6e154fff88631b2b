//! Plain-text instance files.
//!
//! ```text
//! # name: tiny
//! 1 2
//! c: 1 2
//! b: 2
//! 1 1
//! ```
//!
//! Everything after `#` is ignored, except that a leading `# name: …` line
//! carries the instance name so that parsing a serialized instance gives it
//! back unchanged. Rationals are written `p` or `p/q`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Signed;
use tardos_core::{LPInstance, ModelError, RMatrix, Rational};
use thiserror::Error;

const NAME_TAG: &str = "name:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("unexpected end of input: {0}")]
    UnexpectedEof(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(text: &str) -> (Option<String>, Vec<Line<'_>>) {
    let mut name = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let (body, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
            None => (raw, None),
        };
        if let Some(tag) = comment.and_then(|c| c.trim_start().strip_prefix(NAME_TAG)) {
            if name.is_none() && lines.is_empty() {
                name = Some(tag.trim().to_string());
            }
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &body[s..pos],
                        column: body[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(Line { number: i + 1, tokens });
        }
    }
    (name, lines)
}

/// Parses a rational literal: optional minus (ASCII or U+2212), decimal
/// digits, optionally `/` and a positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (negative, body) = match s.strip_prefix('-').or_else(|| s.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(format!("invalid rational literal `{s}`"));
    }
    if den.is_some_and(|q| q.bytes().all(|b| b == b'0')) {
        return Err(format!("zero denominator in `{s}`"));
    }
    let literal = match den {
        Some(q) => format!("{num}/{q}"),
        None => num.to_string(),
    };
    let value = Rational::from_str(&literal).map_err(|_| format!("invalid rational literal `{s}`"))?;
    Ok(if negative { -value } else { value })
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_count(tok: &Token<'_>, line: usize) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| syntax(line, tok.column, format!("expected a nonnegative count, found `{}`", tok.text)))
}

fn parse_values(tokens: &[Token<'_>], line: usize, expected: usize) -> Result<Vec<Rational>, ParseError> {
    if tokens.len() != expected {
        return Err(ParseError::DimensionMismatch {
            line,
            expected,
            found: tokens.len(),
        });
    }
    tokens
        .iter()
        .map(|t| parse_rational(t.text).map_err(|msg| syntax(line, t.column, msg)))
        .collect()
}

fn labelled<'a>(line: &'a Line<'a>, label: &str, expected: usize) -> Result<Vec<Rational>, ParseError> {
    match line.tokens.first() {
        Some(t) if t.text == label => parse_values(&line.tokens[1..], line.number, expected),
        Some(t) => Err(syntax(
            line.number,
            t.column,
            format!("expected `{label}`, found `{}`", t.text),
        )),
        None => unreachable!("blank lines are dropped"),
    }
}

/// Parses an instance file. A missing `# name:` line gives the name
/// `unnamed`.
pub fn parse_instance(text: &str) -> Result<LPInstance, ParseError> {
    let (name, lines) = tokenize(text);
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| ParseError::UnexpectedEof("missing `m n` header".into()))?;
    if header.tokens.len() != 2 {
        return Err(ParseError::DimensionMismatch {
            line: header.number,
            expected: 2,
            found: header.tokens.len(),
        });
    }
    let m = parse_count(&header.tokens[0], header.number)?;
    let n = parse_count(&header.tokens[1], header.number)?;

    let c_line = it.next().ok_or_else(|| ParseError::UnexpectedEof("missing `c:` line".into()))?;
    let c = labelled(c_line, "c:", n)?;
    let b_line = it.next().ok_or_else(|| ParseError::UnexpectedEof("missing `b:` line".into()))?;
    let b = labelled(b_line, "b:", m)?;

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let line = it
            .next()
            .ok_or_else(|| ParseError::UnexpectedEof(format!("expected {m} rows of A, found {i}")))?;
        rows.push(parse_values(&line.tokens, line.number, n)?);
    }
    if let Some(extra) = it.next() {
        return Err(syntax(extra.number, extra.tokens[0].column, "trailing content after the constraint rows"));
    }
    let a = if m == 0 {
        RMatrix::zeros(0, n)
    } else {
        RMatrix::from_rows(rows)
    };
    Ok(LPInstance::new(a, b, c, name.unwrap_or_else(|| "unnamed".into()))?)
}

/// Canonical rendering of a rational (`p` or `p/q`, lowest terms).
pub fn format_rational(r: &Rational) -> String {
    debug_assert!(r.denom().is_positive());
    r.to_string()
}

fn push_row(out: &mut String, label: Option<&str>, values: &[Rational]) {
    let mut parts: Vec<String> = label.into_iter().map(str::to_string).collect();
    parts.extend(values.iter().map(format_rational));
    out.push_str(&parts.join(" "));
    out.push('\n');
}

/// Deterministic text form accepted by [`parse_instance`].
pub fn serialize_instance(p: &LPInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {NAME_TAG} {}", p.name);
    let _ = writeln!(out, "{} {}", p.m(), p.n());
    push_row(&mut out, Some("c:"), &p.c);
    push_row(&mut out, Some("b:"), &p.b);
    for i in 0..p.m() {
        push_row(&mut out, None, p.a.row(i));
    }
    out
}

/// `(v₁, v₂, …)` with exact rationals.
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}
