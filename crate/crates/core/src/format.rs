//! Whitespace-separated text formats for check matrices (`EACM`) and
//! classical parity-check matrices (`CLSC`).
//!
//! ```text
//! EACM p m n r
//! poly c0 c1 ... cm        # only when m > 1
//! a1 .. an | b1 .. bn      # r lines
//! ```
//!
//! `CLSC` uses the same header and optional `poly` line, followed by `r`
//! lines of `n` entries each. `#` starts a comment.

use thiserror::Error;

use crate::field::{FieldCtx, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: entry {value} out of range for a field of order {order}")]
    EntryOutOfRange {
        line: usize,
        column: usize,
        value: u64,
        order: u32,
    },
    #[error("line {line}: {source}")]
    Field { line: usize, source: FieldError },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl Token<'_> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub fn integer(&self) -> Result<u64, ParseError> {
        self.text
            .parse::<u64>()
            .map_err(|_| self.error(format!("expected a non-negative integer, found `{}`", self.text)))
    }

    pub fn element(&self, ctx: &FieldCtx) -> Result<FieldElement, ParseError> {
        let value = self.integer()?;
        ctx.element(value).map_err(|_| ParseError::EntryOutOfRange {
            line: self.line,
            column: self.column,
            value,
            order: ctx.q(),
        })
    }
}

/// Non-empty lines of tokens, comments stripped.
pub(crate) fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &content[s..pos],
                        line: idx + 1,
                        column: content[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }
    lines
}

/// Parsed header of either format, with the remaining row lines.
pub(crate) struct Document<'a> {
    pub ctx: FieldCtx,
    pub n: usize,
    pub r: usize,
    pub rows: Vec<Vec<Token<'a>>>,
}

pub(crate) fn parse_document<'a>(text: &'a str, keyword: &str) -> Result<Document<'a>, ParseError> {
    let lines = tokenize(text);
    let mut iter = lines.into_iter();
    let header = iter.next().ok_or(ParseError::Syntax {
        line: 1,
        column: 1,
        message: format!("missing `{keyword}` header"),
    })?;
    if header[0].text != keyword {
        return Err(header[0].error(format!("expected `{keyword}`, found `{}`", header[0].text)));
    }
    if header.len() != 5 {
        let at = header.get(5).unwrap_or(&header[header.len() - 1]);
        return Err(at.error(format!("header must be `{keyword} p m n r`")));
    }
    let p = header[1].integer()?;
    let m = header[2].integer()?;
    let n = header[3].integer()? as usize;
    let r = header[4].integer()? as usize;
    if n == 0 {
        return Err(header[3].error("qudit count must be positive"));
    }
    let line = header[0].line;
    let (p, m) = match (u32::try_from(p), u32::try_from(m)) {
        (Ok(p), Ok(m)) => (p, m),
        _ => return Err(header[1].error("field parameters out of range")),
    };
    let ctx = if m > 1 {
        let poly_line = iter.next().ok_or(ParseError::Syntax {
            line: line + 1,
            column: 1,
            message: "missing `poly` line for an extension field".into(),
        })?;
        if poly_line[0].text != "poly" {
            return Err(poly_line[0].error("expected `poly c0 .. cm`"));
        }
        let coeffs = poly_line[1..]
            .iter()
            .map(|t| t.integer().map(|v| v as u32))
            .collect::<Result<Vec<_>, _>>()?;
        FieldCtx::new(p, m, Some(&coeffs)).map_err(|source| ParseError::Field {
            line: poly_line[0].line,
            source,
        })?
    } else {
        FieldCtx::new(p, m, None).map_err(|source| ParseError::Field { line, source })?
    };
    let rows: Vec<_> = iter.collect();
    if rows.len() != r {
        let (line, column) = rows.get(r).map_or((line, 1), |t| (t[0].line, t[0].column));
        return Err(ParseError::Syntax {
            line,
            column,
            message: format!("expected {r} rows, found {}", rows.len()),
        });
    }
    Ok(Document { ctx, n, r, rows })
}

pub(crate) fn header_text(keyword: &str, ctx: &FieldCtx, n: usize, r: usize) -> String {
    let mut out = format!("{keyword} {} {} {} {}\n", ctx.p(), ctx.m(), n, r);
    if let Some(poly) = ctx.modulus() {
        out.push_str("poly");
        for c in poly {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
    }
    out
}

/// The keyword on the first non-comment line, if any.
pub fn detect_keyword(text: &str) -> Option<String> {
    tokenize(text)
        .first()
        .map(|line| line[0].text.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let lines = tokenize("# header comment\n  EACM 5 1\n\n1 |  2 # trailing\n");
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0][0].text, "EACM");
        assert_eq!((lines[0][0].line, lines[0][0].column), (2, 3));
        assert_eq!((lines[1][2].text, lines[1][2].column), ("2", 6));
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            parse_document("EACM 4 1 2 0\n", "EACM"),
            Err(ParseError::Field { line: 1, .. })
        ));
        assert!(matches!(
            parse_document("CLSC 2 1 2 0\n", "EACM"),
            Err(ParseError::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_document("EACM 2 2 2 0\n", "EACM"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert_eq!(detect_keyword("# x\nCLSC 2 1 1 1\n1\n").as_deref(), Some("CLSC"));
    }
}
