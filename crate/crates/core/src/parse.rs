//! Shared helpers for the line-oriented text formats.

use crate::quantum::{BlochAxis, C64};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number; 0 when the error concerns the input as a whole.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Non-blank lines with `#` comments stripped, split on whitespace.
pub(crate) fn token_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub(crate) fn parse_f64(tok: &str) -> Result<f64, String> {
    let v: f64 = tok.parse().map_err(|_| format!("`{tok}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{tok}` is not finite"))
    }
}

pub(crate) fn parse_usize(tok: &str) -> Result<usize, String> {
    tok.parse()
        .map_err(|_| format!("`{tok}` is not a non-negative integer"))
}

/// `re,im`
pub(crate) fn parse_complex(tok: &str) -> Result<C64, String> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| format!("`{tok}` is not a complex entry `re,im`"))?;
    Ok(C64::new(parse_f64(re)?, parse_f64(im)?))
}

pub(crate) fn format_complex(c: C64) -> String {
    format!("{},{}", c.re, c.im)
}

/// `x,y,z`, which must already be a unit vector.
pub(crate) fn parse_axis(tok: &str) -> Result<BlochAxis, String> {
    let parts: Vec<&str> = tok.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("`{tok}` is not an axis triple `x,y,z`"));
    }
    let c: Vec<f64> = parts.iter().map(|p| parse_f64(p)).collect::<Result<_, _>>()?;
    BlochAxis::new(c[0], c[1], c[2]).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let lines: Vec<_> = token_lines("# header\n\nH 0  # trailing\n  CZ 0 1\n").collect();
        assert_eq!(lines, vec![(3, vec!["H", "0"]), (4, vec!["CZ", "0", "1"])]);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), C64::new(0.5, -1.0));
        assert!(parse_complex("0.5").is_err());
        assert!(parse_f64("inf").is_err());
        assert!(parse_f64("NaN").is_err());
        assert!(parse_axis("1,0").is_err());
        assert!(parse_axis("1,1,0").is_err());
        let x = parse_axis("0.7071067811865476,-0.7071067811865476,0").unwrap();
        assert_eq!(x, BlochAxis::X_MINUS_Y);
        assert_eq!(ParseError::new(3, "bad").to_string(), "line 3: bad");
    }
}
