//! Line-oriented helpers shared by the text file formats.

use crate::exact::{parse_rational, Rational};
use crate::{Error, Result};

/// Non-empty lines with `#` comments stripped, paired with 1-based line
/// numbers.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

pub(crate) fn usize_at(line: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, found '{token}'")))
}

pub(crate) fn rational_at(line: usize, token: &str) -> Result<Rational> {
    parse_rational(token).map_err(|e| Error::parse(line, e.to_string()))
}

pub(crate) fn usizes(line: usize, tokens: &str, what: &str) -> Result<Vec<usize>> {
    tokens.split_whitespace().map(|t| usize_at(line, t, what)).collect()
}

/// Splits `"lhs | rhs : p"` style entries.
pub(crate) fn split_entry(line: usize, text: &str) -> Result<(Vec<usize>, Vec<usize>, Rational)> {
    let (tuples, prob) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(line, "expected ':' before the probability"))?;
    let (left, right) = tuples
        .split_once('|')
        .ok_or_else(|| Error::parse(line, "expected '|' between the two tuples"))?;
    Ok((
        usizes(line, left, "a value index")?,
        usizes(line, right, "a value index")?,
        rational_at(line, prob.trim())?,
    ))
}

pub(crate) fn check_range(line: usize, values: &[usize], sizes: &[usize], what: &str) -> Result<()> {
    if values.len() != sizes.len() {
        return Err(Error::parse(
            line,
            format!("expected {} {what} values, found {}", sizes.len(), values.len()),
        ));
    }
    for (k, (&v, &s)) in values.iter().zip(sizes).enumerate() {
        if v >= s {
            return Err(Error::parse(
                line,
                format!("{what} value {v} at position {k} outside alphabet of size {s}"),
            ));
        }
    }
    Ok(())
}
