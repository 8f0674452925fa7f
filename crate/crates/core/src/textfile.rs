//! Shared helpers for the line-oriented workspace file formats.
//!
//! Every file starts with a header line `symips <kind> v<version>`. Blank
//! lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

pub fn header(kind: &str) -> String {
    format!("symips {kind} v{FORMAT_VERSION}")
}

/// Non-empty, non-comment lines paired with their 1-based line numbers.
pub fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Checks the header line and returns the remaining content lines.
pub fn expect_header<'a>(text: &'a str, kind: &str) -> Result<Vec<(usize, &'a str)>> {
    let lines = content_lines(text);
    let Some(&(lineno, first)) = lines.first() else {
        return Err(Error::parse(1, format!("empty {kind} file")));
    };
    let mut parts = first.split_whitespace();
    if parts.next() != Some("symips") {
        return Err(Error::parse(lineno, "missing 'symips' header"));
    }
    let found_kind = parts.next().unwrap_or("");
    if found_kind != kind {
        return Err(Error::parse(
            lineno,
            format!("expected a {kind} file, found '{found_kind}'"),
        ));
    }
    let version = parts
        .next()
        .and_then(|v| v.strip_prefix('v'))
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| Error::parse(lineno, "missing version"))?;
    if version != FORMAT_VERSION {
        return Err(Error::Version {
            kind: kind.to_string(),
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    Ok(lines[1..].to_vec())
}

/// Splits `keyword rest` into its two parts.
pub fn keyword(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (line, ""),
    }
}

/// Finds the kind named in a file header without validating the rest.
pub fn sniff_kind(text: &str) -> Option<String> {
    let lines = content_lines(text);
    let (_, first) = lines.first()?;
    let mut parts = first.split_whitespace();
    (parts.next() == Some("symips")).then(|| parts.next().map(str::to_string))?
}
