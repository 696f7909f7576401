//! Permutation and coloring files.
//!
//! Permutation text: three lines of space-separated 1-based integers in
//! one-line notation, permutation 1 first. Permutation JSON:
//! `{"schema_version": 1, "k": 2, "variant": "RR", "perms": [[…], […], […]]}`.
//! Colorings: a string over `+`/`-` in element order, or space-separated
//! `±1` integers.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use threeperm_core::{Coloring, PermutationFamily, PermutationTriple};

use crate::SCHEMA_VERSION;

/// A malformed input, with a 1-based location when one is known.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

fn at(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub perms: [Vec<u32>; 3],
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

pub fn family_to_text(triple: &PermutationTriple) -> String {
    threeperm_core::construction::to_text(triple)
}

pub fn family_to_json(f: &PermutationFamily) -> String {
    let doc = FamilyJson {
        schema_version: SCHEMA_VERSION,
        k: Some(f.k()),
        variant: Some(f.variant().to_string()),
        perms: f.triple().one_lines(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Parses either permutation format, picking JSON when the first
/// non-blank character is `{`.
pub fn parse_triple(src: &str) -> Result<PermutationTriple, ParseError> {
    if src.trim_start().starts_with('{') {
        let doc: FamilyJson =
            serde_json::from_str(src).map_err(|e| at(e.line(), e.column(), e.to_string()))?;
        let triple = PermutationTriple::from_one_line(doc.perms).map_err(|e| at(1, 1, e.to_string()))?;
        if let (Some(k), Some(v)) = (doc.k, doc.variant.as_deref()) {
            let f = PermutationFamily::recognize(&triple).map_err(|e| at(1, 1, e.to_string()))?;
            if f.k() != k || f.variant().to_string() != v.to_ascii_uppercase() {
                return Err(at(
                    1,
                    1,
                    format!("header says k={k} variant={v}, permutations are k={} variant={}", f.k(), f.variant()),
                ));
            }
        }
        return Ok(triple);
    }

    let mut rows: Vec<(usize, Vec<u32>)> = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0;
        for tok in line.split(|c: char| c.is_whitespace()) {
            let start = col;
            col += tok.chars().count() + 1;
            if tok.is_empty() {
                continue;
            }
            let v: u32 = tok
                .parse()
                .map_err(|_| at(ln + 1, start + 1, format!("expected a positive integer, found {tok:?}")))?;
            if v == 0 {
                return Err(at(ln + 1, start + 1, "elements are 1-based"));
            }
            row.push(v);
        }
        rows.push((ln + 1, row));
    }
    if rows.len() != 3 {
        return Err(at(
            rows.get(3).map_or(rows.len().max(1), |r| r.0),
            1,
            format!("expected 3 permutation lines, found {}", rows.len()),
        ));
    }
    let n = rows[0].1.len();
    for (ln, row) in &rows {
        if row.len() != n {
            return Err(at(*ln, 1, format!("line has {} entries, first line has {n}", row.len())));
        }
        let mut seen = vec![false; n];
        for (j, &v) in row.iter().enumerate() {
            let idx = v as usize - 1;
            if idx >= n || seen[idx] {
                let what = if idx >= n { "out of range" } else { "repeated" };
                return Err(at(*ln, j + 1, format!("value {v} is {what} (entry {})", j + 1)));
            }
            seen[idx] = true;
        }
    }
    let [a, b, c] = [0, 1, 2].map(|i| rows[i].1.clone());
    PermutationTriple::from_one_line([a, b, c]).map_err(|e| at(1, 1, e.to_string()))
}

pub fn parse_coloring(src: &str) -> Result<Coloring, ParseError> {
    let src = src.trim();
    let numeric = src.chars().any(|c| c.is_ascii_digit());
    let mut values = Vec::new();
    if numeric {
        for (ln, line) in src.lines().enumerate() {
            let mut col = 0;
            for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
                let start = col;
                col += tok.chars().count() + 1;
                match tok {
                    "" => {}
                    "1" | "+1" => values.push(1),
                    "-1" | "\u{2212}1" => values.push(-1),
                    other => {
                        return Err(at(ln + 1, start + 1, format!("expected +1 or -1, found {other:?}")));
                    }
                }
            }
        }
    } else {
        for (ln, line) in src.lines().enumerate() {
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '+' => values.push(1),
                    '-' | '\u{2212}' => values.push(-1),
                    c if c.is_whitespace() => {}
                    other => {
                        return Err(at(ln + 1, col + 1, format!("expected '+' or '-', found {other:?}")));
                    }
                }
            }
        }
    }
    if values.is_empty() {
        return Err(at(1, 1, "empty coloring"));
    }
    Ok(Coloring::new(values).expect("only ±1 pushed"))
}

/// Reads a coloring from `arg`, treating it as a path when such a file exists.
pub fn read_coloring_arg(arg: &str) -> Result<Coloring, crate::CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let src = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io(arg.to_owned(), e))?;
        parse_coloring(&src).map_err(|e| crate::CliError::Parse(arg.to_owned(), e))
    } else {
        parse_coloring(arg).map_err(|e| crate::CliError::Parse("--coloring".to_owned(), e))
    }
}

pub fn read_family_file(path: &str) -> Result<PermutationTriple, crate::CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io(path.to_owned(), e))?;
    parse_triple(&src).map_err(|e| crate::CliError::Parse(path.to_owned(), e))
}
