//! Matrix files.
//!
//! The canonical format is JSON, row-major, each entry a `[re, im]` pair:
//!
//! ```json
//! {"n": 2, "entries": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
//! ```
//!
//! A single-record CSV is also accepted: the header lists `re(i,j),im(i,j)`
//! columns with 1-based indices in any order, and the one data row holds the values.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

fn build(n: usize, rows: Vec<Vec<Complex64>>) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::DimensionError("matrix dimension must be at least 1".into()));
    }
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::ParseError(format!("expected {n} rows of {n} entries")));
    }
    if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ParseError("entries must be finite".into()));
    }
    ComplexMatrix::from_rows(&rows)
}

pub fn parse_matrix_json(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let rows = file
        .entries
        .into_iter()
        .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
        .collect();
    build(file.n, rows)
}

/// Splits a header line into `(is_re, i, j)` labels. Labels may be quoted
/// or bare; the comma inside a bare `re(i,j)` is not a field separator.
fn parse_header(line: &str) -> Result<Vec<(bool, usize, usize)>> {
    let cleaned: String = line.chars().filter(|c| *c != '"' && !c.is_whitespace()).collect();
    let mut labels = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let is_re = if rest.starts_with("re(") {
            true
        } else if rest.starts_with("im(") {
            false
        } else {
            return Err(Error::ParseError(format!("bad header near `{rest}`")));
        };
        let close = rest.find(')').ok_or_else(|| Error::ParseError("unclosed header label".into()))?;
        let (i, j) = rest[3..close]
            .split_once(',')
            .ok_or_else(|| Error::ParseError(format!("bad header label `{}`", &rest[..=close])))?;
        let parse = |v: &str| v.parse::<usize>().map_err(|_| Error::ParseError(format!("bad index `{v}`")));
        labels.push((is_re, parse(i)?, parse(j)?));
        rest = rest[close + 1..].strip_prefix(',').unwrap_or(&rest[close + 1..]);
    }
    Ok(labels)
}

pub fn parse_matrix_csv(text: &str) -> Result<ComplexMatrix> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let labels = parse_header(header)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let record = reader
        .records()
        .next()
        .ok_or_else(|| Error::ParseError("missing data row".into()))?
        .map_err(|e| Error::ParseError(e.to_string()))?;
    if labels.len() != record.len() {
        return Err(Error::ParseError("header and data row differ in length".into()));
    }
    let cols = labels.len();
    if cols == 0 {
        return Err(Error::DimensionError("matrix dimension must be at least 1".into()));
    }
    let n = ((cols / 2) as f64).sqrt().round() as usize;
    if 2 * n * n != cols {
        return Err(Error::ParseError(format!("{cols} columns do not describe a square matrix")));
    }
    let mut rows = vec![vec![Complex64::new(f64::NAN, f64::NAN); n]; n];
    for (&(is_re, i, j), v) in labels.iter().zip(record.iter()) {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::ParseError(format!("index ({i},{j}) out of range")));
        }
        let x: f64 = v.parse().map_err(|_| Error::ParseError(format!("bad number `{v}`")))?;
        let z = &mut rows[i - 1][j - 1];
        if is_re {
            z.re = x;
        } else {
            z.im = x;
        }
    }
    build(n, rows)
}

/// Parses inline JSON, or reads a JSON or CSV file.
pub fn load_matrix(path_or_text: &str) -> Result<ComplexMatrix> {
    let trimmed = path_or_text.trim_start();
    if trimmed.starts_with('{') {
        return parse_matrix_json(trimmed);
    }
    let path = Path::new(path_or_text);
    let text = std::fs::read_to_string(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        || text.trim_start().trim_start_matches('"').starts_with("re(")
        || text.trim_start().trim_start_matches('"').starts_with("im(");
    if is_csv {
        parse_matrix_csv(&text)
    } else {
        parse_matrix_json(&text)
    }
}

pub fn matrix_to_json(t: &ComplexMatrix) -> String {
    let n = t.dim();
    let file = MatrixFile {
        n,
        entries: (0..n)
            .map(|i| (0..n).map(|j| [t.get(i, j).re, t.get(i, j).im]).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("finite entries serialize")
}

pub fn matrix_to_csv(t: &ComplexMatrix) -> String {
    let n = t.dim();
    let mut header = Vec::new();
    let mut values = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = t.get(i, j);
            header.push(format!("re({},{})", i + 1, j + 1));
            header.push(format!("im({},{})", i + 1, j + 1));
            values.push(z.re.to_string());
            values.push(z.im.to_string());
        }
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&header).expect("in-memory write");
    writer.write_record(&values).expect("in-memory write");
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}
