//! Plain-text parity-check matrices.
//!
//! ```text
//! 2 4
//! 1100
//! 0111
//! ```
//!
//! The header holds the row and column counts; each of the following lines
//! holds one row as `0`/`1` characters. A single newline may end the last
//! row; nothing else may follow it.

use std::fs;
use std::path::Path;

use ude_core::BitMatrix;

use crate::error::{Error, Result};

fn format_error(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixFormat { line, message: message.into() }
}

pub fn parse_matrix(text: &str) -> Result<BitMatrix> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or_default();
    let dims: Vec<&str> = header.split(' ').collect();
    let [m, n] = dims[..] else {
        return Err(format_error(1, "header must be \"m n\""));
    };
    let parse_dim = |s: &str| -> Result<usize> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format_error(1, format!("invalid dimension {s:?}")));
        }
        s.parse().map_err(|_| format_error(1, format!("invalid dimension {s:?}")))
    };
    let (m, n) = (parse_dim(m)?, parse_dim(n)?);
    if m == 0 || n == 0 {
        return Err(format_error(1, "dimensions must be positive"));
    }
    let mut h = BitMatrix::zeros(m, n)?;
    for i in 0..m {
        let line_no = i + 2;
        let row = lines.next().ok_or_else(|| format_error(line_no, format!("expected {m} rows, found {i}")))?;
        if row.len() != n {
            return Err(format_error(line_no, format!("expected {n} characters, found {}", row.chars().count())));
        }
        for (j, b) in row.bytes().enumerate() {
            match b {
                b'0' => {}
                b'1' => h.set(i, j, true),
                _ => return Err(format_error(line_no, format!("invalid character at column {}", j + 1))),
            }
        }
    }
    if lines.next().is_some() {
        return Err(format_error(m + 2, "trailing content after the last row"));
    }
    Ok(h)
}

pub fn write_matrix(h: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", h.rows(), h.cols());
    for i in 0..h.rows() {
        out.extend((0..h.cols()).map(|j| if h.get(i, j) { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn read_matrix_file(path: &Path) -> Result<BitMatrix> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_matrix(&text)
}

pub fn write_matrix_file(path: &Path, h: &BitMatrix) -> Result<()> {
    fs::write(path, write_matrix(h)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
