//! Matrix files: JSON `{"rows", "cols", "re", "im"}` (with `im` optional) and
//! whitespace-separated plain text for real matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpreadError};
use crate::linalg::{c, CMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

fn check_grid(name: &str, grid: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if grid.len() != rows || grid.iter().any(|r| r.len() != cols) {
        return Err(SpreadError::Parse(format!("\"{name}\" is not a {rows}x{cols} grid")));
    }
    Ok(())
}

impl MatrixDocument {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        check_grid("re", &self.re, self.rows, self.cols)?;
        if let Some(im) = &self.im {
            check_grid("im", im, self.rows, self.cols)?;
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            c(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }

    /// `im` is omitted when every imaginary part is zero.
    pub fn from_matrix(m: &CMatrix) -> Self {
        let grid = |f: fn(&crate::linalg::C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        let im = grid(|z| z.im);
        let real = im.iter().flatten().all(|&v| v == 0.0);
        Self { rows: m.nrows(), cols: m.ncols(), re: grid(|z| z.re), im: (!real).then_some(im) }
    }
}

pub fn parse_json_matrix(text: &str) -> Result<CMatrix> {
    let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| SpreadError::Parse(e.to_string()))?;
    doc.to_matrix()
}

pub fn parse_text_matrix(text: &str) -> Result<CMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| SpreadError::Parse(format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(SpreadError::Parse("no matrix rows".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(SpreadError::Parse("ragged rows".into()));
    }
    crate::linalg::real_matrix(&rows)
}

/// JSON when the first non-blank character is `{`, plain text otherwise.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    if text.trim_start().starts_with('{') {
        parse_json_matrix(text)
    } else {
        parse_text_matrix(text)
    }
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixDocument::from_matrix(m)).expect("matrix documents serialize")
}
