//! Sparse parity-check matrices and their alist text form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::CodeError;

/// A binary parity-check matrix stored as row and column adjacency lists.
///
/// Indices are 0-based. Both views are kept sorted and describe the same
/// incidence relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseParityMatrix {
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl SparseParityMatrix {
    /// Builds a matrix from row supports. Duplicate entries inside a row are
    /// collapsed.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        let n_rows = rows.len();
        if n_rows == 0 || n_rows >= n_cols {
            return Err(CodeError::Shape(format!(
                "need 0 < r < n, got r={n_rows}, n={n_cols}"
            )));
        }
        let mut cols = vec![Vec::new(); n_cols];
        let mut sorted_rows = Vec::with_capacity(n_rows);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(CodeError::Shape(format!("row {i} is empty")));
            }
            if let Some(&j) = row.iter().find(|&&j| j >= n_cols) {
                return Err(CodeError::Shape(format!("row {i} references column {j} >= {n_cols}")));
            }
            for &j in &row {
                cols[j].push(i);
            }
            sorted_rows.push(row);
        }
        if let Some(j) = cols.iter().position(Vec::is_empty) {
            return Err(CodeError::Shape(format!("column {j} is empty")));
        }
        Ok(Self {
            n_cols,
            rows: sorted_rows,
            cols,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Code dimension `k = n - r` (assuming full rank).
    pub fn dimension(&self) -> usize {
        self.n_cols - self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn col(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Serializes to alist: `n r`, max degrees, degree lists, then column
    /// and row adjacency with 1-based indices.
    pub fn to_alist(&self) -> String {
        let mut out = String::new();
        let join = |v: &[usize], plus: usize| {
            v.iter()
                .map(|x| (x + plus).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "{} {}", self.n_cols, self.n_rows());
        let _ = writeln!(out, "{} {}", self.max_col_weight(), self.max_row_weight());
        let col_deg: Vec<usize> = self.cols.iter().map(Vec::len).collect();
        let row_deg: Vec<usize> = self.rows.iter().map(Vec::len).collect();
        let _ = writeln!(out, "{}", join(&col_deg, 0));
        let _ = writeln!(out, "{}", join(&row_deg, 0));
        for col in &self.cols {
            let _ = writeln!(out, "{}", join(col, 1));
        }
        for row in &self.rows {
            let _ = writeln!(out, "{}", join(row, 1));
        }
        out
    }

    /// Parses alist text. Zero entries (padding used by some writers) are
    /// ignored; the column lists must agree with the row lists.
    pub fn from_alist(text: &str) -> Result<Self, CodeError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut next_nums = |what: &str| -> Result<Vec<usize>, CodeError> {
            let line = lines
                .next()
                .ok_or_else(|| CodeError::Alist(format!("missing {what}")))?;
            line.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| CodeError::Alist(format!("{what}: {e}")))
                })
                .collect()
        };
        let dims = next_nums("dimensions")?;
        let [n, r] = dims[..] else {
            return Err(CodeError::Alist("expected `n r` on the first line".into()));
        };
        next_nums("max degrees")?;
        let col_deg = next_nums("column degrees")?;
        let row_deg = next_nums("row degrees")?;
        if col_deg.len() != n || row_deg.len() != r {
            return Err(CodeError::Alist("degree list length mismatch".into()));
        }
        let mut cols = Vec::with_capacity(n);
        for (j, &deg) in col_deg.iter().enumerate().take(n) {
            let entries: Vec<usize> = next_nums("column adjacency")?
                .into_iter()
                .filter(|&x| x != 0)
                .map(|x| x - 1)
                .collect();
            if entries.len() != deg {
                return Err(CodeError::Alist(format!("column {} degree mismatch", j + 1)));
            }
            cols.push(entries);
        }
        let mut rows = Vec::with_capacity(r);
        for (i, &deg) in row_deg.iter().enumerate().take(r) {
            let entries: Vec<usize> = next_nums("row adjacency")?
                .into_iter()
                .filter(|&x| x != 0)
                .map(|x| x - 1)
                .collect();
            if entries.len() != deg {
                return Err(CodeError::Alist(format!("row {} degree mismatch", i + 1)));
            }
            rows.push(entries);
        }
        let matrix = Self::from_rows(n, rows)?;
        let mut sorted_cols = cols;
        for c in &mut sorted_cols {
            c.sort_unstable();
        }
        if sorted_cols != matrix.cols {
            return Err(CodeError::Alist(
                "column lists disagree with row lists".into(),
            ));
        }
        Ok(matrix)
    }
}
