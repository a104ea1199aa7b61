//! Dense matrices over an exact [`Field`].
//!
//! Text form: rows separated by `;`, entries by `,`, rationals as `a/b`,
//! e.g. `"1,1/2;0,-3"`. The empty matrix is written as the empty string.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for k in 0..n {
            m.set(k, k, field.one());
        }
        m
    }

    /// Builds from row-major data. `data.len()` must equal `rows * cols`.
    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut f = f;
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(field: &F, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.int(v)).collect();
        Matrix::from_vec(field, rows.len(), cols, data)
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diagonal(field: &F, blocks: &[Matrix<F>]) -> Self {
        let n = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(field, n, n);
        let mut offset = 0;
        for b in blocks {
            assert!(b.is_square());
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(offset + r, offset + c, b.get(r, c).clone());
                }
            }
            offset += b.rows;
        }
        m
    }

    pub fn parse(field: &F, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Matrix::zeros(field, 0, 0));
        }
        let rows: Vec<Vec<F::Elem>> = text
            .split(';')
            .map(|row| row.split(',').map(|e| field.parse_elem(e)).collect())
            .collect::<Result<_>>()?;
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix literal {text:?}")));
        }
        let nrows = rows.len();
        Matrix::from_vec(field, nrows, cols, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    /// Matrix built from the given columns (each of length `rows`).
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        Matrix::from_fn(field, rows, columns.len(), |r, c| columns[c][r].clone())
    }

    /// Upper-left `i × i` block, `X_{≤i,≤i}`.
    pub fn leading_submatrix(&self, i: usize) -> Result<Self> {
        let n = self.require_square()?;
        if i > n {
            return Err(Error::IndexOutOfRange {
                index: i,
                lo: 0,
                hi: n,
            });
        }
        Ok(Matrix::from_fn(&self.field, i, i, |r, c| self.get(r, c).clone()))
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| op(&self.field, a, b))
            .collect();
        Matrix::from_vec(&self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, t: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, t)).collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(r, c), &f.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let n = self.require_square()?;
        let mut acc = Matrix::identity(&self.field, n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(";")?;
            }
            for (c, e) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    /// Multi-line rendering with right-aligned columns, for terminal output.
    pub fn pretty(&self) -> String {
        let cells: Vec<String> = self.data.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for r in 0..self.rows {
            out.push('[');
            for c in 0..self.cols {
                if c > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{:>width$}", cells[r * self.cols + c]));
            }
            out.push_str("]\n");
        }
        out
    }
}
