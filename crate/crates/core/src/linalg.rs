//! Exact elimination, characteristic polynomials and stable rank.
//!
//! The characteristic polynomial uses the Berkowitz recurrence, which needs
//! only ring operations, so it is valid over `𝔽_p` for every `p`, including
//! `p ≤ n`. Everything else is Gaussian elimination with field inverses.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// `det(t·I − M)`, coefficients in ascending powers of `t`. Monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> CharPoly<F> {
    /// `c_0, …, c_m`.
    pub fn coefficients(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Row-reduces a copy of `m` to reduced echelon form; returns it with its pivot columns.
fn reduced_echelon<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let f = m.field().clone();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some(p) = (row..a.rows()).find(|&r| !f.is_zero(a.get(r, col))) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = f.inv(a.get(row, col)).expect("nonzero pivot");
        for c in col..a.cols() {
            let v = f.mul(a.get(row, c), &inv);
            a.set(row, c, v);
        }
        for r in 0..a.rows() {
            if r == row {
                continue;
            }
            let factor = a.get(r, col).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..a.cols() {
                let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

impl<F: Field> Matrix<F> {
    pub fn rank(&self) -> usize {
        let f = self.field().clone();
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols() {
            if rank == a.rows() {
                break;
            }
            let Some(p) = (rank..a.rows()).find(|&r| !f.is_zero(a.get(r, col))) else {
                continue;
            };
            a.swap_rows(rank, p);
            let inv = f.inv(a.get(rank, col)).expect("nonzero pivot");
            for r in rank + 1..a.rows() {
                let factor = f.mul(a.get(r, col), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..a.cols() {
                    let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(rank, c)));
                    a.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant by elimination. The empty matrix has determinant 1.
    pub fn determinant(&self) -> Result<F::Elem> {
        let n = self.require_square()?;
        let f = self.field().clone();
        let mut a = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !f.is_zero(a.get(r, col))) else {
                return Ok(f.zero());
            };
            if p != col {
                a.swap_rows(col, p);
                det = f.neg(&det);
            }
            let pivot = a.get(col, col).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(a.get(r, col), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(a.get(r, c), &f.mul(&factor, a.get(col, c)));
                    a.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let f = self.field().clone();
        let augmented = Matrix::from_fn(&f, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                f.one()
            } else {
                f.zero()
            }
        });
        let (reduced, pivots) = reduced_echelon(&augmented);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(&f, n, n, |r, c| reduced.get(r, n + c).clone()))
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field().clone();
        let (reduced, pivots) = reduced_echelon(self);
        let free: Vec<usize> = (0..self.cols()).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols()];
                v[fc] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(t·I − M)` by the Berkowitz recurrence.
    pub fn char_poly(&self) -> Result<CharPoly<F>> {
        let n = self.require_square()?;
        let f = self.field().clone();
        // highest power first while building
        let mut poly = vec![f.one()];
        for k in 0..n {
            // toeplitz column: 1, -a_kk, -R C, -R A C, …, -R A^{k-2} C
            let mut toeplitz = Vec::with_capacity(k + 2);
            toeplitz.push(f.one());
            toeplitz.push(f.neg(self.get(k, k)));
            let mut v: Vec<F::Elem> = (0..k).map(|r| self.get(r, k).clone()).collect();
            for step in 0..k {
                let rv = (0..k).fold(f.zero(), |acc, c| f.add(&acc, &f.mul(self.get(k, c), &v[c])));
                toeplitz.push(f.neg(&rv));
                if step + 1 < k {
                    v = (0..k)
                        .map(|r| {
                            (0..k).fold(f.zero(), |acc, c| f.add(&acc, &f.mul(self.get(r, c), &v[c])))
                        })
                        .collect();
                }
            }
            let next: Vec<F::Elem> = (0..k + 2)
                .map(|row| {
                    (0..=row.min(k)).fold(f.zero(), |acc, j| {
                        f.add(&acc, &f.mul(&toeplitz[row - j], &poly[j]))
                    })
                })
                .collect();
            poly = next;
        }
        poly.reverse();
        Ok(CharPoly { coeffs: poly })
    }

    /// `(s_0, …, s_m)`, `s_j` the sum of the principal `j × j` minors.
    pub fn principal_minor_sums(&self) -> Result<Vec<F::Elem>> {
        let cp = self.char_poly()?;
        let f = self.field();
        let m = cp.degree();
        Ok((0..=m)
            .map(|j| {
                let c = &cp.coefficients()[m - j];
                if j % 2 == 0 {
                    c.clone()
                } else {
                    f.neg(c)
                }
            })
            .collect())
    }

    /// Stable rank: `rank(M^m)`, `m` the size.
    pub fn stable_rank(&self) -> Result<usize> {
        let n = self.require_square()?;
        Ok(self.pow(n as u32)?.rank())
    }

    /// Stable rank read off the principal-minor sums: the largest `j` with `s_j ≠ 0`.
    pub fn stable_rank_by_minors(&self) -> Result<usize> {
        let s = self.principal_minor_sums()?;
        Ok(top_nonzero_index(self.field(), &s))
    }
}

/// Largest index with a nonzero entry, 0 if there is none.
pub fn top_nonzero_index<F: Field>(f: &F, values: &[F::Elem]) -> usize {
    values.iter().rposition(|v| !f.is_zero(v)).unwrap_or(0)
}
