//! Dense matrices over GF(q^2) with exact Gaussian elimination.

use std::fmt;

use thiserror::Error;

use crate::field::{Felt, GaloisField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("index {0} out of range for {1} columns")]
    IndexOutOfRange(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
}

/// Row-major matrix. Operations return new matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: &'static GaloisField,
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: FMatrix,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn zeros(field: &'static GaloisField, rows: usize, cols: usize) -> FMatrix {
        FMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &'static GaloisField, n: usize) -> FMatrix {
        FMatrix::from_fn(field, n, n, |i, j| {
            if i == j {
                field.one()
            } else {
                field.zero()
            }
        })
    }

    pub fn from_fn(
        field: &'static GaloisField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Felt,
    ) -> FMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(field: &'static GaloisField, cols: usize, rows: Vec<Vec<Felt>>) -> FMatrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        FMatrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Felt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Felt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Felt::is_zero)
    }

    /// Positions of nonzero entries.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .collect()
    }

    pub fn transpose(&self) -> FMatrix {
        FMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn entrywise_frobenius(&self) -> FMatrix {
        FMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Felt::frobenius).collect(),
        }
    }

    pub fn delete_column(&self, col: usize) -> Result<FMatrix, MatrixError> {
        if col >= self.cols {
            return Err(MatrixError::IndexOutOfRange(col, self.cols));
        }
        Ok(FMatrix::from_fn(self.field, self.rows, self.cols - 1, |i, j| {
            self.get(i, if j < col { j } else { j + 1 })
        }))
    }

    pub fn select_columns(&self, cols: &[usize]) -> FMatrix {
        FMatrix::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn mul_vec(&self, v: &[Felt]) -> Result<Vec<Felt>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch(
                self.rows,
                self.cols,
                v.len(),
                1,
            ));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(FMatrix::from_fn(self.field, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(self.field.zero(), |acc, l| {
                acc + self.get(i, l) * other.get(l, j)
            })
        }))
    }

    /// Reduced row echelon form; the pivot is the first nonzero entry in
    /// each column, scanning rows top to bottom.
    pub fn rref(&self) -> Echelon {
        let mut m = self.data.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = m[r * cols + c].inv();
            for j in c..cols {
                m[r * cols + j] *= inv;
            }
            for i in 0..self.rows {
                let factor = m[i * cols + c];
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let t = m[r * cols + j];
                    m[i * cols + j] -= factor * t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon {
            matrix: FMatrix {
                field: self.field,
                rows: self.rows,
                cols,
                data: m,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel, one vector per free column, with a 1 in
    /// that column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Felt>> {
        let Echelon { matrix, pivots } = self.rref();
        let zero = self.field.zero();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![zero; self.cols];
                v[free] = self.field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix.get(i, free);
                }
                v
            })
            .collect()
    }

    /// The nonzero rows of the reduced echelon form.
    pub fn row_space_basis(&self) -> FMatrix {
        let e = self.rref();
        let r = e.pivots.len();
        FMatrix::from_fn(self.field, r, self.cols, |i, j| e.matrix.get(i, j))
    }

    pub fn row_equivalent(&self, other: &FMatrix) -> Result<bool, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(self.row_space_basis() == other.row_space_basis())
    }

    pub fn determinant(&self) -> Result<Felt, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m[c * n + c];
            det *= pivot;
            let inv = pivot.inv();
            for i in c + 1..n {
                let factor = m[i * n + c] * inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = m[c * n + j];
                    m[i * n + j] -= factor * t;
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
