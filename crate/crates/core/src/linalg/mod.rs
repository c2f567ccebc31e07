//! Exact matrices, subspaces and structure-constant tensors.

mod sparse;
mod subspace;
mod tensor;

pub use sparse::SparseMatrix;
pub use subspace::Subspace;
pub(crate) use subspace::combinations;
pub use tensor::Tensor3;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Matrices with at least this many rows and columns are reduced through
/// the sparse path.
pub const SPARSE_THRESHOLD: usize = 64;

/// A dense row-major matrix over a single field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    /// Build from integer rows; every row must have `cols` entries.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(field, rows.len(), cols, |r, c| field.int(rows[r][c]))
    }

    /// Build from scalar rows with an explicit column count, so that
    /// matrices with no rows keep their width.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch(s.field(), field));
                }
                data.push(s);
            }
        }
        Ok(Matrix {
            rows: n,
            cols,
            field,
            data,
        })
    }

    /// A single column.
    pub fn column(field: Field, v: &[Scalar]) -> Matrix {
        Matrix::from_fn(field, v.len(), 1, |r, _| v[r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "scalar field mismatch");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// The dual linear map in dual bases, which is the transpose.
    pub fn dual_map(&self) -> Matrix {
        self.transpose()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * other.cols + c;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Side-by-side concatenation; all parts share the row count.
    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut offset = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.paste(0, offset, m);
            offset += m.cols;
        }
        out
    }

    /// Vertical concatenation; all parts share the column count.
    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut offset = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.paste(offset, 0, m);
            offset += m.rows;
        }
        out
    }

    /// Copy `m` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, m: &Matrix) {
        for r in 0..m.rows {
            for c in 0..m.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = m.get(r, c).clone();
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| self.get(r / other.rows, c / other.cols) * other.get(r % other.rows, c % other.cols),
        )
    }

    /// Reduced row-echelon form, dispatching to the sparse path for large
    /// matrices.
    pub fn rref(&self) -> Rref {
        if self.rows >= SPARSE_THRESHOLD && self.cols >= SPARSE_THRESHOLD {
            self.rref_sparse()
        } else {
            self.rref_dense()
        }
    }

    pub fn rref_sparse(&self) -> Rref {
        SparseMatrix::from_dense(self).rref()
    }

    pub fn rref_dense(&self) -> Rref {
        match self.field {
            Field::Prime(p) => self.rref_modular(p),
            Field::Rationals => self.rref_generic(),
        }
    }

    fn rref_generic(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let sub = &factor * m.get(row, c);
                    let idx = r * m.cols + c;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn rref_modular(&self, p: u32) -> Rref {
        let p64 = p as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<u64> = self
            .data
            .iter()
            .map(|s| s.as_i64().expect("modular entry") as u64)
            .collect();
        let inv = |v: u64| {
            let mut base = v % p64;
            let mut e = p64 - 2;
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p64;
                }
                base = base * base % p64;
                e >>= 1;
            }
            acc
        };
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(pr) = (row..rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..cols {
                    a.swap(pr * cols + c, row * cols + c);
                }
            }
            let iv = inv(a[row * cols + col]);
            for c in col..cols {
                a[row * cols + c] = a[row * cols + c] * iv % p64;
            }
            for r in 0..rows {
                let f = a[r * cols + col];
                if r == row || f == 0 {
                    continue;
                }
                let g = p64 - f;
                for c in col..cols {
                    let v = a[row * cols + c];
                    if v != 0 {
                        a[r * cols + c] = (a[r * cols + c] + g * v) % p64;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let field = self.field;
        let matrix = Matrix {
            rows,
            cols,
            field,
            data: a.into_iter().map(|v| field.int(v as i64)).collect(),
        };
        Rref { matrix, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Right null space `{v : self * v = 0}` inside `k^cols`.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors = free
            .iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix.get(i, f);
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span(self.field, self.cols, &vectors)
    }

    /// Column space inside `k^rows`.
    pub fn image(&self) -> Subspace {
        self.transpose().row_space()
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_rref(self.cols, self.rref())
    }

    /// Solve `self * x = rhs` for `x`; any particular solution is returned.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "system with {} equations and right-hand side with {} rows",
                self.rows, rhs.rows
            )));
        }
        let aug = Matrix::hstack(self.field, self.rows, &[self, rhs]);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, matrix.get(i, self.cols + c).clone());
            }
        }
        Ok(x)
    }

    /// Matrix power for square matrices.
    pub fn pow(&self, mut e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Nested JSON arrays of scalars.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| Value::Array(self.row(r).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    /// Parse nested arrays; `shape` fixes the dimensions so empty matrices
    /// are unambiguous.
    pub fn from_json(field: Field, shape: (usize, usize), v: &Value) -> Result<Matrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("matrix must be an array, got {v}")))?;
        if rows.len() != shape.0 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rows, found {}",
                shape.0,
                rows.len()
            )));
        }
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse(format!("matrix row must be an array, got {row}")))?;
            out.push(
                row.iter()
                    .map(|s| field.parse_json(s))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Matrix::from_rows(field, shape.1, out)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}](", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (i, v) in self.row(r).iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, ")")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_add(&-rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}
