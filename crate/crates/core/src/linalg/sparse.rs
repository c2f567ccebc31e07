use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

use super::{Matrix, Rref};

/// Coordinate-list matrix: strictly ordered `(row, col, value)` triples with
/// no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn from_dense(m: &Matrix) -> SparseMatrix {
        let mut entries = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if !v.is_zero() {
                    entries.push((r, c, v.clone()));
                }
            }
        }
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            field: m.field(),
            entries,
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for (r, c, v) in &self.entries {
            m.set(*r, *c, v.clone());
        }
        m
    }

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Gauss-Jordan elimination on rows stored as ordered maps.
    pub fn rref(&self) -> Rref {
        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in &self.entries {
            rows[*r].insert(*c, v.clone());
        }
        let mut reduced: Vec<BTreeMap<usize, Scalar>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut remaining = rows;
        for col in 0..self.cols {
            let Some(pos) = remaining
                .iter()
                .position(|row| row.get(&col).is_some_and(|v| !v.is_zero()))
            else {
                continue;
            };
            let mut pivot_row = remaining.swap_remove(pos);
            let inv = pivot_row[&col].inv().expect("nonzero pivot");
            for v in pivot_row.values_mut() {
                *v = &*v * &inv;
            }
            let eliminate = |row: &mut BTreeMap<usize, Scalar>| {
                if let Some(f) = row.get(&col).cloned() {
                    for (c, v) in &pivot_row {
                        let updated = row.get(c).map_or_else(|| -(&f * v), |old| old - &(&f * v));
                        if updated.is_zero() {
                            row.remove(c);
                        } else {
                            row.insert(*c, updated);
                        }
                    }
                }
            };
            remaining.iter_mut().for_each(eliminate);
            reduced.iter_mut().for_each(eliminate);
            reduced.push(pivot_row);
            pivots.push(col);
        }
        let mut matrix = Matrix::zeros(self.field, self.rows, self.cols);
        for (i, row) in reduced.iter().enumerate() {
            for (c, v) in row {
                matrix.set(i, *c, v.clone());
            }
        }
        Rref { matrix, pivots }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_no_zeros() {
        let f = Field::Prime(3);
        let m = Matrix::from_ints(f, &[&[0, 1, 0], &[3, 0, 2]]);
        let s = SparseMatrix::from_dense(&m);
        assert_eq!(s.nnz(), 2);
        assert!(s.entries().windows(2).all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        assert_eq!(s.to_dense(), m);
    }
}
