//! Exhaustive enumeration of small modules over a finite field.

use crate::error::{Error, Result};
use crate::gallery;
use crate::linalg::Matrix;
use crate::lincat::{LinCat, Module};
use crate::scalar::Field;

/// Every matrix of the given shape over a finite field, in lexicographic
/// order of entries.
pub fn all_matrices(field: Field, rows: usize, cols: usize) -> Result<Vec<Matrix>> {
    let elems = field
        .elements()
        .ok_or_else(|| Error::HypothesisNotSatisfied("enumeration needs a finite field".into()))?;
    let cells = rows * cols;
    let total = elems.len().checked_pow(cells as u32).ok_or_else(|| Error::DimensionMismatch("too many matrices".into()))?;
    Ok((0..total)
        .map(|mut k| {
            let mut entries = Vec::with_capacity(cells);
            for _ in 0..cells {
                entries.push(elems[k % elems.len()].clone());
                k /= elems.len();
            }
            entries.reverse();
            Matrix::from_fn(field, rows, cols, |r, c| entries[r * cols + c].clone())
        })
        .collect())
}

/// Every left module on the chain `cat` (an `A_n`) with all component
/// dimensions at most `max_dim`. Modules on a chain are determined by the
/// maps between consecutive objects, which are arbitrary.
pub fn chain_modules(cat: &LinCat, max_dim: usize) -> Result<Vec<Module>> {
    let field = cat.field();
    let n = cat.len();
    let mut out = Vec::new();
    let mut dims = vec![0usize; n];
    loop {
        let choices: Vec<Vec<Matrix>> = (0..n.saturating_sub(1))
            .map(|i| all_matrices(field, dims[i + 1], dims[i]))
            .collect::<Result<_>>()?;
        let mut idx = vec![0usize; choices.len()];
        loop {
            let steps: Vec<Matrix> = idx.iter().enumerate().map(|(i, &k)| choices[i][k].clone()).collect();
            out.push(gallery::chain_module(cat, &dims, &steps));
            if !advance(&mut idx, |i| choices[i].len()) {
                break;
            }
        }
        if !advance(&mut dims, |_| max_dim + 1) {
            return Ok(out);
        }
    }
}

/// Odometer increment; false once every position has wrapped around.
fn advance(idx: &mut [usize], limit: impl Fn(usize) -> usize) -> bool {
    for i in 0..idx.len() {
        idx[i] += 1;
        if idx[i] < limit(i) {
            return true;
        }
        idx[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincat::validate_module;

    #[test]
    fn counts() {
        let f = Field::f2();
        assert_eq!(all_matrices(f, 2, 2).unwrap().len(), 16);
        assert_eq!(all_matrices(f, 0, 3).unwrap().len(), 1);
        let a2 = gallery::chain(f, 2);
        assert_eq!(chain_modules(&a2, 2).unwrap().len(), 31);
        let a3 = gallery::chain(f, 3);
        let all = chain_modules(&a3, 2).unwrap();
        assert_eq!(all.len(), 499);
        assert!(all.iter().all(|m| validate_module(&a3, m).unwrap().is_certified()));
        assert!(all_matrices(Field::Rationals, 1, 1).is_err());
    }
}
