use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse order-3 tensor of structure constants.
///
/// Entries are strictly ordered `(i, j, l, value)` quadruples with indices
/// in range and no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    entries: Vec<(usize, usize, usize, Scalar)>,
}

impl Tensor3 {
    pub fn zero(dims: (usize, usize, usize)) -> Tensor3 {
        Tensor3 {
            dims,
            entries: Vec::new(),
        }
    }

    /// Validate and canonicalize; duplicates and out-of-range indices are
    /// rejected, zeros are dropped.
    pub fn new(
        dims: (usize, usize, usize),
        mut entries: Vec<(usize, usize, usize, Scalar)>,
    ) -> Result<Tensor3> {
        for (i, j, l, _) in &entries {
            if *i >= dims.0 || *j >= dims.1 || *l >= dims.2 {
                return Err(Error::MalformedPresentation(format!(
                    "tensor index ({i}, {j}, {l}) outside dimensions {dims:?}"
                )));
            }
        }
        entries.sort_by_key(|e| (e.0, e.1, e.2));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1, w[0].2) == (w[1].0, w[1].1, w[1].2)) {
            return Err(Error::MalformedPresentation(format!(
                "duplicate tensor coordinate ({}, {}, {})",
                w[0].0, w[0].1, w[0].2
            )));
        }
        entries.retain(|e| !e.3.is_zero());
        Ok(Tensor3 { dims, entries })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn entries(&self) -> &[(usize, usize, usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&(i, j, l), |e| (e.0, e.1, e.2))
            .ok()
            .map(|k| &self.entries[k].3)
    }

    /// Exchange the first two indices.
    pub fn swap12(&self) -> Tensor3 {
        let entries = self
            .entries
            .iter()
            .map(|(i, j, l, s)| (*j, *i, *l, s.clone()))
            .collect();
        Tensor3::new((self.dims.1, self.dims.0, self.dims.2), entries).expect("permuted tensor")
    }

    /// Move the last index to the front: `(i, j, l) -> (l, j, i)`.
    pub fn transpose_outer(&self) -> Tensor3 {
        let entries = self
            .entries
            .iter()
            .map(|(i, j, l, s)| (*l, *j, *i, s.clone()))
            .collect();
        Tensor3::new((self.dims.2, self.dims.1, self.dims.0), entries).expect("permuted tensor")
    }
}
