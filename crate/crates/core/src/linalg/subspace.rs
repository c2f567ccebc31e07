use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

use super::{Matrix, Rref};

/// A subspace of `k^n` held by its reduced row-echelon basis.
///
/// The basis is canonical, so two subspaces are equal exactly when their
/// stored bases are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub(crate) fn from_rref(ambient: usize, rref: Rref) -> Subspace {
        let dim = rref.pivots.len();
        let basis = rref.matrix.submatrix(0, dim, 0, ambient);
        Subspace {
            ambient,
            basis,
            pivots: rref.pivots,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec()).expect("vectors of ambient length");
        m.row_space()
    }

    /// Row space of a matrix whose rows are vectors of `k^cols`.
    pub fn from_rows(m: &Matrix) -> Subspace {
        m.row_space()
    }

    /// Column space of a matrix.
    pub fn from_columns(m: &Matrix) -> Subspace {
        m.image()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|r| self.basis.row(r).to_vec()).collect()
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    /// Reduce `v` against the echelon basis; the result is zero exactly
    /// when `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (c, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    out[c] = &out[c] - &(&f * b);
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(())
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(other.vectors().iter().all(|v| self.contains_vector(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let m = Matrix::vstack(self.field(), self.ambient, &[&self.basis, &other.basis]);
        Ok(m.row_space())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// `{w : w . v = 0 for all v in self}`.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.field(), self.ambient);
        }
        self.basis.kernel()
    }

    /// Image under `a`, where `a` has `ambient` columns.
    pub fn image_under(&self, a: &Matrix) -> Subspace {
        assert_eq!(a.cols(), self.ambient, "map does not start at this ambient space");
        if self.dim() == 0 {
            return Subspace::zero(self.field(), a.rows());
        }
        (a * &self.basis_columns()).image()
    }

    /// Preimage `{v : a v in self}`, where `a` has `ambient` rows.
    pub fn preimage(&self, a: &Matrix) -> Subspace {
        assert_eq!(a.rows(), self.ambient, "map does not land in this ambient space");
        let ann = self.annihilator();
        if ann.dim() == 0 {
            return Subspace::full(self.field(), a.cols());
        }
        (&ann.basis * a).kernel()
    }

    /// Non-pivot columns; the matching standard vectors span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Projection `k^n -> k^n / self` in the coordinates of
    /// [`Subspace::complement_indices`].
    pub fn quotient_projection(&self) -> Matrix {
        let comp = self.complement_indices();
        let field = self.field();
        let mut m = Matrix::zeros(field, comp.len(), self.ambient);
        for j in 0..self.ambient {
            let mut e = vec![field.zero(); self.ambient];
            e[j] = field.one();
            let r = self.reduce(&e);
            for (i, &c) in comp.iter().enumerate() {
                m.set(i, j, r[c].clone());
            }
        }
        m
    }

    /// Section of the quotient projection by standard vectors.
    pub fn complement_lift(&self) -> Matrix {
        let comp = self.complement_indices();
        let field = self.field();
        let mut m = Matrix::zeros(field, self.ambient, comp.len());
        for (i, &c) in comp.iter().enumerate() {
            m.set(c, i, field.one());
        }
        m
    }

    /// Every subspace of `F_p^n`, enumerated through echelon forms.
    pub fn all(field: Field, ambient: usize) -> Vec<Subspace> {
        let Some(elements) = field.elements() else {
            panic!("subspace enumeration needs a finite field");
        };
        let mut out = Vec::new();
        for dim in 0..=ambient {
            for pivots in combinations(ambient, dim) {
                let mut slots = Vec::new();
                for (i, &p) in pivots.iter().enumerate() {
                    for c in p + 1..ambient {
                        if !pivots.contains(&c) {
                            slots.push((i, c));
                        }
                    }
                }
                let q = elements.len();
                let total = q.checked_pow(slots.len() as u32).expect("enumeration too large");
                for code in 0..total {
                    let mut basis = Matrix::zeros(field, dim, ambient);
                    for (i, &p) in pivots.iter().enumerate() {
                        basis.set(i, p, field.one());
                    }
                    let mut rest = code;
                    for &(i, c) in &slots {
                        basis.set(i, c, elements[rest % q].clone());
                        rest /= q;
                    }
                    out.push(Subspace {
                        ambient,
                        basis,
                        pivots: pivots.clone(),
                    });
                }
            }
        }
        out
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient, self.basis)
    }
}
