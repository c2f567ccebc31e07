use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{Field, Scalar};

use super::LinCat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A module over a presented category: a vector space per object and one
/// action matrix per hom-basis vector.
///
/// A left module acts by `Hom(x,y) (x) M(x) -> M(y)`, so the matrix of a
/// basis morphism `x -> y` is `dim M(y) x dim M(x)`. A right module acts by
/// `Hom(x,y) (x) N(y) -> N(x)` with matrices `dim N(x) x dim N(y)`.
///
/// Internally a right module is stored as the left module over the opposite
/// category with the same data, so most algorithms are written once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    side: Side,
    field: Field,
    dims: Vec<usize>,
    /// `acting[a * n + b]`: matrices of the basis of `Hom(a,b)` in the acting
    /// category, each `dims[b] x dims[a]`.
    acting: Vec<Vec<Matrix>>,
}

impl Module {
    pub fn zero(cat: &LinCat, side: Side) -> Module {
        Module::from_acting_fn(cat, side, vec![0; cat.len()], |_, _, _| None)
    }

    /// Build a module from its natural action data. Missing pairs act by zero.
    pub fn new(
        cat: &LinCat,
        side: Side,
        dims: Vec<usize>,
        action: BTreeMap<(usize, usize), Vec<Matrix>>,
    ) -> Result<Module> {
        let n = cat.len();
        if dims.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} component dimensions for {n} objects",
                dims.len()
            )));
        }
        for (&(x, y), mats) in &action {
            if x >= n || y >= n {
                return Err(Error::DimensionMismatch(format!("action indexed by unknown pair ({x}, {y})")));
            }
            if mats.len() != cat.hom_dim(x, y) {
                return Err(Error::DimensionMismatch(format!(
                    "{} action matrices for Hom({}, {}) of dimension {}",
                    mats.len(),
                    cat.object(x),
                    cat.object(y),
                    cat.hom_dim(x, y)
                )));
            }
            let shape = match side {
                Side::Left => (dims[y], dims[x]),
                Side::Right => (dims[x], dims[y]),
            };
            for m in mats {
                if m.shape() != shape {
                    return Err(Error::DimensionMismatch(format!(
                        "action of Hom({}, {}) has shape {:?}, expected {:?}",
                        cat.object(x),
                        cat.object(y),
                        m.shape(),
                        shape
                    )));
                }
                if m.field() != cat.field() {
                    return Err(Error::FieldMismatch(m.field(), cat.field()));
                }
            }
        }
        Ok(Module::from_acting_fn(cat, side, dims, |a, b, e| {
            let key = match side {
                Side::Left => (a, b),
                Side::Right => (b, a),
            };
            action.get(&key).map(|m| m[e].clone())
        }))
    }

    /// Build from a function on the acting category: `f(a, b, e)` is the
    /// matrix of the `e`-th basis morphism of `Hom_act(a, b)`.
    pub(crate) fn from_acting_fn(
        cat: &LinCat,
        side: Side,
        dims: Vec<usize>,
        mut f: impl FnMut(usize, usize, usize) -> Option<Matrix>,
    ) -> Module {
        let act = cat.acting(side);
        let n = cat.len();
        let field = cat.field();
        let mut acting = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mats = (0..act.hom_dim(a, b))
                    .map(|e| f(a, b, e).unwrap_or_else(|| Matrix::zeros(field, dims[b], dims[a])))
                    .collect();
                acting.push(mats);
            }
        }
        Module {
            side,
            field,
            dims,
            acting,
        }
    }

    /// A left module over `act` with the given storage, relabelled with `side`.
    pub(crate) fn from_acting(side: Side, field: Field, dims: Vec<usize>, acting: Vec<Vec<Matrix>>) -> Module {
        Module {
            side,
            field,
            dims,
            acting,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Matrices of the basis of `Hom(x,y)`, in the natural orientation for
    /// this module's side.
    pub fn action(&self, x: usize, y: usize) -> &[Matrix] {
        match self.side {
            Side::Left => self.acting_action(x, y),
            Side::Right => self.acting_action(y, x),
        }
    }

    /// Matrices of the basis of `Hom_act(a,b)` in the acting category.
    pub fn acting_action(&self, a: usize, b: usize) -> &[Matrix] {
        &self.acting[a * self.len() + b]
    }

    /// Action of an arbitrary morphism of the acting category.
    pub fn acting_apply(&self, a: usize, b: usize, f: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dims[b], self.dims[a]);
        for (c, m) in self.acting_action(a, b).iter().enumerate() {
            if !f[c].is_zero() {
                out = &out + &m.scale(&f[c]);
            }
        }
        out
    }

    /// Whether any basis morphism `a -> b` of the acting category acts nonzero.
    pub fn acts_nonzero(&self, a: usize, b: usize) -> bool {
        self.acting_action(a, b).iter().any(|m| !m.is_zero())
    }

    /// The same data viewed as a left module over the acting category.
    pub fn as_acting_left(&self) -> Module {
        Module {
            side: Side::Left,
            ..self.clone()
        }
    }

    /// Relabel left data over the acting category with a side.
    pub fn with_side(mut self, side: Side) -> Module {
        self.side = side;
        self
    }

    /// The componentwise dual: the other side, with transposed actions.
    pub fn transpose_dual(&self) -> Module {
        let n = self.len();
        let mut acting = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                acting.push(self.acting_action(b, a).iter().map(Matrix::transpose).collect());
            }
        }
        Module {
            side: self.side.flip(),
            field: self.field,
            dims: self.dims.clone(),
            acting,
        }
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        assert_eq!(self.side, other.side, "direct sum of modules of different sides");
        assert_eq!(self.len(), other.len(), "direct sum over different categories");
        let n = self.len();
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut acting = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mats = self
                    .acting_action(a, b)
                    .iter()
                    .zip(other.acting_action(a, b))
                    .map(|(p, q)| {
                        let mut m = Matrix::zeros(self.field, dims[b], dims[a]);
                        m.paste(0, 0, p);
                        m.paste(self.dims[b], self.dims[a], q);
                        m
                    })
                    .collect();
                acting.push(mats);
            }
        }
        Module {
            side: self.side,
            field: self.field,
            dims,
            acting,
        }
    }

    /// Whether the family of subspaces is stable under the action.
    pub fn is_submodule(&self, subs: &[Subspace]) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                self.acting_action(a, b)
                    .iter()
                    .all(|m| subs[b].contains(&subs[a].image_under(m)).unwrap_or(false))
            })
        })
    }

    /// Smallest submodule containing the given subspaces.
    pub fn generated(&self, seeds: &[Subspace]) -> Vec<Subspace> {
        let n = self.len();
        (0..n)
            .map(|b| {
                let mut acc = seeds[b].clone();
                for (a, seed) in seeds.iter().enumerate() {
                    if seed.is_zero() {
                        continue;
                    }
                    for m in self.acting_action(a, b) {
                        acc = acc.sum(&seed.image_under(m)).expect("same ambient");
                    }
                }
                acc
            })
            .collect()
    }

    /// The submodule on a stable family of subspaces, in their canonical bases.
    pub fn submodule(&self, subs: &[Subspace]) -> Result<Module> {
        if !self.is_submodule(subs) {
            return Err(Error::DimensionMismatch("subspaces are not stable under the action".into()));
        }
        let n = self.len();
        let dims: Vec<usize> = subs.iter().map(Subspace::dim).collect();
        let mut acting = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let src = subs[a].basis_columns();
                let dst = subs[b].basis_columns();
                let mats = self
                    .acting_action(a, b)
                    .iter()
                    .map(|m| {
                        if dims[a] == 0 || dims[b] == 0 {
                            Matrix::zeros(self.field, dims[b], dims[a])
                        } else {
                            dst.solve(&(m * &src)).expect("image inside the target subspace")
                        }
                    })
                    .collect();
                acting.push(mats);
            }
        }
        Ok(Module {
            side: self.side,
            field: self.field,
            dims,
            acting,
        })
    }

    /// Quotient by a submodule, in the coordinates of the standard complement.
    pub fn quotient(&self, subs: &[Subspace]) -> Result<Module> {
        if !self.is_submodule(subs) {
            return Err(Error::DimensionMismatch("subspaces are not stable under the action".into()));
        }
        let n = self.len();
        let proj: Vec<Matrix> = subs.iter().map(Subspace::quotient_projection).collect();
        let lift: Vec<Matrix> = subs.iter().map(Subspace::complement_lift).collect();
        let dims: Vec<usize> = proj.iter().map(Matrix::rows).collect();
        let mut acting = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mats = self
                    .acting_action(a, b)
                    .iter()
                    .map(|m| &(&proj[b] * m) * &lift[a])
                    .collect();
                acting.push(mats);
            }
        }
        Ok(Module {
            side: self.side,
            field: self.field,
            dims,
            acting,
        })
    }

    /// Objects where the component is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.dims[x] > 0).collect()
    }
}

/// The representable module `Hom(y, -)` (left) or `Hom(-, y)` (right).
pub fn representable(cat: &LinCat, side: Side, y: usize) -> Module {
    let act = cat.acting(side);
    let n = cat.len();
    let dims = (0..n).map(|x| act.hom_dim(y, x)).collect();
    Module::from_acting_fn(cat, side, dims, |a, b, e| Some(act.post_compose_matrix(y, a, b, e)))
}

/// The space of module maps `m1 -> m2`, as a subspace of the concatenated
/// matrix entries of `(phi(x))_x` (row-major per object, objects in order).
pub fn module_hom_space(cat: &LinCat, m1: &Module, m2: &Module) -> Result<Subspace> {
    if m1.side() != m2.side() {
        return Err(Error::DimensionMismatch("modules of different sides".into()));
    }
    if m1.len() != cat.len() || m2.len() != cat.len() {
        return Err(Error::DimensionMismatch("module over a different category".into()));
    }
    let n = cat.len();
    let mut eqs = HomEquations::new(cat.field(), m1.dims(), m2.dims());
    for a in 0..n {
        for b in 0..n {
            for (p, q) in m1.acting_action(a, b).iter().zip(m2.acting_action(a, b)) {
                eqs.commute(b, p, q, a);
            }
        }
    }
    Ok(eqs.solution_space())
}

/// Linear equations on families `phi(x): k^{d1(x)} -> k^{d2(x)}` of the form
/// `phi(b) p = q phi(a)`.
pub(crate) struct HomEquations {
    field: Field,
    d1: Vec<usize>,
    d2: Vec<usize>,
    offsets: Vec<usize>,
    unknowns: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
}

impl HomEquations {
    pub(crate) fn new(field: Field, d1: &[usize], d2: &[usize]) -> HomEquations {
        let mut offsets = Vec::with_capacity(d1.len());
        let mut total = 0;
        for (a, b) in d1.iter().zip(d2) {
            offsets.push(total);
            total += a * b;
        }
        HomEquations {
            field,
            d1: d1.to_vec(),
            d2: d2.to_vec(),
            offsets,
            unknowns: total,
            rows: Vec::new(),
        }
    }

    fn var(&self, x: usize, r: usize, c: usize) -> usize {
        self.offsets[x] + r * self.d1[x] + c
    }

    /// Impose `phi(b) p = q phi(a)` with `p: d1(a) -> d1(b)`, `q: d2(a) -> d2(b)`.
    pub(crate) fn commute(&mut self, b: usize, p: &Matrix, q: &Matrix, a: usize) {
        for r in 0..self.d2[b] {
            for s in 0..self.d1[a] {
                let mut row = Vec::new();
                for u in 0..self.d1[b] {
                    let c = p.get(u, s);
                    if !c.is_zero() {
                        row.push((self.var(b, r, u), c.clone()));
                    }
                }
                for v in 0..self.d2[a] {
                    let c = q.get(r, v);
                    if !c.is_zero() {
                        row.push((self.var(a, v, s), -c));
                    }
                }
                if !row.is_empty() {
                    self.rows.push(row);
                }
            }
        }
    }

    pub(crate) fn solution_space(&self) -> Subspace {
        let mut m = Matrix::zeros(self.field, self.rows.len(), self.unknowns);
        for (i, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let cur = m.get(i, *c).clone();
                m.set(i, *c, &cur + v);
            }
        }
        m.kernel()
    }
}
