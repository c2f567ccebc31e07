//! Presentations of k-linear categories and of modules over them.
//!
//! A presentation fixes an ordered basis of every hom space. Composition is
//! stored as structure constants: the tensor for `(x, y, z)` has an entry
//! `(i, j, l, s)` when the `i`-th basis morphism `y -> z` composed after the
//! `j`-th basis morphism `x -> y` has coefficient `s` on the `l`-th basis
//! morphism `x -> z`.

mod io;
mod module;
mod validate;
mod window;

pub use io::{
    category_from_json, category_to_json, module_from_json, module_to_json, with_schema, ModuleFile,
    SCHEMA_VERSION,
};
pub use module::{module_hom_space, representable, Module, Side};
pub(crate) use module::HomEquations;
pub use validate::{validate_category, validate_module};
pub use window::{
    format_object, parse_object, parse_window, Generator, Scope, SetDecl, Window,
};

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Tensor3};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug)]
pub struct LinCat {
    field: Field,
    objects: Vec<String>,
    index: BTreeMap<String, usize>,
    hom: Vec<usize>,
    compose: BTreeMap<(usize, usize, usize), Tensor3>,
    identity: Vec<Vec<Scalar>>,
    opposite: OnceLock<Box<LinCat>>,
}

impl PartialEq for LinCat {
    fn eq(&self, other: &LinCat) -> bool {
        self.field == other.field
            && self.objects == other.objects
            && self.hom == other.hom
            && self.compose == other.compose
            && self.identity == other.identity
    }
}

impl Eq for LinCat {}

impl LinCat {
    /// Assemble a presentation from index-keyed parts.
    ///
    /// Only structural consistency is checked here; the category axioms are
    /// the business of [`validate_category`].
    pub fn from_parts(
        field: Field,
        objects: Vec<String>,
        hom: Vec<usize>,
        compose: BTreeMap<(usize, usize, usize), Tensor3>,
        identity: Vec<Vec<Scalar>>,
    ) -> Result<LinCat> {
        let n = objects.len();
        let mut index = BTreeMap::new();
        for (i, o) in objects.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(Error::MalformedPresentation(format!("duplicate object {o:?}")));
            }
        }
        if hom.len() != n * n {
            return Err(Error::MalformedPresentation(format!(
                "{} hom dimensions for {n} objects",
                hom.len()
            )));
        }
        if identity.len() != n {
            return Err(Error::MalformedPresentation(format!(
                "{} identities for {n} objects",
                identity.len()
            )));
        }
        for (x, id) in identity.iter().enumerate() {
            if id.len() != hom[x * n + x] {
                return Err(Error::MalformedPresentation(format!(
                    "identity of {:?} has {} coordinates but End has dimension {}",
                    objects[x],
                    id.len(),
                    hom[x * n + x]
                )));
            }
            if let Some(s) = id.iter().find(|s| s.field() != field) {
                return Err(Error::FieldMismatch(s.field(), field));
            }
        }
        let mut kept = BTreeMap::new();
        for ((x, y, z), t) in compose {
            if x >= n || y >= n || z >= n {
                return Err(Error::MalformedPresentation(format!(
                    "composition indexed by unknown object ({x}, {y}, {z})"
                )));
            }
            let expect = (hom[y * n + z], hom[x * n + y], hom[x * n + z]);
            if t.dims() != expect {
                return Err(Error::MalformedPresentation(format!(
                    "composition tensor for ({}, {}, {}) has dimensions {:?}, expected {:?}",
                    objects[x],
                    objects[y],
                    objects[z],
                    t.dims(),
                    expect
                )));
            }
            if let Some(e) = t.entries().iter().find(|e| e.3.field() != field) {
                return Err(Error::FieldMismatch(e.3.field(), field));
            }
            if !t.is_zero() {
                kept.insert((x, y, z), t);
            }
        }
        Ok(LinCat {
            field,
            objects,
            index,
            hom,
            compose: kept,
            identity,
            opposite: OnceLock::new(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom[x * self.len() + y]
    }

    /// Composition tensor for `Hom(y,z) (x) Hom(x,y) -> Hom(x,z)`; `None`
    /// when every composite vanishes.
    pub fn compose_tensor(&self, x: usize, y: usize, z: usize) -> Option<&Tensor3> {
        self.compose.get(&(x, y, z))
    }

    pub fn compose_tensors(&self) -> &BTreeMap<(usize, usize, usize), Tensor3> {
        &self.compose
    }

    pub fn identity(&self, x: usize) -> &[Scalar] {
        &self.identity[x]
    }

    /// Composite `g . f` for `f` in `Hom(x,y)` and `g` in `Hom(y,z)`.
    pub fn compose_vec(&self, x: usize, y: usize, z: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.hom_dim(x, z)];
        if let Some(t) = self.compose_tensor(x, y, z) {
            for (i, j, l, s) in t.entries() {
                if g[*i].is_zero() || f[*j].is_zero() {
                    continue;
                }
                out[*l] = &out[*l] + &(&(&g[*i] * &f[*j]) * s);
            }
        }
        out
    }

    /// Composite of two basis morphisms.
    pub fn compose_basis(&self, x: usize, y: usize, z: usize, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.hom_dim(x, z)];
        if let Some(t) = self.compose_tensor(x, y, z) {
            for (a, b, l, s) in t.entries() {
                if *a == i && *b == j {
                    out[*l] = s.clone();
                }
            }
        }
        out
    }

    /// The linear map `Hom(y,z) (x) Hom(x,y) -> Hom(x,z)`, with column
    /// `i * dim Hom(x,y) + j` holding the composite of basis elements.
    pub fn composition_matrix(&self, x: usize, y: usize, z: usize) -> Matrix {
        let (a, b, c) = (self.hom_dim(y, z), self.hom_dim(x, y), self.hom_dim(x, z));
        let mut m = Matrix::zeros(self.field, c, a * b);
        if let Some(t) = self.compose_tensor(x, y, z) {
            for (i, j, l, s) in t.entries() {
                m.set(*l, i * b + j, s.clone());
            }
        }
        m
    }

    /// Post-composition with the `i`-th basis morphism `y -> z`, as a map
    /// `Hom(x,y) -> Hom(x,z)`.
    pub fn post_compose_matrix(&self, x: usize, y: usize, z: usize, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.hom_dim(x, z), self.hom_dim(x, y));
        if let Some(t) = self.compose_tensor(x, y, z) {
            for (a, j, l, s) in t.entries() {
                if *a == i {
                    m.set(*l, *j, s.clone());
                }
            }
        }
        m
    }

    /// The opposite category, with the same bases: `Hom_op(x,y) = Hom(y,x)`.
    pub fn opposite(&self) -> &LinCat {
        self.opposite.get_or_init(|| {
            let n = self.len();
            let mut hom = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    hom[x * n + y] = self.hom_dim(y, x);
                }
            }
            let compose = self
                .compose
                .iter()
                .map(|(&(x, y, z), t)| ((z, y, x), t.swap12()))
                .collect();
            Box::new(
                LinCat::from_parts(self.field, self.objects.clone(), hom, compose, self.identity.clone())
                    .expect("opposite of a well-formed presentation"),
            )
        })
    }

    /// The category whose left modules are modules of the given side.
    pub fn acting(&self, side: Side) -> Cow<'_, LinCat> {
        match side {
            Side::Left => Cow::Borrowed(self),
            Side::Right => Cow::Borrowed(self.opposite()),
        }
    }

    /// Full subcategory on the named objects, kept in this category's order.
    pub fn full_subcategory(&self, names: &[&str]) -> Result<LinCat> {
        let mut keep = names
            .iter()
            .map(|o| self.index_of(o))
            .collect::<Result<Vec<_>>>()?;
        keep.sort_unstable();
        keep.dedup();
        Ok(self.restrict(&keep))
    }

    /// Full subcategory on the given object indices, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> LinCat {
        let m = keep.len();
        let objects = keep.iter().map(|&i| self.objects[i].clone()).collect();
        let mut hom = vec![0; m * m];
        for (a, &x) in keep.iter().enumerate() {
            for (b, &y) in keep.iter().enumerate() {
                hom[a * m + b] = self.hom_dim(x, y);
            }
        }
        let mut compose = BTreeMap::new();
        for (a, &x) in keep.iter().enumerate() {
            for (b, &y) in keep.iter().enumerate() {
                for (c, &z) in keep.iter().enumerate() {
                    if let Some(t) = self.compose_tensor(x, y, z) {
                        compose.insert((a, b, c), t.clone());
                    }
                }
            }
        }
        let identity = keep.iter().map(|&x| self.identity[x].clone()).collect();
        LinCat::from_parts(self.field, objects, hom, compose, identity).expect("restriction of a presentation")
    }

    /// Total dimension of all hom spaces.
    pub fn total_hom_dim(&self) -> usize {
        self.hom.iter().sum()
    }
}

/// Builder for presentations keyed by object names.
#[derive(Clone, Debug)]
pub struct LinCatBuilder {
    field: Field,
    objects: Vec<String>,
    hom: BTreeMap<(String, String), usize>,
    compose: BTreeMap<(String, String, String), Vec<(usize, usize, usize, Scalar)>>,
    identity: BTreeMap<String, Vec<Scalar>>,
}

impl LinCatBuilder {
    pub fn new(field: Field, objects: &[&str]) -> LinCatBuilder {
        LinCatBuilder {
            field,
            objects: objects.iter().map(|s| s.to_string()).collect(),
            hom: BTreeMap::new(),
            compose: BTreeMap::new(),
            identity: BTreeMap::new(),
        }
    }

    pub fn hom(mut self, x: &str, y: &str, dim: usize) -> Self {
        self.hom.insert((x.into(), y.into()), dim);
        self
    }

    pub fn compose(mut self, x: &str, y: &str, z: &str, entries: Vec<(usize, usize, usize, Scalar)>) -> Self {
        self.compose.insert((x.into(), y.into(), z.into()), entries);
        self
    }

    pub fn identity(mut self, x: &str, coords: Vec<Scalar>) -> Self {
        self.identity.insert(x.into(), coords);
        self
    }

    /// Hom spaces `Hom(x,x)` that were not given a dimension default to a
    /// one-dimensional span of the identity, with the evident compositions.
    pub fn build(self) -> Result<LinCat> {
        let n = self.objects.len();
        let index: BTreeMap<&str, usize> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        let idx = |o: &str| index.get(o).copied().ok_or_else(|| Error::UnknownObject(o.to_string()));
        let mut hom = vec![0; n * n];
        for x in 0..n {
            hom[x * n + x] = 1;
        }
        for ((x, y), d) in &self.hom {
            hom[idx(x)? * n + idx(y)?] = *d;
        }
        let mut identity: Vec<Vec<Scalar>> = (0..n)
            .map(|x| {
                let d = hom[x * n + x];
                let mut v = vec![self.field.zero(); d];
                if d == 1 {
                    v[0] = self.field.one();
                }
                v
            })
            .collect();
        for (x, v) in self.identity {
            identity[idx(&x)?] = v;
        }
        let mut compose = BTreeMap::new();
        for ((x, y, z), entries) in self.compose {
            let (x, y, z) = (idx(&x)?, idx(&y)?, idx(&z)?);
            let dims = (hom[y * n + z], hom[x * n + y], hom[x * n + z]);
            compose.insert((x, y, z), Tensor3::new(dims, entries)?);
        }
        // Unit laws for one-dimensional endomorphism spaces spanned by the identity.
        for x in 0..n {
            for y in 0..n {
                let d = hom[x * n + y];
                if d == 0 {
                    continue;
                }
                if hom[y * n + y] == 1 && identity[y][0].is_one() && !compose.contains_key(&(x, y, y)) {
                    let e = (0..d).map(|j| (0, j, j, self.field.one())).collect();
                    compose.insert((x, y, y), Tensor3::new((1, d, d), e)?);
                }
                if hom[x * n + x] == 1 && identity[x][0].is_one() && !compose.contains_key(&(x, x, y)) {
                    let e = (0..d).map(|i| (i, 0, i, self.field.one())).collect();
                    compose.insert((x, x, y), Tensor3::new((d, 1, d), e)?);
                }
            }
        }
        LinCat::from_parts(self.field, self.objects, hom, compose, identity)
    }
}
