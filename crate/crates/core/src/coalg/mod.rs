//! The coalgebra of a locally finite category and its co- and contramodules.
//!
//! `C = (+)_{x,y} C^{x,y}` with `C^{x,y} = Hom(x,y)*`. The dual basis of
//! `C^{x,y}` shares its indices with the hom basis. The comultiplication
//! component `mu_{x,z,y}: C^{x,y} -> C^{x,z} (x) C^{z,y}` is the transpose
//! of composition `Hom(z,y) (x) Hom(x,z) -> Hom(x,y)`, and the counit pairs
//! with identity morphisms.

mod comodule;
mod contramodule;
mod nakayama;

pub use comodule::{cofree_comodule, comodule_hom_space, validate_comodule, Comodule};
pub use contramodule::{contramodule_hom_space, free_contramodule, validate_contramodule, Contramodule};
pub use nakayama::{long_radical, long_socle, nakayama_check, Costructure};

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::Tensor3;
use crate::lincat::{LinCat, Scope, Side};
use crate::order::{check_interval_finiteness, preorder};
use crate::scalar::{Field, Scalar};
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Debug)]
pub struct GradedCoalgebra {
    field: Field,
    objects: Vec<String>,
    dims: Vec<usize>,
    counit: Vec<Vec<Scalar>>,
    /// `(x, z, y)` to the tensor with entry `(a, b, l, s)` when `mu(c_l)`
    /// has coefficient `s` on `c_a (x) c_b`.
    comult: BTreeMap<(usize, usize, usize), Tensor3>,
    counital: bool,
    opposite: OnceLock<Box<GradedCoalgebra>>,
}

impl PartialEq for GradedCoalgebra {
    fn eq(&self, other: &GradedCoalgebra) -> bool {
        self.field == other.field
            && self.objects == other.objects
            && self.dims == other.dims
            && self.counit == other.counit
            && self.comult == other.comult
            && self.counital == other.counital
    }
}

impl Eq for GradedCoalgebra {}

/// Transposed composition tensors of a presentation.
pub fn build_coalgebra(cat: &LinCat) -> GradedCoalgebra {
    let n = cat.len();
    let dims = (0..n * n).map(|k| cat.hom_dim(k / n, k % n)).collect();
    let comult = cat
        .compose_tensors()
        .iter()
        .map(|(&(x, z, y), t)| ((x, z, y), t.swap12()))
        .collect();
    GradedCoalgebra {
        field: cat.field(),
        objects: cat.objects().to_vec(),
        dims,
        counit: (0..n).map(|x| cat.identity(x).to_vec()).collect(),
        comult,
        counital: true,
        opposite: OnceLock::new(),
    }
}

/// The coalgebra of a scope; windows need interval finiteness so that the
/// window carries every term of each comultiplication.
pub fn coalgebra_of(scope: &Scope) -> Result<GradedCoalgebra> {
    match check_interval_finiteness(scope) {
        Verdict::Certified { .. } => Ok(build_coalgebra(scope.cat())),
        Verdict::Refuted { .. } => Err(Error::IntervalNotFinite(scope.describe())),
        Verdict::InconclusiveAtWindow { reason, .. } => {
            Err(Error::IntervalNotFinite(format!("{}: {reason}", scope.describe())))
        }
    }
}

/// The subcategory of short morphisms: same objects, `Hom(x,y)` kept only
/// when `x ~ y`.
pub fn short_subcategory(cat: &LinCat) -> LinCat {
    let pre = preorder(cat);
    let n = cat.len();
    let hom = (0..n * n)
        .map(|k| if pre.sim(k / n, k % n) { cat.hom_dim(k / n, k % n) } else { 0 })
        .collect();
    let compose = cat
        .compose_tensors()
        .iter()
        .filter(|((x, y, z), _)| pre.sim(*x, *y) && pre.sim(*y, *z))
        .map(|(k, t)| (*k, t.clone()))
        .collect();
    let identity = (0..n).map(|x| cat.identity(x).to_vec()).collect();
    LinCat::from_parts(cat.field(), cat.objects().to_vec(), hom, compose, identity).expect("short subcategory")
}

/// Restriction of `g` to the components `C^{x,y}` with `x ~ y`.
pub fn short_subcoalgebra(g: &GradedCoalgebra, cat: &LinCat) -> GradedCoalgebra {
    let pre = preorder(cat);
    g.restrict(|x, y| pre.sim(x, y), true)
}

/// The noncounital quotient by the short part: components with `x < y`.
pub fn long_quotient(g: &GradedCoalgebra, cat: &LinCat) -> GradedCoalgebra {
    let pre = preorder(cat);
    g.restrict(|x, y| pre.lt(x, y), false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conilpotency {
    Index(usize),
    Unbounded,
}

impl fmt::Display for Conilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conilpotency::Index(n) => write!(f, "{n}"),
            Conilpotency::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// A pure tensor of basis elements: the component pairs and indices.
type Word = Vec<(usize, usize, usize)>;

/// Least `n >= 1` such that the iterated comultiplication
/// `mu^(n): D -> D^(x n+1)` vanishes, found by iterating the
/// comultiplication on the last tensor factor. The zero coalgebra has
/// index 1.
pub fn conilpotency_index(d: &GradedCoalgebra) -> Conilpotency {
    let n = d.len();
    let total: usize = d.dims.iter().sum();
    let mut applications = 0;
    for x in 0..n {
        for y in 0..n {
            for l in 0..d.dim(x, y) {
                let mut terms: BTreeMap<Word, Scalar> = BTreeMap::new();
                terms.insert(vec![(x, y, l)], d.field.one());
                let mut k = 0;
                while !terms.is_empty() {
                    if k > total {
                        return Conilpotency::Unbounded;
                    }
                    terms = d.comultiply_last(&terms);
                    k += 1;
                }
                applications = applications.max(k);
            }
        }
    }
    Conilpotency::Index(applications.max(1))
}

impl GradedCoalgebra {
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

    /// Dimension of `C^{x,y}`.
    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.dims[x * self.len() + y]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_counital(&self) -> bool {
        self.counital
    }

    /// Counit on the basis of `C^{x,x}`.
    pub fn counit(&self, x: usize) -> &[Scalar] {
        &self.counit[x]
    }

    pub fn comult(&self, x: usize, z: usize, y: usize) -> Option<&Tensor3> {
        self.comult.get(&(x, z, y))
    }

    pub fn comult_components(&self) -> &BTreeMap<(usize, usize, usize), Tensor3> {
        &self.comult
    }

    /// Coefficient of `c_a (x) c_b` in `mu_{x,z,y}(c_l)`.
    pub fn coefficient(&self, x: usize, z: usize, y: usize, a: usize, b: usize, l: usize) -> Scalar {
        self.comult(x, z, y)
            .and_then(|t| t.get(a, b, l).cloned())
            .unwrap_or_else(|| self.field.zero())
    }

    /// The coalgebra of the opposite category: `C_op^{x,y} = C^{y,x}` with
    /// tensor factors exchanged.
    pub fn opposite(&self) -> &GradedCoalgebra {
        self.opposite.get_or_init(|| {
            let n = self.len();
            let dims = (0..n * n).map(|k| self.dim(k % n, k / n)).collect();
            let comult = self
                .comult
                .iter()
                .map(|(&(x, z, y), t)| ((y, z, x), t.swap12()))
                .collect();
            Box::new(GradedCoalgebra {
                field: self.field,
                objects: self.objects.clone(),
                dims,
                counit: self.counit.clone(),
                comult,
                counital: self.counital,
                opposite: OnceLock::new(),
            })
        })
    }

    /// The coalgebra whose left co/contramodules are the `side` ones of this.
    pub fn acting(&self, side: Side) -> Cow<'_, GradedCoalgebra> {
        match side {
            Side::Left => Cow::Borrowed(self),
            Side::Right => Cow::Borrowed(self.opposite()),
        }
    }

    fn restrict(&self, keep: impl Fn(usize, usize) -> bool, counital: bool) -> GradedCoalgebra {
        let n = self.len();
        let dims = (0..n * n)
            .map(|k| if keep(k / n, k % n) { self.dims[k] } else { 0 })
            .collect();
        let comult = self
            .comult
            .iter()
            .filter(|((x, z, y), _)| keep(*x, *z) && keep(*z, *y) && keep(*x, *y))
            .map(|(k, t)| (*k, t.clone()))
            .collect();
        let counit = (0..n)
            .map(|x| if keep(x, x) { self.counit[x].clone() } else { Vec::new() })
            .collect();
        GradedCoalgebra {
            field: self.field,
            objects: self.objects.clone(),
            dims,
            counit,
            comult,
            counital,
            opposite: OnceLock::new(),
        }
    }

    fn comultiply_last(&self, terms: &BTreeMap<Word, Scalar>) -> BTreeMap<Word, Scalar> {
        let n = self.len();
        let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (word, s) in terms {
            let &(x, y, l) = word.last().expect("nonempty word");
            for z in 0..n {
                let Some(t) = self.comult(x, z, y) else { continue };
                for (a, b, ll, c) in t.entries() {
                    if *ll != l {
                        continue;
                    }
                    let mut w = word[..word.len() - 1].to_vec();
                    w.push((x, z, *a));
                    w.push((z, y, *b));
                    let v = out.entry(w).or_insert_with(|| self.field.zero());
                    *v = &*v + &(s * c);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn to_json(&self) -> Value {
        let n = self.len();
        let mut components = Map::new();
        for x in 0..n {
            for y in 0..n {
                if self.dim(x, y) > 0 {
                    components.insert(format!("{}|{}", self.name(x), self.name(y)), json!(self.dim(x, y)));
                }
            }
        }
        let mut comult = Map::new();
        for (&(x, z, y), t) in &self.comult {
            comult.insert(
                format!("{}|{}|{}", self.name(x), self.name(z), self.name(y)),
                t.entries().iter().map(|(a, b, l, s)| json!([a, b, l, s.to_json()])).collect(),
            );
        }
        let mut counit = Map::new();
        if self.counital {
            for x in 0..n {
                counit.insert(self.name(x).to_string(), self.counit[x].iter().map(Scalar::to_json).collect());
            }
        }
        json!({
            "field": self.field,
            "objects": self.objects,
            "components": components,
            "comult": comult,
            "counit": counit,
            "counital": self.counital,
        })
    }
}

/// Coassociativity on every basis element, and counitality when counital.
pub fn validate_coalgebra(g: &GradedCoalgebra) -> Verdict {
    let n = g.len();
    for x in 0..n {
        for y in 0..n {
            for l in 0..g.dim(x, y) {
                let start: BTreeMap<Word, Scalar> = [(vec![(x, y, l)], g.field.one())].into();
                let once = g.comultiply_last(&start);
                let right = g.comultiply_last(&once);
                let mut left: BTreeMap<Word, Scalar> = BTreeMap::new();
                for (word, s) in &once {
                    let head: BTreeMap<Word, Scalar> = [(vec![word[0]], s.clone())].into();
                    for (mut w, c) in g.comultiply_last(&head) {
                        w.push(word[1]);
                        let v = left.entry(w).or_insert_with(|| g.field.zero());
                        *v = &*v + &c;
                    }
                }
                left.retain(|_, v| !v.is_zero());
                if left != right {
                    return Verdict::refuted(basis_witness(g, x, y, l, "coassociativity"));
                }
                if g.counital {
                    for (first, keep) in [(true, 1usize), (false, 0usize)] {
                        let mut acc = vec![g.field.zero(); g.dim(x, y)];
                        for (word, s) in &once {
                            let (p, q, i) = word[1 - keep];
                            if p != q {
                                continue;
                            }
                            let e = &g.counit[p][i];
                            let (_, _, j) = word[keep];
                            acc[j] = &acc[j] + &(s * e);
                        }
                        let ok = acc.iter().enumerate().all(|(j, v)| if j == l { v.is_one() } else { v.is_zero() });
                        if !ok {
                            let side = if first { "left counitality" } else { "right counitality" };
                            return Verdict::refuted(basis_witness(g, x, y, l, side));
                        }
                    }
                }
            }
        }
    }
    Verdict::certified()
}

fn basis_witness(g: &GradedCoalgebra, x: usize, y: usize, l: usize, failure: &str) -> Witness {
    Witness::Composable {
        objects: vec![g.name(x).to_string(), g.name(y).to_string()],
        basis: vec![l],
        failure: failure.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::lincat::{Generator, LinCatBuilder, Window};

    fn word(x: usize, z: usize, y: usize, a: usize, b: usize) -> Word {
        vec![(x, z, a), (z, y, b)]
    }

    #[test]
    fn one_object() {
        let k = LinCatBuilder::new(Field::Rationals, &["*"]).build().unwrap();
        let g = build_coalgebra(&k);
        assert_eq!(g.total_dim(), 1);
        assert_eq!(g.coefficient(0, 0, 0, 0, 0, 0), Field::Rationals.one());
        assert_eq!(g.counit(0), &[Field::Rationals.one()]);
        assert!(validate_coalgebra(&g).is_certified());
        assert_eq!(short_subcoalgebra(&g, &k), g);
        assert_eq!(long_quotient(&g, &k).total_dim(), 0);
        assert_eq!(conilpotency_index(&long_quotient(&g, &k)), Conilpotency::Index(1));
    }

    #[test]
    fn chain_a2_comultiplication() {
        let f = Field::f2();
        let a2 = gallery::chain(f, 2);
        let g = build_coalgebra(&a2);
        assert_eq!(g.total_dim(), 3);
        let start: BTreeMap<Word, Scalar> = [(vec![(0, 1, 0)], f.one())].into();
        let mu = g.comultiply_last(&start);
        let expect: BTreeMap<Word, Scalar> =
            [(word(0, 0, 1, 0, 0), f.one()), (word(0, 1, 1, 0, 0), f.one())].into();
        assert_eq!(mu, expect);
    }

    #[test]
    fn zneg_window_dimension() {
        let g = build_coalgebra(&gallery::zneg_window(Field::f2(), 4));
        assert_eq!(g.total_dim(), 7);
    }

    #[test]
    fn short_parts() {
        let f = Field::f2();
        let a3 = gallery::chain(f, 3);
        let s = short_subcoalgebra(&build_coalgebra(&a3), &a3);
        assert_eq!(s.total_dim(), 3);
        assert_eq!(s, build_coalgebra(&short_subcategory(&a3)));
        let m = gallery::matrix_pair(f);
        let s = short_subcoalgebra(&build_coalgebra(&m), &m);
        assert_eq!(s.total_dim(), 4);
        assert!(validate_coalgebra(&s).is_certified());
    }

    #[test]
    fn long_parts_and_conilpotency() {
        let f = Field::f2();
        let a3 = gallery::chain(f, 3);
        let d = long_quotient(&build_coalgebra(&a3), &a3);
        assert_eq!(d.total_dim(), 3);
        assert!(!d.is_counital());
        assert_eq!(conilpotency_index(&d), Conilpotency::Index(2));
        let z = gallery::zchain_window(f, 0, 3);
        assert_eq!(long_quotient(&build_coalgebra(&z), &z).total_dim(), 6);

        let k = LinCatBuilder::new(f, &["*"]).build().unwrap();
        let mut c = build_coalgebra(&k);
        c.counital = false;
        assert_eq!(conilpotency_index(&c), Conilpotency::Unbounded);
    }

    #[test]
    fn gallery_coalgebras_are_valid() {
        let f = Field::f2();
        let mut cats = vec![gallery::matrix_pair(f), gallery::discrete(f, 3)];
        cats.extend((1..=5).map(|n| gallery::chain(f, n)));
        cats.extend((1..=12).map(|n| gallery::zneg_window(f, n)));
        cats.extend((1..=12).map(|n| gallery::zchain_window(f, 0, n - 1)));
        for cat in &cats {
            let g = build_coalgebra(cat);
            assert!(validate_coalgebra(&g).is_certified());
            assert!(validate_coalgebra(g.opposite()).is_certified());
            assert!(validate_coalgebra(&long_quotient(&g, cat)).is_certified());
            assert_eq!(short_subcoalgebra(&g, cat), build_coalgebra(&short_subcategory(cat)));
            let longest = preorder(cat).longest_chain();
            assert_eq!(conilpotency_index(&long_quotient(&g, cat)), Conilpotency::Index(longest.max(1)));
        }
    }

    #[test]
    fn broken_coalgebras_are_refuted() {
        let f = Field::Rationals;
        let a3 = gallery::chain(f, 3);
        let mut g = build_coalgebra(&a3);
        g.counit[1] = vec![f.int(2)];
        assert!(validate_coalgebra(&g).is_refuted());
        let mut g = build_coalgebra(&gallery::chain(f, 4));
        g.comult.remove(&(0, 1, 2));
        assert!(validate_coalgebra(&g).is_refuted());
    }

    #[test]
    fn windows_need_declared_intervals() {
        let f = Field::f2();
        let w = Window::new(Generator::ZChain, f, -2, 2).unwrap();
        assert!(coalgebra_of(&Scope::Window(w.clone())).is_ok());
        let bare = Window::undeclared("bare", w.cat().clone(), -2, 2).unwrap();
        assert!(matches!(coalgebra_of(&Scope::Window(bare)), Err(Error::IntervalNotFinite(_))));
    }
}
