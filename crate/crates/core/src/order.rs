//! The preorder on objects generated by nonzero morphisms.
//!
//! `x <= y` when a chain of composable nonzero morphisms leads from `x` to
//! `y`; `x ~ y` when both `x <= y` and `y <= x`; `x < y` when `x <= y` but not
//! `y <= x`. A nonzero morphism is short between equivalent objects and long
//! otherwise. The distance `d(x,y)` is the length of the longest strict chain
//! `x = z_0 < z_1 < ... < z_n = y`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lincat::{format_object, LinCat, Scope, SetDecl};
use crate::scalar::Scalar;
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreorderAnalysis {
    objects: Vec<String>,
    reach: Vec<bool>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    distance: Vec<Option<usize>>,
    distance_is_lower_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MorphismClass {
    Short,
    Long,
    Zero,
}

/// Preorder of a presented category.
pub fn preorder(cat: &LinCat) -> PreorderAnalysis {
    let n = cat.len();
    let mut reach = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            reach[x * n + y] = x == y || cat.hom_dim(x, y) > 0;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if !reach[i * n + k] {
                continue;
            }
            for j in 0..n {
                if reach[k * n + j] {
                    reach[i * n + j] = true;
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (x..n).filter(|&y| reach[x * n + y] && reach[y * n + x]).collect();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(members);
    }
    let c = classes.len();
    let lt = |a: usize, b: usize| {
        let (x, y) = (classes[a][0], classes[b][0]);
        a != b && reach[x * n + y]
    };
    let below: Vec<usize> = (0..c).map(|b| (0..c).filter(|&a| lt(a, b)).count()).collect();
    let mut topo: Vec<usize> = (0..c).collect();
    topo.sort_by_key(|&k| (below[k], k));
    let mut cd = vec![None; c * c];
    for &a in &topo {
        cd[a * c + a] = Some(0);
        for &b in &topo {
            if !lt(a, b) {
                continue;
            }
            let best = topo
                .iter()
                .filter(|&&e| lt(a, e) && lt(e, b))
                .filter_map(|&e| cd[a * c + e])
                .max()
                .map_or(1, |d| d + 1);
            cd[a * c + b] = Some(best);
        }
    }
    let mut distance = vec![None; n * n];
    for x in 0..n {
        for y in 0..n {
            distance[x * n + y] = cd[class_of[x] * c + class_of[y]];
        }
    }
    PreorderAnalysis {
        objects: cat.objects().to_vec(),
        reach,
        class_of,
        classes,
        distance,
        distance_is_lower_bound: false,
    }
}

/// Preorder of a scope. On windows whose intervals are not declared to lie
/// inside the window, distances are only lower bounds.
pub fn compute_preorder(scope: &Scope) -> PreorderAnalysis {
    let mut p = preorder(scope.cat());
    p.distance_is_lower_bound = !check_interval_finiteness(scope).is_certified();
    p
}

impl PreorderAnalysis {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.reach[x * self.len() + y]
    }

    pub fn sim(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.le(x, y) && !self.le(y, x)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// `d(x,y)` when `x <= y`.
    pub fn distance(&self, x: usize, y: usize) -> Option<usize> {
        self.distance[x * self.len() + y]
    }

    pub fn distance_is_lower_bound(&self) -> bool {
        self.distance_is_lower_bound
    }

    /// Number of steps in the longest strict chain.
    pub fn longest_chain(&self) -> usize {
        self.distance.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Objects strictly below `y`, in object order.
    pub fn strict_down_set(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lt(x, y)).collect()
    }

    /// The `~`-saturation of a set of objects.
    pub fn saturate(&self, xs: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| xs.iter().any(|&x| self.sim(x, z)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let n = self.len();
        let name = |i: usize| self.objects[i].clone();
        let mut relations = Vec::new();
        let mut distances = serde_json::Map::new();
        for x in 0..n {
            for y in 0..n {
                if self.le(x, y) {
                    relations.push(json!([name(x), name(y)]));
                    distances.insert(format!("{}|{}", name(x), name(y)), json!(self.distance(x, y)));
                }
            }
        }
        let classes: Vec<Vec<String>> = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&i| name(i)).collect())
            .collect();
        json!({
            "relations": relations,
            "classes": classes,
            "distance": distances,
            "distance_is_lower_bound": self.distance_is_lower_bound,
        })
    }
}

/// Classify a morphism given by its coordinates in `Hom(x,y)`.
pub fn classify_morphism(
    cat: &LinCat,
    pre: &PreorderAnalysis,
    x: &str,
    y: &str,
    coords: &[Scalar],
) -> Result<MorphismClass> {
    let (xi, yi) = (cat.index_of(x)?, cat.index_of(y)?);
    if coords.len() != cat.hom_dim(xi, yi) {
        return Err(Error::UnknownHomSpace(format!(
            "{} coordinates for Hom({x}, {y}) of dimension {}",
            coords.len(),
            cat.hom_dim(xi, yi)
        )));
    }
    Ok(if coords.iter().all(Scalar::is_zero) {
        MorphismClass::Zero
    } else if pre.sim(xi, yi) {
        MorphismClass::Short
    } else {
        MorphismClass::Long
    })
}

/// Whether every interval `{z : x <= z <= y}` is finite.
pub fn check_interval_finiteness(scope: &Scope) -> Verdict {
    match scope {
        Scope::Finite(_) => Verdict::certified_with(Witness::note("finite object set")),
        Scope::Window(w) => {
            let n = w.cat().len();
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (w.value(i), w.value(j));
                    match w.interval(x, y) {
                        None => {
                            return Verdict::inconclusive(
                                w.describe(),
                                "the generator declares no interval bounds",
                            )
                        }
                        Some(iv) => {
                            if let Some(z) = iv.iter().find(|&&z| w.position(z).is_none()) {
                                return Verdict::inconclusive(
                                    w.describe(),
                                    format!(
                                        "interval between {} and {} leaves the window at {}",
                                        format_object(x),
                                        format_object(y),
                                        format_object(*z)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
            Verdict::certified_with(Witness::note(format!(
                "declared intervals between objects of {} stay inside it",
                w.describe()
            )))
        }
    }
}

/// Upper finiteness (every up-set finite) and lower finiteness (every
/// down-set finite).
pub fn check_upper_lower_finite(scope: &Scope) -> (Verdict, Verdict) {
    match scope {
        Scope::Finite(_) => (Verdict::certified(), Verdict::certified()),
        Scope::Window(w) => {
            let mut objs: Vec<i64> = (w.lo()..=w.hi()).collect();
            objs.extend(w.tail_representative());
            let decide = |decl: &dyn Fn(i64) -> SetDecl| -> Verdict {
                let mut sets = BTreeMap::new();
                for &x in &objs {
                    match decl(x) {
                        SetDecl::Infinite { witness } => {
                            return Verdict::refuted(Witness::Object {
                                object: format_object(x),
                                reason: witness,
                            })
                        }
                        SetDecl::Unknown => {
                            return Verdict::inconclusive(w.describe(), "no declared up-set or down-set bounds")
                        }
                        SetDecl::Finite(s) => {
                            sets.insert(format_object(x), s.into_iter().map(format_object).collect());
                        }
                    }
                }
                Verdict::certified_with(Witness::Supports { sets })
            };
            (decide(&|x| w.up_set(x)), decide(&|y| w.down_set(y)))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::VecDeque;

    use super::*;
    use crate::gallery;
    use crate::lincat::{Generator, LinCatBuilder, Window};
    use crate::scalar::Field;

    fn bfs_reach(cat: &LinCat) -> Vec<bool> {
        let n = cat.len();
        let mut out = vec![false; n * n];
        for s in 0..n {
            let mut q = VecDeque::from([s]);
            out[s * n + s] = true;
            while let Some(u) = q.pop_front() {
                for v in 0..n {
                    if cat.hom_dim(u, v) > 0 && !out[s * n + v] {
                        out[s * n + v] = true;
                        q.push_back(v);
                    }
                }
            }
        }
        out
    }

    fn gallery_windows() -> Vec<LinCat> {
        let f = Field::f2();
        let mut v = vec![gallery::matrix_pair(f), gallery::discrete(f, 4)];
        v.extend((1..=5).map(|n| gallery::chain(f, n)));
        v.extend((1..=12).map(|n| gallery::zneg_window(f, n)));
        v.extend((0..12).map(|k| gallery::zchain_window(f, -k / 2, k - k / 2)));
        v
    }

    #[test]
    fn chain_a3() {
        let p = preorder(&gallery::chain(Field::f2(), 3));
        assert!(p.le(0, 1) && p.le(1, 2) && p.le(0, 2));
        assert!(!p.le(1, 0) && !p.le(2, 1) && !p.le(2, 0));
        assert_eq!(p.classes().len(), 3);
    }

    #[test]
    fn zchain_distance() {
        let w = gallery::zchain_window(Field::f2(), -3, 3);
        let p = preorder(&w);
        assert_eq!(p.distance(w.index_of("-2").unwrap(), w.index_of("+1").unwrap()), Some(3));
    }

    #[test]
    fn one_object() {
        let k = LinCatBuilder::new(Field::Rationals, &["*"]).build().unwrap();
        let p = preorder(&k);
        assert!(p.sim(0, 0));
        assert_eq!(p.distance(0, 0), Some(0));
    }

    #[test]
    fn morphism_classes() {
        let f = Field::f2();
        let a2 = gallery::chain(f, 2);
        let p = preorder(&a2);
        assert_eq!(classify_morphism(&a2, &p, "0", "1", &[f.zero()]).unwrap(), MorphismClass::Zero);
        assert_eq!(classify_morphism(&a2, &p, "0", "1", &[f.one()]).unwrap(), MorphismClass::Long);
        assert_eq!(classify_morphism(&a2, &p, "1", "1", &[f.one()]).unwrap(), MorphismClass::Short);
        assert!(matches!(
            classify_morphism(&a2, &p, "1", "0", &[f.one()]),
            Err(Error::UnknownHomSpace(_))
        ));
    }

    #[test]
    fn finiteness_declarations() {
        let f = Field::f2();
        assert!(check_interval_finiteness(&Scope::Finite(gallery::chain(f, 3))).is_certified());
        let z = Scope::Window(Window::new(Generator::ZChain, f, -3, 3).unwrap());
        assert!(check_interval_finiteness(&z).is_certified());
        let undeclared = Scope::Window(Window::undeclared("bare", gallery::zchain_window(f, 0, 3), 0, 3).unwrap());
        assert!(check_interval_finiteness(&undeclared).is_inconclusive());
        assert!(compute_preorder(&undeclared).distance_is_lower_bound());

        let (up, down) = check_upper_lower_finite(&Scope::Finite(gallery::chain(f, 3)));
        assert!(up.is_certified() && down.is_certified());
        let zneg = Scope::Window(Window::new(Generator::ZNeg, f, -4, -1).unwrap());
        let (up, down) = check_upper_lower_finite(&zneg);
        assert!(up.is_certified());
        assert_eq!(
            down.witness(),
            Some(&Witness::Object {
                object: "-1".into(),
                reason: "every negative integer maps to -1".into()
            })
        );
        let (up, down) = check_upper_lower_finite(&z);
        assert!(up.is_refuted() && down.is_refuted());
    }

    #[test]
    fn reach_matches_breadth_first_search() {
        for cat in gallery_windows() {
            let p = preorder(&cat);
            assert_eq!(p.reach, bfs_reach(&cat));
        }
    }

    #[test]
    fn distance_laws() {
        for cat in gallery_windows() {
            let p = preorder(&cat);
            let n = cat.len();
            for x in 0..n {
                for y in 0..n {
                    if let Some(d) = p.distance(x, y) {
                        assert_eq!(d >= 1, p.lt(x, y));
                        assert_eq!(d == 0, p.sim(x, y));
                    }
                    for z in 0..n {
                        if p.le(x, y) && p.le(y, z) {
                            let (a, b, c) = (p.distance(x, y).unwrap(), p.distance(y, z).unwrap(), p.distance(x, z).unwrap());
                            assert!(c >= a + b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn long_morphisms_form_an_ideal() {
        for cat in gallery_windows() {
            let p = preorder(&cat);
            let n = cat.len();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for i in 0..cat.hom_dim(y, z) {
                            for j in 0..cat.hom_dim(x, y) {
                                let comp = cat.compose_basis(x, y, z, i, j);
                                let class = classify_morphism(&cat, &p, cat.object(x), cat.object(z), &comp).unwrap();
                                if p.lt(x, y) || p.lt(y, z) {
                                    assert_ne!(class, MorphismClass::Short);
                                }
                                if p.sim(x, y) && p.sim(y, z) {
                                    assert_ne!(class, MorphismClass::Long);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
