use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::verdict::{Verdict, Witness};

use super::{LinCat, Module};

fn basis(cat: &LinCat, d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![cat.field().zero(); d];
    v[i] = cat.field().one();
    v
}

/// Check non-vanishing identities, the unit laws and associativity on every
/// composable basis triple.
pub fn validate_category(cat: &LinCat) -> Verdict {
    let n = cat.len();
    for x in 0..n {
        if cat.identity(x).iter().all(Scalar::is_zero) {
            return Verdict::refuted(Witness::Object {
                object: cat.object(x).to_string(),
                reason: "zero object: the identity morphism vanishes".into(),
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for j in 0..cat.hom_dim(x, y) {
                let f = basis(cat, cat.hom_dim(x, y), j);
                let left = cat.compose_vec(x, y, y, cat.identity(y), &f);
                let right = cat.compose_vec(x, x, y, &f, cat.identity(x));
                for (side, got) in [("identity after", left), ("identity before", right)] {
                    if got != f {
                        return Verdict::refuted(Witness::Composable {
                            objects: vec![cat.object(x).into(), cat.object(y).into()],
                            basis: vec![j],
                            failure: format!("unit law fails with the {side} the morphism"),
                        });
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let dxy = cat.hom_dim(x, y);
            if dxy == 0 {
                continue;
            }
            for z in 0..n {
                let dyz = cat.hom_dim(y, z);
                if dyz == 0 {
                    continue;
                }
                for w in 0..n {
                    let dzw = cat.hom_dim(z, w);
                    if dzw == 0 || cat.hom_dim(x, w) == 0 {
                        continue;
                    }
                    for h in 0..dzw {
                        let hv = basis(cat, dzw, h);
                        for g in 0..dyz {
                            let gv = basis(cat, dyz, g);
                            let hg = cat.compose_vec(y, z, w, &hv, &gv);
                            for f in 0..dxy {
                                let fv = basis(cat, dxy, f);
                                let lhs = cat.compose_vec(x, y, w, &hg, &fv);
                                let gf = cat.compose_vec(x, y, z, &gv, &fv);
                                let rhs = cat.compose_vec(x, z, w, &hv, &gf);
                                if lhs != rhs {
                                    return Verdict::refuted(Witness::Composable {
                                        objects: [x, y, z, w].iter().map(|&o| cat.object(o).to_string()).collect(),
                                        basis: vec![h, g, f],
                                        failure: "associativity fails on the composable triple".into(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Verdict::certified()
}

fn first_bad_column(a: &Matrix, b: &Matrix) -> usize {
    (0..a.cols()).find(|&c| a.col(c) != b.col(c)).unwrap_or(0)
}

/// Check the unit and associativity laws of a module on every basis pair.
pub fn validate_module(cat: &LinCat, m: &Module) -> Result<Verdict> {
    let n = cat.len();
    if m.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "module has {} components over a category with {n} objects",
            m.len()
        )));
    }
    let act = cat.acting(m.side());
    for a in 0..n {
        for b in 0..n {
            let mats = m.acting_action(a, b);
            if mats.len() != act.hom_dim(a, b) {
                return Err(Error::DimensionMismatch(format!(
                    "{} action matrices for a hom space of dimension {}",
                    mats.len(),
                    act.hom_dim(a, b)
                )));
            }
            if let Some(bad) = mats.iter().find(|x| x.shape() != (m.dim(b), m.dim(a))) {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix of shape {:?}, expected {:?}",
                    bad.shape(),
                    (m.dim(b), m.dim(a))
                )));
            }
        }
    }
    for a in 0..n {
        let id = m.acting_apply(a, a, act.identity(a));
        if !id.is_identity() {
            return Ok(Verdict::refuted(Witness::Action {
                source: cat.object(a).into(),
                target: cat.object(a).into(),
                basis: vec![],
                vector: first_bad_column(&id, &Matrix::identity(cat.field(), m.dim(a))),
                failure: "the identity does not act as the identity".into(),
            }));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if act.hom_dim(a, b) == 0 || m.dim(a) == 0 {
                continue;
            }
            for c in 0..n {
                if act.hom_dim(b, c) == 0 {
                    continue;
                }
                for (i, gi) in m.acting_action(b, c).iter().enumerate() {
                    for (j, fj) in m.acting_action(a, b).iter().enumerate() {
                        let lhs = gi * fj;
                        let rhs = m.acting_apply(a, c, &act.compose_basis(a, b, c, i, j));
                        if lhs != rhs {
                            return Ok(Verdict::refuted(Witness::Action {
                                source: cat.object(a).into(),
                                target: cat.object(c).into(),
                                basis: vec![i, j],
                                vector: first_bad_column(&lhs, &rhs),
                                failure: format!(
                                    "action of the composite through {} differs from the composite of actions",
                                    cat.object(b)
                                ),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::certified())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::gallery;
    use crate::lincat::{LinCatBuilder, Side};
    use crate::scalar::Field;

    #[test]
    fn one_object_field() {
        let k = LinCatBuilder::new(Field::Rationals, &["*"]).build().unwrap();
        assert!(validate_category(&k).is_certified());
    }

    #[test]
    fn chain_categories_by_brute_force() {
        for n in 1..=5 {
            assert!(validate_category(&gallery::chain(Field::f2(), n)).is_certified());
        }
    }

    #[test]
    fn corruptions_are_refuted() {
        for (name, cat) in gallery::corrupted() {
            let v = validate_category(&cat);
            assert!(v.is_refuted(), "{name} should be refuted");
        }
    }

    #[test]
    fn module_examples() {
        let f = Field::f2();
        let a3 = gallery::chain(f, 3);
        assert!(validate_module(&a3, &Module::zero(&a3, Side::Left)).unwrap().is_certified());
        let a2 = gallery::chain(f, 2);
        let mut action = BTreeMap::new();
        action.insert((0, 1), vec![Matrix::identity(f, 1)]);
        action.insert((0, 0), vec![Matrix::zeros(f, 1, 1)]);
        action.insert((1, 1), vec![Matrix::identity(f, 1)]);
        let broken = Module::new(&a2, Side::Left, vec![1, 1], action).unwrap();
        let v = validate_module(&a2, &broken).unwrap();
        assert!(v.is_refuted());
    }
}
