//! Built-in categories and modules: chains `A_n`, discrete categories, the
//! integer chain, and the category on the negative integers whose only
//! non-identity morphisms point at `-1`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lift::{DeclaredModule, Tail};
use crate::lincat::{format_object, parse_window, Generator, LinCat, Module, Scope, Side, Window};
use crate::linalg::{Matrix, Tensor3};
use crate::scalar::Field;

/// Category of a finite partial order: `Hom(i,j)` is one-dimensional when
/// `i <= j` and composition multiplies basis vectors.
pub fn poset(field: Field, names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> LinCat {
    let n = names.len();
    let mut hom = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            if le(x, y) {
                hom[x * n + y] = 1;
            }
        }
    }
    let mut compose = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if le(x, y) && le(y, z) {
                    compose.insert((x, y, z), Tensor3::new((1, 1, 1), vec![(0, 0, 0, field.one())]).unwrap());
                }
            }
        }
    }
    let identity = (0..n).map(|_| vec![field.one()]).collect();
    LinCat::from_parts(field, names, hom, compose, identity).expect("poset presentation")
}

/// The chain `A_n` on objects `0 < 1 < ... < n-1`.
pub fn chain(field: Field, n: usize) -> LinCat {
    poset(field, (0..n).map(|i| i.to_string()).collect(), |a, b| a <= b)
}

/// The discrete category on `n` objects: only identities.
pub fn discrete(field: Field, n: usize) -> LinCat {
    poset(field, (0..n).map(|i| i.to_string()).collect(), |a, b| a == b)
}

/// Integer chain restricted to `lo..=hi`.
pub fn zchain_window(field: Field, lo: i64, hi: i64) -> LinCat {
    let names = (lo..=hi).map(format_object).collect();
    poset(field, names, |a, b| a <= b)
}

/// Negative-integer category restricted to `lo..=hi` (with `hi <= -1`).
pub fn zneg_range(field: Field, lo: i64, hi: i64) -> LinCat {
    let names = (lo..=hi).map(format_object).collect();
    let top = (hi == -1).then(|| (hi - lo) as usize);
    poset(field, names, move |a, b| a == b || Some(b) == top)
}

/// Negative-integer category on `-n..=-1`.
pub fn zneg_window(field: Field, n: usize) -> LinCat {
    zneg_range(field, -(n as i64), -1)
}

/// Two isomorphic objects with one-dimensional hom spaces in all four
/// directions; its endomorphism algebra is the 2x2 matrix algebra.
pub fn matrix_pair(field: Field) -> LinCat {
    let one = field.one();
    let t = |e: Vec<(usize, usize, usize)>| Tensor3::new((1, 1, 1), e.into_iter().map(|(a, b, c)| (a, b, c, one.clone())).collect()).unwrap();
    let mut compose = BTreeMap::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                compose.insert((x, y, z), t(vec![(0, 0, 0)]));
            }
        }
    }
    LinCat::from_parts(field, vec!["a".into(), "b".into()], vec![1; 4], compose, vec![vec![one.clone()], vec![one]])
        .expect("matrix pair presentation")
}

/// Deliberately broken presentations, each failing a different axiom.
pub fn corrupted() -> Vec<(&'static str, LinCat)> {
    let f = Field::Rationals;
    let a4 = chain(f, 4);
    let mut compose = a4.compose_tensors().clone();
    compose.remove(&(0, 1, 2));
    let n = a4.len();
    let hom: Vec<usize> = (0..n * n).map(|k| a4.hom_dim(k / n, k % n)).collect();
    let ids: Vec<_> = (0..n).map(|x| a4.identity(x).to_vec()).collect();
    let broken_assoc = LinCat::from_parts(f, a4.objects().to_vec(), hom.clone(), compose, ids.clone()).unwrap();

    let a3 = chain(f, 3);
    let m = a3.len();
    let hom3: Vec<usize> = (0..m * m).map(|k| a3.hom_dim(k / m, k % m)).collect();
    let mut ids3: Vec<_> = (0..m).map(|x| a3.identity(x).to_vec()).collect();
    ids3[1] = vec![f.int(2)];
    let broken_unit =
        LinCat::from_parts(f, a3.objects().to_vec(), hom3.clone(), a3.compose_tensors().clone(), ids3.clone()).unwrap();

    ids3[1] = vec![f.zero()];
    let zero_object = LinCat::from_parts(f, a3.objects().to_vec(), hom3, a3.compose_tensors().clone(), ids3).unwrap();

    vec![
        ("A_4 with the composite 0->1->2 set to zero", broken_assoc),
        ("A_3 with the identity of 1 doubled", broken_unit),
        ("A_3 with a zero object", zero_object),
    ]
}

/// A left module on a chain-shaped category (an `A_n` or an integer-chain
/// window) from the maps between consecutive objects.
pub fn chain_module(cat: &LinCat, dims: &[usize], steps: &[Matrix]) -> Module {
    let n = cat.len();
    assert_eq!(dims.len(), n, "one dimension per object");
    assert_eq!(steps.len() + 1, n.max(1), "one map per consecutive pair");
    let field = cat.field();
    let mut action = BTreeMap::new();
    for x in 0..n {
        let mut acc = Matrix::identity(field, dims[x]);
        action.insert((x, x), vec![acc.clone()]);
        for y in x + 1..n {
            acc = &steps[y - 1] * &acc;
            action.insert((x, y), vec![acc.clone()]);
        }
    }
    Module::new(cat, Side::Left, dims.to_vec(), action).expect("chain module data")
}

/// A left module on a negative-integer window `-n..=-1` from the maps
/// `M(-m) -> M(-1)`, listed for `m = n, n-1, ..., 2`.
pub fn zneg_module(cat: &LinCat, dims: &[usize], links: &[Matrix]) -> Module {
    let n = cat.len();
    assert_eq!(links.len() + 1, n, "one map into -1 per other object");
    let field = cat.field();
    let mut action = BTreeMap::new();
    for x in 0..n {
        action.insert((x, x), vec![Matrix::identity(field, dims[x])]);
    }
    for (x, m) in links.iter().enumerate() {
        action.insert((x, n - 1), vec![m.clone()]);
    }
    Module::new(cat, Side::Left, dims.to_vec(), action).expect("negative-integer module data")
}

/// A right module on a negative-integer window from the maps
/// `N(-1) -> N(-m)`, listed for `m = n, ..., 2`.
pub fn zneg_right_module(cat: &LinCat, dims: &[usize], links: &[Matrix]) -> Module {
    let n = cat.len();
    assert_eq!(links.len() + 1, n, "one map out of -1 per other object");
    let field = cat.field();
    let mut action = BTreeMap::new();
    for x in 0..n {
        action.insert((x, x), vec![Matrix::identity(field, dims[x])]);
    }
    for (x, m) in links.iter().enumerate() {
        action.insert((x, n - 1), vec![m.clone()]);
    }
    Module::new(cat, Side::Right, dims.to_vec(), action).expect("negative-integer module data")
}

/// The integer-chain module with every component one-dimensional and every
/// map an isomorphism, on the window `lo..=hi`. With `declared` the same
/// behaviour is declared on both tails; without it nothing is said about
/// the outside.
pub fn chain_iso_module(field: Field, lo: i64, hi: i64, declared: bool) -> Result<DeclaredModule> {
    let w = Window::new(Generator::ZChain, field, lo, hi)?;
    let n = w.cat().len();
    let one = Matrix::identity(field, 1);
    let m = chain_module(w.cat(), &vec![1; n], &vec![one.clone(); n - 1]);
    let t = declared.then(|| Tail {
        dim: 1,
        step: Some(one.clone()),
        link: one,
    });
    DeclaredModule::new(&w, m, t.clone(), t)
}

/// The integer-chain module that is one-dimensional with isomorphisms on
/// `-l..=l` and zero elsewhere, on the window `-half..=half` with zero
/// tails.
pub fn bump_module(field: Field, l: i64, half: i64) -> Result<DeclaredModule> {
    let w = Window::new(Generator::ZChain, field, -half, half)?;
    let dims: Vec<usize> = (-half..=half).map(|v| usize::from(v.abs() <= l)).collect();
    let steps: Vec<Matrix> = (0..dims.len() - 1)
        .map(|i| {
            if dims[i] == 1 && dims[i + 1] == 1 {
                Matrix::identity(field, 1)
            } else {
                Matrix::zeros(field, dims[i + 1], dims[i])
            }
        })
        .collect();
    let m = chain_module(w.cat(), &dims, &steps);
    let n = dims.len();
    DeclaredModule::new(
        &w,
        m,
        Some(Tail::zero(field, dims[0], true, true)),
        Some(Tail::zero(field, dims[n - 1], true, false)),
    )
}

/// The negative-integer module with one-dimensional components and every
/// map to `-1` the identity, on `lo..=-1`, with the same tail declared.
pub fn zneg_constant_module(field: Field, lo: i64) -> Result<DeclaredModule> {
    let w = Window::new(Generator::ZNeg, field, lo, -1)?;
    let n = w.cat().len();
    let one = Matrix::identity(field, 1);
    let m = zneg_module(w.cat(), &vec![1; n], &vec![one.clone(); n - 1]);
    let t = Tail {
        dim: 1,
        step: None,
        link: one,
    };
    DeclaredModule::new(&w, m, Some(t), None)
}

/// The negative-integer right module with one-dimensional components whose
/// only nonzero map out of `-1` goes to `-2`, on `lo..=-1`, with a zero
/// tail map declared.
pub fn zneg_single_right_module(field: Field, lo: i64) -> Result<DeclaredModule> {
    let w = Window::new(Generator::ZNeg, field, lo, -1)?;
    let n = w.cat().len();
    let links: Vec<Matrix> = (0..n - 1)
        .map(|i| {
            if i == n - 2 {
                Matrix::identity(field, 1)
            } else {
                Matrix::zeros(field, 1, 1)
            }
        })
        .collect();
    let m = zneg_right_module(w.cat(), &vec![1; n], &links);
    let t = Tail {
        dim: 1,
        step: None,
        link: Matrix::zeros(field, 1, 1),
    };
    DeclaredModule::new(&w, m, Some(t), None)
}

/// A built-in entry.
#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub parameter: &'static str,
}

pub fn entries() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            name: "chainA",
            description: "chain A_n: objects 0..n-1, one-dimensional Hom(i,j) for i <= j",
            parameter: "n, e.g. 3",
        },
        GalleryEntry {
            name: "discrete",
            description: "discrete category: n objects with only identity morphisms",
            parameter: "n, e.g. 3",
        },
        GalleryEntry {
            name: "zchain",
            description: "integer chain: all integers, one-dimensional Hom(m,n) for m <= n, composition maps are isomorphisms",
            parameter: "window, e.g. [-2..2]",
        },
        GalleryEntry {
            name: "zneg",
            description: "negative integers: besides identities only Hom(-n,-1) is nonzero, one-dimensional",
            parameter: "window ending at -1, e.g. -4..-1",
        },
    ]
}

/// Instantiate a gallery entry: `chainA`/`discrete` take a size, `zchain`
/// and `zneg` take a window.
pub fn instantiate(name: &str, parameter: &str, field: Field) -> Result<Scope> {
    let count = || -> Result<usize> {
        parameter
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .parse()
            .map_err(|_| Error::BadWindow(parameter.to_string()))
    };
    match name {
        "chainA" => Ok(Scope::Finite(chain(field, count()?))),
        "discrete" => Ok(Scope::Finite(discrete(field, count()?))),
        "zchain" => {
            let (lo, hi) = parse_window(parameter)?;
            Ok(Scope::Window(Window::new(Generator::ZChain, field, lo, hi)?))
        }
        "zneg" => {
            let (lo, hi) = parse_window(parameter)?;
            Ok(Scope::Window(Window::new(Generator::ZNeg, field, lo, hi)?))
        }
        other => Err(Error::UnknownGallery(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincat::validate_category;

    #[test]
    fn instantiate_examples() {
        let f = Field::f2();
        let Scope::Window(w) = instantiate("zchain", "[-2..2]", f).unwrap() else {
            panic!("window expected")
        };
        let c = w.cat();
        assert_eq!(c.len(), 5);
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(c.hom_dim(x, y), usize::from(x <= y));
            }
        }
        let Scope::Window(w) = instantiate("zneg", "[-4..-1]", f).unwrap() else {
            panic!("window expected")
        };
        let c = w.cat();
        assert_eq!(c.len(), 4);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(c.hom_dim(x, y), usize::from(x == y || y == 3));
            }
        }
        assert_eq!(instantiate("chainA", "3", f).unwrap().cat(), &chain(f, 3));
        assert!(matches!(instantiate("nope", "3", f), Err(Error::UnknownGallery(_))));
        assert!(matches!(instantiate("zchain", "2..x", f), Err(Error::BadWindow(_))));
    }

    #[test]
    fn every_gallery_presentation_is_a_category() {
        let f = Field::f2();
        let mut cats = vec![matrix_pair(f), discrete(f, 3)];
        cats.extend((1..=5).map(|n| chain(f, n)));
        cats.push(zchain_window(f, -6, 5));
        cats.push(zneg_window(f, 12));
        for c in &cats {
            assert!(validate_category(c).is_certified());
        }
    }
}
