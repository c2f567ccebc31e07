//! Oracles shared by the integration tests. None of them calls the
//! library's own support or bigness decisions.

#![allow(dead_code)]

use locfin::lift::{DeclaredModule, Tail, TailConstant};
use locfin::lincat::{Generator, Window};
use locfin::{gallery, Matrix, Module, Subspace};
use rand::Rng;

/// Which end of an action the support is taken at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ends {
    /// Per object, the objects acting on it.
    Sources,
    /// Per object, the objects it acts on.
    Targets,
}

fn support_size(m: &Module, x: usize, ends: Ends) -> usize {
    (0..m.len())
        .filter(|&y| match ends {
            Ends::Sources => m.acts_nonzero(y, x),
            Ends::Targets => m.acts_nonzero(x, y),
        })
        .count()
}

/// Positions whose support sizes are compared: the window and the tail
/// objects next to it.
fn probes(d: &DeclaredModule, depth: usize) -> Vec<usize> {
    let len = d.scope().cat().len();
    let start = if d.lower().is_some() { depth } else { 0 };
    let mut out: Vec<usize> = (start..start + len).collect();
    if d.lower().is_some() {
        out.push(start - 1);
    }
    if d.upper().is_some() {
        out.push(start + len);
    }
    out
}

/// Depths at which tail behaviour has settled, far enough apart to see
/// growth.
fn depths(d: &DeclaredModule) -> (usize, usize) {
    let t = d.lower().map_or(0, |t| t.dim).max(d.upper().map_or(0, |t| t.dim));
    (t + 3, t + 6)
}

/// Support sizes at the probes, for a family of subspaces spread by
/// `spread` (`None` for the module itself, otherwise the quotient by it).
fn sizes(d: &DeclaredModule, depth: usize, ends: Ends, sub: Option<&TailConstant>) -> Vec<usize> {
    let mat = d.materialize(depth).expect("materializes");
    let m = match sub {
        None => mat.module.as_acting_left(),
        Some(k) => mat
            .module
            .quotient(&k.materialize(d, depth))
            .expect("quotient")
            .as_acting_left(),
    };
    probes(d, depth).into_iter().map(|x| support_size(&m, x, ends)).collect()
}

/// Whether every support set is finite, judged by comparing support sizes
/// at two materialization depths: an infinite support grows with the
/// depth, a finite one does not.
pub fn finite_supports(d: &DeclaredModule, ends: Ends) -> bool {
    let (a, b) = depths(d);
    sizes(d, a, ends, None) == sizes(d, b, ends, None)
}

/// Whether the quotient by `k` has finite source supports everywhere.
pub fn big(d: &DeclaredModule, k: &TailConstant) -> bool {
    let (a, b) = depths(d);
    let (a, b) = (a + k.settled_depth(), b + k.settled_depth());
    sizes(d, a, Ends::Sources, Some(k)) == sizes(d, b, Ends::Sources, Some(k))
}

fn odometer(idx: &mut [usize], limits: &[usize]) -> bool {
    for i in 0..idx.len() {
        idx[i] += 1;
        if idx[i] < limits[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Whether `k` is a submodule, checked on a materialization deep enough
/// to see its upper cycle twice.
pub fn is_sub(d: &DeclaredModule, k: &TailConstant) -> bool {
    let depth = depths(d).1 + k.settled_depth();
    let mat = d.materialize(depth).expect("materializes");
    mat.module.as_acting_left().is_submodule(&k.materialize(d, depth))
}

/// Intersection of every big submodule whose tails are eventually
/// constant, together with `extra` when it is a big submodule, spread over
/// a materialization of depth `depth`. Upper tails may start with up to
/// `dim` free values before the shared one.
pub fn minimal_big_oracle(d: &DeclaredModule, depth: usize, extra: Option<&TailConstant>) -> Vec<Subspace> {
    let f = d.field();
    let left = d.left_form();
    let mut slots: Vec<Vec<Subspace>> = left.dims().iter().map(|&k| Subspace::all(f, k)).collect();
    let nwin = slots.len();
    if let Some(t) = d.lower() {
        slots.push(Subspace::all(f, t.dim));
    }
    let upper_dim = d.upper().map(|t| t.dim);
    let mut best: Option<Vec<Subspace>> = extra
        .filter(|k| is_sub(d, k) && big(d, k))
        .map(|k| k.materialize(d, depth));
    let max_prefix = upper_dim.unwrap_or(0);
    for prefix in 0..=max_prefix {
        let mut all = slots.clone();
        if let Some(u) = upper_dim {
            for _ in 0..=prefix {
                all.push(Subspace::all(f, u));
            }
        }
        let limits: Vec<usize> = all.iter().map(Vec::len).collect();
        let check_depth = depth.max(depths(d).1 + prefix);
        let acting = d.materialize(check_depth).expect("materializes").module.as_acting_left();
        let mut idx = vec![0usize; all.len()];
        loop {
            let pick = |i: usize| all[i][idx[i]].clone();
            let mut next = nwin;
            let lower = d.lower().map(|_| {
                next += 1;
                pick(next - 1)
            });
            let (upper_prefix, upper_cycle) = match upper_dim {
                None => (vec![], vec![]),
                Some(_) => {
                    let p: Vec<Subspace> = (0..prefix).map(|j| pick(next + j)).collect();
                    (p, vec![pick(next + prefix)])
                }
            };
            let k = TailConstant {
                window: (0..nwin).map(pick).collect(),
                lower,
                upper_prefix,
                upper_cycle,
            };
            if acting.is_submodule(&k.materialize(d, check_depth)) && big(d, &k) {
                let spread = k.materialize(d, depth);
                best = Some(match best {
                    None => spread,
                    Some(b) => b.iter().zip(&spread).map(|(p, q)| p.intersect(q).unwrap()).collect(),
                });
            }
            if !odometer(&mut idx, &limits) {
                break;
            }
        }
    }
    best.expect("the whole module is big")
}

fn random_matrix<R: Rng>(f: locfin::Field, rng: &mut R, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(f, r, c, |_, _| f.random(rng))
}

/// A random left module on a window with declared tails whose maps are
/// arbitrary, so supports may be infinite.
pub fn random_tailed<R: Rng>(w: &Window, rng: &mut R, max_dim: usize, max_tail: usize) -> DeclaredModule {
    let f = w.field();
    let n = w.cat().len();
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_dim)).collect();
    match w.generator() {
        Generator::ZChain => {
            let steps: Vec<Matrix> = (0..n - 1).map(|i| random_matrix(f, rng, dims[i + 1], dims[i])).collect();
            let m = gallery::chain_module(w.cat(), &dims, &steps);
            let t = rng.gen_range(0..=max_tail);
            let lower = Tail {
                dim: t,
                step: Some(random_matrix(f, rng, t, t)),
                link: random_matrix(f, rng, dims[0], t),
            };
            let u = rng.gen_range(0..=max_tail);
            let upper = Tail {
                dim: u,
                step: Some(random_matrix(f, rng, u, u)),
                link: random_matrix(f, rng, u, dims[n - 1]),
            };
            DeclaredModule::new(w, m, Some(lower), Some(upper)).expect("shapes fit")
        }
        _ => {
            let links: Vec<Matrix> = (0..n - 1).map(|i| random_matrix(f, rng, dims[n - 1], dims[i])).collect();
            let m = gallery::zneg_module(w.cat(), &dims, &links);
            let t = rng.gen_range(0..=max_tail);
            let lower = Tail {
                dim: t,
                step: None,
                link: random_matrix(f, rng, dims[n - 1], t),
            };
            DeclaredModule::new(w, m, Some(lower), None).expect("shapes fit")
        }
    }
}
