//! Big submodules: submodules with a contrafinite quotient.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::lincat::Side;
use crate::verdict::{Verdict, Witness};

use super::declared::{DeclaredModule, TailConstant};
use super::{infinite_support, Direction};

/// Whether `k` is a submodule with contrafinite quotient.
pub fn is_big(d: &DeclaredModule, k: &TailConstant) -> Result<Verdict> {
    if d.side() != Side::Left {
        return Err(Error::HypothesisNotSatisfied("big submodules are taken in left modules".into()));
    }
    if !d.leaks().is_empty() {
        return Ok(Verdict::inconclusive(
            d.scope().describe(),
            "nonzero components at undeclared boundary objects",
        ));
    }
    let depth = d.depth() + k.settled_depth();
    let mat = d.materialize(depth)?;
    let subs = k.materialize(d, depth);
    if !mat.module.is_submodule(&subs) {
        return Err(Error::DimensionMismatch("the subspaces do not form a submodule".into()));
    }
    let q = mat.module.quotient(&subs)?;
    let names = mat.scope.cat().objects();
    Ok(match infinite_support(&q, &mat.far, d.depth() - 1, Direction::Sources) {
        Some((y, f)) => Verdict::refuted(Witness::Object {
            object: names[y].clone(),
            reason: format!("the quotient is acted on nonzero from {} and beyond", names[f]),
        }),
        None => Verdict::certified(),
    })
}

/// The smallest big submodule.
///
/// Each component starts as the limit, over cofinite sets of sources, of the
/// sum of the images of the action into it. Only the tails contribute to
/// that limit, and with eventually constant tails it is the image from the
/// outermost object of a deep enough materialization. The result is then
/// closed under the action and checked to be big.
pub fn minimal_big_submodule(d: &DeclaredModule) -> Result<TailConstant> {
    if d.side() != Side::Left {
        return Err(Error::HypothesisNotSatisfied("big submodules are taken in left modules".into()));
    }
    let leaks = d.leaks();
    if !leaks.is_empty() {
        return Err(Error::HypothesisNotCertified(format!(
            "{}: components at undeclared boundary objects",
            d.scope().describe()
        )));
    }
    let depth = d.depth();
    let mat = d.materialize(2 * depth)?;
    let m = &mat.module;
    let n = m.len();
    let field = m.field();
    let tail_limit: Vec<Subspace> = (0..n)
        .map(|b| {
            let mut acc = Subspace::zero(field, m.dim(b));
            for &f in mat.far.iter().filter(|&&f| f != b) {
                for a in m.acting_action(f, b) {
                    acc = acc.sum(&a.image()).expect("same ambient");
                }
            }
            acc
        })
        .collect();
    let k = m.generated(&tail_limit);

    // Independent big submodules: everything generated at or below a
    // window object.
    for top in mat.window_offset..mat.window_offset + d.scope().cat().len() {
        let seeds: Vec<Subspace> = (0..n)
            .map(|x| {
                if x <= top {
                    Subspace::full(field, m.dim(x))
                } else {
                    Subspace::zero(field, m.dim(x))
                }
            })
            .collect();
        let s = m.generated(&seeds);
        if !k.iter().zip(&s).all(|(a, b)| b.contains(a).unwrap_or(false)) {
            return Err(Error::HypothesisNotSatisfied(
                "tail limit escapes a big submodule; tails are not eventually constant".into(),
            ));
        }
    }

    let w = mat.window_offset;
    let len = d.scope().cat().len();
    let lower = d.lower().map(|_| k[depth].clone());
    let (upper_prefix, upper_cycle) = match d.upper() {
        None => (vec![], vec![]),
        Some(t) => upper_orbit(&k[w + len..w + len + depth], t.step.as_ref().expect("chain tail step"))?,
    };
    let out = TailConstant {
        window: k[w..w + len].to_vec(),
        lower,
        upper_prefix,
        upper_cycle,
    };
    let v = is_big(d, &out)?;
    if !v.is_certified() {
        return Err(Error::HypothesisNotSatisfied(format!("computed submodule is not big: {v}")));
    }
    Ok(out)
}

/// Bound on the length of an upper tail orbit before giving up.
const ORBIT_LIMIT: usize = 4096;

/// Along the upper tail every value is the image of the previous one under
/// the tail step, so the values form an orbit. It is cut into a prefix and a
/// cycle at its first repetition, after checking it against the values seen
/// on a materialization.
fn upper_orbit(seen: &[Subspace], step: &Matrix) -> Result<(Vec<Subspace>, Vec<Subspace>)> {
    let mut orbit = vec![seen[0].clone()];
    let start = loop {
        let next = orbit.last().expect("nonempty").image_under(step);
        if let Some(a) = orbit.iter().position(|s| *s == next) {
            break a;
        }
        if orbit.len() == ORBIT_LIMIT {
            return Err(Error::Unrepresentable(format!(
                "the minimal big submodule does not repeat within {ORBIT_LIMIT} upper tail objects"
            )));
        }
        orbit.push(next);
    };
    let period = orbit.len() - start;
    let at = |i: usize| if i < start { &orbit[i] } else { &orbit[start + (i - start) % period] };
    if seen.iter().enumerate().any(|(i, s)| s != at(i)) {
        return Err(Error::HypothesisNotSatisfied(
            "upper tail values do not follow the tail step".into(),
        ));
    }
    let cycle = orbit.split_off(start);
    Ok((orbit, cycle))
}
