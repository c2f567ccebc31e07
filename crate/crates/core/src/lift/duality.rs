//! Componentwise vector space duality.

use crate::coalg::{validate_comodule, Comodule, Contramodule, GradedCoalgebra};
use crate::error::{Error, Result};
use crate::lincat::{Module, Scope};
use crate::frontier::check_left_strict;

/// The module `x -> N(x)*` with transposed actions.
pub fn dualize_module(n: &Module) -> Module {
    n.transpose_dual()
}

/// The contramodule `Hom_k(N, k)`: the block of the dual from `a` to `b` is
/// the transpose of the coaction block from `b` to `a`.
pub fn dualize_comodule(n: &Comodule) -> Contramodule {
    let len = n.len();
    let mut blocks = Vec::with_capacity(len * len);
    for a in 0..len {
        for b in 0..len {
            blocks.push(n.acting_block(b, a).transpose());
        }
    }
    Contramodule::from_acting(n.side().flip(), n.field(), n.dims().to_vec(), blocks)
}

/// The comodule whose componentwise dual is `p`.
pub fn dualize_contramodule(p: &Contramodule) -> Comodule {
    let len = p.len();
    let mut blocks = Vec::with_capacity(len * len);
    for a in 0..len {
        for b in 0..len {
            blocks.push(p.acting_block(b, a).transpose());
        }
    }
    Comodule::from_acting(p.side().flip(), p.field(), p.dims().to_vec(), blocks)
}

/// Recover the comodule `N` with `N* = p`, on a scope where every object is
/// certified to have a frontier.
pub fn anti_equivalence_roundtrip(scope: &Scope, g: &GradedCoalgebra, p: &Contramodule) -> Result<Comodule> {
    let strict = check_left_strict(scope)?;
    if !strict.verdict.is_certified() {
        return Err(Error::HypothesisNotCertified(format!(
            "{}: left strict local finiteness is {}",
            scope.describe(),
            strict.verdict.label()
        )));
    }
    let n = dualize_contramodule(p);
    let v = validate_comodule(g, &n)?;
    if !v.is_certified() {
        return Err(Error::HypothesisNotSatisfied(format!("the dual is not a comodule: {v}")));
    }
    if dualize_comodule(&n) != *p {
        return Err(Error::HypothesisNotSatisfied("dualizing back does not return the input".into()));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::{build_coalgebra, cofree_comodule, free_contramodule, validate_contramodule};
    use crate::gallery;
    use crate::lift::{theta, upsilon};
    use crate::lincat::Side;
    use crate::scalar::Field;

    #[test]
    fn duality_square_commutes() {
        let f = Field::f2();
        for cat in [gallery::chain(f, 3), gallery::matrix_pair(f), gallery::zneg_window(f, 4)] {
            let g = build_coalgebra(&cat);
            for v in 1..=2 {
                let n = cofree_comodule(&g, Side::Right, v);
                let p = dualize_comodule(&n);
                assert!(validate_contramodule(&g, &p).unwrap().is_certified());
                assert_eq!(theta(&g, &p), dualize_module(&upsilon(&g, &n)));
                assert_eq!(dualize_contramodule(&p), n);
            }
        }
    }

    #[test]
    fn roundtrip_needs_frontiers() {
        let f = Field::f2();
        let a2 = gallery::chain(f, 2);
        let g = build_coalgebra(&a2);
        let p = free_contramodule(&g, Side::Left, 1);
        let n = anti_equivalence_roundtrip(&Scope::Finite(a2), &g, &p).unwrap();
        assert_eq!(n.side(), Side::Right);
        assert_eq!(n.dims(), cofree_comodule(&g, Side::Right, 1).dims());

        let w = crate::lincat::Window::new(crate::lincat::Generator::ZNeg, f, -4, -1).unwrap();
        let g = build_coalgebra(w.cat());
        let p = free_contramodule(&g, Side::Left, 1);
        assert!(matches!(
            anti_equivalence_roundtrip(&Scope::Window(w), &g, &p),
            Err(Error::HypothesisNotCertified(_))
        ));
    }
}
