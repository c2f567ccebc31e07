use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::verdict::{Verdict, Witness};

use super::{Comodule, Contramodule, GradedCoalgebra};

/// Per component, the kernel of the coaction by the long part `d`:
/// `ker nu_D` on `M_a` is the intersection of `ker nu_{a,b}` over the
/// components `D^{a,b}` that are present.
pub fn long_socle(d: &GradedCoalgebra, m: &Comodule) -> Vec<Subspace> {
    let act = d.acting(m.side());
    let n = m.len();
    (0..n)
        .map(|a| {
            let mut k = Subspace::full(m.field(), m.dim(a));
            for b in (0..n).filter(|&b| act.dim(a, b) > 0) {
                k = k.intersect(&m.acting_block(a, b).kernel()).expect("same ambient");
            }
            k
        })
        .collect()
}

/// Per component, the image of the contraaction by the long part `d`:
/// the sum of `Im pi^b_a` over the components `D^{a,b}` that are present.
pub fn long_radical(d: &GradedCoalgebra, p: &Contramodule) -> Vec<Subspace> {
    let act = d.acting(p.side());
    let n = p.len();
    (0..n)
        .map(|b| {
            let mut s = Subspace::zero(p.field(), p.dim(b));
            for a in (0..n).filter(|&a| act.dim(a, b) > 0) {
                s = s.sum(&p.acting_block(a, b).image()).expect("same ambient");
            }
            s
        })
        .collect()
}

/// A comodule or a contramodule, for [`nakayama_check`].
#[derive(Clone, Copy, Debug)]
pub enum Costructure<'a> {
    Comodule(&'a Comodule),
    Contramodule(&'a Contramodule),
}

/// A nonzero comodule over a conilpotent coalgebra has a nonzero kernel of
/// the coaction; a nonzero contramodule has a proper image of the
/// contraaction.
pub fn nakayama_check(d: &GradedCoalgebra, m: Costructure) -> Result<Verdict> {
    let objects = d.objects();
    let dims = |subs: &[Subspace]| -> BTreeMap<String, usize> {
        subs.iter().enumerate().map(|(x, s)| (objects[x].clone(), s.dim())).collect()
    };
    match m {
        Costructure::Comodule(m) => {
            if m.is_zero() {
                return Err(Error::ZeroInput);
            }
            let socle = long_socle(d, m);
            let witness = Witness::Dimensions { dims: dims(&socle) };
            Ok(if socle.iter().any(|s| !s.is_zero()) {
                Verdict::certified_with(witness)
            } else {
                Verdict::refuted(witness)
            })
        }
        Costructure::Contramodule(p) => {
            if p.is_zero() {
                return Err(Error::ZeroInput);
            }
            let radical = long_radical(d, p);
            let cokernel: Vec<Subspace> = radical.iter().map(Subspace::annihilator).collect();
            let witness = Witness::Dimensions { dims: dims(&cokernel) };
            Ok(if radical.iter().any(|s| !s.is_full()) {
                Verdict::certified_with(witness)
            } else {
                Verdict::refuted(witness)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::{build_coalgebra, cofree_comodule, free_contramodule, long_quotient};
    use crate::gallery;
    use crate::lincat::Side;
    use crate::scalar::Field;

    #[test]
    fn a2_socle_and_radical() {
        let f = Field::f2();
        let a2 = gallery::chain(f, 2);
        let g = build_coalgebra(&a2);
        let d = long_quotient(&g, &a2);
        let c = cofree_comodule(&g, Side::Left, 1);
        let socle = long_socle(&d, &c);
        // M_0 = C^{0,0} + C^{0,1}: the identity dual spans the kernel.
        assert_eq!(socle[0], Subspace::span(f, 2, &[vec![f.one(), f.zero()]]));
        assert!(socle[1].is_full());
        let p = free_contramodule(&g, Side::Left, 1);
        let rad = long_radical(&d, &p);
        assert!(rad[0].is_zero());
        assert_eq!(rad[1].dim(), 1);
        assert!(nakayama_check(&d, Costructure::Comodule(&c)).unwrap().is_certified());
        assert!(nakayama_check(&d, Costructure::Contramodule(&p)).unwrap().is_certified());
    }

    #[test]
    fn zero_input() {
        let a3 = gallery::chain(Field::f2(), 3);
        let g = build_coalgebra(&a3);
        let d = long_quotient(&g, &a3);
        let z = Comodule::zero(&g, Side::Left);
        assert!(matches!(nakayama_check(&d, Costructure::Comodule(&z)), Err(Error::ZeroInput)));
    }
}
