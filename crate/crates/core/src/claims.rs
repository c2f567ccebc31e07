//! Expected verdicts for the built-in gallery, evaluated against the
//! library, and a search over small windows for modules that are liftable
//! to contramodules but fail contrafiniteness at a single object.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::coalg::{conilpotency_index, coalgebra_of, long_quotient, Conilpotency};
use crate::error::Result;
use crate::ext::random_declared;
use crate::frontier::{check_left_strict, find_standard_frontier};
use crate::gallery;
use crate::lift::{
    is_contrafinite, lift_family, lift_to_comodule, lift_to_contramodule, LiftDecision, LiftReport, LiftTarget,
};
use crate::lincat::{Generator, Window};
use crate::order::check_upper_lower_finite;
use crate::scalar::Field;
use crate::verdict::{Verdict, Witness};

/// One row of the claims table.
pub struct Claim {
    pub id: &'static str,
    pub entry: &'static str,
    pub anchor: &'static str,
    pub expected: &'static str,
    check: fn(Field) -> Result<Verdict>,
}

/// A claim together with what the library computed for it.
pub struct ClaimOutcome {
    pub id: &'static str,
    pub entry: &'static str,
    pub anchor: &'static str,
    pub expected: &'static str,
    pub computed: Verdict,
}

impl ClaimOutcome {
    pub fn holds(&self) -> bool {
        self.computed.label() == self.expected
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "entry": self.entry,
            "anchor": self.anchor,
            "expected": self.expected,
            "computed": self.computed,
            "holds": self.holds(),
        })
    }
}

/// Maps a lift decision onto a verdict: liftable is certified, the other
/// two outcomes are refuted with the reason attached.
fn lift_verdict(r: &LiftReport) -> Verdict {
    match &r.decision {
        LiftDecision::Liftable { sets } => Verdict::certified_with(Witness::Supports { sets: sets.clone() }),
        LiftDecision::NotLiftable { object, reason } => Verdict::refuted(Witness::Object {
            object: object.clone(),
            reason: reason.clone(),
        }),
        LiftDecision::WindowLeak { objects } => Verdict::refuted(Witness::note(format!(
            "nonzero components at undeclared boundary objects {objects:?}"
        ))),
    }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    match (a.is_certified(), b.is_certified()) {
        (true, true) => a,
        (false, _) => a,
        _ => b,
    }
}

pub fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "chain-left-strict",
            entry: "chainA:3",
            anchor: "finite chains are left and right strictly locally finite",
            expected: "Certified",
            check: |f| Ok(check_left_strict(&gallery::instantiate("chainA", "3", f)?)?.verdict),
        },
        Claim {
            id: "chain-conilpotency",
            entry: "chainA:3",
            anchor: "the long part of the coalgebra of A_3 is killed by the second iterated comultiplication",
            expected: "Certified",
            check: |f| {
                let s = gallery::instantiate("chainA", "3", f)?;
                let d = long_quotient(&coalgebra_of(&s)?, s.cat());
                Ok(match conilpotency_index(&d) {
                    Conilpotency::Index(2) => Verdict::certified(),
                    other => Verdict::refuted(Witness::note(format!("index {other}"))),
                })
            },
        },
        Claim {
            id: "zneg-no-frontier",
            entry: "zneg:-6..-1",
            anchor: "on the negative integers the object -1 has no finite frontier",
            expected: "Refuted",
            check: |f| Ok(find_standard_frontier(&gallery::instantiate("zneg", "-6..-1", f)?, "-1")?.verdict),
        },
        Claim {
            id: "zneg-upper-finite",
            entry: "zneg:-6..-1",
            anchor: "every up-set of the negative integers is finite",
            expected: "Certified",
            check: |f| Ok(check_upper_lower_finite(&gallery::instantiate("zneg", "-6..-1", f)?).0),
        },
        Claim {
            id: "zneg-not-lower-finite",
            entry: "zneg:-6..-1",
            anchor: "the down-set of -1 is infinite",
            expected: "Refuted",
            check: |f| Ok(check_upper_lower_finite(&gallery::instantiate("zneg", "-6..-1", f)?).1),
        },
        Claim {
            id: "zneg-constant-contramodule",
            entry: "zneg:-4..-1",
            anchor: "the constant module on the negative integers is a contramodule although it is not contrafinite",
            expected: "Certified",
            check: |f| Ok(lift_verdict(&lift_to_contramodule(&gallery::zneg_constant_module(f, -4)?)?)),
        },
        Claim {
            id: "zneg-constant-not-contrafinite",
            entry: "zneg:-4..-1",
            anchor: "every object acts on -1 nonzero in the constant module",
            expected: "Refuted",
            check: |f| is_contrafinite(&gallery::zneg_constant_module(f, -4)?),
        },
        Claim {
            id: "zneg-right-comodule",
            entry: "zneg:-4..-1",
            anchor: "a right module acting from -1 to a single object is a comodule",
            expected: "Certified",
            check: |f| Ok(lift_verdict(&lift_to_comodule(&gallery::zneg_single_right_module(f, -4)?)?)),
        },
        Claim {
            id: "zchain-left-strict-window",
            entry: "zchain:-3..3",
            anchor: "the integer chain is left strictly locally finite",
            expected: "Certified",
            check: |f| Ok(check_left_strict(&gallery::instantiate("zchain", "-3..3", f)?)?.verdict),
        },
        Claim {
            id: "zchain-not-upper-finite",
            entry: "zchain:-3..3",
            anchor: "the integer chain has infinite up-sets",
            expected: "Refuted",
            check: |f| Ok(check_upper_lower_finite(&gallery::instantiate("zchain", "-3..3", f)?).0),
        },
        Claim {
            id: "zchain-not-lower-finite",
            entry: "zchain:-3..3",
            anchor: "the integer chain has infinite down-sets",
            expected: "Refuted",
            check: |f| Ok(check_upper_lower_finite(&gallery::instantiate("zchain", "-3..3", f)?).1),
        },
        Claim {
            id: "zchain-module-n",
            entry: "zchain:-2..2",
            anchor: "the module with one-dimensional components and isomorphisms lifts neither to a comodule nor to a contramodule",
            expected: "Refuted",
            check: |f| {
                let d = gallery::chain_iso_module(f, -2, 2, true)?;
                let co = lift_verdict(&lift_to_comodule(&d)?);
                let contra = lift_verdict(&lift_to_contramodule(&d)?);
                Ok(match (co.is_refuted(), contra.is_refuted()) {
                    (true, true) => co,
                    _ => Verdict::certified_with(Witness::note("one of the two lifts exists")),
                })
            },
        },
        Claim {
            id: "zchain-bump-family",
            entry: "zchain:-5..5",
            anchor: "each truncation to -l..l lifts, but no uniform bound on supports exists",
            expected: "Certified",
            check: |f| {
                let family = (1..=4).map(|l| gallery::bump_module(f, l, 5)).collect::<Result<Vec<_>>>()?;
                let (_, co) = lift_family(&family, LiftTarget::Comodule)?;
                let (_, contra) = lift_family(&family, LiftTarget::Contramodule)?;
                Ok(both(co, contra))
            },
        },
    ]
}

pub fn evaluate(claim: &Claim, field: Field) -> Result<ClaimOutcome> {
    Ok(ClaimOutcome {
        id: claim.id,
        entry: claim.entry,
        anchor: claim.anchor,
        expected: claim.expected,
        computed: (claim.check)(field)?,
    })
}

pub fn evaluate_all(field: Field) -> Result<Vec<ClaimOutcome>> {
    claims().iter().map(|c| evaluate(c, field)).collect()
}

/// Counts from [`single_object_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSummary {
    pub seed: u64,
    pub samples: usize,
    pub contramodules: usize,
    pub objects_checked: usize,
    pub counterexamples: usize,
}

impl SearchSummary {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "samples": self.samples,
            "contramodules": self.contramodules,
            "objects_checked": self.objects_checked,
            "counterexamples": self.counterexamples,
            "asserts": "nothing",
        })
    }
}

/// Samples random declared modules on small integer-chain windows, keeps
/// those that lift to contramodules, and counts objects at which the module
/// fails to be acted on from finitely many objects. Every component here is
/// finite-dimensional, so a hit would settle the question negatively; a
/// count of zero settles nothing.
pub fn single_object_search(field: Field, seed: u64, samples: usize) -> Result<SearchSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SearchSummary {
        seed,
        samples,
        contramodules: 0,
        objects_checked: 0,
        counterexamples: 0,
    };
    for i in 0..samples {
        let half = 1 + (i % 3) as i64;
        let w = Window::new(Generator::ZChain, field, -half, half)?;
        let d = random_declared(&w, &mut rng, 2)?;
        let r = lift_to_contramodule(&d)?;
        if !r.is_liftable() {
            continue;
        }
        out.contramodules += 1;
        out.objects_checked += w.cat().len();
        if let Verdict::Refuted { .. } = is_contrafinite(&d)? {
            out.counterexamples += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_claim_holds() {
        for o in evaluate_all(Field::f2()).unwrap() {
            assert!(o.holds(), "{}: expected {}, computed {}", o.id, o.expected, o.computed);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = single_object_search(Field::f2(), 7, 20).unwrap();
        assert_eq!(a, single_object_search(Field::f2(), 7, 20).unwrap());
        assert!(a.contramodules > 0);
        assert_eq!(a.counterexamples, 0);
    }
}
