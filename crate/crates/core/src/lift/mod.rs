//! Passing between modules and comodules or contramodules.
//!
//! [`upsilon`] reads a module off a comodule and [`theta`] reads one off a
//! contramodule. The lifts go the other way and decide, from the supports of
//! the action, whether a module arises at all:
//!
//! - a module lifts to a comodule when every object acts nonzero on only
//!   finitely many objects;
//! - it lifts to a contramodule when every object is acted on nonzero by
//!   only finitely many objects.
//!
//! Over a window the answer depends on what lies outside, so the input is a
//! [`DeclaredModule`].

mod big;
mod declared;
mod duality;

pub use big::{is_big, minimal_big_submodule};
pub use declared::{DeclaredModule, Materialized, Tail, TailConstant};
pub use duality::{anti_equivalence_roundtrip, dualize_comodule, dualize_contramodule, dualize_module};

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::coalg::{build_coalgebra, Comodule, Contramodule, GradedCoalgebra};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lincat::{validate_module, Module, Scope, Side};
use crate::verdict::{Verdict, Witness};

/// The module underlying a comodule: row block `c` of `nu_{a,b}` is the
/// action of the `c`-th basis morphism.
pub fn upsilon(g: &GradedCoalgebra, m: &Comodule) -> Module {
    let act = g.acting(m.side());
    let n = m.len();
    let mut acting = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            acting.push((0..act.dim(a, b)).map(|c| m.acting_row_block(a, b, c)).collect());
        }
    }
    Module::from_acting(m.side(), m.field(), m.dims().to_vec(), acting)
}

/// The module underlying a contramodule: column block `c` of `pi^b_a` is
/// the action of the `c`-th basis morphism.
pub fn theta(g: &GradedCoalgebra, p: &Contramodule) -> Module {
    let act = g.acting(p.side());
    let n = p.len();
    let mut acting = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            acting.push((0..act.dim(a, b)).map(|c| p.acting_col_block(a, b, c)).collect());
        }
    }
    Module::from_acting(p.side(), p.field(), p.dims().to_vec(), acting)
}

/// The comodule whose underlying module is `m`, stacking the actions of
/// the basis morphisms.
pub fn comodule_of(m: &Module) -> Comodule {
    let n = m.len();
    let mut blocks = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let parts: Vec<&Matrix> = m.acting_action(a, b).iter().collect();
            blocks.push(Matrix::vstack(m.field(), m.dim(a), &parts));
        }
    }
    Comodule::from_acting(m.side(), m.field(), m.dims().to_vec(), blocks)
}

/// The contramodule whose underlying module is `m`.
pub fn contramodule_of(m: &Module) -> Contramodule {
    let n = m.len();
    let mut blocks = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let parts: Vec<&Matrix> = m.acting_action(a, b).iter().collect();
            blocks.push(Matrix::hstack(m.field(), m.dim(b), &parts));
        }
    }
    Contramodule::from_acting(m.side(), m.field(), m.dims().to_vec(), blocks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftTarget {
    Comodule,
    Contramodule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision")]
pub enum LiftDecision {
    /// Every support set is finite; `sets` lists them per window object.
    Liftable { sets: BTreeMap<String, Vec<String>> },
    /// `object` has an infinite support set.
    NotLiftable { object: String, reason: String },
    /// Nonzero components sit where undeclared outside objects could act.
    WindowLeak { objects: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lifted {
    Comodule(Comodule),
    Contramodule(Contramodule),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub target: LiftTarget,
    pub decision: LiftDecision,
    pub lifted: Option<Lifted>,
    pub flags: Vec<String>,
}

impl LiftReport {
    pub fn is_liftable(&self) -> bool {
        matches!(self.decision, LiftDecision::Liftable { .. })
    }

    pub fn exit_code(&self) -> i32 {
        match self.decision {
            LiftDecision::Liftable { .. } => 0,
            LiftDecision::NotLiftable { .. } => 2,
            LiftDecision::WindowLeak { .. } => 3,
        }
    }

    pub fn to_json(&self, objects: &[String]) -> Value {
        let lifted = match &self.lifted {
            None => Value::Null,
            Some(Lifted::Comodule(c)) => c.to_json(objects),
            Some(Lifted::Contramodule(p)) => p.to_json(objects),
        };
        json!({
            "target": self.target,
            "decision": self.decision,
            "lifted": lifted,
            "flags": self.flags,
        })
    }
}

/// Which way the support sets run in the acting orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    /// For each source, the objects it acts on.
    Targets,
    /// For each target, the objects acting on it.
    Sources,
}

enum Supports {
    Leak(Vec<String>),
    Infinite { object: String, far: String },
    Finite(BTreeMap<String, Vec<String>>),
}

fn supports(d: &DeclaredModule, dir: Direction) -> Result<Supports> {
    let leaks = d.leaks();
    if !leaks.is_empty() {
        let objs = d.scope().cat().objects();
        return Ok(Supports::Leak(leaks.into_iter().map(|i| objs[i].clone()).collect()));
    }
    let mat = d.materialize(d.depth())?;
    let m = &mat.module;
    let names = mat.scope.cat().objects();
    let n = m.len();
    if let Some((x, f)) = infinite_support(m, &mat.far, d.depth() - 1, dir) {
        return Ok(Supports::Infinite {
            object: names[x].clone(),
            far: names[f].clone(),
        });
    }
    let nonzero = |x: usize, y: usize| match dir {
        Direction::Targets => m.acts_nonzero(x, y),
        Direction::Sources => m.acts_nonzero(y, x),
    };
    let window = mat.window_offset..mat.window_offset + d.scope().cat().len();
    let sets = window
        .map(|x| {
            let set = (0..n).filter(|&y| nonzero(x, y)).map(|y| names[y].clone()).collect();
            (names[x].clone(), set)
        })
        .collect();
    Ok(Supports::Finite(sets))
}

/// An object whose support set on a materialization reaches one of the
/// outermost tail objects, together with that object. Objects closer than
/// `reach` to an outermost object do not yet show the eventual behaviour of
/// the tail and are skipped.
fn infinite_support(m: &Module, far: &[usize], reach: usize, dir: Direction) -> Option<(usize, usize)> {
    (0..m.len()).find_map(|x| {
        far.iter()
            .find(|&&f| {
                f.abs_diff(x) >= reach
                    && match dir {
                        Direction::Targets => m.acts_nonzero(x, f),
                        Direction::Sources => m.acts_nonzero(f, x),
                    }
            })
            .map(|&f| (x, f))
    })
}

fn require_valid(d: &DeclaredModule) -> Result<()> {
    let v = validate_module(d.scope().cat(), &d.module())?;
    if v.is_certified() {
        Ok(())
    } else {
        Err(Error::HypothesisNotSatisfied(format!("not a module: {v}")))
    }
}

/// Decide whether the module underlies a comodule and build it when it does.
pub fn lift_to_comodule(d: &DeclaredModule) -> Result<LiftReport> {
    require_valid(d)?;
    let report = |decision, lifted, flags| LiftReport {
        target: LiftTarget::Comodule,
        decision,
        lifted,
        flags,
    };
    match supports(d, Direction::Targets)? {
        Supports::Leak(objects) => Ok(report(LiftDecision::WindowLeak { objects }, None, vec![])),
        Supports::Infinite { object, far } => Ok(report(
            LiftDecision::NotLiftable {
                reason: format!("{object} acts nonzero on {far} and on every object beyond it"),
                object,
            },
            None,
            vec![],
        )),
        Supports::Finite(sets) => {
            let m = d.module();
            let g = build_coalgebra(d.scope().cat());
            let c = comodule_of(&m);
            if upsilon(&g, &c) != m {
                return Err(Error::DimensionMismatch("comodule lift does not round trip".into()));
            }
            Ok(report(LiftDecision::Liftable { sets }, Some(Lifted::Comodule(c)), vec![]))
        }
    }
}

/// Decide whether the module underlies a contramodule and build the
/// contramodule on the window when it does.
pub fn lift_to_contramodule(d: &DeclaredModule) -> Result<LiftReport> {
    require_valid(d)?;
    let report = |decision, lifted, flags| LiftReport {
        target: LiftTarget::Contramodule,
        decision,
        lifted,
        flags,
    };
    let build = || -> Result<Contramodule> {
        let m = d.module();
        let g = build_coalgebra(d.scope().cat());
        let p = contramodule_of(&m);
        if theta(&g, &p) != m {
            return Err(Error::DimensionMismatch("contramodule lift does not round trip".into()));
        }
        Ok(p)
    };
    match supports(d, Direction::Sources)? {
        Supports::Leak(objects) => Ok(report(LiftDecision::WindowLeak { objects }, None, vec![])),
        Supports::Infinite { object, far } => {
            let underlies = matches!(d.scope(), Scope::Window(w) if w.every_module_underlies_a_contramodule());
            if underlies && d.side() == Side::Left {
                let flags = vec![
                    format!(
                        "{object} is acted on nonzero by {far} and every object beyond it; the contraaction \
                         on the full product extends the direct sum one only by a choice of extension"
                    ),
                    "over the full category the forgetful functor from contramodules is not fully faithful".into(),
                ];
                let sets = match supports_on_window(d, Direction::Sources)? {
                    Supports::Finite(s) => s,
                    _ => BTreeMap::new(),
                };
                Ok(report(LiftDecision::Liftable { sets }, Some(Lifted::Contramodule(build()?)), flags))
            } else {
                Ok(report(
                    LiftDecision::NotLiftable {
                        reason: format!("{object} is acted on nonzero by {far} and every object beyond it"),
                        object,
                    },
                    None,
                    vec![],
                ))
            }
        }
        Supports::Finite(sets) => Ok(report(
            LiftDecision::Liftable { sets },
            Some(Lifted::Contramodule(build()?)),
            vec![],
        )),
    }
}

/// Support sets computed on the window alone.
fn supports_on_window(d: &DeclaredModule, dir: Direction) -> Result<Supports> {
    let bare = DeclaredModule::finite(d.scope().cat(), d.module());
    supports(&bare, dir)
}

fn verdict_of(s: Supports, d: &DeclaredModule) -> Verdict {
    match s {
        Supports::Leak(objects) => Verdict::inconclusive(
            d.scope().describe(),
            format!("nonzero components at undeclared boundary objects {}", objects.join(", ")),
        ),
        Supports::Infinite { object, far } => Verdict::refuted(Witness::Object {
            reason: format!("support of {object} reaches {far} and every object beyond it"),
            object,
        }),
        Supports::Finite(sets) => Verdict::certified_with(Witness::Supports { sets }),
    }
}

/// Every object is acted on nonzero by finitely many objects; the witness
/// lists the sets `A_y`.
pub fn is_contrafinite(d: &DeclaredModule) -> Result<Verdict> {
    if d.side() != Side::Left {
        return Err(Error::HypothesisNotSatisfied("contrafiniteness concerns left modules".into()));
    }
    Ok(verdict_of(supports(d, Direction::Sources)?, d))
}

/// Every object acts nonzero, through the right action, on finitely many
/// objects; the witness lists the sets per acting object.
pub fn is_cofinite(d: &DeclaredModule) -> Result<Verdict> {
    if d.side() != Side::Right {
        return Err(Error::HypothesisNotSatisfied("cofiniteness concerns right modules".into()));
    }
    Ok(verdict_of(supports(d, Direction::Targets)?, d))
}

/// Lift every member of a family and report whether the largest support set
/// grows strictly along it. Growth is flagged on each report.
pub fn lift_family(family: &[DeclaredModule], target: LiftTarget) -> Result<(Vec<LiftReport>, Verdict)> {
    let mut reports = Vec::new();
    let mut sizes = Vec::new();
    for d in family {
        let r = match target {
            LiftTarget::Comodule => lift_to_comodule(d)?,
            LiftTarget::Contramodule => lift_to_contramodule(d)?,
        };
        sizes.push(match &r.decision {
            LiftDecision::Liftable { sets } => sets.values().map(Vec::len).max().unwrap_or(0),
            _ => 0,
        });
        reports.push(r);
    }
    let all_liftable = reports.iter().all(LiftReport::is_liftable);
    let growing = sizes.windows(2).all(|w| w[0] < w[1]);
    let witness = Witness::Growth {
        target: "largest support set".into(),
        windows: family.iter().map(|d| d.scope().describe()).collect(),
        sizes: sizes.clone(),
    };
    let verdict = if all_liftable && growing && sizes.len() > 1 {
        for r in &mut reports {
            r.flags.push(format!(
                "support sets grow without bound along the family (largest sizes {sizes:?}); no uniform bound exists"
            ));
        }
        Verdict::certified_with(witness)
    } else {
        Verdict::refuted(witness)
    };
    Ok((reports, verdict))
}
