//! Frontiers: finite sets of objects strictly below `y` through which every
//! morphism into `y` factors, up to a finite exception set.
//!
//! A set `X` is a frontier for `y` with exception `W` when for every
//! `z < y` outside `W` the composition map
//! `(+)_{x in X} Hom(x,y) (x) Hom(z,x) -> Hom(z,y)` is surjective.
//!
//! On declared windows the objects below the window all relate to the window
//! in the same way, so one extra object below the lowest object of interest
//! stands for the whole tail.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{combinations, Matrix};
use crate::lincat::{format_object, parse_object, LinCat, Scope, SetDecl, Window};
use crate::order::{preorder, PreorderAnalysis};
use crate::verdict::{Verdict, Witness};

/// How many objects below a window the frontier search may reach.
pub const MAX_HORIZON: i64 = 3;

/// Number of window enlargements inspected for a growth witness.
pub const GROWTH_STEPS: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier {
    pub target: String,
    pub members: Vec<String>,
    pub exception: Vec<String>,
}

impl Frontier {
    pub fn new(target: &str, members: &[&str], exception: &[&str]) -> Frontier {
        Frontier {
            target: target.into(),
            members: members.iter().map(|s| s.to_string()).collect(),
            exception: exception.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn witness(&self) -> Witness {
        Witness::Frontier {
            target: self.target.clone(),
            members: self.members.clone(),
            exception: self.exception.clone(),
        }
    }
}

/// The objects of a scope, possibly extended below a declared window, with
/// the index of the object standing for the tail.
struct Context<'a> {
    cat: Cow<'a, LinCat>,
    pre: PreorderAnalysis,
    tail: Option<usize>,
    kind: Kind,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Finite,
    Declared,
    Undeclared,
}

impl Context<'_> {
    fn index(&self, name: &str) -> Result<usize> {
        match self.kind {
            Kind::Finite => self.cat.index_of(name),
            _ => {
                let v = parse_object(name).ok_or_else(|| Error::UnknownObject(name.to_string()))?;
                self.cat.index_of(&format_object(v))
            }
        }
    }

    fn indices(&self, names: &[String]) -> Result<Vec<usize>> {
        names.iter().map(|s| self.index(s)).collect()
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.cat.object(i).to_string()).collect()
    }

    /// First `z < y` outside `skip` (and, unless `with_tail`, not the tail
    /// object) where the members fail to cover `Hom(z,y)`, with a basis
    /// vector outside the image.
    fn failure(&self, y: usize, members: &[usize], skip: &[usize], with_tail: bool) -> Option<(usize, usize)> {
        let n = self.cat.len();
        (0..n)
            .filter(|&z| self.pre.lt(z, y) && !skip.contains(&z))
            .filter(|&z| with_tail || Some(z) != self.tail)
            .find_map(|z| self.uncovered(z, y, members).map(|k| (z, k)))
    }

    fn uncovered(&self, z: usize, y: usize, members: &[usize]) -> Option<usize> {
        let d = self.cat.hom_dim(z, y);
        if d == 0 {
            return None;
        }
        let parts: Vec<Matrix> = members
            .iter()
            .map(|&x| self.cat.composition_matrix(z, x, y))
            .collect();
        let refs: Vec<&Matrix> = parts.iter().collect();
        let image = Matrix::hstack(self.cat.field(), d, &refs).image();
        image.complement_indices().first().copied()
    }
}

fn context<'a>(scope: &'a Scope, extra: &[String]) -> Result<Context<'a>> {
    match scope {
        Scope::Finite(cat) => {
            for e in extra {
                cat.index_of(e)?;
            }
            Ok(Context {
                pre: preorder(cat),
                cat: Cow::Borrowed(cat),
                tail: None,
                kind: Kind::Finite,
            })
        }
        Scope::Window(w) => {
            let mut vals = Vec::with_capacity(extra.len());
            for e in extra {
                vals.push(parse_object(e).ok_or_else(|| Error::UnknownObject(e.clone()))?);
            }
            if !w.generator().is_declared() {
                if let Some(v) = vals.iter().find(|&&v| w.position(v).is_none()) {
                    return Err(Error::UnknownObject(format_object(*v)));
                }
                return Ok(Context {
                    pre: preorder(w.cat()),
                    cat: Cow::Borrowed(w.cat()),
                    tail: None,
                    kind: Kind::Undeclared,
                });
            }
            let lo = vals.iter().copied().chain([w.lo()]).min().unwrap_or(w.lo()) - 1;
            let hi = vals.iter().copied().chain([w.hi()]).max().unwrap_or(w.hi());
            let ext = w
                .with_range(lo, hi)
                .map_err(|_| Error::UnknownObject(format!("{lo}..{hi} in {}", w.describe())))?;
            let cat = ext.cat().clone();
            Ok(Context {
                pre: preorder(&cat),
                cat: Cow::Owned(cat),
                tail: Some(0),
                kind: Kind::Declared,
            })
        }
    }
}

/// Check that `f` is a frontier for its target.
pub fn verify_frontier(scope: &Scope, f: &Frontier) -> Result<Verdict> {
    let extra: Vec<String> = f
        .members
        .iter()
        .chain(&f.exception)
        .chain([&f.target])
        .cloned()
        .collect();
    let ctx = context(scope, &extra)?;
    let y = ctx.index(&f.target)?;
    let members = ctx.indices(&f.members)?;
    let skip = ctx.indices(&f.exception)?;
    if let Some(&x) = members.iter().find(|&&x| !ctx.pre.lt(x, y)) {
        return Err(Error::MalformedFrontier(format!(
            "{} is not strictly below {}",
            ctx.cat.object(x),
            f.target
        )));
    }
    if let Some((z, k)) = ctx.failure(y, &members, &skip, true) {
        let mut vector = vec!["0".to_string(); ctx.cat.hom_dim(z, y)];
        vector[k] = "1".into();
        return Ok(Verdict::refuted(Witness::Cokernel {
            target: f.target.clone(),
            source: ctx.cat.object(z).to_string(),
            members: f.members.clone(),
            vector,
        }));
    }
    Ok(match ctx.kind {
        Kind::Undeclared => Verdict::inconclusive(
            scope.describe(),
            "the members cover every source inside the window; nothing is declared below it",
        ),
        _ => Verdict::certified_with(f.witness()),
    })
}

/// Least member set (by size, then index order) among `pool` passing the
/// check; `None` if even the whole pool fails.
fn least_cover(ctx: &Context, y: usize, pool: &[usize], with_tail: bool) -> Option<Vec<usize>> {
    if ctx.failure(y, pool, &[], with_tail).is_some() {
        return None;
    }
    let forced: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&z| {
            let rest: Vec<usize> = pool.iter().copied().filter(|&x| x != z).collect();
            (with_tail || Some(z) != ctx.tail) && ctx.uncovered(z, y, &rest).is_some()
        })
        .collect();
    let free: Vec<usize> = pool.iter().copied().filter(|z| !forced.contains(z)).collect();
    for size in 0..=free.len() {
        let best = combinations(free.len(), size)
            .into_iter()
            .map(|c| {
                let mut s: Vec<usize> = forced.iter().copied().chain(c.iter().map(|&i| free[i])).collect();
                s.sort_unstable();
                s
            })
            .filter(|s| ctx.failure(y, s, &[], with_tail).is_none())
            .min();
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Outcome of a frontier search for one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierSearch {
    pub frontier: Option<Frontier>,
    pub verdict: Verdict,
}

impl FrontierSearch {
    pub fn to_json(&self) -> Value {
        json!({
            "frontier": self.frontier,
            "verdict": self.verdict,
        })
    }
}

/// Search for a frontier for `y` with empty exception.
pub fn find_standard_frontier(scope: &Scope, y: &str) -> Result<FrontierSearch> {
    match scope {
        Scope::Finite(_) => {
            let ctx = context(scope, &[])?;
            let yi = ctx.index(y)?;
            let pool = ctx.pre.strict_down_set(yi);
            let members = least_cover(&ctx, yi, &pool, true).expect("the strict down-set covers itself");
            let f = Frontier {
                target: y.to_string(),
                members: ctx.names(&members),
                exception: vec![],
            };
            Ok(FrontierSearch {
                verdict: Verdict::certified_with(f.witness()),
                frontier: Some(f),
            })
        }
        Scope::Window(w) if !w.generator().is_declared() => {
            let ctx = context(scope, &[y.to_string()])?;
            let yi = ctx.index(y)?;
            let pool = ctx.pre.strict_down_set(yi);
            let members = least_cover(&ctx, yi, &pool, true).expect("the strict down-set covers itself");
            let f = Frontier {
                target: y.to_string(),
                members: ctx.names(&members),
                exception: vec![],
            };
            Ok(FrontierSearch {
                verdict: Verdict::inconclusive(
                    w.describe(),
                    format!("window-relative frontier {{{}}}; nothing is declared below the window", f.members.join(", ")),
                ),
                frontier: Some(f),
            })
        }
        Scope::Window(w) => declared_search(w, y),
    }
}

fn declared_search(w: &Window, y: &str) -> Result<FrontierSearch> {
    let yv = parse_object(y).ok_or_else(|| Error::UnknownObject(y.to_string()))?;
    let scope = Scope::Window(w.clone());
    for k in 0..=MAX_HORIZON {
        let ctx = context(&scope, &[y.to_string(), format_object(w.lo() - k)])?;
        let yi = ctx.index(y)?;
        let pool: Vec<usize> = ctx
            .pre
            .strict_down_set(yi)
            .into_iter()
            .filter(|&z| Some(z) != ctx.tail)
            .collect();
        if let Some(members) = least_cover(&ctx, yi, &pool, true) {
            let f = Frontier {
                target: format_object(yv),
                members: ctx.names(&members),
                exception: vec![],
            };
            return Ok(FrontierSearch {
                verdict: Verdict::certified_with(f.witness()),
                frontier: Some(f),
            });
        }
    }
    let mut windows = Vec::new();
    let mut sizes = Vec::new();
    for j in 0..=GROWTH_STEPS {
        let wj = w.with_range(w.lo() - j, w.hi().max(yv))?;
        let ctx = Context {
            pre: preorder(wj.cat()),
            cat: Cow::Borrowed(wj.cat()),
            tail: None,
            kind: Kind::Declared,
        };
        let yi = ctx.index(y)?;
        let pool = ctx.pre.strict_down_set(yi);
        let members = least_cover(&ctx, yi, &pool, false).expect("the strict down-set covers itself");
        windows.push(wj.describe());
        sizes.push(members.len());
    }
    let growing = sizes.windows(2).all(|p| p[0] < p[1]);
    let infinite = matches!(w.down_set(yv), SetDecl::Infinite { .. });
    let verdict = if growing && infinite {
        Verdict::refuted(Witness::Growth {
            target: format_object(yv),
            windows,
            sizes,
        })
    } else {
        Verdict::inconclusive(
            w.describe(),
            format!(
                "no frontier within {MAX_HORIZON} objects below the window; minimal window-relative sizes {sizes:?}"
            ),
        )
    };
    Ok(FrontierSearch { frontier: None, verdict })
}

/// Chosen standard frontiers, one per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFrontierTower {
    scope: Scope,
    chosen: BTreeMap<String, Vec<String>>,
}

impl StandardFrontierTower {
    /// A tower from explicitly chosen frontiers.
    pub fn new(scope: Scope, chosen: BTreeMap<String, Vec<String>>) -> StandardFrontierTower {
        StandardFrontierTower { scope, chosen }
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn chosen(&self) -> &BTreeMap<String, Vec<String>> {
        &self.chosen
    }

    /// `X_z`: the recorded choice, or on declared windows a fresh search
    /// for objects outside the window.
    pub fn frontier_of(&self, z: &str) -> Result<Vec<String>> {
        if let Some(x) = self.chosen.get(z) {
            return Ok(x.clone());
        }
        if let Scope::Window(w) = &self.scope {
            if let (true, Some(v)) = (w.generator().is_declared(), parse_object(z)) {
                if let Some(x) = self.chosen.get(&format_object(v)) {
                    return Ok(x.clone());
                }
                let wider = w.with_range(w.lo().min(v), w.hi().max(v))?;
                if let Some(f) = declared_search(&wider, &format_object(v))?.frontier {
                    return Ok(f.members);
                }
            }
        }
        Err(Error::TowerUnavailable(format!("no standard frontier recorded for {z}")))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scope": self.scope.describe(),
            "frontiers": self.chosen,
        })
    }
}

/// Left strict local finiteness: a frontier for every object.
#[derive(Clone, Debug)]
pub struct LeftStrictReport {
    pub verdict: Verdict,
    pub searches: Vec<(String, FrontierSearch)>,
    pub tower: Option<StandardFrontierTower>,
}

impl LeftStrictReport {
    pub fn to_json(&self) -> Value {
        let mut per = serde_json::Map::new();
        for (y, s) in &self.searches {
            per.insert(y.clone(), s.to_json());
        }
        json!({
            "verdict": self.verdict,
            "objects": per,
            "tower": self.tower.as_ref().map(StandardFrontierTower::to_json),
        })
    }
}

pub fn check_left_strict(scope: &Scope) -> Result<LeftStrictReport> {
    let mut searches = Vec::new();
    let mut chosen = BTreeMap::new();
    for y in scope.cat().objects() {
        let s = find_standard_frontier(scope, y)?;
        if let Some(f) = &s.frontier {
            chosen.insert(y.clone(), f.members.clone());
        }
        searches.push((y.clone(), s));
    }
    let verdict = if let Some((_, s)) = searches.iter().find(|(_, s)| s.verdict.is_refuted()) {
        s.verdict.clone()
    } else if let Some((_, s)) = searches.iter().find(|(_, s)| s.verdict.is_inconclusive()) {
        s.verdict.clone()
    } else {
        Verdict::certified_with(Witness::Tower { frontiers: chosen.clone() })
    };
    let tower = verdict
        .is_certified()
        .then(|| StandardFrontierTower::new(scope.clone(), chosen));
    Ok(LeftStrictReport { verdict, searches, tower })
}

/// The degree-`n` standard frontier `X_y^(n)`, with exception the union of
/// the `~`-closures of `X_y^(1), ..., X_y^(n-1)`.
pub fn degree_n_frontier(t: &StandardFrontierTower, y: &str, n: usize) -> Result<Frontier> {
    if n == 0 {
        return Err(Error::MalformedFrontier("degree must be positive".into()));
    }
    let mut level: BTreeSet<String> = t.frontier_of(y)?.into_iter().collect();
    let mut earlier: BTreeSet<String> = BTreeSet::new();
    for _ in 1..n {
        earlier.extend(level.iter().cloned());
        let mut next = BTreeSet::new();
        for z in &level {
            next.extend(t.frontier_of(z)?);
        }
        level = next;
    }
    let extra: Vec<String> = level.iter().chain(&earlier).cloned().chain([y.to_string()]).collect();
    let ctx = context(&t.scope, &extra)?;
    let mut members = ctx.indices(&level.into_iter().collect::<Vec<_>>())?;
    members.sort_unstable();
    let earlier_idx = ctx.indices(&earlier.into_iter().collect::<Vec<_>>())?;
    let exception = ctx.pre.saturate(&earlier_idx);
    Ok(Frontier {
        target: y.to_string(),
        members: ctx.names(&members),
        exception: ctx.names(&exception),
    })
}

/// Distance `d(x,y)` computed on a context containing both objects.
pub fn distance_between(scope: &Scope, x: &str, y: &str) -> Result<Option<usize>> {
    let ctx = context(scope, &[x.to_string(), y.to_string()])?;
    Ok(ctx.pre.distance(ctx.index(x)?, ctx.index(y)?))
}
