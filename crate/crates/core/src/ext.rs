//! Extensions of modules built from cocycles, and closure tests.
//!
//! A cocycle assigns to every basis morphism `f: x -> y` a matrix
//! `c_f: Q(x) -> P(y)`. The middle term of the extension is `P(x) + Q(x)`
//! with `f` acting by the block matrix `[[P(f), c_f], [0, Q(f)]]`, which is a
//! module exactly when `c_{g f} = P(g) c_f + c_g Q(f)` and identities have
//! zero blocks. These conditions are linear, so cocycles are sampled from an
//! exactly computed solution space.
//!
//! Extensions are built between left modules. Extensions of right modules
//! are the duals of extensions of left modules, see [`ShortExactSeq::dual`].

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lift::{is_cofinite, is_contrafinite, lift_to_comodule, DeclaredModule, LiftDecision, Tail};
use crate::linalg::{Matrix, Subspace};
use crate::lincat::{module_hom_space, validate_module, Generator, LinCat, Module, Scope, Side, Window};
use crate::scalar::{Field, Scalar};
use crate::verdict::{Verdict, Witness};

/// Cocycle data on one tail: `link` joins the tail to the window and
/// `step` joins consecutive tail objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCocycle {
    pub step: Option<Matrix>,
    pub link: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    sub: DeclaredModule,
    quot: DeclaredModule,
    /// `blocks[a * n + b][l]` is `c` of the `l`-th basis morphism `a -> b`.
    blocks: Vec<Vec<Matrix>>,
    lower: Option<TailCocycle>,
    upper: Option<TailCocycle>,
}

fn left_pair(sub: &DeclaredModule, quot: &DeclaredModule) -> Result<()> {
    if sub.side() != Side::Left || quot.side() != Side::Left {
        return Err(Error::HypothesisNotSatisfied(
            "cocycles join left modules; dualize right modules first".into(),
        ));
    }
    if sub.scope() != quot.scope() {
        return Err(Error::DimensionMismatch("modules over different scopes".into()));
    }
    if sub.lower().is_some() != quot.lower().is_some() || sub.upper().is_some() != quot.upper().is_some() {
        return Err(Error::DimensionMismatch("modules declare different tails".into()));
    }
    Ok(())
}

impl Cocycle {
    pub fn zero(sub: &DeclaredModule, quot: &DeclaredModule) -> Result<Cocycle> {
        left_pair(sub, quot)?;
        let cat = sub.scope().cat();
        let n = cat.len();
        let (p, q) = (sub.left_form(), quot.left_form());
        let f = sub.field();
        let blocks = (0..n * n)
            .map(|k| {
                let (a, b) = (k / n, k % n);
                vec![Matrix::zeros(f, p.dim(b), q.dim(a)); cat.hom_dim(a, b)]
            })
            .collect();
        let chain = matches!(sub.scope(), Scope::Window(w) if *w.generator() == Generator::ZChain);
        // The window object the lower tail maps into.
        let gate = if chain { 0 } else { n.saturating_sub(1) };
        let lower = sub.lower().zip(quot.lower()).map(|(_, tq)| TailCocycle {
            step: chain.then(|| Matrix::zeros(f, sub.lower().map_or(0, |t| t.dim), tq.dim)),
            link: Matrix::zeros(f, p.dim(gate), tq.dim),
        });
        let upper = sub.upper().zip(quot.upper()).map(|(tp, tq)| TailCocycle {
            step: Some(Matrix::zeros(f, tp.dim, tq.dim)),
            link: Matrix::zeros(f, tp.dim, q.dim(n - 1)),
        });
        Ok(Cocycle {
            sub: sub.clone(),
            quot: quot.clone(),
            blocks,
            lower,
            upper,
        })
    }

    /// Blocks keyed by the hom pair; missing pairs are zero.
    pub fn new(
        sub: &DeclaredModule,
        quot: &DeclaredModule,
        blocks: impl IntoIterator<Item = ((usize, usize), Vec<Matrix>)>,
        lower: Option<TailCocycle>,
        upper: Option<TailCocycle>,
    ) -> Result<Cocycle> {
        let mut c = Cocycle::zero(sub, quot)?;
        let n = sub.scope().cat().len();
        for ((a, b), mats) in blocks {
            let want = &c.blocks[a * n + b];
            if mats.len() != want.len() || mats.iter().zip(want).any(|(m, w)| m.shape() != w.shape()) {
                return Err(Error::DimensionMismatch(format!("cocycle blocks for ({a}, {b}) have the wrong shape")));
            }
            c.blocks[a * n + b] = mats;
        }
        let fits = |given: &Option<TailCocycle>, want: &Option<TailCocycle>| match (given, want) {
            (None, None) => true,
            (Some(g), Some(w)) => {
                g.link.shape() == w.link.shape() && g.step.as_ref().map(Matrix::shape) == w.step.as_ref().map(Matrix::shape)
            }
            _ => false,
        };
        if !fits(&lower, &c.lower) || !fits(&upper, &c.upper) {
            return Err(Error::DimensionMismatch("tail cocycle does not fit the declared tails".into()));
        }
        c.lower = lower;
        c.upper = upper;
        Ok(c)
    }

    pub fn sub(&self) -> &DeclaredModule {
        &self.sub
    }

    pub fn quot(&self) -> &DeclaredModule {
        &self.quot
    }

    pub fn block(&self, x: usize, y: usize) -> &[Matrix] {
        &self.blocks[x * self.sub.scope().cat().len() + y]
    }

    pub fn is_zero(&self) -> bool {
        let tz = |t: &Option<TailCocycle>| {
            t.as_ref()
                .map_or(true, |t| t.link.is_zero() && t.step.as_ref().map_or(true, Matrix::is_zero))
        };
        self.blocks.iter().flatten().all(Matrix::is_zero) && tz(&self.lower) && tz(&self.upper)
    }

    /// The middle term, without checking the cocycle condition.
    fn middle(&self) -> Result<DeclaredModule> {
        let cat = self.sub.scope().cat();
        let n = cat.len();
        let (p, q) = (self.sub.left_form(), self.quot.left_form());
        let f = self.sub.field();
        let dims: Vec<usize> = (0..n).map(|x| p.dim(x) + q.dim(x)).collect();
        let mut acting = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mats = (0..cat.hom_dim(a, b))
                    .map(|l| {
                        triangular(
                            f,
                            &p.acting_action(a, b)[l],
                            &self.blocks[a * n + b][l],
                            &q.acting_action(a, b)[l],
                        )
                    })
                    .collect();
                acting.push(mats);
            }
        }
        let mid = Module::from_acting(Side::Left, f, dims, acting);
        let tail = |tp: Option<&Tail>, tq: Option<&Tail>, c: &Option<TailCocycle>| -> Option<Tail> {
            let (tp, tq, c) = (tp?, tq?, c.as_ref()?);
            Some(Tail {
                dim: tp.dim + tq.dim,
                step: match (&tp.step, &tq.step, &c.step) {
                    (Some(sp), Some(sq), Some(cs)) => Some(triangular(f, sp, cs, sq)),
                    _ => None,
                },
                link: triangular(f, &tp.link, &c.link, &tq.link),
            })
        };
        let lower = tail(self.sub.lower(), self.quot.lower(), &self.lower);
        let upper = tail(self.sub.upper(), self.quot.upper(), &self.upper);
        match self.sub.scope() {
            Scope::Finite(c) => Ok(DeclaredModule::finite(c, mid)),
            Scope::Window(w) => DeclaredModule::new(w, mid, lower, upper),
        }
    }

    pub fn to_json(&self) -> Value {
        let cat = self.sub.scope().cat();
        let n = cat.len();
        let mut blocks = serde_json::Map::new();
        for a in 0..n {
            for b in 0..n {
                let mats = &self.blocks[a * n + b];
                if mats.iter().any(|m| !m.is_zero()) {
                    blocks.insert(
                        format!("{}|{}", cat.object(a), cat.object(b)),
                        Value::Array(mats.iter().map(Matrix::to_json).collect()),
                    );
                }
            }
        }
        let tail = |t: &Option<TailCocycle>| {
            t.as_ref().map_or(Value::Null, |t| {
                json!({ "link": t.link.to_json(), "step": t.step.as_ref().map(Matrix::to_json) })
            })
        };
        json!({ "blocks": blocks, "lower": tail(&self.lower), "upper": tail(&self.upper) })
    }
}

fn triangular(f: Field, p: &Matrix, c: &Matrix, q: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(f, p.rows() + q.rows(), p.cols() + q.cols());
    m.paste(0, 0, p);
    m.paste(0, p.cols(), c);
    m.paste(p.rows(), p.cols(), q);
    m
}

/// The cocycle condition, checked on a materialization that shows every
/// tail relation.
pub fn check_cocycle(c: &Cocycle) -> Result<Verdict> {
    let mid = c.middle()?;
    let mat = mid.materialize(2)?;
    validate_module(mat.scope.cat(), &mat.module)
}

/// `0 -> sub -> mid -> quot -> 0`, with the maps given on window objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSeq {
    pub sub: DeclaredModule,
    pub mid: DeclaredModule,
    pub quot: DeclaredModule,
    pub inject: Vec<Matrix>,
    pub surject: Vec<Matrix>,
}

pub fn build_extension(c: &Cocycle) -> Result<ShortExactSeq> {
    let v = check_cocycle(c)?;
    if !v.is_certified() {
        return Err(Error::CocycleViolated(v.to_string()));
    }
    let mid = c.middle()?;
    let f = c.sub.field();
    let (p, q) = (c.sub.left_form(), c.quot.left_form());
    let n = p.len();
    let inject = (0..n)
        .map(|x| {
            let mut m = Matrix::zeros(f, p.dim(x) + q.dim(x), p.dim(x));
            m.paste(0, 0, &Matrix::identity(f, p.dim(x)));
            m
        })
        .collect();
    let surject = (0..n)
        .map(|x| {
            let mut m = Matrix::zeros(f, q.dim(x), p.dim(x) + q.dim(x));
            m.paste(0, p.dim(x), &Matrix::identity(f, q.dim(x)));
            m
        })
        .collect();
    Ok(ShortExactSeq {
        sub: c.sub.clone(),
        mid,
        quot: c.quot.clone(),
        inject,
        surject,
    })
}

impl ShortExactSeq {
    /// Exactness at every window object and compatibility of both maps with
    /// the actions.
    pub fn is_exact(&self) -> bool {
        let (p, t, q) = (self.sub.module(), self.mid.module(), self.quot.module());
        let n = p.len();
        let objectwise = (0..n).all(|x| {
            let (i, s) = (&self.inject[x], &self.surject[x]);
            i.rank() == p.dim(x) && s.rank() == q.dim(x) && (s * i).is_zero() && i.image() == s.kernel()
        });
        let morphism = |src: &Module, dst: &Module, maps: &[Matrix]| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    src.acting_action(a, b)
                        .iter()
                        .zip(dst.acting_action(a, b))
                        .all(|(u, v)| &maps[b] * u == v * &maps[a])
                })
            })
        };
        objectwise && morphism(&p, &t, &self.inject) && morphism(&t, &q, &self.surject)
    }

    /// Whether the injection has a retraction on the window.
    pub fn is_split(&self) -> Result<bool> {
        let cat = self.sub.scope().cat();
        let (p, t) = (self.sub.module(), self.mid.module());
        let hom = module_hom_space(cat, &t, &p)?;
        let f = p.field();
        let n = p.len();
        let targets: usize = (0..n).map(|x| p.dim(x) * p.dim(x)).sum();
        let mut cols = Vec::new();
        for v in hom.vectors() {
            let mut out = Vec::with_capacity(targets);
            let mut off = 0;
            for x in 0..n {
                let r = Matrix::from_fn(f, p.dim(x), t.dim(x), |i, j| v[off + i * t.dim(x) + j].clone());
                off += p.dim(x) * t.dim(x);
                out.extend((&r * &self.inject[x]).entries().iter().cloned());
            }
            cols.push(out);
        }
        let mut id = Vec::with_capacity(targets);
        for x in 0..n {
            id.extend(Matrix::identity(f, p.dim(x)).entries().iter().cloned());
        }
        if cols.is_empty() {
            return Ok(id.is_empty());
        }
        let a = Matrix::from_fn(f, targets, cols.len(), |r, c| cols[c][r].clone());
        Ok(a.solve(&Matrix::column(f, &id)).is_ok())
    }

    /// The dual sequence `0 -> quot* -> mid* -> sub* -> 0`.
    pub fn dual(&self) -> ShortExactSeq {
        ShortExactSeq {
            sub: self.quot.transpose_dual(),
            mid: self.mid.transpose_dual(),
            quot: self.sub.transpose_dual(),
            inject: self.surject.iter().map(Matrix::transpose).collect(),
            surject: self.inject.iter().map(Matrix::transpose).collect(),
        }
    }
}

/// The space of cocycles between two left modules, including constant tail
/// data.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    sub: DeclaredModule,
    quot: DeclaredModule,
    cat: LinCat,
    offsets: BTreeMap<(usize, usize), usize>,
    window_offset: usize,
    space: Subspace,
}

const COCYCLE_DEPTH: usize = 2;

pub fn cocycle_space(sub: &DeclaredModule, quot: &DeclaredModule) -> Result<CocycleSpace> {
    left_pair(sub, quot)?;
    let (mp, mq) = (sub.materialize(COCYCLE_DEPTH)?, quot.materialize(COCYCLE_DEPTH)?);
    let cat = mp.scope.cat().clone();
    let (p, q) = (&mp.module, &mq.module);
    let n = cat.len();
    let f = cat.field();
    let mut offsets = BTreeMap::new();
    let mut total = 0;
    for a in 0..n {
        for b in 0..n {
            offsets.insert((a, b), total);
            total += cat.hom_dim(a, b) * p.dim(b) * q.dim(a);
        }
    }
    let var = |a: usize, b: usize, l: usize, r: usize, s: usize| offsets[&(a, b)] + (l * p.dim(b) + r) * q.dim(a) + s;
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for a in 0..n {
        // Identities have zero blocks.
        for r in 0..p.dim(a) {
            for s in 0..q.dim(a) {
                let row: Vec<(usize, Scalar)> = cat
                    .identity(a)
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(l, e)| (var(a, a, l, r, s), e.clone()))
                    .collect();
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    for a in 0..n {
        for z in 0..n {
            if cat.hom_dim(a, z) == 0 {
                continue;
            }
            for b in 0..n {
                if cat.hom_dim(z, b) == 0 || p.dim(b) == 0 || q.dim(a) == 0 {
                    continue;
                }
                for i in 0..cat.hom_dim(z, b) {
                    for j in 0..cat.hom_dim(a, z) {
                        let comp = cat.compose_basis(a, z, b, i, j);
                        let pg = &p.acting_action(z, b)[i];
                        let qf = &q.acting_action(a, z)[j];
                        for r in 0..p.dim(b) {
                            for s in 0..q.dim(a) {
                                let mut row = Vec::new();
                                for (l, e) in comp.iter().enumerate() {
                                    if !e.is_zero() {
                                        row.push((var(a, b, l, r, s), e.clone()));
                                    }
                                }
                                for u in 0..p.dim(z) {
                                    let e = pg.get(r, u);
                                    if !e.is_zero() {
                                        row.push((var(a, z, j, u, s), -e));
                                    }
                                }
                                for u in 0..q.dim(z) {
                                    let e = qf.get(u, s);
                                    if !e.is_zero() {
                                        row.push((var(z, b, i, r, u), -e));
                                    }
                                }
                                if !row.is_empty() {
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // Tail data is shared by all tail objects.
    let tie = |rows: &mut Vec<Vec<(usize, Scalar)>>, (a0, b0): (usize, usize), (a1, b1): (usize, usize)| {
        for l in 0..cat.hom_dim(a0, b0) {
            for r in 0..p.dim(b0) {
                for s in 0..q.dim(a0) {
                    rows.push(vec![(var(a0, b0, l, r, s), f.one()), (var(a1, b1, l, r, s), -f.one())]);
                }
            }
        }
    };
    // Chains need no ties at this depth: each tail has a single step.
    if let Scope::Window(w) = sub.scope() {
        if *w.generator() == Generator::ZNeg && sub.lower().is_some() {
            tie(&mut rows, (0, n - 1), (1, n - 1));
        }
    }
    let mut m = Matrix::zeros(f, rows.len(), total);
    for (i, row) in rows.iter().enumerate() {
        for (c, v) in row {
            let cur = m.get(i, *c).clone();
            m.set(i, *c, &cur + v);
        }
    }
    let space = m.kernel();
    Ok(CocycleSpace {
        sub: sub.clone(),
        quot: quot.clone(),
        cat,
        offsets,
        window_offset: mp.window_offset,
        space,
    })
}

impl CocycleSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The cocycle with coordinates `v` in the materialized layout.
    fn element(&self, v: &[Scalar]) -> Result<Cocycle> {
        let f = self.sub.field();
        let (ps, qs) = (
            self.sub.materialize(COCYCLE_DEPTH)?.module,
            self.quot.materialize(COCYCLE_DEPTH)?.module,
        );
        let block = |a: usize, b: usize, l: usize| {
            let off = self.offsets[&(a, b)] + l * ps.dim(b) * qs.dim(a);
            Matrix::from_fn(f, ps.dim(b), qs.dim(a), |r, s| v[off + r * qs.dim(a) + s].clone())
        };
        let w = self.window_offset;
        let len = self.sub.scope().cat().len();
        let mut blocks = Vec::new();
        for a in 0..len {
            for b in 0..len {
                let mats = (0..self.cat.hom_dim(w + a, w + b)).map(|l| block(w + a, w + b, l)).collect();
                blocks.push(((a, b), mats));
            }
        }
        let zneg = matches!(self.sub.scope(), Scope::Window(win) if *win.generator() == Generator::ZNeg);
        let lower = self.sub.lower().map(|_| {
            if zneg {
                TailCocycle {
                    step: None,
                    link: block(0, self.cat.len() - 1, 0),
                }
            } else {
                TailCocycle {
                    step: Some(block(0, 1, 0)),
                    link: block(w - 1, w, 0),
                }
            }
        });
        let upper = self.sub.upper().map(|_| TailCocycle {
            step: Some(block(w + len, w + len + 1, 0)),
            link: block(w + len - 1, w + len, 0),
        });
        Cocycle::new(&self.sub, &self.quot, blocks, lower, upper)
    }

    /// A uniformly random cocycle over a finite field.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Cocycle> {
        let f = self.sub.field();
        let mut v = vec![f.zero(); self.space.ambient()];
        for basis in self.space.vectors() {
            let t = f.random(rng);
            if t.is_zero() {
                continue;
            }
            for (acc, e) in v.iter_mut().zip(&basis) {
                *acc = &*acc + &(&t * e);
            }
        }
        self.element(&v)
    }

    /// The cocycles of a basis of the space.
    pub fn basis(&self) -> Result<Vec<Cocycle>> {
        self.space.vectors().iter().map(|v| self.element(v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureKind {
    ContrafiniteLeft,
    CofiniteRight,
    ComoduleImageRight,
}

impl ClosureKind {
    pub fn parse(s: &str) -> Option<ClosureKind> {
        match s {
            "contrafinite-left" => Some(ClosureKind::ContrafiniteLeft),
            "cofinite-right" => Some(ClosureKind::CofiniteRight),
            "comodule-image-right" => Some(ClosureKind::ComoduleImageRight),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClosureKind::ContrafiniteLeft => "contrafinite-left",
            ClosureKind::CofiniteRight => "cofinite-right",
            ClosureKind::ComoduleImageRight => "comodule-image-right",
        }
    }

    fn holds(self, d: &DeclaredModule) -> Result<Verdict> {
        match self {
            ClosureKind::ContrafiniteLeft => is_contrafinite(d),
            ClosureKind::CofiniteRight => is_cofinite(d),
            ClosureKind::ComoduleImageRight => {
                if d.side() != Side::Right {
                    return Err(Error::HypothesisNotSatisfied("comodule images are taken among right modules".into()));
                }
                Ok(match lift_to_comodule(d)?.decision {
                    LiftDecision::Liftable { sets } => Verdict::certified_with(Witness::Supports { sets }),
                    LiftDecision::NotLiftable { object, reason } => Verdict::refuted(Witness::Object { object, reason }),
                    LiftDecision::WindowLeak { objects } => {
                        Verdict::inconclusive(d.scope().describe(), format!("window leak at {}", objects.join(", ")))
                    }
                })
            }
        }
    }
}

/// Whether the middle term inherits the property from both ends.
pub fn closure_test(kind: ClosureKind, s: &ShortExactSeq) -> Result<Verdict> {
    for (name, end) in [("sub", &s.sub), ("quotient", &s.quot)] {
        let v = kind.holds(end)?;
        if !v.is_certified() {
            return Err(Error::HypothesisNotSatisfied(format!("{name} is not {}: {v}", kind.name())));
        }
    }
    kind.holds(&s.mid)
}

/// Direct sums, kernels of random morphisms and quotients by random
/// submodules of comodule images are comodule images again.
pub fn sub_quot_sum_closure_test(cat: &LinCat, family: &[Module], trials: usize, seed: u64) -> Result<Verdict> {
    if family.is_empty() {
        return Err(Error::ZeroInput);
    }
    let liftable = |m: &Module| -> Result<bool> { Ok(lift_to_comodule(&DeclaredModule::finite(cat, m.clone()))?.is_liftable()) };
    for m in family {
        if !liftable(m)? {
            return Err(Error::HypothesisNotSatisfied("family member is not a comodule image".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = cat.field();
    let (mut passed, mut failed) = (0, 0);
    for t in 0..trials {
        let m = &family[rng.gen_range(0..family.len())];
        let other = &family[rng.gen_range(0..family.len())];
        let candidate = match t % 3 {
            0 => m.direct_sum(other),
            1 => {
                let hom = module_hom_space(cat, m, other)?;
                let v = random_vector(&hom, &mut rng);
                let mut off = 0;
                let kernels: Vec<Subspace> = (0..m.len())
                    .map(|x| {
                        let (r, c) = (other.dim(x), m.dim(x));
                        let phi = Matrix::from_fn(f, r, c, |i, j| v[off + i * c + j].clone());
                        off += r * c;
                        phi.kernel()
                    })
                    .collect();
                m.submodule(&kernels)?
            }
            _ => {
                let seeds: Vec<Subspace> = (0..m.len())
                    .map(|x| {
                        let d = m.dim(x);
                        if d == 0 || rng.gen_bool(0.5) {
                            return Subspace::zero(f, d);
                        }
                        let v: Vec<Scalar> = (0..d).map(|_| f.random(&mut rng)).collect();
                        Subspace::span(f, d, &[v])
                    })
                    .collect();
                m.quotient(&m.generated(&seeds))?
            }
        };
        if liftable(&candidate)? {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    let witness = Witness::Trials { passed, failed, seed };
    Ok(if failed == 0 {
        Verdict::certified_with(witness)
    } else {
        Verdict::refuted(witness)
    })
}

fn random_vector<R: Rng + ?Sized>(s: &Subspace, rng: &mut R) -> Vec<Scalar> {
    let f = s.field();
    let mut v = vec![f.zero(); s.ambient()];
    for b in s.vectors() {
        let t = f.random(rng);
        for (acc, e) in v.iter_mut().zip(&b) {
            *acc = &*acc + &(&t * e);
        }
    }
    v
}

/// Submodules generated by the first `j` generators, for a generating set
/// chosen greedily from the standard basis in object order. The last term
/// is the whole module.
pub fn locally_finite_filtration(m: &Module) -> Vec<Vec<Subspace>> {
    let f = m.field();
    let n = m.len();
    let mut current: Vec<Subspace> = (0..n).map(|x| Subspace::zero(f, m.dim(x))).collect();
    let mut chain = Vec::new();
    for x in 0..n {
        for i in 0..m.dim(x) {
            let mut e = vec![f.zero(); m.dim(x)];
            e[i] = f.one();
            if current[x].contains_vector(&e) {
                continue;
            }
            let mut seeds = current.clone();
            seeds[x] = seeds[x].sum(&Subspace::span(f, m.dim(x), &[e])).expect("same ambient");
            current = m.generated(&seeds);
            chain.push(current.clone());
        }
    }
    chain
}

/// A random left module on a window: on the integer chain its lower tail
/// steps are nilpotent, so it is contrafinite; on the negative integers its
/// tail maps to zero, so its dual is a comodule image.
pub fn random_declared<R: Rng + ?Sized>(w: &Window, rng: &mut R, max_dim: usize) -> Result<DeclaredModule> {
    let f = w.field();
    let n = w.cat().len();
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_dim)).collect();
    let random = |rng: &mut R, r: usize, c: usize| Matrix::from_fn(f, r, c, |_, _| f.random(rng));
    match w.generator() {
        Generator::ZChain => {
            let steps: Vec<Matrix> = (0..n - 1).map(|i| random(rng, dims[i + 1], dims[i])).collect();
            let m = crate::gallery::chain_module(w.cat(), &dims, &steps);
            let t = rng.gen_range(0..=max_dim.min(2));
            let step = Matrix::from_fn(f, t, t, |i, j| if j > i { f.random(rng) } else { f.zero() });
            let lower = Tail {
                dim: t,
                step: Some(step),
                link: random(rng, dims[0], t),
            };
            let u = rng.gen_range(0..=1);
            let upper = Tail {
                dim: u,
                step: Some(random(rng, u, u)),
                link: random(rng, u, dims[n - 1]),
            };
            DeclaredModule::new(w, m, Some(lower), Some(upper))
        }
        Generator::ZNeg => {
            let links: Vec<Matrix> = (0..n - 1).map(|i| random(rng, dims[n - 1], dims[i])).collect();
            let m = crate::gallery::zneg_module(w.cat(), &dims, &links);
            let t = rng.gen_range(0..=1);
            let lower = Tail {
                dim: t,
                step: None,
                link: Matrix::zeros(f, dims[n - 1], t),
            };
            DeclaredModule::new(w, m, Some(lower), None)
        }
        Generator::Undeclared { .. } => Err(Error::BadWindow("random modules need a declared generator".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub kind: ClosureKind,
    pub scope: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub non_split: usize,
    /// Trials where contrafiniteness of the left middle term and
    /// cofiniteness of its dual agreed.
    pub mirror_agreements: usize,
    pub counterexample: Option<Value>,
}

impl TrialReport {
    pub fn verdict(&self) -> Verdict {
        let w = Witness::Trials {
            passed: self.passed,
            failed: self.failed,
            seed: self.seed,
        };
        if self.failed == 0 {
            Verdict::certified_with(w)
        } else {
            Verdict::refuted(w)
        }
    }
}

/// Random extensions on windows of `generator` with up to `max_half`
/// objects on either side of the centre (integer chain) or up to that many
/// objects (negative integers), each checked by [`closure_test`].
pub fn closure_trials(
    kind: ClosureKind,
    generator: Generator,
    field: Field,
    trials: usize,
    seed: u64,
    max_half: i64,
) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport {
        kind,
        scope: generator.name().into(),
        seed,
        trials,
        passed: 0,
        failed: 0,
        non_split: 0,
        mirror_agreements: 0,
        counterexample: None,
    };
    for _ in 0..trials {
        let h = rng.gen_range(1..=max_half);
        let w = match generator {
            Generator::ZChain => Window::new(Generator::ZChain, field, -h, h)?,
            _ => Window::new(generator.clone(), field, -h - 1, -1)?,
        };
        let (p, q) = (random_declared(&w, &mut rng, 2)?, random_declared(&w, &mut rng, 2)?);
        let space = cocycle_space(&p, &q)?;
        let c = space.sample(&mut rng)?;
        let left = build_extension(&c)?;
        if !left.is_split()? {
            report.non_split += 1;
        }
        let mirror = is_contrafinite(&left.mid)?.label() == is_cofinite(&left.mid.transpose_dual())?.label();
        if mirror {
            report.mirror_agreements += 1;
        }
        let s = match kind {
            ClosureKind::ContrafiniteLeft => left,
            _ => left.dual(),
        };
        let v = closure_test(kind, &s)?;
        if v.is_certified() {
            report.passed += 1;
        } else {
            report.failed += 1;
            if report.counterexample.is_none() {
                report.counterexample = Some(json!({
                    "window": w.describe(),
                    "cocycle": c.to_json(),
                    "verdict": v,
                }));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::lincat::representable;

    fn simple(cat: &LinCat, x: usize) -> Module {
        let dims: Vec<usize> = (0..cat.len()).map(|y| usize::from(y == x)).collect();
        let mut action = BTreeMap::new();
        action.insert((x, x), vec![Matrix::identity(cat.field(), 1)]);
        Module::new(cat, Side::Left, dims, action).unwrap()
    }

    #[test]
    fn zero_cocycle_splits() {
        let f = Field::f2();
        let a2 = gallery::chain(f, 2);
        let (p, q) = (
            DeclaredModule::finite(&a2, simple(&a2, 1)),
            DeclaredModule::finite(&a2, simple(&a2, 0)),
        );
        let s = build_extension(&Cocycle::zero(&p, &q).unwrap()).unwrap();
        assert!(s.is_exact());
        assert!(s.is_split().unwrap());
        assert_eq!(s.mid.module(), p.module().direct_sum(&q.module()));
    }

    #[test]
    fn generator_block_gives_non_split() {
        let f = Field::f2();
        let a2 = gallery::chain(f, 2);
        let (p, q) = (
            DeclaredModule::finite(&a2, simple(&a2, 1)),
            DeclaredModule::finite(&a2, simple(&a2, 0)),
        );
        let space = cocycle_space(&p, &q).unwrap();
        assert_eq!(space.dim(), 1);
        let c = Cocycle::new(&p, &q, [((0, 1), vec![Matrix::identity(f, 1)])], None, None).unwrap();
        let s = build_extension(&c).unwrap();
        assert!(s.is_exact());
        assert!(!s.is_split().unwrap());
        assert_eq!(s.mid.module(), representable(&a2, Side::Left, 0));
    }

    #[test]
    fn violated_cocycle() {
        let f = Field::f2();
        let a1 = gallery::chain(f, 1);
        let p = DeclaredModule::finite(&a1, simple(&a1, 0));
        let c = Cocycle::new(&p, &p, [((0, 0), vec![Matrix::identity(f, 1)])], None, None).unwrap();
        assert!(matches!(build_extension(&c), Err(Error::CocycleViolated(_))));
    }

    #[test]
    fn sampled_cocycles_are_valid() {
        let f = Field::f2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for generator in [Generator::ZChain, Generator::ZNeg] {
            let w = match generator {
                Generator::ZChain => Window::new(generator, f, -2, 1).unwrap(),
                _ => Window::new(generator, f, -4, -1).unwrap(),
            };
            for _ in 0..10 {
                let p = random_declared(&w, &mut rng, 2).unwrap();
                let q = random_declared(&w, &mut rng, 2).unwrap();
                let c = cocycle_space(&p, &q).unwrap().sample(&mut rng).unwrap();
                let s = build_extension(&c).unwrap();
                assert!(s.is_exact());
                assert!(s.dual().is_exact());
            }
        }
    }

    #[test]
    fn contrafinite_closure() {
        let r = closure_trials(ClosureKind::ContrafiniteLeft, Generator::ZChain, Field::f2(), 20, 11, 3).unwrap();
        assert_eq!(r.failed, 0);
        assert_eq!(r.mirror_agreements, 20);
        let r = closure_trials(ClosureKind::CofiniteRight, Generator::ZChain, Field::f2(), 10, 12, 3).unwrap();
        assert_eq!(r.failed, 0);
    }

    #[test]
    fn comodule_images_on_negative_integers() {
        let f = Field::f2();
        let w = Window::new(Generator::ZNeg, f, -3, -1).unwrap();
        let z0 = Matrix::zeros(f, 0, 1);
        // Left forms: k at -1 only, and k at every object below -1.
        let at_top = gallery::zneg_module(w.cat(), &[0, 0, 1], &[Matrix::zeros(f, 1, 0), Matrix::zeros(f, 1, 0)]);
        let below = gallery::zneg_module(w.cat(), &[1, 1, 0], &[z0.clone(), z0.clone()]);
        let p = DeclaredModule::new(
            &w,
            at_top,
            Some(Tail {
                dim: 0,
                step: None,
                link: Matrix::zeros(f, 1, 0),
            }),
            None,
        )
        .unwrap();
        let q = DeclaredModule::new(
            &w,
            below,
            Some(Tail {
                dim: 1,
                step: None,
                link: Matrix::zeros(f, 0, 1),
            }),
            None,
        )
        .unwrap();
        let one = Matrix::identity(f, 1);
        let c = Cocycle::new(
            &p,
            &q,
            [((0, 2), vec![one.clone()]), ((1, 2), vec![one.clone()])],
            Some(TailCocycle {
                step: None,
                link: one,
            }),
            None,
        )
        .unwrap();
        let s = build_extension(&c).unwrap().dual();
        let v = closure_test(ClosureKind::ComoduleImageRight, &s).unwrap();
        assert!(v.is_refuted(), "{v}");
    }

    #[test]
    fn filtrations() {
        let f = Field::f2();
        let a3 = gallery::chain(f, 3);
        for y in 0..3 {
            let r = representable(&a3, Side::Left, y);
            let chain = locally_finite_filtration(&r);
            assert_eq!(chain.len(), 1);
        }
        let sum = simple(&a3, 0).direct_sum(&simple(&a3, 1)).direct_sum(&simple(&a3, 2));
        assert_eq!(locally_finite_filtration(&sum).len(), 3);
    }

    #[test]
    fn sums_subs_quotients() {
        let f = Field::f2();
        let a3 = gallery::chain(f, 3);
        let family: Vec<Module> = (0..3).map(|y| representable(&a3, Side::Left, y)).collect();
        assert!(sub_quot_sum_closure_test(&a3, &family, 9, 5).unwrap().is_certified());
    }
}
