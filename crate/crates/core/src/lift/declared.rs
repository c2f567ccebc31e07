//! Modules on a window together with declared data outside it.
//!
//! A tail describes every object beyond one side of the window: all of them
//! carry a space of the same dimension, consecutive tail objects are joined
//! by the same `step` map (integer chain) or every tail object maps to `-1`
//! by the same `link` (negative integers), and `link` joins the tail to the
//! window. A side without a tail is undeclared.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gallery;
use crate::linalg::{Matrix, Subspace};
use crate::lincat::{module_from_json, module_to_json, Generator, LinCat, Module, Scope, Side, Window};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tail {
    pub dim: usize,
    pub step: Option<Matrix>,
    pub link: Matrix,
}

impl Tail {
    /// A tail of zero spaces.
    pub fn zero(field: Field, gateway_dim: usize, chain: bool, below: bool) -> Tail {
        let link = if below {
            Matrix::zeros(field, gateway_dim, 0)
        } else {
            Matrix::zeros(field, 0, gateway_dim)
        };
        Tail {
            dim: 0,
            step: chain.then(|| Matrix::zeros(field, 0, 0)),
            link,
        }
    }

    fn transposed(&self) -> Tail {
        Tail {
            dim: self.dim,
            step: self.step.as_ref().map(Matrix::transpose),
            link: self.link.transpose(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredModule {
    scope: Scope,
    side: Side,
    /// The module in left orientation: itself when left, its componentwise
    /// dual when right. Tails are stored in the same orientation.
    left: Module,
    lower: Option<Tail>,
    upper: Option<Tail>,
}

impl DeclaredModule {
    /// A module over a finite category: nothing lies outside.
    pub fn finite(cat: &LinCat, m: Module) -> DeclaredModule {
        let left = match m.side() {
            Side::Left => m.clone(),
            Side::Right => m.transpose_dual(),
        };
        DeclaredModule {
            scope: Scope::Finite(cat.clone()),
            side: m.side(),
            left,
            lower: None,
            upper: None,
        }
    }

    /// A module on a window with optional tails, given in the orientation of
    /// the module: for a right module the maps run the other way and have
    /// transposed shapes.
    pub fn new(window: &Window, m: Module, lower: Option<Tail>, upper: Option<Tail>) -> Result<DeclaredModule> {
        let side = m.side();
        let flip = |t: Option<Tail>| match side {
            Side::Left => t,
            Side::Right => t.map(|t| t.transposed()),
        };
        let left = match side {
            Side::Left => m,
            Side::Right => m.transpose_dual(),
        };
        let (lower, upper) = (flip(lower), flip(upper));
        let n = window.cat().len();
        let field = window.field();
        let check = |t: &Tail, shape: (usize, usize), chain: bool| -> Result<()> {
            if t.link.shape() != shape {
                return Err(Error::DimensionMismatch(format!(
                    "tail link has shape {:?}, expected {shape:?}",
                    t.link.shape()
                )));
            }
            match (&t.step, chain) {
                (Some(s), true) if s.shape() == (t.dim, t.dim) => Ok(()),
                (None, false) => Ok(()),
                _ => Err(Error::DimensionMismatch("tail step does not fit the generator".into())),
            }
        };
        match window.generator() {
            Generator::ZChain => {
                if let Some(t) = &lower {
                    check(t, (left.dim(0), t.dim), true)?;
                }
                if let Some(t) = &upper {
                    check(t, (t.dim, left.dim(n - 1)), true)?;
                }
            }
            Generator::ZNeg => {
                if window.hi() != -1 {
                    return Err(Error::BadWindow(format!(
                        "{}: declared modules need the window to end at -1",
                        window.describe()
                    )));
                }
                if upper.is_some() {
                    return Err(Error::BadWindow("nothing lies above -1".into()));
                }
                if let Some(t) = &lower {
                    check(t, (left.dim(n - 1), t.dim), false)?;
                }
            }
            Generator::Undeclared { .. } => {
                if lower.is_some() || upper.is_some() {
                    return Err(Error::BadWindow("tails need a declared generator".into()));
                }
            }
        }
        if left.field() != field {
            return Err(Error::FieldMismatch(left.field(), field));
        }
        Ok(DeclaredModule {
            scope: Scope::Window(window.clone()),
            side,
            left,
            lower,
            upper,
        })
    }

    /// A window module with no declarations on either side.
    pub fn bare(window: &Window, m: Module) -> Result<DeclaredModule> {
        DeclaredModule::new(window, m, None, None)
    }

    /// Read a module body as written by [`module_to_json`] with optional
    /// `lower` and `upper` tails, each `{"dim", "step", "link"}` in the
    /// orientation of the module.
    pub fn from_json(window: &Window, v: &Value) -> Result<DeclaredModule> {
        let m = module_from_json(window.cat(), v)?;
        let n = m.len();
        let field = window.field();
        let chain = matches!(window.generator(), Generator::ZChain);
        let right = m.side() == Side::Right;
        let tail = |key: &str, gateway: usize, below: bool| -> Result<Option<Tail>> {
            let Some(t) = v.get(key) else { return Ok(None) };
            let dim = t
                .get("dim")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("{key} tail needs a dimension")))? as usize;
            let g = m.dim(gateway);
            let mut shape = if below { (g, dim) } else { (dim, g) };
            if right {
                shape = (shape.1, shape.0);
            }
            let link = Matrix::from_json(field, shape, t.get("link").unwrap_or(&Value::Null))?;
            let step = match t.get("step") {
                Some(s) if chain => Some(Matrix::from_json(field, (dim, dim), s)?),
                None if chain => return Err(Error::Parse(format!("{key} tail needs a step map"))),
                _ => None,
            };
            Ok(Some(Tail { dim, step, link }))
        };
        let lower = tail("lower", if chain { 0 } else { n.saturating_sub(1) }, true)?;
        let upper = tail("upper", n.saturating_sub(1), false)?;
        DeclaredModule::new(window, m, lower, upper)
    }

    /// The module body with its tails, in the module's orientation.
    pub fn to_json(&self) -> Value {
        let mut v = module_to_json(self.scope.cat(), &self.module());
        let own = |t: &Tail| match self.side {
            Side::Left => t.clone(),
            Side::Right => t.transposed(),
        };
        if let Value::Object(map) = &mut v {
            for (key, t) in [("lower", &self.lower), ("upper", &self.upper)] {
                if let Some(t) = t {
                    let t = own(t);
                    map.insert(
                        key.into(),
                        json!({
                            "dim": t.dim,
                            "step": t.step.as_ref().map(Matrix::to_json),
                            "link": t.link.to_json(),
                        }),
                    );
                }
            }
        }
        v
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn lower(&self) -> Option<&Tail> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&Tail> {
        self.upper.as_ref()
    }

    /// The module on the window itself.
    pub fn module(&self) -> Module {
        match self.side {
            Side::Left => self.left.clone(),
            Side::Right => self.left.transpose_dual(),
        }
    }

    pub fn left_form(&self) -> &Module {
        &self.left
    }

    pub fn total_dim(&self) -> usize {
        self.left.total_dim() + self.lower.as_ref().map_or(0, |t| t.dim) + self.upper.as_ref().map_or(0, |t| t.dim)
    }

    /// Componentwise dual, tails included.
    pub fn transpose_dual(&self) -> DeclaredModule {
        DeclaredModule {
            side: self.side.flip(),
            ..self.clone()
        }
    }

    /// Materialization depth that exposes the eventual behaviour of every
    /// tail.
    pub fn depth(&self) -> usize {
        let d = |t: &Option<Tail>| t.as_ref().map_or(0, |t| t.dim);
        d(&self.lower).max(d(&self.upper)) + 2
    }

    /// The module on the window extended by `depth` tail objects on every
    /// declared side, in this module's orientation.
    pub fn materialize(&self, depth: usize) -> Result<Materialized> {
        let Scope::Window(w) = &self.scope else {
            return Ok(Materialized {
                scope: self.scope.clone(),
                module: self.module(),
                far: vec![],
                window_offset: 0,
            });
        };
        let below = if self.lower.is_some() { depth } else { 0 };
        let above = if self.upper.is_some() { depth } else { 0 };
        let n = w.cat().len();
        let (left, wide) = match w.generator() {
            Generator::ZChain => {
                let wide = w.with_range(w.lo() - below as i64, w.hi() + above as i64)?;
                let mut dims = Vec::new();
                let mut steps = Vec::new();
                if let Some(t) = &self.lower {
                    dims.extend(std::iter::repeat(t.dim).take(below));
                    steps.extend(std::iter::repeat(t.step.clone().expect("chain tail step")).take(below - 1));
                    steps.push(t.link.clone());
                }
                dims.extend_from_slice(self.left.dims());
                for i in 0..n.saturating_sub(1) {
                    steps.push(self.left.acting_action(i, i + 1)[0].clone());
                }
                if let Some(t) = &self.upper {
                    dims.extend(std::iter::repeat(t.dim).take(above));
                    steps.push(t.link.clone());
                    steps.extend(std::iter::repeat(t.step.clone().expect("chain tail step")).take(above - 1));
                }
                (gallery::chain_module(wide.cat(), &dims, &steps), wide)
            }
            Generator::ZNeg => {
                let wide = w.with_range(w.lo() - below as i64, w.hi())?;
                let mut dims = Vec::new();
                let mut links = Vec::new();
                if let Some(t) = &self.lower {
                    dims.extend(std::iter::repeat(t.dim).take(below));
                    links.extend(std::iter::repeat(t.link.clone()).take(below));
                }
                dims.extend_from_slice(self.left.dims());
                for i in 0..n - 1 {
                    links.push(self.left.acting_action(i, n - 1)[0].clone());
                }
                (gallery::zneg_module(wide.cat(), &dims, &links), wide)
            }
            Generator::Undeclared { .. } => (self.left.clone(), w.clone()),
        };
        let mut far = Vec::new();
        if below > 0 {
            far.push(0);
        }
        if above > 0 {
            far.push(wide.cat().len() - 1);
        }
        Ok(Materialized {
            module: match self.side {
                Side::Left => left,
                Side::Right => left.transpose_dual(),
            },
            scope: Scope::Window(wide),
            far,
            window_offset: below,
        })
    }

    /// Window objects through which an undeclared outside could act on
    /// this module: nonzero components at a boundary with no tail.
    pub fn leaks(&self) -> Vec<usize> {
        let Scope::Window(w) = &self.scope else { return vec![] };
        let mut out = Vec::new();
        let mut side_gates = |declared: bool, gates: Option<Vec<i64>>| {
            if declared {
                return;
            }
            let gates = gates.unwrap_or_else(|| (w.lo()..=w.hi()).collect());
            for g in gates {
                if let Some(i) = w.position(g) {
                    if self.left.dim(i) > 0 && !out.contains(&i) {
                        out.push(i);
                    }
                }
            }
        };
        side_gates(self.lower.is_some(), w.entry_gateways());
        side_gates(self.upper.is_some(), w.exit_gateways());
        out.sort_unstable();
        out
    }

    /// Quotient by a submodule given on the window and, for each declared
    /// tail, by one subspace shared by all tail objects.
    pub fn quotient(&self, sub: &TailConstant) -> Result<DeclaredModule> {
        if self.upper.is_some() && sub.upper_constant().is_none() {
            return Err(Error::DimensionMismatch("quotient tails would not be constant".into()));
        }
        let upper = sub.upper_constant().cloned();
        let q = self.left.quotient(&sub.window)?;
        let proj: Vec<Matrix> = sub.window.iter().map(Subspace::quotient_projection).collect();
        let lift: Vec<Matrix> = sub.window.iter().map(Subspace::complement_lift).collect();
        let n = self.left.len();
        let tail = |t: &Option<Tail>, s: &Option<Subspace>, below: bool| -> Option<Tail> {
            let t = t.as_ref()?;
            let s = s.clone().unwrap_or_else(|| Subspace::zero(self.field(), t.dim));
            let (tp, tl) = (s.quotient_projection(), s.complement_lift());
            let gate = if below { 0 } else { n - 1 };
            let link = if below {
                &(&proj[gate] * &t.link) * &tl
            } else {
                &(&tp * &t.link) * &lift[gate]
            };
            Some(Tail {
                dim: tp.rows(),
                step: t.step.as_ref().map(|st| &(&tp * st) * &tl),
                link,
            })
        };
        Ok(DeclaredModule {
            scope: self.scope.clone(),
            side: self.side,
            left: q,
            lower: tail(&self.lower, &sub.lower, true),
            upper: tail(&self.upper, &upper, false),
        })
    }
}

/// A family of subspaces of a declared module in left orientation: one per
/// window object, one shared by all lower tail objects, and along the upper
/// tail a finite prefix followed by a cycle that repeats forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailConstant {
    pub window: Vec<Subspace>,
    pub lower: Option<Subspace>,
    pub upper_prefix: Vec<Subspace>,
    /// Empty exactly when there is no upper tail.
    pub upper_cycle: Vec<Subspace>,
}

impl TailConstant {
    /// The value on the upper tail when it is constant from the start.
    pub fn upper_constant(&self) -> Option<&Subspace> {
        match (self.upper_prefix.is_empty(), self.upper_cycle.as_slice()) {
            (true, [s]) => Some(s),
            _ => None,
        }
    }

    /// Depth past which the upper tail has gone through its prefix and two
    /// full cycles.
    pub fn settled_depth(&self) -> usize {
        self.upper_prefix.len() + 2 * self.upper_cycle.len()
    }

    /// Spread over a materialization of the given depth.
    pub fn materialize(&self, m: &DeclaredModule, depth: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        if m.lower.is_some() {
            let s = self.lower.clone().expect("lower tail subspace");
            out.extend(std::iter::repeat(s).take(depth));
        }
        out.extend(self.window.iter().cloned());
        if m.upper.is_some() {
            assert!(!self.upper_cycle.is_empty(), "upper tail subspaces");
            assert!(self.upper_prefix.len() <= depth, "materialization shallower than the prefix");
            out.extend(self.upper_prefix.iter().cloned());
            out.extend(self.upper_cycle.iter().cycle().take(depth - self.upper_prefix.len()).cloned());
        }
        out
    }
}

/// A declared module spread over a finite window.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub scope: Scope,
    pub module: Module,
    /// Indices of the outermost materialized tail objects.
    pub far: Vec<usize>,
    /// Index of the first window object.
    pub window_offset: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincat::validate_module;

    #[test]
    fn json_round_trip_keeps_tails() {
        let f = Field::f2();
        for d in [
            gallery::chain_iso_module(f, -2, 1, true).unwrap(),
            gallery::bump_module(f, 1, 2).unwrap(),
            gallery::zneg_constant_module(f, -3).unwrap(),
            gallery::zneg_single_right_module(f, -3).unwrap(),
        ] {
            let w = d.scope().window().unwrap().clone();
            let v = d.to_json();
            assert_eq!(DeclaredModule::from_json(&w, &v).unwrap(), d);
        }
    }

    fn ones(f: Field) -> Matrix {
        Matrix::identity(f, 1)
    }

    /// The integer-chain module with every space one-dimensional and every
    /// map an isomorphism, on `[lo..hi]`, with both tails declared.
    fn n_module(lo: i64, hi: i64) -> DeclaredModule {
        let f = Field::f2();
        let w = Window::new(Generator::ZChain, f, lo, hi).unwrap();
        let n = w.cat().len();
        let m = gallery::chain_module(w.cat(), &vec![1; n], &vec![ones(f); n - 1]);
        let t = Tail {
            dim: 1,
            step: Some(ones(f)),
            link: ones(f),
        };
        DeclaredModule::new(&w, m, Some(t.clone()), Some(t)).unwrap()
    }

    #[test]
    fn materialized_modules_are_modules() {
        let d = n_module(-1, 1);
        let m = d.materialize(d.depth()).unwrap();
        assert_eq!(m.module.dims(), &[1; 9]);
        assert!(validate_module(m.scope.cat(), &m.module).unwrap().is_certified());
        assert_eq!(m.far, vec![0, 8]);
        let r = d.transpose_dual().materialize(3).unwrap();
        assert_eq!(r.module.side(), Side::Right);
        assert!(validate_module(r.scope.cat(), &r.module).unwrap().is_certified());
    }

    #[test]
    fn zneg_tails() {
        let f = Field::f2();
        let w = Window::new(Generator::ZNeg, f, -3, -1).unwrap();
        let m = gallery::zneg_module(w.cat(), &[1, 1, 1], &[ones(f), ones(f)]);
        let t = Tail {
            dim: 1,
            step: None,
            link: ones(f),
        };
        let d = DeclaredModule::new(&w, m.clone(), Some(t), None).unwrap();
        let mm = d.materialize(4).unwrap();
        assert!(validate_module(mm.scope.cat(), &mm.module).unwrap().is_certified());
        assert_eq!(mm.scope.cat().len(), 7);
        let bare = DeclaredModule::bare(&w, m).unwrap();
        assert_eq!(bare.leaks(), vec![2]);
        assert!(d.leaks().is_empty());
    }

    #[test]
    fn leaks_on_undeclared_sides() {
        let f = Field::f2();
        let w = Window::new(Generator::ZChain, f, -1, 1).unwrap();
        let m = gallery::chain_module(w.cat(), &[1, 1, 1], &[ones(f), ones(f)]);
        let bare = DeclaredModule::bare(&w, m).unwrap();
        assert_eq!(bare.leaks(), vec![0, 2]);
    }
}
