use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::lincat::{HomEquations, Side};
use crate::scalar::Field;
use crate::verdict::{Verdict, Witness};

use super::comodule::first_bad_column;
use super::GradedCoalgebra;

/// A contramodule `P = prod_x P^x` given by finitely many nonzero blocks.
///
/// For a left contramodule the block `pi^y_x: Hom(C^{x,y}, P^x) -> P^y` is a
/// matrix of shape `dim P^y x (dim C^{x,y} * dim P^x)`; column
/// `c * dim P^x + p` is the image of the map sending the `c`-th dual basis
/// element to `p` and the others to zero. Right contramodules are stored as
/// left contramodules over the opposite coalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contramodule {
    side: Side,
    field: Field,
    dims: Vec<usize>,
    blocks: Vec<Matrix>,
    declared: Option<Vec<Vec<usize>>>,
}

impl Contramodule {
    /// Blocks keyed by the hom pair `(x,y)`; missing pairs are zero.
    pub fn new(
        g: &GradedCoalgebra,
        side: Side,
        dims: Vec<usize>,
        blocks: impl IntoIterator<Item = ((usize, usize), Matrix)>,
    ) -> Result<Contramodule> {
        let n = g.len();
        if dims.len() != n {
            return Err(Error::DimensionMismatch(format!("{} components for {n} objects", dims.len())));
        }
        let act = g.acting(side);
        let mut p = Contramodule::zero_blocks(&act, side, dims);
        for ((x, y), b) in blocks {
            let (a, c) = match side {
                Side::Left => (x, y),
                Side::Right => (y, x),
            };
            let shape = (p.dims[c], act.dim(a, c) * p.dims[a]);
            if b.shape() != shape {
                return Err(Error::DimensionMismatch(format!(
                    "contraaction block ({x}, {y}) has shape {:?}, expected {shape:?}",
                    b.shape()
                )));
            }
            p.blocks[a * n + c] = b;
        }
        Ok(p)
    }

    fn zero_blocks(act: &GradedCoalgebra, side: Side, dims: Vec<usize>) -> Contramodule {
        let n = act.len();
        let blocks = (0..n * n)
            .map(|k| Matrix::zeros(act.field(), dims[k % n], act.dim(k / n, k % n) * dims[k / n]))
            .collect();
        Contramodule {
            side,
            field: act.field(),
            dims,
            blocks,
            declared: None,
        }
    }

    pub(crate) fn from_acting(side: Side, field: Field, dims: Vec<usize>, blocks: Vec<Matrix>) -> Contramodule {
        Contramodule {
            side,
            field,
            dims,
            blocks,
            declared: None,
        }
    }

    pub fn zero(g: &GradedCoalgebra, side: Side) -> Contramodule {
        Contramodule::zero_blocks(&g.acting(side), side, vec![0; g.len()])
    }

    /// Declare `Z_b` for every `b`: the objects `a` whose block `pi^b_a` may
    /// be nonzero, in the acting orientation.
    pub fn with_declared_support(mut self, support: Vec<Vec<usize>>) -> Contramodule {
        self.declared = Some(support);
        self
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Block for the hom pair `(x,y)`.
    pub fn block(&self, x: usize, y: usize) -> &Matrix {
        match self.side {
            Side::Left => self.acting_block(x, y),
            Side::Right => self.acting_block(y, x),
        }
    }

    /// `pi^b_a` in the acting orientation.
    pub fn acting_block(&self, a: usize, b: usize) -> &Matrix {
        &self.blocks[a * self.len() + b]
    }

    /// Columns of `pi^b_a` for the `c`-th coalgebra basis element.
    pub fn acting_col_block(&self, a: usize, b: usize, c: usize) -> Matrix {
        let d = self.dims[a];
        self.acting_block(a, b).submatrix(0, self.dims[b], c * d, d)
    }

    /// `Z_b`: objects `a` with a nonzero block `pi^b_a`.
    pub fn acting_support(&self, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| !self.acting_block(a, b).is_zero()).collect()
    }

    pub fn to_json(&self, objects: &[String]) -> Value {
        let n = self.len();
        let mut dims = Map::new();
        let mut contraaction = Map::new();
        for x in 0..n {
            dims.insert(objects[x].clone(), self.dims[x].into());
            for y in 0..n {
                let b = self.block(x, y);
                if !b.is_zero() {
                    contraaction.insert(format!("{}|{}", objects[x], objects[y]), b.to_json());
                }
            }
        }
        serde_json::json!({ "side": self.side, "dims": dims, "contraaction": contraaction })
    }
}

/// Contraassociativity and contraunitality, on every finite-support block.
pub fn validate_contramodule(g: &GradedCoalgebra, p: &Contramodule) -> Result<Verdict> {
    let act = g.acting(p.side);
    let n = act.len();
    if p.len() != n {
        return Err(Error::DimensionMismatch("contramodule over a different coalgebra".into()));
    }
    for a in 0..n {
        for b in 0..n {
            let shape = (p.dims[b], act.dim(a, b) * p.dims[a]);
            if p.acting_block(a, b).shape() != shape {
                return Err(Error::DimensionMismatch(format!("contraaction block ({a}, {b}) has the wrong shape")));
            }
            if let Some(decl) = &p.declared {
                if !decl[b].contains(&a) && !p.acting_block(a, b).is_zero() {
                    return Err(Error::SupportMismatch(format!(
                        "nonzero contraaction from {} to {} outside the declared support",
                        act.objects()[a],
                        act.objects()[b]
                    )));
                }
            }
        }
    }
    let name = |x: usize| act.objects()[x].clone();
    let field = p.field;
    if act.is_counital() {
        for a in 0..n {
            let mut acc = Matrix::zeros(field, p.dims[a], p.dims[a]);
            for (c, e) in act.counit(a).iter().enumerate() {
                if !e.is_zero() {
                    acc = &acc + &p.acting_col_block(a, a, c).scale(e);
                }
            }
            if !acc.is_identity() {
                return Ok(Verdict::refuted(Witness::Action {
                    source: name(a),
                    target: name(a),
                    basis: vec![],
                    vector: first_bad_column(&acc, &Matrix::identity(field, p.dims[a])),
                    failure: "contraunitality".into(),
                }));
            }
        }
    }
    for a in 0..n {
        for z in 0..n {
            for b in 0..n {
                if p.dims[a] == 0 || p.dims[b] == 0 {
                    continue;
                }
                let t = act.comult(a, z, b);
                for j in 0..act.dim(a, z) {
                    for i in 0..act.dim(z, b) {
                        let lhs = &p.acting_col_block(z, b, i) * &p.acting_col_block(a, z, j);
                        let mut rhs = Matrix::zeros(field, p.dims[b], p.dims[a]);
                        for (jj, ii, l, s) in t.map(|t| t.entries()).unwrap_or(&[]) {
                            if *jj == j && *ii == i {
                                rhs = &rhs + &p.acting_col_block(a, b, *l).scale(s);
                            }
                        }
                        if lhs != rhs {
                            return Ok(Verdict::refuted(Witness::Action {
                                source: name(a),
                                target: name(b),
                                basis: vec![j, i],
                                vector: first_bad_column(&lhs, &rhs),
                                failure: format!("contraassociativity through {}", name(z)),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::certified())
}

/// The free contramodule `Hom(C, V)` with `dim V = v`, split as
/// `P^y = (+)_w (C^{w,y})* (x) V` (basis ordered by `w`, then coalgebra
/// index, then `V` index).
pub fn free_contramodule(g: &GradedCoalgebra, side: Side, v: usize) -> Contramodule {
    let act = g.acting(side);
    let n = act.len();
    let offsets: Vec<Vec<usize>> = (0..n)
        .map(|y| {
            let mut acc = 0;
            (0..n)
                .map(|w| {
                    let o = acc;
                    acc += act.dim(w, y) * v;
                    o
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = (0..n).map(|y| (0..n).map(|w| act.dim(w, y) * v).sum()).collect();
    let mut p = Contramodule::zero_blocks(&act, side, dims.clone());
    for (&(w, x, y), t) in act.comult_components() {
        let blk = &mut p.blocks[x * n + y];
        for (c, l, k, s) in t.entries() {
            for e in 0..v {
                let row = offsets[y][w] + k * v + e;
                let col = l * dims[x] + offsets[x][w] + c * v + e;
                blk.set(row, col, s.clone());
            }
        }
    }
    p
}

/// Contramodule maps `p1 -> p2`, in the layout of `module_hom_space`.
pub fn contramodule_hom_space(g: &GradedCoalgebra, p1: &Contramodule, p2: &Contramodule) -> Result<Subspace> {
    if p1.side != p2.side || p1.len() != g.len() || p2.len() != g.len() {
        return Err(Error::DimensionMismatch("contramodules over different coalgebras or sides".into()));
    }
    let act = g.acting(p1.side);
    let n = g.len();
    let mut eqs = HomEquations::new(p1.field, &p1.dims, &p2.dims);
    for a in 0..n {
        for b in 0..n {
            for c in 0..act.dim(a, b) {
                eqs.commute(b, &p1.acting_col_block(a, b, c), &p2.acting_col_block(a, b, c), a);
            }
        }
    }
    Ok(eqs.solution_space())
}
