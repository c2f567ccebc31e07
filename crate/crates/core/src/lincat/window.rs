//! Finite windows onto infinite, integer-indexed categories.
//!
//! A [`Window`] is the full subcategory on an integer interval of a
//! [`Generator`]. Declared generators also publish facts about the objects
//! outside the window: interval bounds, up-set and down-set finiteness, and
//! the objects through which every morphism crossing the window boundary
//! factors. Analyses consult these declarations and never infer facts about
//! the outside from the window alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery;
use crate::scalar::Field;

use super::LinCat;

/// Render an integer object id with an explicit sign: `-1`, `+0`, `+2`.
pub fn format_object(i: i64) -> String {
    format!("{i:+}")
}

pub fn parse_object(s: &str) -> Option<i64> {
    s.trim().parse().ok()
}

/// Parse an inclusive integer range `[-2..2]` or `-6..-1`.
pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let (a, b) = t.split_once("..").ok_or_else(|| Error::BadWindow(s.to_string()))?;
    let lo: i64 = a.trim().parse().map_err(|_| Error::BadWindow(s.to_string()))?;
    let hi: i64 = b.trim().parse().map_err(|_| Error::BadWindow(s.to_string()))?;
    if lo > hi {
        return Err(Error::BadWindow(s.to_string()));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// Objects are all integers, `Hom(m,n)` is one-dimensional for `m <= n`
    /// and composition multiplies basis vectors.
    ZChain,
    /// Objects are the negative integers; besides identities the only
    /// nonzero hom spaces are `Hom(-n,-1)`, each one-dimensional.
    ZNeg,
    /// A window supplied without any declarations about the outside.
    Undeclared { name: String },
}

impl Generator {
    pub fn name(&self) -> &str {
        match self {
            Generator::ZChain => "zchain",
            Generator::ZNeg => "zneg",
            Generator::Undeclared { name } => name,
        }
    }

    pub fn is_declared(&self) -> bool {
        !matches!(self, Generator::Undeclared { .. })
    }
}

/// A declared fact about an up-set or down-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetDecl {
    Finite(Vec<i64>),
    Infinite { witness: String },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    generator: Generator,
    lo: i64,
    hi: i64,
    cat: LinCat,
}

impl Window {
    pub fn new(generator: Generator, field: Field, lo: i64, hi: i64) -> Result<Window> {
        if lo > hi {
            return Err(Error::BadWindow(format!("[{lo}..{hi}]")));
        }
        let cat = match &generator {
            Generator::ZChain => gallery::zchain_window(field, lo, hi),
            Generator::ZNeg => {
                if hi > -1 {
                    return Err(Error::BadWindow(format!("[{lo}..{hi}] leaves the negative integers")));
                }
                gallery::zneg_range(field, lo, hi)
            }
            Generator::Undeclared { name } => {
                return Err(Error::BadWindow(format!(
                    "generator {name:?} has no builder; use Window::undeclared"
                )))
            }
        };
        Ok(Window { generator, lo, hi, cat })
    }

    /// Wrap an explicit presentation whose objects are the integers
    /// `lo..=hi`, with no declarations about anything outside.
    pub fn undeclared(name: &str, cat: LinCat, lo: i64, hi: i64) -> Result<Window> {
        let expect: Vec<String> = (lo..=hi).map(format_object).collect();
        if cat.objects() != expect.as_slice() {
            return Err(Error::BadWindow(format!("objects of {name:?} are not the integers {lo}..{hi}")));
        }
        Ok(Window {
            generator: Generator::Undeclared { name: name.into() },
            lo,
            hi,
            cat,
        })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn cat(&self) -> &LinCat {
        &self.cat
    }

    pub fn field(&self) -> Field {
        self.cat.field()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn describe(&self) -> String {
        format!("{}[{}..{}]", self.generator.name(), self.lo, self.hi)
    }

    pub fn value(&self, i: usize) -> i64 {
        self.lo + i as i64
    }

    pub fn position(&self, v: i64) -> Option<usize> {
        (self.lo..=self.hi).contains(&v).then(|| (v - self.lo) as usize)
    }

    /// The same generator on a different range.
    pub fn with_range(&self, lo: i64, hi: i64) -> Result<Window> {
        Window::new(self.generator.clone(), self.field(), lo, hi)
    }

    /// Declared interval `{z : x <= z <= y}` of the whole generator.
    pub fn interval(&self, x: i64, y: i64) -> Option<Vec<i64>> {
        match self.generator {
            Generator::ZChain => Some((x..=y).collect()),
            Generator::ZNeg => Some(if x == y {
                vec![x]
            } else if y == -1 && x < -1 {
                vec![x, -1]
            } else {
                vec![]
            }),
            Generator::Undeclared { .. } => None,
        }
    }

    /// Declared up-set `{y : x <= y}`.
    pub fn up_set(&self, x: i64) -> SetDecl {
        match self.generator {
            Generator::ZChain => SetDecl::Infinite {
                witness: format!("ray {}..+inf", format_object(x)),
            },
            Generator::ZNeg => SetDecl::Finite(if x == -1 { vec![-1] } else { vec![x, -1] }),
            Generator::Undeclared { .. } => SetDecl::Unknown,
        }
    }

    /// Declared down-set `{x : x <= y}`.
    pub fn down_set(&self, y: i64) -> SetDecl {
        match self.generator {
            Generator::ZChain => SetDecl::Infinite {
                witness: format!("ray -inf..{}", format_object(y)),
            },
            Generator::ZNeg if y == -1 => SetDecl::Infinite {
                witness: "every negative integer maps to -1".into(),
            },
            Generator::ZNeg => SetDecl::Finite(vec![y]),
            Generator::Undeclared { .. } => SetDecl::Unknown,
        }
    }

    /// Window objects through which every morphism leaving the window
    /// factors; `None` when undeclared.
    pub fn exit_gateways(&self) -> Option<Vec<i64>> {
        match self.generator {
            Generator::ZChain => Some(vec![self.hi]),
            Generator::ZNeg => Some(vec![]),
            Generator::Undeclared { .. } => None,
        }
    }

    /// Window objects through which every morphism entering the window
    /// factors; `None` when undeclared.
    pub fn entry_gateways(&self) -> Option<Vec<i64>> {
        match self.generator {
            Generator::ZChain => Some(vec![self.lo]),
            Generator::ZNeg => Some(vec![-1]),
            Generator::Undeclared { .. } => None,
        }
    }

    /// A fresh object below the window standing for every outside object
    /// below it: all of them relate to window objects in the same way.
    pub fn tail_representative(&self) -> Option<i64> {
        self.generator.is_declared().then_some(self.lo - 1)
    }

    /// Whether every left module over the whole generator is the underlying
    /// module of some contramodule, possibly only non-constructively.
    pub fn every_module_underlies_a_contramodule(&self) -> bool {
        matches!(self.generator, Generator::ZNeg)
    }
}

/// What an analysis runs over: an explicit finite category or a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Finite(LinCat),
    Window(Window),
}

impl Scope {
    pub fn cat(&self) -> &LinCat {
        match self {
            Scope::Finite(c) => c,
            Scope::Window(w) => w.cat(),
        }
    }

    pub fn window(&self) -> Option<&Window> {
        match self {
            Scope::Finite(_) => None,
            Scope::Window(w) => Some(w),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Scope::Finite(c) => format!("finite category on {} objects", c.len()),
            Scope::Window(w) => w.describe(),
        }
    }
}
