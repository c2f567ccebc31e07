pub mod claims;
pub mod coalg;
pub mod enumerate;
pub mod error;
pub mod ext;
pub mod gallery;
pub mod lift;
pub mod lincat;
pub mod frontier;
pub mod linalg;
pub mod order;
pub mod scalar;
pub mod verdict;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Tensor3};
pub use lincat::{LinCat, Module, Scope, Side, Window};
pub use scalar::{Field, Scalar};
pub use verdict::{Verdict, Witness};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/categories.md")]
    pub struct Categories;
    #[doc = include_str!("../../../book/src/order.md")]
    pub struct Order;
    #[doc = include_str!("../../../book/src/frontiers.md")]
    pub struct Frontiers;
    #[doc = include_str!("../../../book/src/coalgebras.md")]
    pub struct Coalgebras;
    #[doc = include_str!("../../../book/src/lifts.md")]
    pub struct Lifts;
    #[doc = include_str!("../../../book/src/extensions.md")]
    pub struct Extensions;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
