//! Piecewise polynomial functions over set-expression guards.

pub mod piecewise;
pub mod poly;
pub mod roots;

pub use piecewise::{isolate_superlevel, Op, PiecewiseFn, Prepared, SandwichSet};
pub use poly::Poly;
