//! Exact analysis of generalized limits of piecewise polynomial functions
//! over structured subsets of the real line.

pub mod analyzers;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod funcdsl;
pub mod limits;
pub mod oracle;
pub mod rational;
pub mod setalg;
pub mod syntax;
pub mod term;

pub use error::{Error, Result};
pub use rational::Rational;
