//! Stabilizing network bargaining games.
//!
//! The pipeline finds an approximately minimum blocking set of edges by
//! iterative LP rounding on sparse graphs ([`blockset`]) and then computes a
//! balanced allocation on the remaining graph by prekernel local shifts
//! ([`bargain`]). All arithmetic is exact ([`Rational`], [`lp`]).

pub mod bargain;
pub mod blockset;
pub mod error;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod oracle;
pub mod rational;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph};
pub use rational::{q, Rational};
