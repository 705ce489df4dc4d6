//! Exact rational linear algebra.

mod matrix;
mod rational;
mod sparse;
mod subspace;

pub use matrix::{Infeasible, LinearMap, RationalMatrix};
pub use rational::{ParseRationalError, Rational};
pub use sparse::SparseVec;
pub use subspace::{DimensionMismatch, Subspace};
