//! Exact computations with two-generator matrix rings over the integers.

pub mod arith;
pub mod error;
pub mod g2;
pub mod gentest;
pub mod json;
pub mod linalg;
pub mod presentations;
pub mod circulant;
pub mod corpus;
pub mod density;
pub mod words;

pub use error::{Error, Result};
pub use linalg::{IntMatrix, LatticeBasis, Matrix};
