//! Exact dense linear algebra over Z, F_p and integer (Laurent) polynomials.

pub mod hnf;
pub mod matrix;
pub mod ring;
pub mod snf;
pub mod sparse;

pub mod det;

pub use hnf::{hnf, lattice_membership, HnfResult, LatticeBasis};
pub use matrix::{IntMatrix, Matrix};
pub use ring::{is_prime, Integers, LaurentPoly, PolyRing, PrimeField, Ring, RingTag};
pub use snf::snf;
pub use sparse::SparseLattice;
