//! Exact combinatorics of rational affine varieties with a torus action of
//! complexity one.
//!
//! The data of such a variety is an integer matrix `P` built from exponent
//! blocks and free rows. Everything here works with arbitrary-precision
//! integers and rationals; there is no floating point outside of mesh export.

pub mod acomplex;
pub mod coxiter;
pub mod data;
pub mod error;
pub mod gorenstein;
pub mod invariants;
pub mod linalg;
pub mod polyhedra;
pub mod registry;
pub mod report;

pub use error::{Error, Result};
pub use linalg::{Int, IntMatrix, Rat};
