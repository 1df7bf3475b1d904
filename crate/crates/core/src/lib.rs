//! Exact computations around the Brieskorn lattice of a convenient,
//! nondegenerate (Laurent) polynomial and its sub-diagram deformations.
//!
//! The pipeline runs bottom-up: [`polyring`] for exact arithmetic,
//! [`newton`] for the Newton polyhedron and its weights, [`groebner`] and
//! [`jacobi`] for the Milnor algebra and the parametric division,
//! [`connection`] for the Gauss-Manin connection in the adapted basis,
//! [`duality`] for the residue pairing, and [`frobgate`] for the
//! unfolding hypotheses. The `brieskorn` binary strings them together.

pub mod connection;
pub mod duality;
pub mod error;
pub mod frobgate;
pub mod groebner;
pub mod jacobi;
pub mod matrix;
pub mod newton;
pub mod polyring;

pub use error::{Error, Result};
