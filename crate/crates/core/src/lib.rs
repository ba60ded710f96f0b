//! Desk-scale numerical laboratory for weighted operator theory on the
//! Bergman space of the unit disk.
//!
//! The crate builds the dyadic kube/tent structure of the disk, computes
//! Bekolle-Bonami weight characteristics (closed forms for radial power
//! weights, quadrature otherwise), evaluates the Bergman projection,
//! Toeplitz operators, Berezin transforms, sparse and maximal operators on
//! a polar quadrature grid, and runs a verification suite that compares
//! measured quantities against the exact constants of the underlying
//! inequalities.

pub mod config;
pub mod dyadic;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod operators;
pub mod symbols;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
