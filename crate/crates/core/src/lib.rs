//! Minimal weighted L² integrals for Hardy, Bergman and Shilov-boundary
//! Hardy spaces on the unit disk, annuli and polydiscs.
//!
//! Every minimal problem is discretised the same way: a truncated holomorphic
//! basis, a Gram matrix from boundary or area quadrature, and an exact
//! least-norm solve under Taylor-coefficient constraints.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod minimizers;
pub mod par;
pub mod poly;
pub mod polydisc;
pub mod quadrature;
pub mod tol;
pub mod weights;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
