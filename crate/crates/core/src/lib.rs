//! Integral lattices in coherent cohomology over `K = k((t))`.
//!
//! The crate is organised bottom-up: [`arith`] (exact scalars, series,
//! Newton polygons), [`ideal`] (Gröbner engine), [`models`] (charts,
//! normalization and the tame sheaf `G_a(r)`), [`lattice`] (projective
//! models, truncated Čech complexes, lattices and endomorphism actions) and
//! [`rigid`] (the truncated rigid-analytic kernel).

pub mod arith;
pub mod error;
pub mod ideal;
pub mod lattice;
pub mod models;
pub mod rigid;

pub use error::{GalError, Result};
