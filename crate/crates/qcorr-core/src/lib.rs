//! Dense numerical toolkit for subsystem correlations in finite-dimensional
//! quantum systems.
//!
//! The guiding idea: the complete table of product-observable mean values
//! over a resolution into subsystems carries exactly the same information as
//! the global density matrix. This crate computes such tables, reconstructs
//! states from them, certifies purity through external-correlation witnesses,
//! models measurement as correlation-building between a specimen and an
//! apparatus, and exhibits the Hardy-type inconsistency of conditional
//! distributions.
//!
//! Everything is exact desk-scale numerics over dense complex matrices: no
//! sampling noise, no iterative tolerances beyond floating point. The crate
//! is `no_std` + `alloc`; IO and file formats live in the companion CLI
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod correlations;
pub mod error;
pub mod hardy;
pub mod linalg;
pub mod measurement;
pub mod operators;
pub mod sampling;
pub mod ssc;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default absolute tolerance for structural checks (hermiticity, unitarity,
/// trace, positivity). Desk-scale dimensions keep floating error orders of
/// magnitude below this.
pub const DEFAULT_TOL: f64 = 1e-10;
