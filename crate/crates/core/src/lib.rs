//! Binning-and-voting LASSO (BV-LASSO) for nonparametric variable selection,
//! and the two-phase contextual bandit policy built on top of it.
//!
//! The crate is `no_std` with `alloc`. Floating-point transcendental functions
//! come from [`libm`], so results are bit-identical across platforms for a
//! fixed seed. Enable the `std` feature to get `std::error::Error` for
//! [`Error`].
//!
//! Module map:
//! - [`bins`]: regular hypercube partition of `[0,1]^d` and per-bin normalization.
//! - [`linproj`]: L²-optimal linear approximation of a known function on a bin.
//! - [`lasso`]: coordinate-descent LASSO with a KKT certificate.
//! - [`selection`]: localized LASSO votes, weighted voting, the Chernoff
//!   optimizer, theory constants and the hyperparameter schedule.
//! - [`bandit`]: uniform-discretization UCB policy and the two-phase runner.
//! - [`envsim`]: synthetic reward environments.
//! - [`diagnostics`]: covariance and sign-consistency event checks.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod bandit;
pub mod bins;
pub mod diagnostics;
pub mod envsim;
mod error;
pub mod lasso;
pub mod linalg;
pub mod linproj;
pub mod quadrature;
pub mod rng;
pub mod selection;

pub use error::{Error, Result};
