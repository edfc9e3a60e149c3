//! Verification toolkit for Ricci-flat metrics with parallel spinors.
//!
//! The crate is organized by subsystem:
//!
//! * [`clifford`] – exact gamma matrices, the twisted-spinor map `Φ`, and the
//!   `Λ^{0,•}` Clifford model.
//! * [`curvalg`] – pointwise algebraic curvature tensors, including
//!   Ricci-flat samples with a kernel spinor.
//! * [`torus`] – spectral tensor calculus on flat tori, the Lichnerowicz
//!   Laplacian, the twisted Dirac operator and the conformal-Laplacian
//!   eigenvalue `λ(g)`.
//! * [`g2`] – the `G₂` three-form, cross product, type decomposition of
//!   3-forms and the map `Ψ`.
//! * [`warped`] – warped products on `R³ × M`, their scalar curvature, and the
//!   negative-mass construction.
//! * [`report`] and [`suite`] – machine-readable verification batteries.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod clifford;
pub mod config;
pub mod curvalg;
pub mod error;
pub mod g2;
pub mod geometry;
pub mod report;
pub mod rng;
pub mod suite;
pub mod torus;
mod util;
pub mod warped;

pub use config::Config;
pub use error::{Error, Result};
pub use report::{CheckRecord, VerificationReport};
pub use suite::{run_suite, SuiteName};
