//! # cohlab
//!
//! Typicality of quantum coherence for Haar-random pure states.
//!
//! The crate samples Haar-distributed pure states, unitaries and random
//! subspaces, evaluates coherence functionals in a fixed reference basis, and
//! confronts Monte Carlo statistics with closed-form expectations and Lévy
//! concentration bounds.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`sampler`] | Haar pure states, unitaries, subspaces, ensemble re-decompositions |
//! | [`measures`] | C_r, C_l1, classical purity, trace distance to I/d, Fannes floor |
//! | [`analytics`] | E[C_r] = H_d − 1, Beta/digamma routes, Lévy bounds, subspace sizes |
//! | [`experiments`] | Deterministic parallel Monte Carlo campaigns and their reports |
//! | [`cli`] | The `cohlab` command-line front end |
//!
//! All logarithms are natural; entropies are in nats. Trace distance is the
//! plain trace norm `‖ρ − σ‖₁` with no factor of one half.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod cli;
pub mod experiments;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod report;
pub mod sampler;
pub mod special;
pub mod stream;
pub mod summation;

pub use num_complex::Complex64;
pub use sampler::{Decomposition, PureState, SubspaceBasis, UnitaryMatrix};
pub use stream::RandomStream;

use thiserror::Error;

/// Errors raised by sampling, analytics and experiment routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid epsilon {eps}: must satisfy 0 < eps < ln d = {ln_d}")]
    InvalidEpsilon { eps: f64, ln_d: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "guarantee is vacuous: subspace dimension s = {s} at d = {d} (a subspace with s ≥ 2 needs d ≥ 32921)"
    )]
    VacuousGuarantee { d: usize, s: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
