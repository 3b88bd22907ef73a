//! Exact arithmetic toolkit for positive definite ternary quadratic forms,
//! built around one goal: certifying that the seven remaining ternary sums
//! of generalized pentagonal numbers are universal over the integers.
//!
//! The crate is organized bottom-up:
//!
//! * [`forms`] — Gram matrices, evaluation, Minkowski reduction, isometry testing
//! * [`represent`] — complete enumeration of representations and bounded sieves
//! * [`genus`] — Kneser p-neighbors, genus closure, eligible-integer sieves
//! * [`arith`] — Kronecker symbol, exact polynomial identities, binary-form
//!   coprime descent
//! * [`transfer`] — residue sets R(N,d,a), rational isometries, good vectors
//!   and the relation N ≺ M
//! * [`descent`] — infinite-order isometries, fixed eigenvectors, descent
//!   certificates with exceptional values Q(z)·t²
//! * [`universality`] — the pentagonal oracle, the seven constructive case
//!   pipelines, and the exclusion-set computation for the determinant-81 form
//! * [`cert`] — JSON schemas for forms, isometries and certificates
//! * [`cli`] — the batch certification command surface
//!
//! Every decision path uses exact integer (or rational) arithmetic; there is
//! no floating point anywhere a verdict depends on.

pub mod arith;
pub mod cert;
pub mod cli;
pub mod descent;
pub mod forms;
pub mod genus;
pub mod represent;
pub mod transfer;
pub mod universality;

pub use forms::{polygonal, TernaryForm, Vector3};
pub use transfer::RationalIsometry;
pub use represent::{
    enumerate_representations, find_representation_with, representation_count, represented_set,
    RepresentationSieve,
};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("malformed certificate data: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
