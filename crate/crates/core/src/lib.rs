//! Arithmetic of imaginary quadratic fields at desk scale: binary quadratic
//! forms and class groups, Heegner forms and points, conductor-1 Hecke
//! characters and their theta series, Rankin-Selberg central values, and the
//! finite Fourier identities ("wide moments") that tie weighted Heegner
//! periods to those central values.
//!
//! Module map:
//!
//! - [`qforms`] — exact arithmetic of positive definite integral binary
//!   quadratic forms: reduction, Gauss composition, class groups.
//! - [`heegner`] — level-N oriented Heegner forms, Heegner points, optimal
//!   embeddings, and explicit class-group representatives.
//! - [`abelian`] — finite abelian groups, characters, wide tuples, and the
//!   direct/dual wide-moment identities.
//! - [`hecke`] — ideal arithmetic in the maximal order, conductor-1 Hecke
//!   characters with infinity type (α/|α|)^k, theta series coefficients.
//! - [`modforms`] — level-1 holomorphic eigenforms by q-expansion, Whittaker
//!   functions, raising operators, Petersson norms.
//! - [`lfun`] — degree-4 Rankin-Selberg L-series, approximate functional
//!   equation central values, symmetric squares, archimedean constants.
//! - [`experiments`] — end-to-end harnesses: Waldspurger ratio tests, wide
//!   moment assembly, diagonal moments, equidistribution scans.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to use from multiple threads.

pub mod abelian;
pub mod cli;
pub mod experiments;
pub mod hecke;
pub mod heegner;
pub mod lfun;
pub mod modforms;
pub mod numerics;
pub mod qforms;

pub use num_complex::Complex64;

/// Errors shared by all modules.
///
/// The split follows the CLI exit-code contract: domain/precondition errors
/// are caller mistakes (exit 1); accuracy/integrity errors mean a numerical
/// target could not be met or a cross-check failed (exit 2).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's domain (wrong sign, parity, divisibility ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition is violated (Heegner hypothesis, parity of k ...).
    #[error("precondition error: {0}")]
    Precondition(String),
    /// A requested accuracy could not be certified; the achieved bound is reported.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// Two independent computation routes disagree beyond tolerance.
    #[error("integrity error: {0}")]
    Integrity(String),
    /// Valid input the implementation deliberately does not cover.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A bounded search ran out of room; never silent.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
