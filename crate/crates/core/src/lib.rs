//! Exact arithmetic for the p-adic study of Stirling numbers of the first kind.
//!
//! The crate computes, over arbitrary-precision integers and rationals:
//!
//! - p-adic valuations of integers, rationals and factorials ([`padic`]);
//! - unsigned Stirling numbers of the first kind `s(n,k)`, their m-shifted
//!   variants, and a prime-power modular kernel that extracts `v_p(s(n,k))`
//!   without full big-integer rows ([`stirling`], [`engine`]);
//! - generalized harmonic numbers and the elementary symmetric functions
//!   `H(n,k)` of `1, 1/2, ..., 1/n` by two independent algorithms
//!   ([`harmonic`]);
//! - Bernoulli numbers with von Staudt-Clausen validation and
//!   regular/irregular prime classification ([`bernoulli`]);
//! - mechanical verification suites for the valuation theorems and
//!   congruences built from these objects ([`verification`]), and evidence
//!   sweeps for the open conjectures ([`conjectures`]).
//!
//! Everything is exact; there is no floating point on any arithmetic path.

pub mod bernoulli;
pub mod conjectures;
pub mod engine;
mod error;
pub mod harmonic;
pub mod padic;
pub mod stirling;
pub mod verification;

pub use error::{Error, Result};
pub use padic::{Prime, Valuation};

/// Arbitrary-precision reduced fraction; the carrier for harmonic and
/// Bernoulli values. Always stored in lowest terms with positive denominator.
pub type Rational = num::BigRational;
