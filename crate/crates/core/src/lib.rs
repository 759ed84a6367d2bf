//! Exact degenerate derangement polynomials and their companion sequences,
//! executable identity verification, and numerical checks for the degenerate
//! gamma distribution.
//!
//! - [`exact`]: rationals, factorials, binomials, dense polynomials
//! - [`series`]: truncated formal power series (product, quotient,
//!   composition, degenerate exponential and logarithm)
//! - [`sequences`]: derangement, Stirling, Fubini and Bell sequences
//! - [`identities`]: exact identity verifiers, grid runs, certification
//! - [`quadrature`], [`probability`]: degenerate gamma function and
//!   distribution checks

pub mod error;
pub mod exact;
pub mod identities;
pub mod probability;
pub mod quadrature;
pub mod sequences;
pub mod series;

pub use error::{Error, Result};
pub use exact::{Poly, Scalar};
pub use series::Series;
