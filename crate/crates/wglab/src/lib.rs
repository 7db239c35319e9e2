//! # wglab — a laboratory for sums of unlike prime powers
//!
//! Everything here works at "desk scale": exact integer and rational
//! arithmetic wherever an identity is asserted, floating point only where a
//! quantity is inherently analytic (exponential sums, measures, slopes).
//!
//! The crate is organized around six concerns:
//!
//! - [`arith`] — prime sieving with a persistent cache, deterministic 64-bit
//!   primality, integer k-th roots, and prime-power window classes.
//! - [`rational`] — exact arbitrary-precision rationals with floor/ceil and a
//!   `num/den` wire format.
//! - [`exponents`] — the exceptional-set exponent tables for the four studied
//!   forms, the general Hölder block-size formula, and prior bounds for
//!   comparison.
//! - [`rep`] — representation counting for the four forms, witness search,
//!   exceptional-set enumeration over a sumset bitmap, and exact convolution.
//! - [`expsum`] — prime exponential sums, major/intermediate/minor arc
//!   dissections, exact sampled moments, and diagnostic sup scans.
//! - [`meanvalue`] — brute-force solution counters realizing the mean-value
//!   integrals as combinatorial counts, with their case decompositions.

pub mod arith;
pub mod exponents;
pub mod expsum;
pub mod forms;
pub mod meanvalue;
pub mod rational;
pub mod rep;

use std::fmt;

/// Crate-wide error type.
///
/// The variants map onto process exit codes in the CLI: `Domain` → 2,
/// `Capacity` → 3, `Identity` → 4.
#[derive(Debug)]
pub enum Error {
    /// A parameter is outside the operation's stated domain.
    Domain(String),
    /// A resource bound (memory, operation budget, integer width) would be
    /// exceeded. Never silently degrades.
    Capacity(String),
    /// An internal exact identity failed to hold. Always a bug or data
    /// corruption, never a tolerance issue.
    Identity(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::Identity(msg) => write!(f, "identity check failed: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
