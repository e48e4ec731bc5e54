//! Sequential ends of sampled metric spaces.
//!
//! A coarse sequence is a sequence `x0, x1, ...` with uniformly bounded steps
//! whose distance from `x0` tends to infinity. Two coarse sequences converge
//! to the same end when, for some `K`, their tails can be joined by K-chains
//! outside every ball around `x0`. This crate works with finite samples of
//! such spaces:
//!
//! * [`metric`]: samples, generators for the reference spaces, CSV ingestion.
//! * [`chains`]: K-chain components and explicit K-chains.
//! * [`sequences`]: coarse sequence prefixes, subsequence witnesses and the
//!   supersequence constructions that certify equivalence.
//! * [`ends`]: end decisions, the `(K, R)` filtration end counter and
//!   induced maps.

pub mod chains;
pub mod ends;
mod error;
pub mod fixtures;
pub mod metric;
pub mod sequences;

pub use error::{Error, Result};

/// Absolute slack for distance comparisons: `d <= K` is tested as
/// `d <= K + TOLERANCE`.
pub const TOLERANCE: f64 = 1e-9;

#[inline]
pub fn within(d: f64, k: f64) -> bool {
    d <= k + TOLERANCE
}
