//! Diverse Hamming medians.
//!
//! Given strings of equal length, the majority string minimizes the total
//! Hamming distance. This crate looks for several such medians, or several
//! strings within a `(1+ε)` factor of the optimum, that are far apart:
//! a maximum-distance pair, `k` strings of maximum total pairwise distance,
//! or `k` strings of maximum minimum pairwise distance.

pub mod budget;
pub mod candidate;
pub mod context;
pub mod dataset;
pub mod diameter;
pub mod error;
pub mod lpround;
pub mod metrics;
pub mod mindisp;
pub mod oracle;
pub mod rng;
pub mod sumdisp;

pub use budget::{Budget, Rational};
pub use candidate::CandidateSet;
pub use context::{FrequencyTable, MedianContext};
pub use dataset::{Alphabet, Dataset, Sym};
pub use error::{Error, Result};
