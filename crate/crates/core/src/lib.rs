//! Exact counting, probabilities and verification for repeated-pattern
//! measurements of quantum coins.
//!
//! Measuring a qubit (or qudit) coin `n` times yields an outcome string. The
//! event of interest is that a run of `N` equal target symbols shows up
//! exactly once, at the end, at a fixed position, or anywhere. Counts of such
//! strings follow Fibonacci, Tribonacci and N-Bonacci recursions, and their
//! probabilities follow N-Bonacci polynomials in the coin probabilities.
//!
//! * [`sequences`]: exact integer sequences and Lucas identities.
//! * [`patterns`]: brute-force enumeration, the oracle for every closed form.
//! * [`probability`]: closed forms and polynomial recursions.
//! * [`analysis`]: generating functions, golden-ratio limits, entropy.
//! * [`statevec`]: state vectors, tree projectors and a seeded sampler.

pub mod analysis;
pub mod coin;
pub mod error;
pub mod patterns;
pub mod probability;
pub mod sequences;
pub mod statevec;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;

pub use analysis::{GeneratingFunction, RatioKind, SeriesResult, PHI};
pub use coin::{coin_entropy, ratio, CoinSpec, Scalar};
pub use error::{Error, Result};
pub use patterns::{OutcomeString, PatternSpec, Position};
pub use sequences::SequenceParams;
pub use statevec::{RngSpec, SampleCounts, StateVector, TreeProjector};
