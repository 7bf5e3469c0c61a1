//! Truncated p-adic integers, the digit-reversal map onto `[0, 1)`, and
//! pair correlation statistics computed with exact rational thresholds.
//!
//! An element is a prime `p` with `m` digits in least-significant-first
//! order; arithmetic, valuations, and balls live in [`padic`]. The
//! digit-reversal map and its greedy inverse connect those elements to
//! rationals on the `p^-m` grid. [`paircorr`] counts pairs on both sides:
//! quadratic exact loops for the real line, shared-prefix bucketing (batch
//! and streaming) for the p-adic side, where the threshold snaps to the
//! disc of Haar measure `p^-k0`. [`sequences`] provides the inputs
//! (square-root fractional digits, van der Corput points, truncated
//! naturals, seeded random digits, and a line-based file format) and
//! [`verify`] holds independent oracles the fast paths are tested against.
//! [`cli`] wires it all into the `padic-paircorr` binary.
//!
//! Floating point appears only in the final reported statistic; every
//! comparison against a threshold is decided in integer or rational
//! arithmetic.

pub mod cli;
pub mod error;
pub mod padic;
pub mod paircorr;
pub mod primes;
pub mod rational;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
pub use padic::{disc_measure, DiscMeasure, PAdicInt};
pub use paircorr::PairCorrRow;
pub use rational::ExactRational;
