//! Exact weight-spectrum analysis for rate-matched polar codes.
//!
//! Polar codes are handled as decreasing monomial codes. The crate counts
//! minimum-weight codewords of quasi-uniformly punctured, Wang–Liu shortened
//! and bit-reversal shortened codes in closed form, computes exact spectra of
//! punctured and shortened polar cosets, and from those the exact average
//! spectrum of randomly pre-transformed rate-matched codes. Brute-force and
//! Monte-Carlo references live in [`oracle`].

pub mod bound;
pub mod construct;
pub mod coset;
pub mod error;
pub mod minwt_punct;
pub mod minwt_short;
pub mod monomial;
pub mod oracle;
pub mod pattern;
pub mod spectrum;

pub use error::{Error, Result};
pub use monomial::{CodeSpec, Monomial};
pub use pattern::{Mode, Pattern, PatternKind};
pub use spectrum::{AvgSpectrum, DyadicRational, WeightSpectrum};
