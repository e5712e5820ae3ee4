//! Computation and numeric auditing of digit statistics on
//! Piatetski-Shapiro sequences `⌊n^c⌋` and their local Beatty
//! approximations `⌊nα + β⌋`.
//!
//! * [`digits`]: base-q and Zeckendorf digit sums, interval decompositions.
//! * [`sequence`]: exact `⌊n^c⌋`, Beatty lines, tangent approximation.
//! * [`expsum`]: exponential-sum kernels and digit Fourier coefficients.
//! * [`harmonic`]: sawtooth approximation, discrepancy and small
//!   integral inequalities.
//! * [`experiment`]: end-to-end experiments producing report records.

pub mod digits;
pub mod error;
pub mod experiment;
pub mod expsum;
pub mod harmonic;
pub mod numeric;
pub mod quadrature;
pub mod sequence;

pub use error::{Error, Result};
