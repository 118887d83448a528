//! Exact and asymptotic error-detection statistics for ensembles of binary
//! parity-check matrices used over a binary symmetric channel.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. It covers:
//!
//! - [`gf2`]: bit-packed GF(2) matrices, rank, nullspace, weight
//!   distributions and the undetected error probability of a single matrix.
//! - [`ensemble`]: closed-form finite-length statistics of the Bernoulli
//!   ensemble (average weight distribution, covariance of the weight
//!   distribution, mean and variance of the undetected error probability),
//!   evaluated in the base-2 log domain.
//! - [`asymptotics`]: growth rates and error exponents, including the
//!   covariance and variance growth rates.
//! - [`oracle`]: exhaustive exact-rational enumeration of tiny ensembles used
//!   as ground truth for everything above.
//! - [`montecarlo`]: sampling estimators with reproducible substreams.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod channel;
pub mod ensemble;
mod error;
pub mod exact;
pub mod gf2;
pub mod logreal;
pub mod math;
pub mod montecarlo;
pub mod optimize;
pub mod oracle;

pub use channel::Bsc;
pub use ensemble::BernoulliEnsemble;
pub use error::{Error, Result};
pub use exact::RationalPoly;
pub use gf2::{BitMatrix, BitVector, EnumerationGuard, WeightDistribution};
pub use logreal::LogReal;
