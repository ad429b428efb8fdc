//! Exact stopping-set analysis for binary linear codes on the binary erasure
//! channel.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`gf2`]: bit-packed vectors and matrices over GF(2).
//! * [`geometry`]: points, flats and spans of EG(m,2) and PG(m-1,2), plus the
//!   flat-counting functions and Gaussian binomials (general `q`).
//! * [`generators`]: the numbers `B(u,l)` of u-generators and `G(u,l)` of
//!   stopping u-generators of an l-flat.
//! * [`identities`]: a self-check suite for the counting functions.
//! * [`codes`]: the incidence-structure parity-check matrices of the Simplex,
//!   Hamming, first-order Reed-Muller and extended Hamming codes.
//! * [`stopping`]: stopping-set predicates, the exhaustive distribution, the
//!   closed-form distributions and the BEC-optimality check.
//! * [`decode`]: the peeling decoder, ML incorrigibility tests, exhaustive
//!   per-weight analysis and a reproducible Monte-Carlo estimator.
//!
//! Column indices and point indices are 1-based in every public interface.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod codes;
pub mod decode;
pub mod error;
pub mod generators;
pub mod identities;
pub mod geometry;
pub mod gf2;
pub mod stopping;

pub use error::{Error, Result};

pub use num_bigint::{BigInt, BigUint};

/// Whether redundant cross-checks run alongside the fast path.
///
/// With [`Verification::On`], generator counts are computed both by recursion
/// and by the explicit alternating sums, and closed-form distributions also
/// check the logarithmic summation bounds. A disagreement surfaces as
/// [`Error::Inconsistent`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Verification {
    #[default]
    Off,
    On,
}

impl Verification {
    pub fn is_on(self) -> bool {
        matches!(self, Verification::On)
    }
}
