//! Polynomials, rational functions, root clustering and circle quadrature.
//!
//! Everything downstream (mates, decompositions, weights, verdicts) is built
//! from the four pieces in this module:
//!
//! * [`CPoly`] — dense complex polynomials in ascending coefficient order,
//! * [`roots`] — a deterministic simultaneous root finder with multiplicity
//!   clustering, so repeated roots come out as `(location, multiplicity)`
//!   pairs instead of a smeared cloud of simple roots,
//! * [`RatFunc`] — quotients of `CPoly` kept in a reduced canonical form
//!   (monic denominator, common root clusters cancelled),
//! * [`quad`] — doubling trapezoid quadrature on the unit circle, which is
//!   spectrally accurate for the smooth integrands that arise here.

pub mod poly;
pub mod quad;
pub mod ratfunc;
pub mod roots;

pub use poly::CPoly;
pub use ratfunc::{H2Membership, RatFunc};
pub use roots::{all_roots, RootCluster};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
