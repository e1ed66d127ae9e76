//! Symbolic/numeric toolkit for composition operators on de Branges–Rovnyak
//! spaces `H(b)` with rational data.
//!
//! Given a rational function `b` in the closed unit ball of `H∞` that is not a
//! finite Blaschke product, and a rational analytic self-map `φ` of the unit
//! disk, this crate decides whether the composition operator `C_φ : f ↦ f ∘ φ`
//! on `H(b)` is **bounded**, **compact** and/or **Hilbert–Schmidt**, and
//! verifies the structural identities behind those decisions numerically.
//!
//! The engine rests on three exact ingredients, all computed symbolically on
//! polynomial coefficient vectors:
//!
//! 1. the *Pythagorean mate* `a` of `b` — the unique outer rational function
//!    with `a(0) > 0` and `|a|² + |b|² = 1` a.e. on the unit circle, obtained
//!    by Fejér–Riesz spectral factorization ([`mate`]);
//! 2. the decomposition `H(b) = a₁H² ⊕ P_{N−1}`, where `a₁` is the monic
//!    polynomial carrying the unit-circle zeros of `a` and `P_{N−1}` the
//!    polynomials of degree `< N = deg a₁` ([`hbspace`]);
//! 3. the weight `u = (a₁∘φ)·Π (φ − φ(ξ_j))^{m_j} / a₁` that turns `C_φ` on
//!    `H(b)` into an equivalent weighted composition operator `f ↦ u·(f∘φ)`
//!    on the Hardy space `H²` ([`weight`]).
//!
//! Everything downstream — the rule lattices in [`verdict`], the Carleson-type
//! scans in [`scan`], the truncated operator matrices in [`opmatrix`] — reads
//! off these objects. All values are immutable and all operations are pure
//! functions; the only concurrency is data-parallel grid evaluation in the
//! scans (capped by the `HBCOMP_THREADS` environment variable).
//!
//! # Example
//!
//! ```
//! use hbcomp::{polyrat::RatFunc, mate::pythagorean_mate, report::{run, ProblemSpec, Symbol}};
//! use hbcomp::tol::Tol;
//!
//! let tol = Tol::default();
//! // b = (1+z)/2, φ = (1−z)/2
//! let b = RatFunc::from_real_coeffs(&[0.5, 0.5], &[1.0]).unwrap();
//! let phi = RatFunc::from_real_coeffs(&[0.5, -0.5], &[1.0]).unwrap();
//! let report = run(&ProblemSpec::from_b(b, phi), &tol).unwrap();
//! assert_eq!(report.verdict.bounded.to_string(), "yes");
//! assert_eq!(report.verdict.hilbert_schmidt.to_string(), "yes");
//! ```

pub mod error;
pub mod hbspace;
pub mod mate;
pub mod opmatrix;
pub mod polyrat;
pub mod report;
pub mod scan;
pub mod symbol;
pub mod tol;
pub mod verdict;
pub mod weight;

pub use error::Error;
pub use polyrat::{CPoly, RatFunc, C64};
pub use tol::Tol;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
