//! Error type shared by all modules.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Everything that can go wrong in the toolkit.
///
/// Variants carry the witness data a caller needs to report the failure
/// (offending pole, boundary point, residual size, …).
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Polynomial division or rational construction with a zero denominator.
    #[error("division by the zero polynomial")]
    DivideByZeroPoly,

    /// An operation that needs a nonzero function received the zero function.
    #[error("operation undefined for the zero function")]
    ZeroFunction,

    /// Root finding did not reach the required residual accuracy.
    #[error("root clustering did not converge (residual {residual:.3e} for degree {degree})")]
    IllConditioned { degree: usize, residual: f64 },

    /// A function expected in the Hardy space H² has a pole in the closed disk.
    #[error("not in H2: pole at {}", fmt_c(*.witness))]
    NotInHardy { witness: C64 },

    /// The symbol is not an analytic self-map of the disk.
    #[error("not a self-map of the disk: {reason}")]
    NotASelfMap { reason: String },

    /// `b` (or a candidate symbol where forbidden) is inner: |b| = 1 a.e. on
    /// the circle, so 1 − |b|² has no Fejér–Riesz factorization.
    #[error(
        "b is a finite Blaschke product (|b| = 1 a.e. on the circle): H(b) is then a \
         finite-dimensional model-space quotient outside this toolkit's scope; \
         supply a b with |b| < 1 somewhere on the circle"
    )]
    IsInner,

    /// A unit-circle root of the factorization target has odd multiplicity —
    /// the data is not a genuine modulus-squared profile.
    #[error("unit-circle root at {} has odd multiplicity {multiplicity}", fmt_c(*.location))]
    OddCircleMultiplicity { location: C64, multiplicity: usize },

    /// The function supplied as an outer function has a zero in the open disk.
    #[error("not outer: zero at {} lies in the open disk", fmt_c(*.witness))]
    NotOuter { witness: C64 },

    /// Sup-norm exceeds 1 beyond tolerance where membership in the closed
    /// unit ball of H∞ is required.
    #[error("sup norm {sup:.12} exceeds 1 on the circle")]
    NormExceeded { sup: f64 },

    /// Pythagorean identity |a|² + |b|² = 1 failed validation on samples.
    #[error("mate validation failed: max |(|a|^2+|b|^2) - 1| = {deviation:.3e} on circle samples")]
    MateMismatch { deviation: f64 },

    /// Derivative data requested at a point where the function has a pole.
    #[error("pole at the boundary zero {}", fmt_c(*.xi))]
    PoleAtBoundaryZero { xi: C64 },

    /// Candidate multiplier is not bounded below on the closed disk.
    #[error("1/φ unbounded: min |φ| = {min_modulus:.3e} near {}", fmt_c(*.witness))]
    NotBoundedBelow { witness: C64, min_modulus: f64 },

    /// A rational function outside H(b) was handed to the decomposition.
    #[error("not in H(b): pole at {}", fmt_c(*.witness))]
    NotInHb { witness: C64 },

    /// A boundary value of the symbol sits in the numerically undecidable
    /// band near a unit-circle zero of the mate.
    #[error("boundary value {} of φ(ξ_{index}) is {distance:.3e} from the nearest unit-circle zero of a: too close to call", fmt_c(*.value))]
    AmbiguousBoundaryValue { index: usize, value: C64, distance: f64 },

    /// A contact-point operation was invoked at a point where |φ| < 1.
    #[error("{} is not a contact point of the symbol (|φ| = {modulus:.12})", fmt_c(*.zeta))]
    NotContactPoint { zeta: C64, modulus: f64 },

    /// Exact division by the boundary-zero polynomial left a remainder.
    #[error("reduction by the boundary-zero polynomial left relative remainder {residual:.3e}")]
    ReductionResidual { residual: f64 },

    /// Circle quadrature hit the refinement cap without meeting the target.
    #[error("quadrature did not converge: relative change {last_change:.3e} at 2^{level} nodes")]
    QuadratureNotConverged { level: u32, last_change: f64 },

    /// Coefficient extraction would sample on a circle passing through a pole.
    #[error("pole at {} lies on the sampling circle", fmt_c(*.pole))]
    PoleOnSamplingCircle { pole: C64 },

    /// A specialized check was invoked for data outside its scope.
    #[error("wrong space for this check: {reason}")]
    WrongSpace { reason: String },

    /// Malformed input (CLI/JSON layer).
    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
