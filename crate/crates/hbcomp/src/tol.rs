//! Centralized numeric tolerances.
//!
//! Every threshold used by the toolkit is defined here, once, with its
//! rationale. The values sit far above double-precision noise and far below
//! the feature scales of the intended inputs (polynomial degree ≲ 40, roots
//! separated at desk scale, coefficients of moderate size). No other module
//! hard-codes a tolerance.

use serde::{Deserialize, Serialize};

/// Tolerance bundle threaded through all numeric kernels.
///
/// The CLI exposes each field as `--tol name=value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tol {
    /// Relative threshold below which trailing polynomial coefficients are
    /// trimmed (relative to the largest coefficient modulus). A product of a
    /// handful of unit-scale polynomials keeps ~3 digits of headroom over
    /// f64 rounding, so 1e-12 trims noise without eating genuine terms.
    pub coeff: f64,

    /// Acceptance threshold for root clusters: the polished location of a
    /// cluster of multiplicity m must drive `p, p', …, p^(m−1)` below this
    /// value relative to each derivative's coefficient scale. Polished
    /// locations of genuine multiple roots are Newton-accurate on the
    /// (m−1)-st derivative, so residuals land near 1e-12; 1e-7 leaves margin
    /// while rejecting mergers of roots that are merely close.
    pub cluster: f64,

    /// Half-width of the annulus around the unit circle used to classify a
    /// point as "on the circle" (|1 − |z|| ≤ circle). Exact rational data
    /// lands on the circle to machine precision; 1e-9 absorbs evaluation
    /// noise without capturing points that are genuinely inside.
    pub circle: f64,

    /// Relative convergence target for circle quadrature: node doubling
    /// stops when successive trapezoid levels agree to this factor.
    /// Trapezoid sums of smooth periodic integrands converge spectrally, so
    /// 1e-10 is reached after a few doublings away from contact points.
    pub quad: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            coeff: 1e-12,
            cluster: 1e-7,
            circle: 1e-9,
            quad: 1e-10,
        }
    }
}

impl Tol {
    /// Override one named tolerance; used by the CLI `--tol name=value` flag.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("tolerance {name} must be a positive number"));
        }
        match name {
            "coeff" => self.coeff = value,
            "cluster" => self.cluster = value,
            "circle" => self.circle = value,
            "quad" => self.quad = value,
            other => return Err(format!("unknown tolerance {other:?} (expected coeff, cluster, circle or quad)")),
        }
        Ok(())
    }
}

/// Distance under which a computed boundary value is identified with a
/// unit-circle zero of the mate. Polished cluster locations and evaluations
/// of rational functions at exact circle points agree to ~1e-12; anything
/// within 1e-7 is the same point for desk-scale inputs.
pub const MATCH_TOL: f64 = 1e-7;

/// Outer limit of the "too close to call" band when a boundary value of the
/// symbol is near — but not convincingly equal to — a unit-circle zero of the
/// mate. Distances between [`MATCH_TOL`] and this bound are reported as
/// ambiguous rather than silently resolved either way.
pub const AMBIGUOUS_TOL: f64 = 1e-4;

/// Maximum quadrature refinement depth: node counts stop at 2^20, enough to
/// resolve integrand peaks of width ~1e-4 radians with spectral headroom.
pub const QUAD_MAX_LEVEL: u32 = 20;

/// Relative residual accepted when a polynomial is deflated by a factor that
/// must divide it exactly in exact arithmetic (unit-circle zero matching).
pub const DEFLATE_TOL: f64 = 1e-8;

/// Residual bound for the confluent Vandermonde solve behind the Hermite
/// interpolation basis; solves worse than this raise `IllConditioned`.
pub const HERMITE_RESIDUAL_TOL: f64 = 1e-6;

/// Lower bound on min |φ| over the closed disk for the multiplier inverse
/// check: 1/φ must be honestly bounded, not merely nonvanishing.
pub const MIN_MODULUS_TOL: f64 = 1e-6;
