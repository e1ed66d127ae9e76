//! Pythagorean mates by Fejér–Riesz factorization.
//!
//! For a rational `b` in the closed unit ball of `H∞` that is not a finite
//! Blaschke product, there is a unique outer rational `a` with `a(0) > 0`
//! and `|a|² + |b|² = 1` almost everywhere on the unit circle. With
//! `b = p/q` the trigonometric profile `1 − |b|²` lifts to the polynomial
//!
//! ```text
//! P(z) = q(z)·q^#(z)·z^{deg p} − p(z)·p^#(z)·z^{deg q},
//! ```
//!
//! whose non-origin roots are symmetric under reflection `z ↦ 1/conj(z)` and
//! whose unit-circle roots have even multiplicity. Keeping one root of each
//! reflected pair (the one outside the circle) and half of every circle
//! multiplicity yields the outer square root `a = c·r/q` after a constant
//! and phase normalization. Roots at the origin pair with ∞ and are dropped.
//!
//! The boundary zeros of `a` — the unit-circle roots `ξ_j` with
//! multiplicities `m_j` — drive everything downstream: `a₁ = Π (z−ξ_j)^{m_j}`
//! and `N = Σ m_j` define the decomposition model of `H(b)`.

use crate::error::Error;
use crate::polyrat::{all_roots, CPoly, RatFunc, C64};
use crate::tol::Tol;
use crate::Result;
use serde::{Deserialize, Serialize};

/// The mate `a` of `b` together with the boundary-zero data of `a`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MateData {
    pub b: RatFunc,
    pub a: RatFunc,
    /// Monic polynomial carrying the unit-circle zeros of `a`.
    pub a1: CPoly,
    /// Unit-circle zeros `ξ_j` of `a` with multiplicities `m_j`.
    pub boundary_zeros: Vec<BoundaryZero>,
    /// `N = Σ m_j = deg a₁`; 0 exactly when ‖b‖∞ < 1.
    pub n: usize,
    /// True when ‖b‖∞ < 1 strictly: `H(b) = H²` with an equivalent norm and
    /// the composition problem is the classical Hardy-space one.
    pub norm_below_one: bool,
}

/// One unit-circle zero of the mate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundaryZero {
    /// Location on the unit circle, stored as [re, im].
    pub location: [f64; 2],
    pub multiplicity: usize,
}

impl MateData {
    /// Boundary zeros as complex numbers with multiplicities.
    pub fn zeros(&self) -> Vec<(C64, usize)> {
        self.boundary_zeros
            .iter()
            .map(|z| (C64::new(z.location[0], z.location[1]), z.multiplicity))
            .collect()
    }
}

/// Circle samples used for sup-norm admission checks.
const SUP_SAMPLES: usize = 4096;

/// Admission slack on the sup norm: rational data in the closed ball
/// evaluates to at most 1 + a few ulps on circle samples.
const SUP_SLACK: f64 = 1e-9;

/// Band below 1 within which the sup norm is treated as exactly 1; a sup
/// below 1 − this margin flags the degenerate ‖b‖∞ < 1 classification.
const NORM_ONE_MARGIN: f64 = 1e-6;

/// Compute the mate of `b` and extract the boundary-zero data.
pub fn pythagorean_mate(b: &RatFunc, tol: &Tol) -> Result<MateData> {
    if let Some(witness) = b.h2_membership(tol)?.witness() {
        return Err(Error::NotASelfMap {
            reason: format!(
                "b has a pole of modulus {:.6} in the closed unit disk",
                witness.norm()
            ),
        });
    }
    let sup = b.circle_sup(SUP_SAMPLES);
    if sup > 1.0 + SUP_SLACK {
        return Err(Error::NotASelfMap {
            reason: format!("sup |b| on the circle is {sup:.12} > 1"),
        });
    }

    let split = fejer_riesz_sqrt(b, tol)?;
    let a = normalize_phase_at_zero(&split.factor);
    let boundary_zeros: Vec<BoundaryZero> = split
        .circle_zeros
        .iter()
        .map(|&(loc, mult)| BoundaryZero {
            location: [loc.re, loc.im],
            multiplicity: mult,
        })
        .collect();
    let zeros_c: Vec<(C64, usize)> = split.circle_zeros.clone();
    let a1 = CPoly::from_roots(&zeros_c);
    let n = zeros_c.iter().map(|&(_, m)| m).sum();

    let data = MateData {
        b: b.clone(),
        a,
        a1,
        boundary_zeros,
        n,
        norm_below_one: sup < 1.0 - NORM_ONE_MARGIN,
    };
    validate_pythagorean(&data)?;
    Ok(data)
}

/// Rebuild full mate data from a given outer `a` with unit-circle zeros,
/// constructing `b` by the same factorization applied to `1 − |a|²`.
pub fn mate_from_a(a: &RatFunc, tol: &Tol) -> Result<MateData> {
    if let Some(witness) = a.h2_membership(tol)?.witness() {
        return Err(Error::NotInHardy { witness });
    }
    let mut circle_zeros: Vec<(C64, usize)> = Vec::new();
    for z in a.zeros(tol.cluster)? {
        let modulus = z.location.norm();
        if modulus < 1.0 - tol.circle {
            return Err(Error::NotOuter {
                witness: z.location,
            });
        }
        if (modulus - 1.0).abs() <= tol.circle {
            circle_zeros.push((z.location / modulus, z.multiplicity));
        }
    }
    let sup = a.circle_sup(SUP_SAMPLES);
    if sup > 1.0 + SUP_SLACK {
        return Err(Error::NormExceeded { sup });
    }

    let a = normalize_phase_at_zero(a);
    circle_zeros.sort_by(|x, y| {
        (x.0.re, x.0.im)
            .partial_cmp(&(y.0.re, y.0.im))
            .unwrap()
    });

    let split = fejer_riesz_sqrt(&a, tol)?;
    let b = normalize_phase_at_zero(&split.factor);

    let a1 = CPoly::from_roots(&circle_zeros);
    let n = circle_zeros.iter().map(|&(_, m)| m).sum();
    let boundary_zeros = circle_zeros
        .iter()
        .map(|&(loc, mult)| BoundaryZero {
            location: [loc.re, loc.im],
            multiplicity: mult,
        })
        .collect();

    let data = MateData {
        b,
        a,
        a1,
        boundary_zeros,
        n,
        norm_below_one: circle_zeros.is_empty(),
    };
    validate_pythagorean(&data)?;
    Ok(data)
}

struct FejerRieszSplit {
    /// Outer square root of `1 − |f|²` (phase not yet normalized).
    factor: RatFunc,
    /// Unit-circle zeros of the factor with (halved) multiplicities,
    /// snapped to exact modulus 1 and sorted.
    circle_zeros: Vec<(C64, usize)>,
}

/// Outer spectral factor of `1 − |f|²` on the unit circle.
fn fejer_riesz_sqrt(f: &RatFunc, tol: &Tol) -> Result<FejerRieszSplit> {
    let p = f.num().clone();
    let q = f.den().clone();
    let dp = p.degree_or_zero();
    let dq = q.degree_or_zero();
    let qq = (&q * &q.reversal()).mul_zk(dp);
    let pp = (&p * &p.reversal()).mul_zk(dq);
    let laurent_num = &qq - &pp;

    let input_scale = qq.coeff_scale().max(pp.coeff_scale());
    if laurent_num.coeff_scale() <= 1e-10 * input_scale {
        return Err(Error::IsInner);
    }

    let clusters = all_roots(&laurent_num, tol.cluster)?;
    let mut kept: Vec<(C64, usize)> = Vec::new();
    let mut circle_zeros: Vec<(C64, usize)> = Vec::new();
    for cl in &clusters {
        let modulus = cl.location.norm();
        if modulus == 0.0 {
            // Origin roots pair with roots at ∞ under reflection; dropped.
            continue;
        }
        if (modulus - 1.0).abs() <= tol.circle {
            if cl.multiplicity % 2 != 0 {
                return Err(Error::OddCircleMultiplicity {
                    location: cl.location,
                    multiplicity: cl.multiplicity,
                });
            }
            let snapped = cl.location / modulus;
            kept.push((snapped, cl.multiplicity / 2));
            circle_zeros.push((snapped, cl.multiplicity / 2));
        } else if modulus > 1.0 {
            kept.push((cl.location, cl.multiplicity));
        }
        // Roots strictly inside are the reflections of kept outside roots.
    }

    let r = CPoly::from_roots(&kept);

    // The ratio (1 − |f|²)/|r/q|² is the constant c² on the circle; a
    // weighted mean over offset samples recovers it stably — samples near
    // circle zeros carry vanishing weight.
    let samples = 128;
    let mut weighted_value = 0.0;
    let mut weight_sum = 0.0;
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.382) / samples as f64;
        let zeta = C64::new(theta.cos(), theta.sin());
        let profile = 1.0 - f.eval(zeta).norm_sqr();
        let w = (r.eval(zeta) / q.eval(zeta)).norm_sqr();
        weighted_value += profile;
        weight_sum += w;
    }
    if weight_sum <= 0.0 || weighted_value <= 1e-14 * samples as f64 {
        return Err(Error::IsInner);
    }
    let c = (weighted_value / weight_sum).sqrt();

    circle_zeros.sort_by(|x, y| {
        (x.0.re, x.0.im)
            .partial_cmp(&(y.0.re, y.0.im))
            .unwrap()
    });
    let factor = RatFunc::new_with_tol(r.scale(C64::new(c, 0.0)), q, tol.cluster)?;
    Ok(FejerRieszSplit {
        factor,
        circle_zeros,
    })
}

/// Rotate by a unimodular constant so the value at 0 is real and positive.
fn normalize_phase_at_zero(f: &RatFunc) -> RatFunc {
    let v = f.eval(C64::new(0.0, 0.0));
    if v.norm() == 0.0 {
        return f.clone();
    }
    let gamma = v.conj() / v.norm();
    &RatFunc::constant(gamma) * f
}

/// Check `|a|² + |b|² = 1` on 256 circle samples to 1e-9.
fn validate_pythagorean(m: &MateData) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for k in 0..256 {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.271) / 256.0;
        let zeta = C64::new(theta.cos(), theta.sin());
        let s = m.a.eval(zeta).norm_sqr() + m.b.eval(zeta).norm_sqr();
        deviation = deviation.max((s - 1.0).abs());
    }
    if deviation > 1e-9 {
        return Err(Error::MateMismatch { deviation });
    }
    Ok(())
}
