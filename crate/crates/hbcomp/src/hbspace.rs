//! The concrete model of `H(b)` for rational non-extreme `b`.
//!
//! With `a₁ = Π (z−ξ_j)^{m_j}` carrying the unit-circle zeros of the mate
//! and `N = Σ m_j`, the space splits as
//!
//! ```text
//! H(b) = a₁·H²  ⊕  P_{N−1},
//! ```
//!
//! an orthogonal direct sum in which `P_{N−1}` (polynomials of degree < N)
//! carries the plain `H²` inner product. A function `f` that is smooth
//! enough at every `ξ_j` decomposes as `f = a₁·f̃ + p_f`, where `p_f` is the
//! Hermite interpolant matching `f^{(k)}(ξ_j)` for `k < m_j`, and
//!
//! ```text
//! ‖f‖² = ‖f̃‖²_{H²} + ‖p_f‖²_{H²}.
//! ```
//!
//! Membership of a rational `f` therefore reduces to two checks: no poles in
//! the closed disk, and `f̃ = (f − p_f)/a₁ ∈ H²` (automatic once the poles
//! are out, since the interpolant removes the zeros of `a₁` exactly).

use crate::error::Error;
use crate::mate::MateData;
use crate::polyrat::{quad, CPoly, RatFunc, C64};
use crate::tol::{Tol, DEFLATE_TOL, HERMITE_RESIDUAL_TOL, MIN_MODULUS_TOL};
use crate::Result;
use nalgebra::DMatrix;

/// Dual basis of the boundary-derivative functionals: polynomials `r_{j,k}`
/// of degree < N with `r_{j,k}^{(l)}(ξ_i) = δ_{ij}δ_{kl}`.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    /// `polys[j][k]` answers the k-th derivative at the j-th boundary zero.
    pub polys: Vec<Vec<CPoly>>,
    /// Worst interpolation-condition residual over all basis elements.
    pub residual: f64,
}

/// Orthogonal decomposition `f = a₁·f̃ + p_f` with the resulting norm.
#[derive(Debug, Clone)]
pub struct HbDecomposition {
    pub f: RatFunc,
    pub f_tilde: RatFunc,
    pub p_f: CPoly,
    pub norm_sq: f64,
    /// Stamp of the space the decomposition lives in, for mismatch checks.
    a1_stamp: CPoly,
}

impl HbDecomposition {
    pub fn norm(&self) -> f64 {
        self.norm_sq.sqrt()
    }
}

/// Solve the confluent Vandermonde system for the dual basis polynomials.
pub fn hermite_basis(m: &MateData) -> Result<HermiteBasis> {
    let zeros = m.zeros();
    let n = m.n;
    if n == 0 {
        return Ok(HermiteBasis {
            polys: Vec::new(),
            residual: 0.0,
        });
    }

    // Row (j,l): the condition p^(l)(ξ_j) = value; column t: coefficient of z^t.
    let mut v = DMatrix::<C64>::zeros(n, n);
    let mut row = 0;
    for &(xi, mult) in &zeros {
        for l in 0..mult {
            for t in l..n {
                let mut fall = 1.0;
                for s in 0..l {
                    fall *= (t - s) as f64;
                }
                v[(row, t)] = xi.powi((t - l) as i32) * fall;
            }
            row += 1;
        }
    }

    let lu = v.clone().lu();
    let mut polys: Vec<Vec<CPoly>> = Vec::new();
    let mut residual: f64 = 0.0;
    let mut row_base = 0;
    for &(_, mult) in &zeros {
        let mut group = Vec::new();
        for l in 0..mult {
            let mut e = DMatrix::<C64>::zeros(n, 1);
            e[(row_base + l, 0)] = C64::new(1.0, 0.0);
            let x = lu.solve(&e).ok_or(Error::IllConditioned {
                degree: n,
                residual: f64::INFINITY,
            })?;
            let defect = (&v * &x - &e)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            residual = residual.max(defect);
            let coeffs: Vec<C64> = x.column(0).iter().copied().collect();
            group.push(CPoly::from_coeffs(&coeffs));
        }
        polys.push(group);
        row_base += mult;
    }
    if residual > HERMITE_RESIDUAL_TOL {
        return Err(Error::IllConditioned {
            degree: n,
            residual,
        });
    }
    Ok(HermiteBasis { polys, residual })
}

/// Decompose `f` against the space of `m`, reusing a precomputed basis.
pub fn decompose_with_basis(
    f: &RatFunc,
    m: &MateData,
    basis: &HermiteBasis,
    tol: &Tol,
) -> Result<HbDecomposition> {
    if let Some(witness) = f.h2_membership(tol)?.witness() {
        return Err(Error::NotInHb { witness });
    }
    let zeros = m.zeros();

    if m.n == 0 {
        let norm_sq = f.h2_norm_sq(tol)?;
        return Ok(HbDecomposition {
            f: f.clone(),
            f_tilde: f.clone(),
            p_f: CPoly::zero(),
            norm_sq,
            a1_stamp: m.a1.clone(),
        });
    }

    // Hermite data of f at the boundary zeros.
    let mut p_f = CPoly::zero();
    for (j, &(xi, mult)) in zeros.iter().enumerate() {
        let derivs = f.derivatives_at(xi, mult)?;
        for (k, d) in derivs.iter().enumerate() {
            p_f = &p_f + &basis.polys[j][k].scale(*d);
        }
    }

    // f̃ = (f − p_f)/a₁ by explicit deflation at each ξ_j; the remainder
    // vanishes in exact arithmetic because p_f matches the jet of f.
    let diff = f - &RatFunc::from_poly(p_f.clone());
    let mut num = diff.num().clone();
    let scale = num.coeff_scale().max(p_f.coeff_scale());
    if num.is_zero() {
        return Ok(HbDecomposition {
            f: f.clone(),
            f_tilde: RatFunc::zero(),
            p_f: p_f.clone(),
            norm_sq: poly_norm_sq(&p_f),
            a1_stamp: m.a1.clone(),
        });
    }
    let mut worst_rem: f64 = 0.0;
    for &(xi, mult) in &zeros {
        for _ in 0..mult {
            let (quot, rem) = num.deflate(xi);
            worst_rem = worst_rem.max(rem.norm());
            num = quot;
        }
    }
    if worst_rem > DEFLATE_TOL * scale {
        return Err(Error::IllConditioned {
            degree: m.n,
            residual: worst_rem / scale,
        });
    }
    let f_tilde = RatFunc::new_with_tol(num, diff.den().clone(), tol.cluster)?;
    if let Some(witness) = f_tilde.h2_membership(tol)?.witness() {
        return Err(Error::NotInHb { witness });
    }
    let norm_sq = f_tilde.h2_norm_sq(tol)? + poly_norm_sq(&p_f);
    Ok(HbDecomposition {
        f: f.clone(),
        f_tilde,
        p_f,
        norm_sq,
        a1_stamp: m.a1.clone(),
    })
}

/// Decompose `f`, building the Hermite basis on the fly.
pub fn decompose(f: &RatFunc, m: &MateData, tol: &Tol) -> Result<HbDecomposition> {
    let basis = hermite_basis(m)?;
    decompose_with_basis(f, m, &basis, tol)
}

/// Inner product of two decomposed functions in the same space.
pub fn hb_inner(x: &HbDecomposition, y: &HbDecomposition, tol: &Tol) -> Result<C64> {
    if !x.a1_stamp.approx_eq(&y.a1_stamp, 1e-12) {
        let deviation = (&x.a1_stamp - &y.a1_stamp).coeff_scale();
        return Err(Error::MateMismatch { deviation });
    }
    let xt = x.f_tilde.clone();
    let yt = y.f_tilde.clone();
    let smooth = quad::circle_mean_complex(
        move |z| xt.eval(z) * yt.eval(z).conj(),
        tol.quad,
    )?;
    let mut poly_part = C64::new(0.0, 0.0);
    for k in 0..x.p_f.coeffs().len().max(y.p_f.coeffs().len()) {
        poly_part += x.p_f.coeff(k) * y.p_f.coeff(k).conj();
    }
    Ok(smooth + poly_part)
}

/// Outcome of the multiplier certificate for `1/φ`.
#[derive(Debug, Clone)]
pub enum MultiplierCheck {
    /// `φ` and `1/φ` both lie in `H(b)` and multiply it into itself; the
    /// certificate is the scaled remainder of `a₁ | p_φ·p_{1/φ} − 1`.
    Multiplier { remainder: f64 },
    NotApplicable { reason: String },
}

/// Verify the divisibility certificate behind "φ invertible in the
/// multiplier algebra": if φ ∈ H(b) is bounded away from zero on the closed
/// disk, then h = 1/φ ∈ H(b) and a₁ divides p_φ·p_h − 1.
pub fn multiplier_inverse_check(
    phi: &RatFunc,
    m: &MateData,
    tol: &Tol,
) -> Result<MultiplierCheck> {
    let basis = hermite_basis(m)?;
    let dec_phi = decompose_with_basis(phi, m, &basis, tol)?;

    // Analytic and zero-free on the closed disk ⇒ |φ| attains its minimum
    // on the circle; check zeros exactly and the boundary by sampling.
    for z in phi.zeros(tol.cluster)? {
        if z.location.norm() <= 1.0 + tol.circle {
            return Err(Error::NotBoundedBelow {
                witness: z.location,
                min_modulus: 0.0,
            });
        }
    }
    let mut min_mod = f64::INFINITY;
    let mut arg_min = C64::new(1.0, 0.0);
    for k in 0..4096 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 4096.0;
        let zeta = C64::new(theta.cos(), theta.sin());
        let v = phi.eval(zeta).norm();
        if v < min_mod {
            min_mod = v;
            arg_min = zeta;
        }
    }
    if min_mod <= MIN_MODULUS_TOL {
        return Err(Error::NotBoundedBelow {
            witness: arg_min,
            min_modulus: min_mod,
        });
    }

    let h = &RatFunc::one() / phi;
    let dec_h = decompose_with_basis(&h, m, &basis, tol)?;

    let prod = &dec_phi.p_f * &dec_h.p_f;
    let e = &prod - &CPoly::constant(C64::new(1.0, 0.0));
    if e.is_zero() {
        return Ok(MultiplierCheck::Multiplier { remainder: 0.0 });
    }
    let (_, rem) = e.divrem(&m.a1)?;
    let rel = rem.coeff_scale() / e.coeff_scale().max(1.0);
    if rel <= 1e-8 {
        Ok(MultiplierCheck::Multiplier { remainder: rel })
    } else {
        Ok(MultiplierCheck::NotApplicable {
            reason: format!("interpolant certificate remainder {rel:.3e} exceeds 1e-8"),
        })
    }
}

/// Exact `H²` norm squared of a polynomial (Parseval).
fn poly_norm_sq(p: &CPoly) -> f64 {
    p.coeffs().iter().map(|c| c.norm_sqr()).sum()
}
