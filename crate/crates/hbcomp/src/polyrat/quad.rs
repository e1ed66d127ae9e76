//! Doubling trapezoid quadrature on the unit circle.
//!
//! For 2π-periodic integrands the trapezoid rule on 2^k equispaced nodes is
//! spectrally accurate, and node sets nest under doubling, so each refinement
//! only evaluates the new odd-indexed nodes. Convergence is declared after
//! two consecutive doublings agree to the relative target; divergent
//! integrals are never decided here (local order analysis upstream decides),
//! so a refinement-cap overrun is reported as an error, not as a value.

use super::C64;
use crate::error::Error;
use crate::tol::QUAD_MAX_LEVEL;
use crate::Result;

/// Starting refinement level (2^4 = 16 nodes).
pub const START_LEVEL: u32 = 4;

/// `n` equispaced points on the unit circle, starting at 1.
pub fn unit_circle_nodes(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            C64::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// Mean of `f` over the unit circle, (1/2π)∫f(e^{iθ})dθ, for real-valued f.
pub fn circle_mean<F: FnMut(C64) -> f64>(mut f: F, quad_tol: f64) -> Result<f64> {
    let mut n: usize = 1 << START_LEVEL;
    let mut sum: f64 = unit_circle_nodes(n).iter().map(|&z| f(z)).sum();
    let mut prev = sum / n as f64;
    let mut agreements = 0u32;
    let mut last_change = f64::INFINITY;
    for level in (START_LEVEL + 1)..=QUAD_MAX_LEVEL {
        n <<= 1;
        // Only the odd-indexed nodes of the doubled grid are new.
        for k in (1..n).step_by(2) {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            sum += f(C64::new(theta.cos(), theta.sin()));
        }
        let current = sum / n as f64;
        last_change = (current - prev).abs();
        if last_change <= quad_tol * current.abs().max(1e-12) {
            agreements += 1;
            if agreements >= 2 {
                return Ok(current);
            }
        } else {
            agreements = 0;
        }
        prev = current;
        if !current.is_finite() {
            return Err(Error::QuadratureNotConverged { level, last_change });
        }
    }
    Err(Error::QuadratureNotConverged {
        level: QUAD_MAX_LEVEL,
        last_change,
    })
}

/// Mean of a complex-valued integrand over the unit circle.
pub fn circle_mean_complex<F: FnMut(C64) -> C64>(mut f: F, quad_tol: f64) -> Result<C64> {
    let mut n: usize = 1 << START_LEVEL;
    let mut sum: C64 = unit_circle_nodes(n).iter().map(|&z| f(z)).sum();
    let mut prev = sum / n as f64;
    let mut agreements = 0u32;
    let mut last_change = f64::INFINITY;
    for level in (START_LEVEL + 1)..=QUAD_MAX_LEVEL {
        n <<= 1;
        for k in (1..n).step_by(2) {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            sum += f(C64::new(theta.cos(), theta.sin()));
        }
        let current = sum / n as f64;
        last_change = (current - prev).norm();
        if last_change <= quad_tol * current.norm().max(1e-12) {
            agreements += 1;
            if agreements >= 2 {
                return Ok(current);
            }
        } else {
            agreements = 0;
        }
        prev = current;
        if !current.re.is_finite() || !current.im.is_finite() {
            return Err(Error::QuadratureNotConverged { level, last_change });
        }
    }
    Err(Error::QuadratureNotConverged {
        level: QUAD_MAX_LEVEL,
        last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrates_to_itself() {
        let v = circle_mean(|_| 2.5, 1e-10).unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn trig_polynomial_mean_is_constant_term() {
        // |1 + z/2|² on the circle = 1 + 1/4 + Re z: mean 5/4.
        let v = circle_mean(|z| (C64::new(1.0, 0.0) + z * 0.5).norm_sqr(), 1e-10).unwrap();
        assert!((v - 1.25).abs() < 1e-13);
    }

    #[test]
    fn poisson_kernel_mean_is_one() {
        // (1−r²)/|1−r z̄|² integrates to 1 for r = 0.9.
        let r = 0.9;
        let v = circle_mean(
            |z| (1.0 - r * r) / (C64::new(1.0, 0.0) - r * z).norm_sqr(),
            1e-10,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn complex_mean_picks_fourier_coefficient() {
        // mean of z̄·(3z + 5z²) = 3.
        let v = circle_mean_complex(|z| z.conj() * (z * 3.0 + z * z * 5.0), 1e-10).unwrap();
        assert!((v - C64::new(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn divergent_integrand_hits_cap() {
        // 1/|1−z|² is not integrable on the circle.
        let out = circle_mean(|z| 1.0 / (C64::new(1.0, 0.0) - z).norm_sqr().max(1e-300), 1e-10);
        assert!(matches!(out, Err(Error::QuadratureNotConverged { .. })));
    }
}
