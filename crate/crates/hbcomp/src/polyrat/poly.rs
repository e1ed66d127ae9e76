//! Dense complex polynomials.

use super::C64;
use crate::error::Error;
use crate::Result;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial with complex coefficients, stored in ascending order:
/// `coeffs[k]` multiplies `z^k`. The zero polynomial is the empty vector,
/// and a nonzero polynomial always has a nonzero leading coefficient
/// (trailing near-zeros are trimmed relative to the largest coefficient).
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

/// Relative threshold for trimming leading coefficients after arithmetic.
/// Products of modest-degree polynomials lose at most a few ulps per
/// coefficient, so anything below 1e-12 of the largest coefficient is noise.
const TRIM_TOL: f64 = 1e-12;

impl CPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial `c` (zero polynomial if `c == 0`).
    pub fn constant(c: C64) -> Self {
        let mut p = CPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        CPoly {
            coeffs: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        }
    }

    /// Build from ascending complex coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: &[C64]) -> Self {
        let mut p = CPoly {
            coeffs: coeffs.to_vec(),
        };
        p.trim();
        p
    }

    /// Build from ascending real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_coeffs(
            &coeffs
                .iter()
                .map(|&x| C64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    /// The linear factor `z - root`.
    pub fn linear(root: C64) -> Self {
        CPoly {
            coeffs: vec![-root, C64::new(1.0, 0.0)],
        }
    }

    /// Product of `(z - root)^multiplicity` over the given clusters.
    pub fn from_roots(roots: &[(C64, usize)]) -> Self {
        let mut p = CPoly::constant(C64::new(1.0, 0.0));
        for &(root, mult) in roots {
            let lin = CPoly::linear(root);
            for _ in 0..mult {
                p = &p * &lin;
            }
        }
        p
    }

    fn trim(&mut self) {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= TRIM_TOL * scale {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.iter().all(|c| c.norm() <= TRIM_TOL * scale) {
            self.coeffs.clear();
        }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants. Returns `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree treating the zero polynomial as degree 0 (for display/layout).
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    /// Ascending coefficient slice (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Leading coefficient. Errors on the zero polynomial.
    pub fn leading(&self) -> Result<C64> {
        self.coeffs.last().copied().ok_or(Error::ZeroFunction)
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluate the polynomial and its first derivative at `z` in one pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        let coeffs: Vec<C64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        CPoly::from_coeffs(&coeffs)
    }

    /// k-th derivative evaluated at `z` (includes the k! factor).
    pub fn derivative_at(&self, z: C64, k: usize) -> C64 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval(z)
    }

    /// Taylor coefficients at `z0`: entry k is `p^(k)(z0)/k!`, i.e. the
    /// coefficients of `p(z0 + w)` in `w`. Computed by repeated Horner
    /// shifts, which is exact up to rounding.
    pub fn taylor_shift(&self, z0: C64) -> Vec<C64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if n == 0 {
            return Vec::new();
        }
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += z0 * next;
            }
        }
        c
    }

    /// Substitute `z ↦ factor·z`: coefficient k is scaled by `factor^k`.
    pub fn dilate(&self, factor: C64) -> CPoly {
        let mut pow = C64::new(1.0, 0.0);
        let coeffs: Vec<C64> = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * pow;
                pow *= factor;
                out
            })
            .collect();
        CPoly::from_coeffs(&coeffs)
    }

    /// Multiply by `z^k` (shift coefficients up).
    pub fn mul_zk(&self, k: usize) -> CPoly {
        if self.is_zero() {
            return CPoly::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        CPoly { coeffs }
    }

    /// Scale every coefficient by `c`.
    pub fn scale(&self, c: C64) -> CPoly {
        let coeffs: Vec<C64> = self.coeffs.iter().map(|&x| x * c).collect();
        CPoly::from_coeffs(&coeffs)
    }

    /// Divide by the leading coefficient. Errors on the zero polynomial.
    pub fn monic(&self) -> Result<CPoly> {
        let lead = self.leading()?;
        Ok(self.scale(C64::new(1.0, 0.0) / lead))
    }

    /// Coefficient-wise conjugation: `p_conj(z) = conj(p(conj(z)))`.
    pub fn conj_coeffs(&self) -> CPoly {
        CPoly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Reversed-conjugate polynomial `p^#(z) = z^deg · conj(p(1/conj(z)))`,
    /// i.e. the coefficient list conjugated and reversed. Roots map to their
    /// circle reflections `1/conj(root)`.
    pub fn reversal(&self) -> CPoly {
        let mut coeffs: Vec<C64> = self.coeffs.iter().map(|c| c.conj()).collect();
        coeffs.reverse();
        CPoly::from_coeffs(&coeffs)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &CPoly) -> Result<(CPoly, CPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.is_zero() || self.coeffs.len() - 1 < dd {
            return Ok((CPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let dn = rem.len() - 1;
        let lead = divisor.coeffs[dd];
        let mut quot = vec![C64::new(0.0, 0.0); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for j in 0..=dd {
                rem[k + j] -= q * divisor.coeffs[j];
            }
        }
        rem.truncate(dd);
        Ok((CPoly::from_coeffs(&quot), CPoly::from_coeffs(&rem)))
    }

    /// Synthetic division by `(z - root)`. Returns the quotient and the
    /// remainder value `self(root)`.
    pub fn deflate(&self, root: C64) -> (CPoly, C64) {
        if self.is_zero() {
            return (CPoly::zero(), C64::new(0.0, 0.0));
        }
        let n = self.coeffs.len();
        if n == 1 {
            return (CPoly::zero(), self.coeffs[0]);
        }
        let mut quot = vec![C64::new(0.0, 0.0); n - 1];
        let mut acc = self.coeffs[n - 1];
        for k in (1..n).rev() {
            quot[k - 1] = acc;
            acc = acc * root + self.coeffs[k - 1];
        }
        (CPoly::from_coeffs(&quot), acc)
    }

    /// True when every coefficient is within `tol` (relative to the larger
    /// coefficient scale) of the corresponding coefficient of `other`.
    pub fn approx_eq(&self, other: &CPoly, tol: f64) -> bool {
        let scale = self.coeff_scale().max(other.coeff_scale());
        if scale == 0.0 {
            return true;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| (self.coeff(k) - other.coeff(k)).norm() <= tol * scale)
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs: Vec<C64> = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        CPoly::from_coeffs(&coeffs)
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs: Vec<C64> = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        CPoly::from_coeffs(&coeffs)
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        CPoly::from_coeffs(&coeffs)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff_str = if c.im == 0.0 {
                format!("{}", c.re)
            } else if c.re == 0.0 {
                format!("{}i", c.im)
            } else {
                format!("({}+{}i)", c.re, c.im)
            };
            match k {
                0 => write!(f, "{coeff_str}")?,
                1 => write!(f, "{coeff_str}*z")?,
                _ => write!(f, "{coeff_str}*z^{k}")?,
            }
        }
        Ok(())
    }
}
