//! Rational functions as reduced quotients of [`CPoly`].
//!
//! Canonical form: the denominator is monic and shares no root cluster with
//! the numerator (reduction by root matching, not symbolic gcd, so that
//! inexact coefficients still cancel). Constructors reduce eagerly;
//! arithmetic operators return exact unreduced quotients (monic denominator
//! only) and leave reduction to the next constructor-level call, which keeps
//! operator chains total and avoids root finding on every intermediate.

use super::poly::CPoly;
use super::quad;
use super::roots::{all_roots, RootCluster};
use super::C64;
use crate::error::Error;
use crate::tol::Tol;
use crate::Result;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A quotient of complex polynomials with monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFunc {
    num: CPoly,
    den: CPoly,
}

/// Membership verdict for the Hardy space H² (rational case: decided by
/// pole location — any pole in the closed unit disk already breaks
/// square-integrability of the boundary values).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum H2Membership {
    InH2,
    NotInH2 { witness: C64 },
}

impl H2Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, H2Membership::InH2)
    }

    pub fn witness(&self) -> Option<C64> {
        match self {
            H2Membership::InH2 => None,
            H2Membership::NotInH2 { witness } => Some(*witness),
        }
    }
}

impl RatFunc {
    /// The zero function 0/1.
    pub fn zero() -> Self {
        RatFunc {
            num: CPoly::zero(),
            den: CPoly::constant(C64::new(1.0, 0.0)),
        }
    }

    /// The constant function c.
    pub fn constant(c: C64) -> Self {
        RatFunc {
            num: CPoly::constant(c),
            den: CPoly::constant(C64::new(1.0, 0.0)),
        }
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// The identity map z.
    pub fn identity() -> Self {
        RatFunc {
            num: CPoly::z(),
            den: CPoly::constant(C64::new(1.0, 0.0)),
        }
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: CPoly) -> Self {
        RatFunc {
            num: p,
            den: CPoly::constant(C64::new(1.0, 0.0)),
        }
    }

    /// Build and reduce `num/den` with the given root-clustering tolerance.
    pub fn new_with_tol(num: CPoly, den: CPoly, cluster_tol: f64) -> Result<Self> {
        let (num, den) = reduce_parts(num, den, cluster_tol)?;
        Ok(RatFunc { num, den })
    }

    /// Build and reduce `num/den` with the default clustering tolerance.
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        Self::new_with_tol(num, den, Tol::default().cluster)
    }

    /// Build from ascending real coefficient slices.
    pub fn from_real_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(CPoly::from_real(num), CPoly::from_real(den))
    }

    /// Build from ascending complex coefficient slices.
    pub fn from_complex_coeffs(num: &[C64], den: &[C64]) -> Result<Self> {
        Self::new(CPoly::from_coeffs(num), CPoly::from_coeffs(den))
    }

    /// A finite Blaschke product with the given zeros (all in the open
    /// disk) and multiplicities: Π ((z−λ)/(1−conj(λ)z))^m.
    pub fn blaschke(zeros: &[(C64, usize)]) -> Self {
        let mut num = CPoly::constant(C64::new(1.0, 0.0));
        let mut den = CPoly::constant(C64::new(1.0, 0.0));
        for &(lambda, mult) in zeros {
            let factor_num = CPoly::linear(lambda);
            let factor_den =
                CPoly::from_coeffs(&[C64::new(1.0, 0.0), -lambda.conj()]);
            for _ in 0..mult {
                num = &num * &factor_num;
                den = &den * &factor_den;
            }
        }
        RatFunc::raw(num, den)
    }

    /// Internal: monicize without reduction. `den` must be nonzero.
    fn raw(num: CPoly, den: CPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc::zero();
        }
        let lead = den.leading().expect("nonzero denominator");
        let inv = C64::new(1.0, 0.0) / lead;
        RatFunc {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    /// Re-run cluster reduction (idempotent on already reduced functions).
    pub fn reduced(&self, cluster_tol: f64) -> Result<Self> {
        Self::new_with_tol(self.num.clone(), self.den.clone(), cluster_tol)
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(c)` when the function is the constant c (after reduction).
    pub fn as_constant(&self) -> Option<C64> {
        if self.num.is_zero() {
            return Some(C64::new(0.0, 0.0));
        }
        if self.num.degree() == Some(0) && self.den.degree() == Some(0) {
            return Some(self.num.coeff(0) / self.den.coeff(0));
        }
        None
    }

    /// True when the function is a polynomial (denominator is constant).
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Plain pointwise evaluation; returns non-finite values at poles.
    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// |f| maximized over `samples` equispaced unit-circle points.
    pub fn circle_sup(&self, samples: usize) -> f64 {
        let mut sup: f64 = 0.0;
        for k in 0..samples {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let z = C64::new(theta.cos(), theta.sin());
            sup = sup.max(self.eval(z).norm());
        }
        sup
    }

    /// Boundary conjugate: g with g(ζ) = conj(f(ζ)) for |ζ| = 1, so that
    /// f·reflect(f) restricted to the circle is |f|². Involutive.
    pub fn reflect(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dp = self.num.degree_or_zero();
        let dq = self.den.degree_or_zero();
        let pr = self.num.reversal();
        let qr = self.den.reversal();
        if dq >= dp {
            RatFunc::raw(pr.mul_zk(dq - dp), qr)
        } else {
            RatFunc::raw(pr, qr.mul_zk(dp - dq))
        }
    }

    /// Coefficient conjugate: g(z) = conj(f(conj(z))).
    pub fn conj_coeffs(&self) -> RatFunc {
        RatFunc {
            num: self.num.conj_coeffs(),
            den: self.den.conj_coeffs(),
        }
    }

    /// Substitute `z ↦ factor·z`.
    pub fn dilate(&self, factor: C64) -> Result<RatFunc> {
        let den = self.den.dilate(factor);
        if den.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        Ok(RatFunc::raw(self.num.dilate(factor), den))
    }

    /// Quotient-rule derivative (unreduced).
    pub fn derivative(&self) -> RatFunc {
        let dn = self.num.derivative();
        let dd = self.den.derivative();
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::raw(num, den)
    }

    /// Composition self ∘ inner for rational `inner`.
    pub fn compose(&self, inner: &RatFunc) -> Result<RatFunc> {
        let dp = self.num.degree_or_zero();
        let dq = self.den.degree_or_zero();
        let d = dp.max(dq);
        // Powers of inner's numerator and denominator up to d.
        let mut npow = Vec::with_capacity(d + 1);
        let mut dpow = Vec::with_capacity(d + 1);
        npow.push(CPoly::constant(C64::new(1.0, 0.0)));
        dpow.push(CPoly::constant(C64::new(1.0, 0.0)));
        for k in 1..=d {
            npow.push(&npow[k - 1] * &inner.num);
            dpow.push(&dpow[k - 1] * &inner.den);
        }
        let assemble = |p: &CPoly| {
            let mut acc = CPoly::zero();
            for k in 0..=p.degree_or_zero() {
                let c = p.coeff(k);
                if c.norm() == 0.0 {
                    continue;
                }
                let term = &npow[k] * &dpow[d - k];
                acc = &acc + &term.scale(c);
            }
            acc
        };
        let num = assemble(&self.num);
        let den = assemble(&self.den);
        if den.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        Ok(RatFunc::raw(num, den))
    }

    /// Integer power (unreduced).
    pub fn pow(&self, k: usize) -> RatFunc {
        let mut out = RatFunc::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// First `count` Taylor coefficients at `z0`. A removable common factor
    /// `(z−z0)^s` of numerator and denominator is cancelled locally; a
    /// genuine pole at `z0` is an error carrying the point.
    pub fn taylor_at(&self, z0: C64, count: usize) -> Result<Vec<C64>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        if self.is_zero() {
            return Ok(vec![C64::new(0.0, 0.0); count]);
        }
        let order_tol = Tol::default().cluster;
        let p = self.num.taylor_shift(z0);
        let q = self.den.taylor_shift(z0);
        let qscale = q.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        let pscale = p.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        let small = |v: C64, s: f64| v.norm() <= order_tol * s;
        let ord_q = q.iter().take_while(|&&c| small(c, qscale)).count();
        let ord_p = p.iter().take_while(|&&c| small(c, pscale)).count();
        if ord_q > ord_p || ord_q >= q.len() {
            return Err(Error::PoleAtBoundaryZero { xi: z0 });
        }
        let p = &p[ord_q..];
        let q = &q[ord_q..];
        let q0 = q[0];
        let mut out = vec![C64::new(0.0, 0.0); count];
        for j in 0..count {
            let mut acc = p.get(j).copied().unwrap_or(C64::new(0.0, 0.0));
            for (i, &prev) in out.iter().enumerate().take(j) {
                let qc = q.get(j - i).copied().unwrap_or(C64::new(0.0, 0.0));
                acc -= prev * qc;
            }
            out[j] = acc / q0;
        }
        Ok(out)
    }

    /// Derivatives f, f′, …, f^(count−1) at `z0` (Taylor × factorials).
    pub fn derivatives_at(&self, z0: C64, count: usize) -> Result<Vec<C64>> {
        let taylor = self.taylor_at(z0, count)?;
        let mut fact = 1.0;
        Ok(taylor
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect())
    }

    /// Local order at `z0`: order of vanishing (> 0), regular nonzero value
    /// (0), or pole order (< 0). Representation-independent: orders of
    /// numerator and denominator subtract, so no global reduction is needed.
    pub fn order_at(&self, z0: C64, cluster_tol: f64) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let on = vanishing_order(&self.num, z0, cluster_tol) as i64;
        let od = vanishing_order(&self.den, z0, cluster_tol) as i64;
        Ok(on - od)
    }

    /// Pole clusters of the reduced function.
    pub fn poles(&self, cluster_tol: f64) -> Result<Vec<RootCluster>> {
        let reduced = self.reduced(cluster_tol)?;
        if reduced.den.degree() == Some(0) {
            return Ok(Vec::new());
        }
        all_roots(&reduced.den, cluster_tol)
    }

    /// Zero clusters of the reduced function (empty for constants).
    pub fn zeros(&self, cluster_tol: f64) -> Result<Vec<RootCluster>> {
        let reduced = self.reduced(cluster_tol)?;
        if reduced.num.degree().map(|d| d == 0).unwrap_or(true) {
            return Ok(Vec::new());
        }
        all_roots(&reduced.num, cluster_tol)
    }

    /// H² membership by pole location: a rational function lies in H² iff it
    /// has no pole in the closed unit disk.
    pub fn h2_membership(&self, tol: &Tol) -> Result<H2Membership> {
        if self.is_zero() {
            return Ok(H2Membership::InH2);
        }
        let mut worst: Option<C64> = None;
        let mut worst_mod = f64::INFINITY;
        for pole in self.poles(tol.cluster)? {
            let m = pole.location.norm();
            if m <= 1.0 + tol.circle && m < worst_mod {
                worst = Some(pole.location);
                worst_mod = m;
            }
        }
        Ok(match worst {
            Some(witness) => H2Membership::NotInH2 { witness },
            None => H2Membership::InH2,
        })
    }

    /// Squared H² norm (1/2π)∫|f|² dθ by doubling circle quadrature.
    pub fn h2_norm_sq(&self, tol: &Tol) -> Result<f64> {
        match self.h2_membership(tol)? {
            H2Membership::InH2 => {}
            H2Membership::NotInH2 { witness } => {
                return Err(Error::NotInHardy { witness });
            }
        }
        quad::circle_mean(|z| self.eval(z).norm_sqr(), tol.quad)
    }

    /// Cross-multiplied coefficientwise comparison: true when
    /// num_self·den_other ≈ num_other·den_self relative to scale.
    pub fn approx_eq(&self, other: &RatFunc, tol: f64) -> bool {
        let left = &self.num * &other.den;
        let right = &other.num * &self.den;
        left.approx_eq(&right, tol)
    }
}

/// Vanishing order of `p` at `z0`, counted by scaled derivative values.
fn vanishing_order(p: &CPoly, z0: C64, tol: f64) -> usize {
    let grow = z0.norm().max(1.0);
    let mut d = p.clone();
    let mut k = 0usize;
    while !d.is_zero() {
        let scale = d.coeff_scale() * grow.powi(d.degree_or_zero() as i32);
        if d.eval(z0).norm() <= tol * scale {
            k += 1;
            d = d.derivative();
        } else {
            break;
        }
    }
    k
}

/// Cancel matched root clusters between numerator and denominator, then
/// monicize. The no-cancellation path keeps the original coefficients.
fn reduce_parts(num: CPoly, den: CPoly, cluster_tol: f64) -> Result<(CPoly, CPoly)> {
    if den.is_zero() {
        return Err(Error::DivideByZeroPoly);
    }
    if num.is_zero() {
        return Ok((CPoly::zero(), CPoly::constant(C64::new(1.0, 0.0))));
    }
    if den.degree() == Some(0) {
        let inv = C64::new(1.0, 0.0) / den.coeff(0);
        return Ok((num.scale(inv), CPoly::constant(C64::new(1.0, 0.0))));
    }
    let clusters = all_roots(&den, cluster_tol)?;
    let mut new_num = num.clone();
    let mut cancelled: Vec<(C64, usize)> = Vec::new();
    for cl in &clusters {
        let mut k = 0usize;
        while k < cl.multiplicity {
            let grow = cl.location.norm().max(1.0);
            let scale = new_num.coeff_scale() * grow.powi(new_num.degree_or_zero() as i32);
            let (quot, rem) = new_num.deflate(cl.location);
            if rem.norm() <= cluster_tol * scale && !quot.is_zero() {
                new_num = quot;
                k += 1;
            } else {
                break;
            }
        }
        if k > 0 {
            cancelled.push((cl.location, k));
        }
    }
    if cancelled.is_empty() {
        let lead = den.leading()?;
        let inv = C64::new(1.0, 0.0) / lead;
        return Ok((num.scale(inv), den.scale(inv)));
    }
    let mut new_den = den;
    for (loc, k) in &cancelled {
        for _ in 0..*k {
            let (quot, _rem) = new_den.deflate(*loc);
            new_den = quot;
        }
    }
    if new_den.is_zero() {
        return Err(Error::DivideByZeroPoly);
    }
    let lead = new_den.leading()?;
    let inv = C64::new(1.0, 0.0) / lead;
    Ok((new_num.scale(inv), new_den.scale(inv)))
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::raw(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::raw(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        let num = &self.num * &rhs.num;
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::raw(num, &self.den * &rhs.den)
    }
}

/// Division panics on a zero divisor; use [`RatFunc::is_zero`] first when
/// the divisor is data-dependent.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        let num = &self.num * &rhs.den;
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::raw(num, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.scale(C64::new(-1.0, 0.0)),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Serialize for CPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs().iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        let coeffs: Vec<C64> = pairs.iter().map(|p| C64::new(p[0], p[1])).collect();
        Ok(CPoly::from_coeffs(&coeffs))
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncWire {
    num: CPoly,
    den: CPoly,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncWire {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = RatFuncWire::deserialize(deserializer)?;
        RatFunc::new(wire.num, wire.den).map_err(|e| D::Error::custom(e.to_string()))
    }
}
