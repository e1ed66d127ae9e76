//! Admission and boundary profiling of the composition symbol `φ`.
//!
//! For a rational self-map `φ` of the disk and a mate with boundary zeros
//! `ξ_1, …, ξ_n`, the classification of the values `φ(ξ_j)` drives every
//! verdict rule: each value is either strictly inside the disk, on the
//! circle and equal to another boundary zero `ξ_{ℓ_j}`, or on the circle
//! away from all boundary zeros (which already forces unboundedness).
//!
//! The contact set `F` collects the unit-circle points where `|φ| = 1`.
//! For rational non-inner `φ` it is finite and each point carries an even
//! vanishing order `2k_ζ` of `1 − φ·φ~` there.

use crate::error::Error;
use crate::mate::MateData;
use crate::polyrat::{all_roots, RatFunc, C64};
use crate::tol::{Tol, AMBIGUOUS_TOL, MATCH_TOL};
use crate::Result;
use serde::Serialize;

/// Number of circle samples used by the admission sup check.
const ADMIT_SAMPLES: usize = 4096;

/// Radius used for the finite-difference side of the angular-derivative data.
const ADC_RADIUS: f64 = 1.0 - 1e-6;

/// Self-map admission verdict.
#[derive(Debug, Clone, Serialize)]
pub enum Admission {
    SelfMap {
        sup: f64,
        /// True when the sup is ≤ 1 − 1e-9: `φ` maps into a compact subdisk.
        strictly_contractive: bool,
    },
    NotSelfMap {
        witness: [f64; 2],
        reason: String,
    },
}

/// Decide whether rational `φ` maps the open disk into itself.
pub fn admit_symbol(phi: &RatFunc, tol: &Tol) -> Result<Admission> {
    for p in phi.poles(tol.cluster)? {
        if p.location.norm() <= 1.0 + tol.circle {
            return Ok(Admission::NotSelfMap {
                witness: [p.location.re, p.location.im],
                reason: format!(
                    "pole of modulus {:.9} in the closed unit disk",
                    p.location.norm()
                ),
            });
        }
    }
    let mut sup: f64 = 0.0;
    let mut arg_sup = C64::new(1.0, 0.0);
    for k in 0..ADMIT_SAMPLES {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / ADMIT_SAMPLES as f64;
        let zeta = C64::new(theta.cos(), theta.sin());
        let v = phi.eval(zeta).norm();
        if v > sup {
            sup = v;
            arg_sup = zeta;
        }
    }
    if sup > 1.0 + 1e-9 {
        return Ok(Admission::NotSelfMap {
            witness: [arg_sup.re, arg_sup.im],
            reason: format!("max |φ| on the circle is {sup:.12} > 1"),
        });
    }
    Ok(Admission::SelfMap {
        sup,
        strictly_contractive: sup <= 1.0 - 1e-9,
    })
}

/// Classification of one boundary value `φ(ξ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetClass {
    /// `|φ(ξ_j)| < 1`.
    Interior,
    /// `φ(ξ_j) = ξ_ℓ` for the boundary zero with this index.
    BoundaryZero { target_index: usize },
    /// `|φ(ξ_j)| = 1` but far from every boundary zero: `C_φ` unbounded.
    Violation,
}

/// One point of the contact set `F = {ζ ∈ T : |φ(ζ)| = 1}`.
#[derive(Debug, Clone, Copy)]
pub struct ContactPoint {
    pub zeta: C64,
    /// Half the vanishing order of `1 − φ·φ~` at `ζ`.
    pub half_order: usize,
}

/// Boundary profile of `φ` relative to a mate.
#[derive(Debug, Clone)]
pub struct SymbolProfile {
    pub phi: RatFunc,
    /// φ(ξ_j), in the order of `MateData::boundary_zeros`.
    pub values: Vec<C64>,
    pub classes: Vec<TargetClass>,
    /// Indices of boundary zeros, boundary-valued ones first.
    pub split: Vec<usize>,
    /// Count of boundary-valued indices (the `p` of the split).
    pub p: usize,
    pub contact_set: Vec<ContactPoint>,
    pub is_inner: bool,
    pub is_constant: bool,
    pub sup: f64,
    pub strictly_contractive: bool,
}

impl SymbolProfile {
    /// Interior targets `(λ, multiplicity)` aggregated over interior-valued
    /// boundary zeros, in boundary-zero order.
    pub fn interior_targets(&self, m: &MateData) -> Vec<(C64, usize)> {
        let zeros = m.zeros();
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, cl)| matches!(cl, TargetClass::Interior))
            .map(|(j, _)| (self.values[j], zeros[j].1))
            .collect()
    }

    pub fn has_violation(&self) -> bool {
        self.classes.iter().any(|c| matches!(c, TargetClass::Violation))
    }
}

/// Profile `φ` against the boundary zeros of the mate.
pub fn profile(phi: &RatFunc, m: &MateData, tol: &Tol) -> Result<SymbolProfile> {
    let admission = admit_symbol(phi, tol)?;
    let (sup, strictly_contractive) = match admission {
        Admission::SelfMap {
            sup,
            strictly_contractive,
        } => (sup, strictly_contractive),
        Admission::NotSelfMap { reason, .. } => {
            return Err(Error::NotASelfMap { reason });
        }
    };

    let zeros = m.zeros();
    let mut values = Vec::with_capacity(zeros.len());
    let mut classes = Vec::with_capacity(zeros.len());
    for (j, &(xi, _)) in zeros.iter().enumerate() {
        let v = phi.eval(xi);
        values.push(v);
        if v.norm() < 1.0 - tol.circle {
            classes.push(TargetClass::Interior);
            continue;
        }
        // Boundary-valued: match against the boundary zeros.
        let mut best: Option<(usize, f64)> = None;
        for (l, &(xl, _)) in zeros.iter().enumerate() {
            let d = (v - xl).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((l, d));
            }
        }
        match best {
            Some((l, d)) if d < MATCH_TOL => {
                classes.push(TargetClass::BoundaryZero { target_index: l })
            }
            Some((_, d)) if d <= AMBIGUOUS_TOL => {
                return Err(Error::AmbiguousBoundaryValue {
                    index: j,
                    value: v,
                    distance: d,
                });
            }
            _ => classes.push(TargetClass::Violation),
        }
    }

    let mut split: Vec<usize> = Vec::with_capacity(zeros.len());
    let mut interior_tail: Vec<usize> = Vec::new();
    for (j, cl) in classes.iter().enumerate() {
        if matches!(cl, TargetClass::Interior) {
            interior_tail.push(j);
        } else {
            split.push(j);
        }
    }
    let p = split.len();
    split.extend(interior_tail);

    let is_constant = phi.as_constant().is_some();
    let (is_inner, contact_set) = contact_data(phi, tol)?;

    Ok(SymbolProfile {
        phi: phi.clone(),
        values,
        classes,
        split,
        p,
        contact_set,
        is_inner,
        is_constant,
        sup,
        strictly_contractive,
    })
}

/// Inner detection and the contact set, from the numerator of `1 − φ·φ~`.
///
/// The product `φ·φ~` is assembled without reduction; `φ` is inner exactly
/// when that product is the constant 1, tested coefficientwise at the scale
/// of the assembled polynomials (an exact zero test on the subtraction is
/// wrong here: convolution round-off leaves ulp-level junk).
fn contact_data(phi: &RatFunc, tol: &Tol) -> Result<(bool, Vec<ContactPoint>)> {
    if let Some(c) = phi.as_constant() {
        // Constant maps: inner only in the degenerate unimodular sense;
        // treat as not inner with empty contact set (|φ| < 1) or a wholly
        // degenerate contact handled by the constant short-circuit.
        let _ = c;
        return Ok((false, Vec::new()));
    }
    let prod = phi * &phi.reflect();
    let diff = prod.den() - prod.num();
    let scale = prod.num().coeff_scale().max(prod.den().coeff_scale());
    if diff.coeff_scale() <= 1e-10 * scale {
        return Ok((true, Vec::new()));
    }
    let mut contact = Vec::new();
    for cl in all_roots(&diff, tol.cluster)? {
        if (cl.location.norm() - 1.0).abs() <= 1e-6 {
            if cl.multiplicity % 2 != 0 {
                return Err(Error::OddCircleMultiplicity {
                    location: cl.location,
                    multiplicity: cl.multiplicity,
                });
            }
            contact.push(ContactPoint {
                zeta: cl.location / cl.location.norm(),
                half_order: cl.multiplicity / 2,
            });
        }
    }
    contact.sort_by(|x, y| {
        (x.zeta.re, x.zeta.im)
            .partial_cmp(&(y.zeta.re, y.zeta.im))
            .unwrap()
    });
    Ok((false, contact))
}

/// Angular-derivative data at a contact point: `(φ'(ζ), finite-difference
/// quotient (1 − |φ(rζ)|)/(1 − r) at r = 1 − 1e-6)`.
pub fn adc_data(phi: &RatFunc, zeta: C64, tol: &Tol) -> Result<(C64, f64)> {
    let modulus = phi.eval(zeta).norm();
    if (modulus - 1.0).abs() > tol.circle {
        return Err(Error::NotContactPoint { zeta, modulus });
    }
    let derivative = phi.derivative().eval(zeta);
    let r = ADC_RADIUS;
    let quotient = (1.0 - phi.eval(zeta * r).norm()) / (1.0 - r);
    Ok((derivative, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mate::{mate_from_a, pythagorean_mate};
    use crate::polyrat::CPoly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rf(num: &[f64], den: &[f64]) -> RatFunc {
        RatFunc::from_real_coeffs(num, den).unwrap()
    }

    fn space_one_plus_z() -> MateData {
        pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &Tol::default()).unwrap()
    }

    fn space_cubic_a() -> MateData {
        let s = 3.0 * 3.0_f64.sqrt() / 16.0;
        let num = (&(&CPoly::from_real(&[-1.0, 1.0]) * &CPoly::from_real(&[1.0, 1.0]))
            * &CPoly::from_real(&[1.0, 1.0]))
            .scale(c(s, 0.0));
        let a = RatFunc::new(num, CPoly::from_real(&[1.0])).unwrap();
        mate_from_a(&a, &Tol::default()).unwrap()
    }

    #[test]
    fn admits_disk_automorphism_and_rejects_expansion() {
        let tol = Tol::default();
        let blaschke = rf(&[-0.5, 1.0], &[1.0, -0.5]);
        assert!(matches!(
            admit_symbol(&blaschke, &tol).unwrap(),
            Admission::SelfMap {
                strictly_contractive: false,
                ..
            }
        ));
        let expanding = rf(&[0.0, 2.0], &[1.0]);
        assert!(matches!(
            admit_symbol(&expanding, &tol).unwrap(),
            Admission::NotSelfMap { .. }
        ));
        let inside_pole = rf(&[1.0], &[-0.5, 1.0]);
        assert!(matches!(
            admit_symbol(&inside_pole, &tol).unwrap(),
            Admission::NotSelfMap { .. }
        ));
        assert!(matches!(
            admit_symbol(&rf(&[0.0, 0.5], &[1.0]), &tol).unwrap(),
            Admission::SelfMap {
                strictly_contractive: true,
                ..
            }
        ));
    }

    #[test]
    fn profile_fixed_point_map() {
        // φ = (1+z)/2 fixes ξ = 1: boundary match with itself.
        let tol = Tol::default();
        let m = space_one_plus_z();
        let pr = profile(&rf(&[0.5, 0.5], &[1.0]), &m, &tol).unwrap();
        assert_eq!(pr.p, 1);
        assert_eq!(pr.classes[0], TargetClass::BoundaryZero { target_index: 0 });
        assert!(!pr.is_inner);
        assert_eq!(pr.contact_set.len(), 1);
        assert!((pr.contact_set[0].zeta - c(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(pr.contact_set[0].half_order, 1);
    }

    #[test]
    fn profile_mixed_map_on_cubic_mate() {
        // Cubic mate: boundary zeros −1 (double) and 1 (simple), sorted so
        // index 0 is −1. φ = −(1+z)/2 sends 1 ↦ −1 (a boundary match of
        // unequal multiplicities) and −1 ↦ 0 (interior).
        let tol = Tol::default();
        let m = space_cubic_a();
        let pr = profile(&rf(&[-0.5, -0.5], &[1.0]), &m, &tol).unwrap();
        assert_eq!(pr.p, 1);
        assert_eq!(pr.classes[0], TargetClass::Interior);
        assert_eq!(pr.classes[1], TargetClass::BoundaryZero { target_index: 0 });
        assert_eq!(pr.split[0], 1);
        let targets = pr.interior_targets(&m);
        assert_eq!(targets.len(), 1);
        assert!((targets[0].0 - c(0.0, 0.0)).norm() < 1e-12);
        assert_eq!(targets[0].1, 2);
        // Contact set of φ: only ζ = 1 (where |φ| = 1), with half-order 1.
        assert_eq!(pr.contact_set.len(), 1);
        assert!((pr.contact_set[0].zeta - c(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(pr.contact_set[0].half_order, 1);
    }

    #[test]
    fn profile_violation_map() {
        // φ = −z sends ξ = 1 to −1, on the circle but not a boundary zero.
        let tol = Tol::default();
        let m = space_one_plus_z();
        let pr = profile(&rf(&[0.0, -1.0], &[1.0]), &m, &tol).unwrap();
        assert_eq!(pr.classes[0], TargetClass::Violation);
        assert!(pr.has_violation());
        assert!(pr.is_inner);
    }

    #[test]
    fn inner_detection_square_and_blaschke() {
        let tol = Tol::default();
        let m = space_one_plus_z();
        let square = rf(&[0.0, 0.0, 1.0], &[1.0]);
        let pr = profile(&square, &m, &tol).unwrap();
        assert!(pr.is_inner);
        let blaschke = rf(&[-0.5, 1.0], &[1.0, -0.5]);
        let pr2 = profile(&blaschke, &m, &tol).unwrap();
        assert!(pr2.is_inner);
        let half = rf(&[0.5, 0.5], &[1.0]);
        assert!(!profile(&half, &m, &tol).unwrap().is_inner);
    }

    #[test]
    fn contact_set_of_parabolic_type_map() {
        // φ = (1+z²)/2 touches the circle exactly at ±1 → φ(±1) = 1.
        let tol = Tol::default();
        let m = space_one_plus_z();
        let phi = rf(&[0.5, 0.0, 0.5], &[1.0]);
        let pr = profile(&phi, &m, &tol).unwrap();
        assert_eq!(pr.contact_set.len(), 2);
        let zetas: Vec<C64> = pr.contact_set.iter().map(|p| p.zeta).collect();
        assert!(zetas.iter().any(|z| (z - c(1.0, 0.0)).norm() < 1e-9));
        assert!(zetas.iter().any(|z| (z - c(-1.0, 0.0)).norm() < 1e-9));
        for p in &pr.contact_set {
            assert_eq!(p.half_order, 1);
        }
    }

    #[test]
    fn adc_quotient_for_blaschke_square_symbol() {
        // φ = ((z−1/2)/(1−z/2))², φ(1) = 1, φ'(1) = ... quotient near 3? No:
        // the single Blaschke factor has quotient (1+r)/(1−r·...)→3 at r→1
        // with r = 1/2; the square doubles the angular derivative to 6.
        let tol = Tol::default();
        let single = rf(&[-0.5, 1.0], &[1.0, -0.5]);
        let phi = &single * &single;
        let (deriv, quot) = adc_data(&phi, c(1.0, 0.0), &tol).unwrap();
        assert!((deriv.norm() - 6.0).abs() < 1e-8);
        assert!((quot - 6.0).abs() < 1e-4);
        // Single factor: angular derivative 3.
        let (d1, q1) = adc_data(&single, c(1.0, 0.0), &tol).unwrap();
        assert!((d1 - c(3.0, 0.0)).norm() < 1e-10);
        assert!((q1 - 3.0).abs() < 1e-5);
        // Off-contact point rejected.
        assert!(matches!(
            adc_data(&rf(&[0.0, 0.5], &[1.0]), c(1.0, 0.0), &tol),
            Err(Error::NotContactPoint { .. })
        ));
    }
}
