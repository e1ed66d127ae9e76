//! Construction of the comparison weight `u` and its companions.
//!
//! For a mate with boundary data `a₁ = Π (z−ξ_j)^{m_j}` and a profiled
//! symbol `φ`, the weight is
//!
//! ```text
//! u = (a₁∘φ) · Π_{j interior} (φ − φ(ξ_j))^{m_j} / a₁,
//! ```
//!
//! the symbol of the weighted composition `W : f ↦ u·(f∘φ)` that carries
//! `C_φ` on the `a₁H²` part of the space. Whether `u ∈ H²` decides
//! boundedness; the division by `a₁` is performed by measured synthetic
//! deflation so that a failed cancellation (a genuine pole at some `ξ_j`)
//! is retained and reported as the non-membership witness instead of being
//! silently smoothed away.
//!
//! Companions built alongside:
//! * `ψ = Π_j ((φ − φ(ξ_j))/(z − ξ_j))^{m_j}`, always in `H²`;
//! * `B`, the Blaschke product over the interior targets with multiplicity;
//! * `ψ_w = u / Π_{j interior} (1 − conj(φ(ξ_j))·φ)^{m_j}`, which satisfies
//!   the exact intertwining identity `(a₁∘φ)·(B∘φ) = a₁·ψ_w`.

use crate::mate::MateData;
use crate::polyrat::{CPoly, RatFunc, C64};
use crate::symbol::{SymbolProfile, TargetClass};
use crate::tol::{Tol, DEFLATE_TOL};
use crate::Result;

/// The weight `u` and its companion functions.
#[derive(Debug, Clone)]
pub struct UPack {
    pub u: RatFunc,
    /// `Π_j ((φ − φ(ξ_j))/(z − ξ_j))^{m_j}`.
    pub psi: RatFunc,
    /// Blaschke product over the interior targets.
    pub blaschke: RatFunc,
    /// `u` with the interior reproducing denominators divided out.
    pub psi_w: RatFunc,
    pub u_in_h2: bool,
    /// Smallest-modulus closed-disk pole of `u` when not in `H²`.
    pub witness_pole: Option<C64>,
    /// Largest deflation remainder absorbed while cancelling `a₁`,
    /// relative to the numerator scale.
    pub reduction_residual: f64,
}

/// Assemble `u`, `ψ`, `B`, and `ψ_w` for a profiled symbol.
pub fn build_u(pr: &SymbolProfile, m: &MateData, tol: &Tol) -> Result<UPack> {
    let phi = &pr.phi;
    let zeros = m.zeros();

    // Numerator function (a₁∘φ)·Π_{interior}(φ−λ_j)^{m_j} as one quotient.
    let a1_of_phi = RatFunc::from_poly(m.a1.clone()).compose(phi)?;
    let mut top = a1_of_phi;
    for (j, &(_, mult)) in zeros.iter().enumerate() {
        if matches!(pr.classes[j], TargetClass::Interior) {
            let factor = phi - &RatFunc::constant(pr.values[j]);
            top = &top * &factor.pow(mult);
        }
    }

    // Divide by a₁ via synthetic deflation of the numerator, measuring the
    // remainders. Factors that do not cancel stay in the denominator: that
    // is exactly the u ∉ H² signal.
    let mut num = top.num().clone();
    let scale = num.coeff_scale();
    let mut leftover: Vec<(C64, usize)> = Vec::new();
    let mut residual: f64 = 0.0;
    for &(xi, mult) in &zeros {
        let mut cancelled = 0usize;
        for _ in 0..mult {
            if num.is_zero() {
                cancelled = mult;
                break;
            }
            let (quot, rem) = num.deflate(xi);
            if rem.norm() <= DEFLATE_TOL * scale {
                residual = residual.max(rem.norm() / scale.max(f64::MIN_POSITIVE));
                num = quot;
                cancelled += 1;
            } else {
                // The value at ξ is genuinely nonzero: this power and all
                // further ones at the same point stay in the denominator.
                break;
            }
        }
        if cancelled < mult {
            leftover.push((xi, mult - cancelled));
        }
    }
    let den = &top.den().clone() * &CPoly::from_roots(&leftover);
    let u = RatFunc::new_with_tol(num, den, tol.cluster)?;

    // ψ = Π ((φ − v_j)/(z − ξ_j))^{m_j} over every boundary zero.
    let mut psi = RatFunc::one();
    for (j, &(xi, mult)) in zeros.iter().enumerate() {
        let base = &(phi - &RatFunc::constant(pr.values[j]))
            / &RatFunc::from_poly(CPoly::linear(xi));
        psi = &psi * &base.pow(mult);
    }
    let psi = psi.reduced(tol.cluster)?;

    let targets = pr.interior_targets(m);
    let blaschke = RatFunc::blaschke(&targets);

    let mut repro = RatFunc::one();
    for &(lambda, mult) in &targets {
        let factor = &RatFunc::one() - &(&RatFunc::constant(lambda.conj()) * phi);
        repro = &repro * &factor.pow(mult);
    }
    let psi_w = (&u / &repro).reduced(tol.cluster)?;

    let membership = u.h2_membership(tol)?;
    Ok(UPack {
        u_in_h2: membership.is_member(),
        witness_pole: membership.witness(),
        u,
        psi,
        blaschke,
        psi_w,
        reduction_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mate::{mate_from_a, pythagorean_mate};
    use crate::symbol::profile;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rf(num: &[f64], den: &[f64]) -> RatFunc {
        RatFunc::from_real_coeffs(num, den).unwrap()
    }

    fn cubic_mate() -> MateData {
        let s = 3.0 * 3.0_f64.sqrt() / 16.0;
        let num = (&(&CPoly::from_real(&[-1.0, 1.0]) * &CPoly::from_real(&[1.0, 1.0]))
            * &CPoly::from_real(&[1.0, 1.0]))
            .scale(c(s, 0.0));
        let a = RatFunc::new(num, CPoly::from_real(&[1.0])).unwrap();
        mate_from_a(&a, &Tol::default()).unwrap()
    }

    fn pack_for(b_num: &[f64], phi: &RatFunc) -> UPack {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(b_num, &[1.0]), &tol).unwrap();
        let pr = profile(phi, &m, &tol).unwrap();
        build_u(&pr, &m, &tol).unwrap()
    }

    #[test]
    fn weight_for_fixed_point_map() {
        // Cubic mate, φ = (z+1)/2: ξ=1 ↦ 1 (boundary), ξ=−1 ↦ 0 (interior),
        // u = (z+3)²/32.
        let tol = Tol::default();
        let m = cubic_mate();
        let pr = profile(&rf(&[0.5, 0.5], &[1.0]), &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        let expect = rf(&[9.0 / 32.0, 6.0 / 32.0, 1.0 / 32.0], &[1.0]);
        assert!(pack.u.approx_eq(&expect, 1e-9), "u = {}", pack.u);
        assert!(pack.u_in_h2);
        // On b = (1+z)/2 instead, the same φ gives the constant 1/2.
        let u2 = pack_for(&[0.5, 0.5], &rf(&[0.5, 0.5], &[1.0])).u;
        assert!(u2.approx_eq(&rf(&[0.5], &[1.0]), 1e-9), "u2 = {u2}");
    }

    #[test]
    fn weight_for_automorphism() {
        // Cubic mate, φ = (z−r)/(1−rz) with r = 1/2: both boundary zeros are
        // fixed up to swap... φ(1) = 1, φ(−1) = −1, both matches, and
        // u = (1−r²)(1−r)/(1−rz)³ = (3/8)/(1−z/2)³.
        let tol = Tol::default();
        let m = cubic_mate();
        let phi = rf(&[-0.5, 1.0], &[1.0, -0.5]);
        let pr = profile(&phi, &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        let expect = rf(&[3.0 / 8.0], &[1.0, -1.5, 0.75, -0.125]);
        assert!(pack.u.approx_eq(&expect, 1e-9), "u = {}", pack.u);
        assert!(pack.u_in_h2);
    }

    #[test]
    fn weight_for_square_map_not_in_h2() {
        // Cubic mate, φ = z²: ξ=−1 (double) maps onto ξ=1 (simple), and
        // u = (z²+1)²/(z+1) keeps a pole on the circle.
        let tol = Tol::default();
        let m = cubic_mate();
        let phi = rf(&[0.0, 0.0, 1.0], &[1.0]);
        let pr = profile(&phi, &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        assert!(!pack.u_in_h2);
        let w = pack.witness_pole.unwrap();
        assert!((w - c(-1.0, 0.0)).norm() < 1e-9);
        let expect = RatFunc::new(
            {
                let t = CPoly::from_real(&[1.0, 0.0, 1.0]);
                &(&t * &t) * &CPoly::from_real(&[1.0])
            },
            CPoly::from_real(&[1.0, 1.0]),
        )
        .unwrap();
        assert!(pack.u.approx_eq(&expect, 1e-9), "u = {}", pack.u);
        assert!(pack.reduction_residual <= 1e-10);
    }

    #[test]
    fn weight_for_interior_targets() {
        // b = (1+z)/2, φ = (1−z)/2: φ(1) = 0 interior, u = (z+1)/4.
        let u = pack_for(&[0.5, 0.5], &rf(&[0.5, -0.5], &[1.0])).u;
        assert!(u.approx_eq(&rf(&[0.25, 0.25], &[1.0]), 1e-9));
    }

    #[test]
    fn weight_on_cubic_mate() {
        // a-case with φ = −(1+z)/2: u = (3+z)(1−z)/32.
        let tol = Tol::default();
        let m = cubic_mate();
        let phi = rf(&[-0.5, -0.5], &[1.0]);
        let pr = profile(&phi, &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        let expect = rf(&[3.0 / 32.0, -2.0 / 32.0, -1.0 / 32.0], &[1.0]);
        assert!(pack.u.approx_eq(&expect, 1e-9), "u = {}", pack.u);
        assert!(pack.u_in_h2);
        assert!(pack.reduction_residual <= 1e-12);
    }

    #[test]
    fn psi_always_in_h2_and_constant_symbol_gives_zero_u() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        // Interior constant: u ≡ 0.
        let phi = rf(&[0.5], &[1.0]);
        let pr = profile(&phi, &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        assert!(pack.u.is_zero());
        assert!(pack.u_in_h2);
        // ψ of a non-constant symbol is in H².
        let pr2 = profile(&rf(&[0.5, 0.5], &[1.0]), &m, &tol).unwrap();
        let pack2 = build_u(&pr2, &m, &tol).unwrap();
        assert!(pack2.psi.h2_membership(&tol).unwrap().is_member());
    }

    #[test]
    fn intertwining_identity_exact() {
        // (a₁∘φ)(B∘φ) = a₁·ψ_w as rational functions, on samples.
        let tol = Tol::default();
        let m = cubic_mate();
        let phi = rf(&[-0.5, -0.5], &[1.0]);
        let pr = profile(&phi, &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        let a1 = RatFunc::from_poly(m.a1.clone());
        let lhs = &a1.compose(&phi).unwrap() * &pack.blaschke.compose(&phi).unwrap();
        let rhs = &a1 * &pack.psi_w;
        for k in 0..32 {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.15) / 32.0;
            let z = c(0.8 * theta.cos(), 0.8 * theta.sin());
            assert!((lhs.eval(z) - rhs.eval(z)).norm() < 1e-10);
        }
    }

    #[test]
    fn violation_symbol_still_builds_u() {
        // φ = −z against b = (1+z)/2: violation at ξ = 1, and
        // u = (a₁∘φ)/a₁ = (z+1)/(z−1)·(−1) has a circle pole.
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let phi = rf(&[0.0, -1.0], &[1.0]);
        let pr = profile(&phi, &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        assert!(!pack.u_in_h2);
        assert!((pack.witness_pole.unwrap() - c(1.0, 0.0)).norm() < 1e-9);
    }
}
