//! The decision lattice for boundedness, compactness and Hilbert–Schmidt.
//!
//! Every rule that fires is collected — the engine never short-circuits a
//! later rule just because an earlier one already decided, so a report can
//! show *all* reasons supporting a verdict. Rules only ever agree in exact
//! arithmetic; the combination enforces the lattice implications
//!
//! ```text
//! Hilbert–Schmidt = yes ⇒ compact = yes ⇒ bounded = yes,
//! bounded = no ⇒ compact = Hilbert–Schmidt = no.
//! ```
//!
//! Two short-circuits precede the lattice: a strictly contractive `b`
//! (‖b‖∞ < 1) makes `H(b) = H²` with equivalent norm and the classification
//! degenerate, and a constant symbol gives a rank-one operator.

use crate::error::Error;
use crate::mate::MateData;
use crate::polyrat::{RatFunc, C64};
use crate::scan::{carleson_scan, hs_integral, GridSpec, HsOutcome, ScanData};
use crate::symbol::{adc_data, SymbolProfile, TargetClass};
use crate::tol::{Tol, MATCH_TOL};
use crate::weight::UPack;
use crate::Result;
use serde::{Deserialize, Serialize};

/// One component of the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Unknown,
    Degenerate,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
            Decision::Degenerate => "degenerate",
        };
        write!(f, "{s}")
    }
}

/// A rule that fired, with the statement it instantiates and the concrete
/// evidence from this problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiredRule {
    pub id: String,
    pub citation: String,
    pub evidence: String,
}

impl FiredRule {
    fn new(id: &str, citation: &str, evidence: String) -> Self {
        FiredRule {
            id: id.to_string(),
            citation: citation.to_string(),
            evidence,
        }
    }
}

/// Full three-component verdict with supporting data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub bounded: Decision,
    pub compact: Decision,
    pub hilbert_schmidt: Decision,
    pub fired_rules: Vec<FiredRule>,
    pub hs_integral: Option<HsOutcome>,
    pub scan: Option<ScanData>,
    pub notes: Vec<String>,
}

const CIT_R1: &str = "a boundary zero of a maps to a unimodular point that is \
                      not a boundary zero of a, so the difference-quotient data has nowhere to land";
const CIT_R2: &str = "a boundary zero maps onto a boundary zero of strictly smaller \
                      multiplicity, so a required boundary derivative is missing";
const CIT_R3: &str = "the weight u = (a1∘φ)·Π(φ−φ(ξ))^m / a1 is not in H²";
const CIT_R4: &str = "the rational weight u lies in H², hence in H∞, and a bounded weighted \
                      composition on H² carries C_φ on H(b)";
const CIT_R5: &str = "every boundary zero of a maps strictly inside the disk";
const CIT_H1: &str = "φ maps the closed disk into a compact subdisk, so the weighted \
                      composition has a square-summable matrix";
const CIT_H2: &str = "φ is inner and u does not vanish identically, so the Hilbert–Schmidt \
                      sum over the orthonormal basis diverges";
const CIT_H3Y: &str = "at every contact point the vanishing order of u is at least the contact \
                       half-order, so ∫|u|²/(1−|φ|²) dm is finite";
const CIT_H3N: &str = "at some contact point u vanishes to lower order than the contact, so \
                       ∫|u|²/(1−|φ|²) dm diverges";
const CIT_C1: &str = "Hilbert–Schmidt operators are compact";
const CIT_C2: &str = "a boundary zero maps onto a boundary zero of equal multiplicity; the \
                      normalized difference-quotient functionals do not converge to zero";
const CIT_C3: &str = "no boundary zero maps to the circle and every contact target of φ is a \
                      boundary zero of a, which kills the boundary mass";
const CIT_C4: &str = "u lies in H² and vanishes on the whole contact set, so the pullback \
                      Carleson measure is vanishing";
const CIT_C5: &str = "(1−r²)|u(rζ)|²/(1−|φ(rζ)|²) has a positive limit along the radius at a \
                      contact point, so the normalized kernels do not go to zero weakly";
const CIT_C6: &str = "no closed-form rule applies; Carleson scan data attached";
const CIT_CONST: &str = "constant symbol: C_φ is a functional of rank at most one";
const CIT_DEG: &str = "‖b‖∞ < 1, so H(b) = H² with an equivalent norm and the classical \
                       Hardy-space composition theory applies";
const CIT_IMP: &str = "an unbounded operator is neither compact nor Hilbert–Schmidt";

/// Decide all three components for a profiled symbol and weight.
pub fn run_verdict(
    pr: &SymbolProfile,
    pack: &UPack,
    m: &MateData,
    grid: &GridSpec,
    tol: &Tol,
) -> Result<Verdict> {
    let mut rules: Vec<FiredRule> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    if m.norm_below_one {
        rules.push(FiredRule::new("DEG", CIT_DEG, format!("sup |b| = {:.6} < 1", m.b.circle_sup(4096))));
        notes.push(
            "degenerate case: H(b) = H² as sets with equivalent norms; every analytic \
             self-map induces a bounded composition there (Littlewood), and the compact / \
             Hilbert–Schmidt classification is the classical Hardy-space one, outside the \
             scope of these rules"
                .to_string(),
        );
        return Ok(Verdict {
            bounded: Decision::Degenerate,
            compact: Decision::Unknown,
            hilbert_schmidt: Decision::Unknown,
            fired_rules: rules,
            hs_integral: None,
            scan: None,
            notes,
        });
    }

    if let Some(c) = pr.phi.as_constant() {
        if pr.has_violation() {
            rules.push(FiredRule::new(
                "R1",
                CIT_R1,
                format!("constant value {c} is unimodular and matches no boundary zero"),
            ));
            rules.push(FiredRule::new("IMP", CIT_IMP, String::new()));
            return Ok(Verdict {
                bounded: Decision::No,
                compact: Decision::No,
                hilbert_schmidt: Decision::No,
                fired_rules: rules,
                hs_integral: None,
                scan: None,
                notes,
            });
        }
        rules.push(FiredRule::new(
            "CONST",
            CIT_CONST,
            format!("φ ≡ {c}; u vanishes identically"),
        ));
        return Ok(Verdict {
            bounded: Decision::Yes,
            compact: Decision::Yes,
            hilbert_schmidt: Decision::Yes,
            fired_rules: rules,
            hs_integral: Some(HsOutcome::Finite(0.0)),
            scan: None,
            notes,
        });
    }

    let (bounded, brules) = bounded_rules(pr, pack, m);
    rules.extend(brules);

    if bounded == Decision::No {
        rules.push(FiredRule::new("IMP", CIT_IMP, String::new()));
        return Ok(Verdict {
            bounded,
            compact: Decision::No,
            hilbert_schmidt: Decision::No,
            fired_rules: rules,
            hs_integral: None,
            scan: None,
            notes,
        });
    }

    let (hs, hrules, hs_value) = hs_rules(pr, pack, tol)?;
    rules.extend(hrules);

    let (compact, crules, scan) = compact_rules(pr, pack, m, hs, grid, tol)?;
    rules.extend(crules);

    if hs == Decision::Yes {
        if let Some(pt) = pr.contact_set.first() {
            if let Ok((deriv, _)) = adc_data(&pr.phi, pt.zeta, tol) {
                notes.push(format!(
                    "Hilbert–Schmidt on H(b) although φ has an angular derivative ({deriv}) at \
                     the contact point {}; on the Hardy space H² an angular derivative at a \
                     contact point already rules out compactness of C_φ",
                    pt.zeta
                ));
            }
        }
        notes.push(
            "trace-class and stronger summability classes are not classified by this \
             toolkit"
                .to_string(),
        );
    }

    Ok(Verdict {
        bounded,
        compact,
        hilbert_schmidt: hs,
        fired_rules: rules,
        hs_integral: hs_value,
        scan,
        notes,
    })
}

fn bounded_rules(pr: &SymbolProfile, pack: &UPack, m: &MateData) -> (Decision, Vec<FiredRule>) {
    let zeros = m.zeros();
    let mut rules = Vec::new();
    let mut no = false;

    let violations: Vec<String> = pr
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, TargetClass::Violation))
        .map(|(j, _)| format!("ξ = {} ↦ {}", zeros[j].0, pr.values[j]))
        .collect();
    if !violations.is_empty() {
        no = true;
        rules.push(FiredRule::new("R1", CIT_R1, violations.join("; ")));
    }

    let drops: Vec<String> = pr
        .classes
        .iter()
        .enumerate()
        .filter_map(|(j, c)| match c {
            TargetClass::BoundaryZero { target_index } if zeros[j].1 > zeros[*target_index].1 => {
                Some(format!(
                    "ξ = {} (multiplicity {}) ↦ ξ = {} (multiplicity {})",
                    zeros[j].0, zeros[j].1, zeros[*target_index].0, zeros[*target_index].1
                ))
            }
            _ => None,
        })
        .collect();
    if !drops.is_empty() {
        no = true;
        rules.push(FiredRule::new("R2", CIT_R2, drops.join("; ")));
    }

    if !pack.u_in_h2 {
        no = true;
        let w = pack
            .witness_pole
            .map(|w| format!("pole of u at {w}"))
            .unwrap_or_default();
        rules.push(FiredRule::new("R3", CIT_R3, w));
    } else {
        rules.push(FiredRule::new(
            "R4",
            CIT_R4,
            format!("u = {} lies in H²", pack.u),
        ));
    }
    if pr.p == 0 {
        rules.push(FiredRule::new(
            "R5",
            CIT_R5,
            pr.values
                .iter()
                .enumerate()
                .map(|(j, v)| format!("φ({}) = {v}", zeros[j].0))
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }

    let decision = if no { Decision::No } else { Decision::Yes };
    (decision, rules)
}

fn hs_rules(
    pr: &SymbolProfile,
    pack: &UPack,
    tol: &Tol,
) -> Result<(Decision, Vec<FiredRule>, Option<HsOutcome>)> {
    let mut rules = Vec::new();

    if pr.strictly_contractive {
        let outcome = hs_integral(pack, pr, tol)?;
        rules.push(FiredRule::new(
            "H1",
            CIT_H1,
            format!("sup |φ| = {:.9} < 1", pr.sup),
        ));
        return Ok((Decision::Yes, rules, Some(outcome)));
    }
    if pr.is_inner && !pack.u.is_zero() {
        rules.push(FiredRule::new(
            "H2",
            CIT_H2,
            format!("φ = {} is inner", pr.phi),
        ));
        return Ok((Decision::No, rules, None));
    }

    let outcome = hs_integral(pack, pr, tol)?;
    match &outcome {
        HsOutcome::Finite(v) => {
            rules.push(FiredRule::new(
                "H3",
                CIT_H3Y,
                format!("∫|u|²/(1−|φ|²) dm = {v:.12}"),
            ));
            Ok((Decision::Yes, rules, Some(outcome)))
        }
        HsOutcome::DivergentAt(points) => {
            let ev = points
                .iter()
                .map(|p| {
                    format!(
                        "at ζ = {}+{}i the integrand has local order {}",
                        p.zeta[0], p.zeta[1], p.local_order
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            rules.push(FiredRule::new("H3", CIT_H3N, ev));
            Ok((Decision::No, rules, Some(outcome)))
        }
    }
}

fn compact_rules(
    pr: &SymbolProfile,
    pack: &UPack,
    m: &MateData,
    hs: Decision,
    grid: &GridSpec,
    tol: &Tol,
) -> Result<(Decision, Vec<FiredRule>, Option<ScanData>)> {
    let zeros = m.zeros();
    let mut rules = Vec::new();
    let mut yes = false;
    let mut no = false;

    if hs == Decision::Yes {
        yes = true;
        rules.push(FiredRule::new("C1", CIT_C1, String::new()));
    }

    let ties: Vec<String> = pr
        .classes
        .iter()
        .enumerate()
        .filter_map(|(j, c)| match c {
            TargetClass::BoundaryZero { target_index } if zeros[j].1 == zeros[*target_index].1 => {
                Some(format!(
                    "ξ = {} ↦ ξ = {} with equal multiplicity {}",
                    zeros[j].0, zeros[*target_index].0, zeros[j].1
                ))
            }
            _ => None,
        })
        .collect();
    if !ties.is_empty() {
        no = true;
        rules.push(FiredRule::new("C2", CIT_C2, ties.join("; ")));
    }

    if pr.p == 0 {
        let mut all_land = true;
        let mut ev = Vec::new();
        for pt in &pr.contact_set {
            let target = pr.phi.eval(pt.zeta);
            let landed = zeros.iter().any(|&(xi, _)| (target - xi).norm() < MATCH_TOL);
            if landed {
                ev.push(format!("φ({}) = {target} is a boundary zero", pt.zeta));
            } else {
                all_land = false;
            }
        }
        if all_land {
            yes = true;
            rules.push(FiredRule::new(
                "C3",
                CIT_C3,
                if ev.is_empty() {
                    "contact set is empty".to_string()
                } else {
                    ev.join("; ")
                },
            ));
        }
    }

    if pack.u_in_h2 && !pack.u.is_zero() {
        let mut vanishes = true;
        let mut ev = Vec::new();
        for pt in &pr.contact_set {
            let ord = pack.u.order_at(pt.zeta, tol.cluster)?;
            if ord >= 1 {
                ev.push(format!("u vanishes at {} to order {ord}", pt.zeta));
            } else {
                vanishes = false;
            }
        }
        if vanishes && !pr.contact_set.is_empty() {
            yes = true;
            rules.push(FiredRule::new("C4", CIT_C4, ev.join("; ")));
        }
    }

    // C5: positive (or infinite) radial limit of the normalized ratio.
    let mut c5_ev = Vec::new();
    for pt in &pr.contact_set {
        let ord_u = if pack.u.is_zero() {
            i64::MAX
        } else {
            pack.u.order_at(pt.zeta, tol.cluster)?
        };
        if ord_u == i64::MAX {
            continue;
        }
        let d = radial_contact_order(&pr.phi, pt.zeta, tol)?;
        let numerator_order = 1 + 2 * ord_u;
        if numerator_order <= d {
            c5_ev.push(format!(
                "at ζ = {} the ratio has numerator order {numerator_order} against \
                 denominator order {d} in (1−r)",
                pt.zeta
            ));
        }
    }
    if !c5_ev.is_empty() {
        no = true;
        rules.push(FiredRule::new("C5", CIT_C5, c5_ev.join("; ")));
    }

    debug_assert!(
        !(hs == Decision::Yes && no),
        "Hilbert–Schmidt yes with a compactness obstruction"
    );

    let decision = if hs == Decision::Yes {
        Decision::Yes
    } else if no {
        Decision::No
    } else if yes {
        Decision::Yes
    } else {
        Decision::Unknown
    };

    let mut scan = None;
    if decision == Decision::Unknown {
        rules.push(FiredRule::new("C6", CIT_C6, String::new()));
        if pack.u_in_h2 {
            scan = Some(carleson_scan(pack, pr, grid, tol)?);
        }
    }
    Ok((decision, rules, scan))
}

/// Vanishing order of `1 − φ(rζ)·conj(φ(r·conj(ζ)))` in `r` at `r = 1`:
/// the rate at which φ leaves the circle along the radius toward ζ.
fn radial_contact_order(phi: &RatFunc, zeta: C64, tol: &Tol) -> Result<i64> {
    let along = phi.dilate(zeta)?;
    let conj_along = phi.conj_coeffs().dilate(zeta.conj())?;
    let g = &RatFunc::one() - &(&along * &conj_along);
    g.order_at(C64::new(1.0, 0.0), tol.cluster)
}

/// The specialization report for `b = (1+z)/2` (one simple boundary zero at 1).
#[derive(Debug, Clone, Serialize)]
pub enum SarasonSilvaCase {
    /// φ(1) = 1: boundedness is equivalent to ADC data at 1 and to the
    /// membership u = (φ−1)/(z−1) ∈ H(φ); the latter is quoted as theory,
    /// not computed.
    BoundaryFixed {
        bounded: Decision,
        adc_derivative: [f64; 2],
        adc_quotient: f64,
        u_in_h2: bool,
        note: String,
    },
    /// φ(1) ∈ D: the explicit integral form is cross-checked against the
    /// reduced-integrand evaluation.
    InteriorImage {
        direct_integral: Option<f64>,
        reduced_integral: Option<f64>,
        agrees: Option<bool>,
    },
}

/// Check the two-case characterization available when `b = (1+z)/2`.
pub fn sarason_silva_check(
    phi: &RatFunc,
    m: &MateData,
    tol: &Tol,
) -> Result<SarasonSilvaCase> {
    let expected_b = RatFunc::from_real_coeffs(&[0.5, 0.5], &[1.0]).expect("static");
    if m.n != 1 || !m.b.approx_eq(&expected_b, 1e-9) {
        return Err(Error::WrongSpace {
            reason: "this check is specific to b = (1+z)/2 with its single simple \
                     boundary zero at 1"
                .to_string(),
        });
    }
    let one = C64::new(1.0, 0.0);
    let v = phi.eval(one);

    let pr = crate::symbol::profile(phi, m, tol)?;
    let pack = crate::weight::build_u(&pr, m, tol)?;

    if (v - one).norm() < MATCH_TOL {
        let (deriv, quot) = adc_data(phi, one, tol)?;
        let grid = GridSpec::default();
        let verdict = run_verdict(&pr, &pack, m, &grid, tol)?;
        return Ok(SarasonSilvaCase::BoundaryFixed {
            bounded: verdict.bounded,
            adc_derivative: [deriv.re, deriv.im],
            adc_quotient: quot,
            u_in_h2: pack.u_in_h2,
            note: "u = (φ−1)/(z−1) ∈ H(φ) is the third equivalent condition; membership \
                   in H(φ) is not computed by this toolkit"
                .to_string(),
        });
    }
    if v.norm() < 1.0 - tol.circle {
        // The closed-form weight for this space is
        // u = (φ−1)(φ−φ(1))/(z−1); assemble it directly and integrate
        // |u|²/(1−|φ|²) as an independent construction of the same mass.
        let outcome = hs_integral(&pack, &pr, tol)?;
        let reduced = outcome.value();
        let direct = if reduced.is_some() {
            let shifted = phi - &RatFunc::one();
            let through = phi - &RatFunc::constant(v);
            let u_direct = (&(&shifted * &through)
                / &RatFunc::from_poly(crate::polyrat::CPoly::linear(one)))
                .reduced(tol.cluster)?;
            let num = &u_direct * &u_direct.reflect();
            let den = &RatFunc::one() - &(phi * &phi.reflect());
            let r = (&num / &den).reduced(tol.cluster)?;
            Some(crate::polyrat::quad::circle_mean(
                move |z| r.eval(z).re,
                tol.quad,
            )?)
        } else {
            None
        };
        let agrees = match (direct, reduced) {
            (Some(d), Some(r)) => Some((d - r).abs() <= 1e-8 * r.abs().max(1.0)),
            _ => None,
        };
        return Ok(SarasonSilvaCase::InteriorImage {
            direct_integral: direct,
            reduced_integral: reduced,
            agrees,
        });
    }
    Err(Error::NotContactPoint {
        zeta: one,
        modulus: v.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mate::{mate_from_a, pythagorean_mate};
    use crate::polyrat::CPoly;
    use crate::symbol::profile;
    use crate::weight::build_u;

    fn rf(num: &[f64], den: &[f64]) -> RatFunc {
        RatFunc::from_real_coeffs(num, den).unwrap()
    }

    fn cubic_mate() -> MateData {
        let s = 3.0 * 3.0_f64.sqrt() / 16.0;
        let num = (&(&CPoly::from_real(&[-1.0, 1.0]) * &CPoly::from_real(&[1.0, 1.0]))
            * &CPoly::from_real(&[1.0, 1.0]))
            .scale(C64::new(s, 0.0));
        let a = RatFunc::new(num, CPoly::from_real(&[1.0])).unwrap();
        mate_from_a(&a, &Tol::default()).unwrap()
    }

    fn verdict_for(m: &MateData, phi: &RatFunc) -> Verdict {
        let tol = Tol::default();
        let pr = profile(phi, m, &tol).unwrap();
        let pack = build_u(&pr, m, &tol).unwrap();
        run_verdict(&pr, &pack, m, &GridSpec::default(), &tol).unwrap()
    }

    fn fired(v: &Verdict, id: &str) -> bool {
        v.fired_rules.iter().any(|r| r.id == id)
    }

    #[test]
    fn fixed_point_example_bounded_not_compact() {
        // Cubic mate, φ = (z+1)/2: bounded yes, compact no (C2 and C5), HS no.
        let m = cubic_mate();
        let v = verdict_for(&m, &rf(&[0.5, 0.5], &[1.0]));
        assert_eq!(v.bounded, Decision::Yes);
        assert_eq!(v.compact, Decision::No);
        assert_eq!(v.hilbert_schmidt, Decision::No);
        assert!(fired(&v, "R4"));
        assert!(fired(&v, "C2"));
        assert!(fired(&v, "C5"));
        assert!(fired(&v, "H3"));
    }

    #[test]
    fn automorphism_example_inner_rules() {
        let m = cubic_mate();
        let v = verdict_for(&m, &rf(&[-0.5, 1.0], &[1.0, -0.5]));
        assert_eq!(v.bounded, Decision::Yes);
        assert_eq!(v.compact, Decision::No);
        assert_eq!(v.hilbert_schmidt, Decision::No);
        assert!(fired(&v, "C2"));
        assert!(fired(&v, "H2"));
    }

    #[test]
    fn square_example_doubly_unbounded() {
        // Cubic mate, φ = z²: R2 (−1 double ↦ 1 simple) and R3 (u ∉ H²).
        let m = cubic_mate();
        let v = verdict_for(&m, &rf(&[0.0, 0.0, 1.0], &[1.0]));
        assert_eq!(v.bounded, Decision::No);
        assert_eq!(v.compact, Decision::No);
        assert_eq!(v.hilbert_schmidt, Decision::No);
        assert!(fired(&v, "R2"));
        assert!(fired(&v, "R3"));
        assert!(fired(&v, "IMP"));
    }

    #[test]
    fn all_yes_example() {
        // b = (1+z)/2, φ = (1−z)/2: everything yes, integral 1/4.
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &rf(&[0.5, -0.5], &[1.0]));
        assert_eq!(v.bounded, Decision::Yes);
        assert_eq!(v.compact, Decision::Yes);
        assert_eq!(v.hilbert_schmidt, Decision::Yes);
        assert!(fired(&v, "C1"));
        match v.hs_integral {
            Some(HsOutcome::Finite(x)) => assert!((x - 0.25).abs() < 1e-8),
            _ => panic!("expected finite integral"),
        }
        assert!(v.notes.iter().any(|n| n.contains("angular derivative")));
    }

    #[test]
    fn divergent_contact_example() {
        // b = (1−z²)/2, φ = (1+z²)/2: bounded (R4, R5) but C5 and H3-divergent.
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.0, -0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &rf(&[0.5, 0.0, 0.5], &[1.0]));
        assert_eq!(v.bounded, Decision::Yes);
        assert!(fired(&v, "R5"));
        assert_eq!(v.compact, Decision::No);
        assert!(fired(&v, "C5"));
        assert_eq!(v.hilbert_schmidt, Decision::No);
        match &v.hs_integral {
            Some(HsOutcome::DivergentAt(pts)) => {
                assert!(pts.iter().all(|p| p.local_order == -2))
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn compact_via_landing_example() {
        // b = (1+z²)/2, φ = (1−z²)/2: compact through C1, C3 and C4.
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.0, 0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &rf(&[0.5, 0.0, -0.5], &[1.0]));
        assert_eq!(v.compact, Decision::Yes);
        assert_eq!(v.hilbert_schmidt, Decision::Yes);
        assert!(fired(&v, "C1"));
        assert!(fired(&v, "C3"));
        assert!(fired(&v, "C4"));
        match v.hs_integral {
            Some(HsOutcome::Finite(x)) => assert!((x - 13.0 / 32.0).abs() < 1e-8),
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn strictly_contractive_symbol() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &rf(&[0.0, 0.5], &[1.0]));
        assert_eq!(v.hilbert_schmidt, Decision::Yes);
        assert!(fired(&v, "H1"));
        match v.hs_integral {
            Some(HsOutcome::Finite(x)) => assert!((x - 5.0 / 12.0).abs() < 1e-8),
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn identity_symbol() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &RatFunc::identity());
        assert_eq!(v.bounded, Decision::Yes);
        assert_eq!(v.compact, Decision::No);
        assert_eq!(v.hilbert_schmidt, Decision::No);
        assert!(fired(&v, "C2") && fired(&v, "H2"));
    }

    #[test]
    fn violating_rotation() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &rf(&[0.0, -1.0], &[1.0]));
        assert_eq!(v.bounded, Decision::No);
        assert!(fired(&v, "R1"));
        assert!(fired(&v, "R3"));
    }

    #[test]
    fn constant_symbols() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        // Interior constant: rank one, all yes.
        let v = verdict_for(&m, &rf(&[0.5], &[1.0]));
        assert_eq!(v.bounded, Decision::Yes);
        assert_eq!(v.compact, Decision::Yes);
        assert_eq!(v.hilbert_schmidt, Decision::Yes);
        assert!(fired(&v, "CONST"));
        // Matching unimodular constant: still rank one.
        let v2 = verdict_for(&m, &rf(&[1.0], &[1.0]));
        assert_eq!(v2.bounded, Decision::Yes);
        assert!(fired(&v2, "CONST"));
        // Non-matching unimodular constant: unbounded.
        let v3 = verdict_for(&m, &rf(&[-1.0], &[1.0]));
        assert_eq!(v3.bounded, Decision::No);
        assert!(fired(&v3, "R1"));
    }

    #[test]
    fn degenerate_ball() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.0, 0.5], &[1.0]), &tol).unwrap();
        let v = verdict_for(&m, &rf(&[0.5, 0.5], &[1.0]));
        assert_eq!(v.bounded, Decision::Degenerate);
        assert_eq!(v.compact, Decision::Unknown);
        assert!(fired(&v, "DEG"));
    }

    #[test]
    fn cubic_mate_interior_hs_case() {
        // a-case, φ = −(1+z)/2: all three yes, with the H²-contrast note.
        let m = cubic_mate();
        let v = verdict_for(&m, &rf(&[-0.5, -0.5], &[1.0]));
        assert_eq!(v.bounded, Decision::Yes);
        assert_eq!(v.compact, Decision::Yes);
        assert_eq!(v.hilbert_schmidt, Decision::Yes);
        match v.hs_integral {
            Some(HsOutcome::Finite(x)) => assert!((x - 5.0 / 128.0).abs() < 1e-8, "x = {x}"),
            _ => panic!("expected finite"),
        }
        assert!(v.notes.iter().any(|n| n.contains("angular derivative")));
    }

    #[test]
    fn sarason_silva_both_cases() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        // Fixed point case.
        match sarason_silva_check(&rf(&[0.5, 0.5], &[1.0]), &m, &tol).unwrap() {
            SarasonSilvaCase::BoundaryFixed {
                bounded,
                adc_quotient,
                u_in_h2,
                ..
            } => {
                assert_eq!(bounded, Decision::Yes);
                assert!(u_in_h2);
                assert!(adc_quotient > 0.0);
            }
            other => panic!("wrong case: {other:?}"),
        }
        // Interior image case.
        match sarason_silva_check(&rf(&[0.5, -0.5], &[1.0]), &m, &tol).unwrap() {
            SarasonSilvaCase::InteriorImage {
                direct_integral,
                reduced_integral,
                agrees,
            } => {
                assert!((reduced_integral.unwrap() - 0.25).abs() < 1e-8);
                assert!((direct_integral.unwrap() - 0.25).abs() < 1e-6);
                assert_eq!(agrees, Some(true));
            }
            other => panic!("wrong case: {other:?}"),
        }
        // Wrong space.
        let m2 = cubic_mate();
        assert!(matches!(
            sarason_silva_check(&rf(&[0.5, 0.5], &[1.0]), &m2, &tol),
            Err(Error::WrongSpace { .. })
        ));
    }
}
