//! Simultaneous root finding with multiplicity clustering.
//!
//! Multiple roots are first-class citizens here: squared factors, repeated
//! boundary zeros and composition pull-backs all produce polynomials whose
//! roots coincide in exact arithmetic but scatter in floating point (a root
//! of multiplicity m perturbs like the m-th root of the coefficient noise —
//! ~1.2e-4 for a quadruple root at machine precision). The driver therefore
//! runs a deterministic Aberth–Ehrlich iteration and then *clusters the
//! scattered points back into `(location, multiplicity)` pairs*, polishing
//! each cluster center with Newton on the (m−1)-st derivative, where a
//! multiplicity-m root is simple again.
//!
//! Clustering is tried coarsest-first over a fixed ladder of linkage radii.
//! A radius is accepted only if *every* cluster passes a residual audit: the
//! polished center must drive `p, p′, …, p^(m−1)` below `tol.cluster`
//! relative to each derivative's own scale. Genuine multiplicity-m clusters
//! pass with residuals ~(scatter)² ≲ 1e-8; mergers of roots that are merely
//! close (≥ 1e-3 apart) fail the audit and force a finer radius. This is the
//! bias the rest of the crate wants: inputs are built from squares and
//! compositions, so wide noise clouds around a true multiple root are common,
//! while genuinely distinct roots closer than ~1e-4 are out of scope.

use super::poly::CPoly;
use super::C64;
use crate::error::Error;
use crate::Result;

/// A root location together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    /// Polished root location (exact 0 for roots at the origin).
    pub location: C64,
    /// Number of coincident roots at this location.
    pub multiplicity: usize,
    /// Largest scaled derivative residual left at the polished location;
    /// accepted clusters satisfy `residual ≤ tol.cluster`.
    pub residual: f64,
}

/// Linkage radii tried when grouping scattered roots, coarsest first. The
/// ladder brackets the scatter of noise clouds for multiplicities 2–6
/// (machine noise to the 1/m-th power: 1.5e-8, 6e-6, 1.2e-4, 1.1e-3, 2.5e-3).
const LINKAGE_RADII: [f64; 5] = [1e-2, 4e-3, 1e-3, 1e-4, 1e-6];

/// Hard cap on Aberth–Ehrlich sweeps; convergence is typically < 50.
const MAX_ABERTH_ITERS: usize = 500;

/// Relative correction size at which the Aberth iteration is declared
/// converged (all points stationary to near machine precision).
const ABERTH_STEP_TOL: f64 = 1e-14;

/// All roots of `p` in the complex plane, clustered by multiplicity and
/// sorted by real part then imaginary part. Exact roots at the origin are
/// split off first (they are visible directly in the trailing coefficients).
///
/// Errors with [`Error::ZeroFunction`] for the zero polynomial and
/// [`Error::IllConditioned`] when no clustering passes the residual audit.
pub fn all_roots(p: &CPoly, cluster_tol: f64) -> Result<Vec<RootCluster>> {
    if p.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut clusters = Vec::new();

    // Roots at the origin are exact: trailing zero coefficients.
    let mut work = p.clone();
    let mut origin_mult = 0usize;
    let scale = work.coeff_scale();
    while !work.is_zero() && work.degree() != Some(0) && work.coeff(0).norm() <= 1e-13 * scale {
        let coeffs = work.coeffs()[1..].to_vec();
        work = CPoly::from_coeffs(&coeffs);
        origin_mult += 1;
    }
    if origin_mult > 0 {
        clusters.push(RootCluster {
            location: C64::new(0.0, 0.0),
            multiplicity: origin_mult,
            residual: 0.0,
        });
    }

    let degree = match work.degree() {
        None | Some(0) => {
            sort_clusters(&mut clusters);
            return Ok(clusters);
        }
        Some(d) => d,
    };

    if degree == 1 {
        let root = -work.coeff(0) / work.coeff(1);
        clusters.push(RootCluster {
            location: root,
            multiplicity: 1,
            residual: 0.0,
        });
        sort_clusters(&mut clusters);
        return Ok(clusters);
    }

    let points = aberth(&work);

    // Precompute the derivative ladder once; clustering and auditing reuse it.
    let mut derivs: Vec<CPoly> = Vec::with_capacity(degree + 1);
    derivs.push(work.clone());
    for k in 0..degree {
        let next = derivs[k].derivative();
        derivs.push(next);
    }

    let mut best_failure: Option<(usize, f64)> = None;
    for &radius in &LINKAGE_RADII {
        match cluster_at_radius(&points, radius, &derivs, cluster_tol) {
            Ok(mut found) => {
                clusters.append(&mut found);
                sort_clusters(&mut clusters);
                return Ok(clusters);
            }
            Err(worst) => {
                if best_failure.map(|(_, r)| worst < r).unwrap_or(true) {
                    best_failure = Some((degree, worst));
                }
            }
        }
    }

    let (deg, residual) = best_failure.unwrap_or((degree, f64::INFINITY));
    Err(Error::IllConditioned {
        degree: deg,
        residual,
    })
}

/// All roots, flattened with repetition according to multiplicity.
pub fn all_roots_flat(p: &CPoly, cluster_tol: f64) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for c in all_roots(p, cluster_tol)? {
        for _ in 0..c.multiplicity {
            out.push(c.location);
        }
    }
    Ok(out)
}

fn sort_clusters(clusters: &mut [RootCluster]) {
    clusters.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap()
    });
}

/// Deterministic Aberth–Ehrlich iteration (Gauss–Seidel updates). Initial
/// points sit on a circle at the Fujiwara root bound with a fixed angular
/// offset that breaks both real-axis and n-fold rotational symmetry.
fn aberth(p: &CPoly) -> Vec<C64> {
    let n = p.degree().expect("nonzero polynomial");
    let lead = p.coeff(n);
    let radius = {
        let mut bound: f64 = 0.0;
        for k in 0..n {
            let ratio = (p.coeff(k) / lead).norm();
            if ratio > 0.0 {
                bound = bound.max(2.0 * ratio.powf(1.0 / (n - k) as f64));
            }
        }
        bound.max(0.5)
    };

    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64
                + std::f64::consts::PI / (2.0 * n as f64)
                + 0.26;
            radius * C64::new(angle.cos(), angle.sin())
        })
        .collect();

    for _ in 0..MAX_ABERTH_ITERS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (pv, dv) = p.eval_with_derivative(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = if dv.norm() == 0.0 {
                // Stationary point of p: nudge off it deterministically.
                C64::new(1e-8 * (1.0 + z[i].norm()), 0.0)
            } else {
                pv / dv
            };
            let mut repulsion = C64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i] - zj;
                    if diff.norm() > 0.0 {
                        repulsion += C64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() < 1e-300 {
                ratio
            } else {
                ratio / denom
            };
            z[i] -= step;
            let rel = step.norm() / z[i].norm().max(1.0);
            max_step = max_step.max(rel);
        }
        if max_step <= ABERTH_STEP_TOL {
            break;
        }
    }
    z
}

/// Group `points` by single linkage at `radius`, polish each group and audit
/// it. `Ok` carries the accepted clusters; `Err` carries the worst residual.
fn cluster_at_radius(
    points: &[C64],
    radius: f64,
    derivs: &[CPoly],
    cluster_tol: f64,
) -> std::result::Result<Vec<RootCluster>, f64> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: std::collections::HashMap<usize, Vec<C64>> = std::collections::HashMap::new();
    for (i, &pt) in points.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(pt);
    }

    let mut clusters = Vec::new();
    let mut worst: f64 = 0.0;
    for group in groups.values() {
        let m = group.len();
        let mean = group.iter().sum::<C64>() / m as f64;
        let polished = polish(mean, &derivs[m - 1], &derivs[m]);
        // A polish that escapes its own cluster is meaningless.
        let center = if (polished - mean).norm() <= 2.0 * radius.max(1e-6) {
            polished
        } else {
            mean
        };
        let residual = audit(center, m, derivs);
        worst = worst.max(residual);
        clusters.push(RootCluster {
            location: center,
            multiplicity: m,
            residual,
        });
    }

    if worst <= cluster_tol {
        Ok(clusters)
    } else {
        Err(worst)
    }
}

/// Newton refinement of a multiplicity-m cluster center on p^(m−1), where
/// the root is simple. `f` is p^(m−1), `df` its derivative p^(m).
fn polish(start: C64, f: &CPoly, df: &CPoly) -> C64 {
    let mut z = start;
    for _ in 0..60 {
        let fv = f.eval(z);
        let dv = df.eval(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = fv / dv;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Largest scaled residual |p^(k)(c)| / scale_k over k < m, where scale_k
/// normalizes by the k-th derivative's coefficient size and the growth factor
/// max(1,|c|)^(deg−k). Zero means c is a numerically perfect m-fold root.
fn audit(center: C64, multiplicity: usize, derivs: &[CPoly]) -> f64 {
    let grow = center.norm().max(1.0);
    let mut worst: f64 = 0.0;
    for dk in derivs.iter().take(multiplicity) {
        let scale = dk.coeff_scale() * grow.powi(dk.degree_or_zero() as i32);
        if scale == 0.0 {
            continue;
        }
        worst = worst.max(dk.eval(center).norm() / scale);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn has_cluster(clusters: &[RootCluster], loc: C64, mult: usize, tol: f64) -> bool {
        clusters
            .iter()
            .any(|c| c.multiplicity == mult && (c.location - loc).norm() <= tol)
    }

    #[test]
    fn simple_real_roots() {
        // (z-1)(z+2)(z-3)
        let p = CPoly::from_roots(&[(c(1.0, 0.0), 1), (c(-2.0, 0.0), 1), (c(3.0, 0.0), 1)]);
        let roots = all_roots(&p, 1e-7).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(has_cluster(&roots, c(-2.0, 0.0), 1, 1e-10));
        assert!(has_cluster(&roots, c(1.0, 0.0), 1, 1e-10));
        assert!(has_cluster(&roots, c(3.0, 0.0), 1, 1e-10));
    }

    #[test]
    fn origin_roots_are_exact() {
        // z^3 (z - 1/2)
        let p = CPoly::from_roots(&[(c(0.0, 0.0), 3), (c(0.5, 0.0), 1)]);
        let roots = all_roots(&p, 1e-7).unwrap();
        assert!(has_cluster(&roots, c(0.0, 0.0), 3, 0.0));
        assert!(has_cluster(&roots, c(0.5, 0.0), 1, 1e-12));
    }

    #[test]
    fn double_and_triple_roots_cluster() {
        // (z-1)^2 (z+1)^3 (z - i)
        let p = CPoly::from_roots(&[(c(1.0, 0.0), 2), (c(-1.0, 0.0), 3), (c(0.0, 1.0), 1)]);
        let roots = all_roots(&p, 1e-7).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(has_cluster(&roots, c(1.0, 0.0), 2, 1e-7));
        assert!(has_cluster(&roots, c(-1.0, 0.0), 3, 1e-6));
        assert!(has_cluster(&roots, c(0.0, 1.0), 1, 1e-8));
    }

    #[test]
    fn quadruple_root_survives_noise_scatter() {
        // ((z - 1/2)^2 (z + 1/3))^2 expanded: quadruple at 1/2, double at -1/3.
        let base = CPoly::from_roots(&[(c(0.5, 0.0), 2), (c(-1.0 / 3.0, 0.0), 1)]);
        let p = &base * &base;
        let roots = all_roots(&p, 1e-7).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(has_cluster(&roots, c(0.5, 0.0), 4, 1e-6));
        assert!(has_cluster(&roots, c(-1.0 / 3.0, 0.0), 2, 1e-8));
    }

    #[test]
    fn close_but_distinct_roots_stay_distinct() {
        // Roots 5e-3 apart must not merge into a double root.
        let p = CPoly::from_roots(&[(c(0.5, 0.0), 1), (c(0.505, 0.0), 1), (c(-0.8, 0.0), 1)]);
        let roots = all_roots(&p, 1e-7).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(has_cluster(&roots, c(0.5, 0.0), 1, 1e-7));
        assert!(has_cluster(&roots, c(0.505, 0.0), 1, 1e-7));
    }

    #[test]
    fn unit_circle_sextuple_root() {
        // (z-1)^6 scaled: worst realistic case from squared triple factors.
        let base = CPoly::from_roots(&[(c(1.0, 0.0), 3), (c(0.25, 0.25), 1)]);
        let p = &base * &base;
        let roots = all_roots(&p, 1e-7).unwrap();
        assert!(has_cluster(&roots, c(1.0, 0.0), 6, 1e-3));
        assert!(has_cluster(&roots, c(0.25, 0.25), 2, 1e-7));
    }

    #[test]
    fn rotational_symmetry_does_not_stall() {
        // z^8 - 1: roots are the 8th roots of unity.
        let mut coeffs = vec![0.0; 9];
        coeffs[0] = -1.0;
        coeffs[8] = 1.0;
        let p = CPoly::from_real(&coeffs);
        let roots = all_roots(&p, 1e-7).unwrap();
        assert_eq!(roots.len(), 8);
        for c in &roots {
            assert!((c.location.norm() - 1.0).abs() < 1e-10);
            assert_eq!(c.multiplicity, 1);
        }
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(matches!(
            all_roots(&CPoly::zero(), 1e-7),
            Err(Error::ZeroFunction)
        ));
    }

    #[test]
    fn constants_have_no_roots() {
        let p = CPoly::from_real(&[3.0]);
        assert!(all_roots(&p, 1e-7).unwrap().is_empty());
    }
}
