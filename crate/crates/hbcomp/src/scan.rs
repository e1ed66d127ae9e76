//! Hilbert–Schmidt integral and Carleson-measure scans.
//!
//! The Hilbert–Schmidt mass of the weighted composition is
//!
//! ```text
//! ∫_T |u|² / (1 − |φ|²) dm,
//! ```
//!
//! which is decided symbolically, never by quadrature at a singularity: on
//! the circle both `|u|²` and `1 − |φ|²` are boundary values of rational
//! functions (`u·u~` and `1 − φ·φ~`), so their quotient `R` reduces by root
//! clustering to a rational function that is smooth on the circle exactly
//! when the integral is finite. Divergence is detected by comparing
//! vanishing orders at every contact point and circle pole of `u`;
//! quadrature is only applied to the reduced, smooth `R`.
//!
//! The Carleson scan evaluates
//!
//! ```text
//! I(w) = ∫_T (1−|w|²)·|u(ζ)|² / |1 − conj(w)·φ(ζ)|² dm(ζ)
//! ```
//!
//! over a grid of disk points `w` accumulating toward the boundary; `C_φ`
//! is bounded exactly when `sup I(w) < ∞`, and vanishing of `I` along rays
//! toward contact points witnesses compactness. All grid points share one
//! cache of circle samples of `(|u|², φ)`.

use crate::error::Error;
use crate::polyrat::{quad, RatFunc, C64};
use crate::symbol::SymbolProfile;
use crate::tol::{Tol, QUAD_MAX_LEVEL};
use crate::weight::UPack;
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::RwLock;

/// Outcome of the Hilbert–Schmidt integral.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HsOutcome {
    Finite(f64),
    /// Circle points where the integrand is non-integrable, with the local
    /// order of `|u|²/(1−|φ|²)` there (a negative even integer).
    DivergentAt(Vec<DivergencePoint>),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DivergencePoint {
    pub zeta: [f64; 2],
    pub local_order: i64,
}

impl HsOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, HsOutcome::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            HsOutcome::Finite(v) => Some(*v),
            HsOutcome::DivergentAt(_) => None,
        }
    }
}

/// Reduce the circle integrand `|u|²/(1−|φ|²)` to a rational function.
fn reduced_integrand(pack: &UPack, pr: &SymbolProfile, tol: &Tol) -> Result<RatFunc> {
    let num = &pack.u * &pack.u.reflect();
    let den = &RatFunc::one() - &(&pr.phi * &pr.phi.reflect());
    (&num / &den).reduced(tol.cluster)
}

/// Decide the Hilbert–Schmidt integral symbolically, then evaluate it.
pub fn hs_integral(pack: &UPack, pr: &SymbolProfile, tol: &Tol) -> Result<HsOutcome> {
    if pack.u.is_zero() {
        return Ok(HsOutcome::Finite(0.0));
    }
    if pr.is_inner {
        return Err(Error::IsInner);
    }

    // Candidate singular points: contact points of φ and circle poles of u.
    let mut candidates: Vec<C64> = pr.contact_set.iter().map(|p| p.zeta).collect();
    for p in pack.u.poles(tol.cluster)? {
        let modulus = p.location.norm();
        if (modulus - 1.0).abs() <= 1e-6 {
            let snapped = p.location / modulus;
            if !candidates.iter().any(|c| (c - snapped).norm() < 1e-7) {
                candidates.push(snapped);
            }
        }
    }

    let mut divergences = Vec::new();
    for &zeta in &candidates {
        let ord_u = pack.u.order_at(zeta, tol.cluster)?;
        let k = pr
            .contact_set
            .iter()
            .find(|p| (p.zeta - zeta).norm() < 1e-7)
            .map_or(0, |p| p.half_order as i64);
        let local = 2 * ord_u - 2 * k;
        if local < 0 {
            divergences.push(DivergencePoint {
                zeta: [zeta.re, zeta.im],
                local_order: local,
            });
        }
    }
    if !divergences.is_empty() {
        divergences.sort_by(|a, b| {
            (a.zeta[0], a.zeta[1])
                .partial_cmp(&(b.zeta[0], b.zeta[1]))
                .unwrap()
        });
        return Ok(HsOutcome::DivergentAt(divergences));
    }

    let r = reduced_integrand(pack, pr, tol)?;
    let value = quad::circle_mean(|z| r.eval(z).re, tol.quad)?;
    Ok(HsOutcome::Finite(value))
}

/// Tail `∫ |u|²·|φ|^{2K}/(1−|φ|²) dm` of a finite Hilbert–Schmidt sum,
/// evaluated on the same reduced integrand.
pub fn hs_tail(pack: &UPack, pr: &SymbolProfile, k_trunc: usize, tol: &Tol) -> Result<f64> {
    if pack.u.is_zero() {
        return Ok(0.0);
    }
    let r = reduced_integrand(pack, pr, tol)?;
    let phi = pr.phi.clone();
    quad::circle_mean(
        move |z| r.eval(z).re * phi.eval(z).norm_sqr().powi(k_trunc as i32),
        tol.quad,
    )
}

/// Grid controls for the Carleson scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    /// Radii 1 − 2^{−q} for q = 1..=q_max.
    pub q_max: u32,
    /// Count of uniformly spaced directions (contact directions are added).
    pub directions: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            q_max: 12,
            directions: 32,
        }
    }
}

/// One evaluated grid point of the Carleson function.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridPoint {
    pub w: [f64; 2],
    pub value: f64,
    /// False when the doubling quadrature hit its level cap for this point;
    /// the value is then the deepest estimate, flagged rather than dropped.
    pub converged: bool,
}

/// One point of a radial trace toward a boundary direction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TracePoint {
    pub direction: [f64; 2],
    pub r: f64,
    pub value: f64,
    pub converged: bool,
}

/// Ratio μ(S(η, r))/r of the pullback measure of a Carleson window.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowRatio {
    pub center: [f64; 2],
    pub r: f64,
    pub ratio: f64,
}

/// Full scan result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanData {
    pub carleson_sup: f64,
    pub carleson_grid: Vec<GridPoint>,
    pub boundary_trace: Vec<TracePoint>,
    pub window_ratios: Vec<WindowRatio>,
}

/// Nested cache of circle samples of `(|u|², φ)` at 2^k nodes.
struct CircleCache {
    u: RatFunc,
    phi: RatFunc,
    levels: RwLock<Vec<Vec<(f64, C64)>>>,
}

impl CircleCache {
    fn new(u: RatFunc, phi: RatFunc) -> Self {
        CircleCache {
            u,
            phi,
            levels: RwLock::new(Vec::new()),
        }
    }

    /// Nodes at level l: 2^(START+l) points; ensure levels 0..=l exist.
    fn ensure(&self, level: usize) {
        {
            let read = self.levels.read().unwrap();
            if read.len() > level {
                return;
            }
        }
        let mut write = self.levels.write().unwrap();
        while write.len() <= level {
            let l = write.len();
            let n = 1usize << (quad::START_LEVEL as usize + l);
            let mut vals = Vec::with_capacity(n);
            for k in 0..n {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let zeta = C64::new(theta.cos(), theta.sin());
                vals.push((self.u.eval(zeta).norm_sqr(), self.phi.eval(zeta)));
            }
            write.push(vals);
        }
    }

    /// Doubling circle mean of (1−|w|²)·u_sq/|1−conj(w)φ|² for one w.
    fn carleson_value(&self, w: C64, quad_tol: f64) -> (f64, bool) {
        let front = 1.0 - w.norm_sqr();
        let wc = w.conj();
        let mut prev = f64::NAN;
        let mut agreements = 0;
        let mut level = 0usize;
        loop {
            self.ensure(level);
            let read = self.levels.read().unwrap();
            let vals = &read[level];
            let mut sum = 0.0;
            for &(usq, phi) in vals {
                sum += front * usq / (C64::new(1.0, 0.0) - wc * phi).norm_sqr();
            }
            let mean = sum / vals.len() as f64;
            if prev.is_finite() {
                let change = (mean - prev).abs() / mean.abs().max(1e-12);
                if change <= quad_tol {
                    agreements += 1;
                    if agreements >= 2 {
                        return (mean, true);
                    }
                } else {
                    agreements = 0;
                }
            }
            prev = mean;
            let nodes_exp = quad::START_LEVEL as usize + level;
            if nodes_exp as u32 >= QUAD_MAX_LEVEL {
                return (mean, false);
            }
            level += 1;
        }
    }
}

/// Scan the Carleson function of `(u, φ)` over a boundary-accumulating grid.
pub fn carleson_scan(
    pack: &UPack,
    pr: &SymbolProfile,
    grid: &GridSpec,
    tol: &Tol,
) -> Result<ScanData> {
    if let Some(witness) = pack.u.h2_membership(tol)?.witness() {
        return Err(Error::NotInHardy { witness });
    }

    let cache = CircleCache::new(pack.u.clone(), pr.phi.clone());

    // Directions: uniform plus one through every contact point.
    let mut directions: Vec<C64> = (0..grid.directions)
        .map(|d| {
            let theta = 2.0 * std::f64::consts::PI * d as f64 / grid.directions as f64;
            C64::new(theta.cos(), theta.sin())
        })
        .collect();
    for p in &pr.contact_set {
        if !directions.iter().any(|d| (d - p.zeta).norm() < 1e-12) {
            directions.push(p.zeta);
        }
    }

    let mut points: Vec<(C64, f64, C64)> = Vec::new(); // (direction, r, w)
    for q in 1..=grid.q_max {
        let r = 1.0 - 0.5f64.powi(q as i32);
        for &dir in &directions {
            points.push((dir, r, dir * r));
        }
    }

    let results: Vec<(f64, bool)> = run_in_pool(|| {
        points
            .par_iter()
            .map(|&(_, _, w)| cache.carleson_value(w, tol.quad))
            .collect()
    });

    let mut carleson_grid = Vec::with_capacity(points.len());
    let mut boundary_trace = Vec::new();
    let mut sup: f64 = 0.0;
    for (&(dir, r, w), &(value, converged)) in points.iter().zip(&results) {
        carleson_grid.push(GridPoint {
            w: [w.re, w.im],
            value,
            converged,
        });
        if converged {
            sup = sup.max(value);
        }
        let is_contact_dir = pr.contact_set.iter().any(|p| (p.zeta - dir).norm() < 1e-12);
        let is_coarse_dir = {
            // Keep a thin uniform subsample (8 directions) in the trace.
            let step = grid.directions.max(8) / 8;
            (0..8).any(|i| {
                let theta = 2.0 * std::f64::consts::PI * (i * step) as f64
                    / grid.directions.max(1) as f64;
                (C64::new(theta.cos(), theta.sin()) - dir).norm() < 1e-12
            })
        };
        if is_contact_dir || is_coarse_dir {
            boundary_trace.push(TracePoint {
                direction: [dir.re, dir.im],
                r,
                value,
                converged,
            });
        }
    }

    let window_ratios = window_ratios(&cache, pr, grid);

    Ok(ScanData {
        carleson_sup: sup,
        carleson_grid,
        boundary_trace,
        window_ratios,
    })
}

/// μ(S(η,r))/r for windows centered at the contact targets φ(F), dyadic r.
fn window_ratios(cache: &CircleCache, pr: &SymbolProfile, grid: &GridSpec) -> Vec<WindowRatio> {
    let mut centers: Vec<C64> = Vec::new();
    for p in &pr.contact_set {
        let eta = pr.phi.eval(p.zeta);
        let eta = eta / eta.norm();
        if !centers.iter().any(|c| (c - eta).norm() < 1e-9) {
            centers.push(eta);
        }
    }
    if centers.is_empty() {
        return Vec::new();
    }
    let level = ((grid.q_max as usize) + 6).saturating_sub(quad::START_LEVEL as usize);
    cache.ensure(level);
    let read = cache.levels.read().unwrap();
    let vals = &read[level];
    let n = vals.len() as f64;
    let mut out = Vec::new();
    for &eta in &centers {
        for q in 1..=grid.q_max {
            let r = 0.5f64.powi(q as i32);
            let mut mass = 0.0;
            for &(usq, phi) in vals.iter() {
                if (phi - eta).norm() <= r {
                    mass += usq;
                }
            }
            out.push(WindowRatio {
                center: [eta.re, eta.im],
                r,
                ratio: mass / n / r,
            });
        }
    }
    out
}

/// Run a closure in a rayon pool sized by HBCOMP_THREADS when set.
pub(crate) fn run_in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let requested = std::env::var("HBCOMP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match requested.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mate::pythagorean_mate;
    use crate::symbol::profile;
    use crate::weight::build_u;

    fn rf(num: &[f64], den: &[f64]) -> RatFunc {
        RatFunc::from_real_coeffs(num, den).unwrap()
    }

    fn setup(b: &[f64], phi: &[f64]) -> (UPack, SymbolProfile) {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(b, &[1.0]), &tol).unwrap();
        let pr = profile(&rf(phi, &[1.0]), &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        (pack, pr)
    }

    #[test]
    fn constant_integrand_case() {
        // b = (1+z)/2, φ = (1−z)/2: u = (z+1)/4 and the reduced integrand
        // is the constant 1/4.
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.5], &[0.5, -0.5]);
        let r = reduced_integrand(&pack, &pr, &tol).unwrap();
        for k in 0..1024 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 1024.0;
            let z = C64::new(theta.cos(), theta.sin());
            assert!((r.eval(z).re - 0.25).abs() < 1e-9);
            assert!(r.eval(z).im.abs() < 1e-9);
        }
        match hs_integral(&pack, &pr, &tol).unwrap() {
            HsOutcome::Finite(v) => assert!((v - 0.25).abs() < 1e-8),
            HsOutcome::DivergentAt(_) => panic!("should be finite"),
        }
    }

    #[test]
    fn divergent_case_with_orders() {
        // b = (1−z²)/2, φ = (1+z²)/2: divergent at ±1 with local order −2.
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.0, -0.5], &[0.5, 0.0, 0.5]);
        match hs_integral(&pack, &pr, &tol).unwrap() {
            HsOutcome::DivergentAt(points) => {
                assert_eq!(points.len(), 2);
                for p in &points {
                    assert_eq!(p.local_order, -2);
                    assert!((p.zeta[0].abs() - 1.0).abs() < 1e-9);
                    assert!(p.zeta[1].abs() < 1e-9);
                }
            }
            HsOutcome::Finite(v) => panic!("unexpectedly finite: {v}"),
        }
    }

    #[test]
    fn finite_case_with_contact() {
        // b = (1+z²)/2, φ = (1−z²)/2: finite, value 13/32.
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.0, 0.5], &[0.5, 0.0, -0.5]);
        match hs_integral(&pack, &pr, &tol).unwrap() {
            HsOutcome::Finite(v) => assert!((v - 13.0 / 32.0).abs() < 1e-8, "v = {v}"),
            HsOutcome::DivergentAt(_) => panic!("should be finite"),
        }
    }

    #[test]
    fn strictly_contractive_integral() {
        // b = (1+z)/2, φ = z/2: u = (z−2)/4·(−1)... u = (φ−1)/(z−1) ·
        // (φ(1)=1/2 interior): u = (a₁∘φ)(φ−1/2)/a₁ with a₁ = z−1:
        // a₁∘φ = z/2−1; u = (z/2−1)(z/2−1/2)/(z−1) = (z−2)(z−1)/(4(z−1)) = (z−2)/4.
        // ∫|z−2|²/16/(1−|z|²/4): |z−2|² = 5−4cosθ;1−1/4 = 3/4 const? No:
        // 1−|φ|² = 1 − 1/4 = 3/4 on |z|=1. Mean(5−4cosθ)/16 = 5/16.
        // Integral = (5/16)/(3/4) = 5/12.
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.5], &[0.0, 0.5]);
        assert!(pack.u.approx_eq(&rf(&[-0.5, 0.25], &[1.0]), 1e-9), "u = {}", pack.u);
        match hs_integral(&pack, &pr, &tol).unwrap() {
            HsOutcome::Finite(v) => assert!((v - 5.0 / 12.0).abs() < 1e-8, "v = {v}"),
            HsOutcome::DivergentAt(_) => panic!("should be finite"),
        }
    }

    #[test]
    fn tail_shrinks_with_truncation() {
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.5], &[0.5, -0.5]);
        let t64 = hs_tail(&pack, &pr, 64, &tol).unwrap();
        let t256 = hs_tail(&pack, &pr, 256, &tol).unwrap();
        assert!(t64 > t256 && t256 > 0.0);
        // Closed form: tail(K) = (1/4)·C(2K,K)/4^K ≈ 1/(4√(πK)).
        let approx = 0.25 / (std::f64::consts::PI * 256.0).sqrt();
        assert!((t256 - approx).abs() / approx < 0.01, "t256 = {t256}");
    }

    #[test]
    fn zero_weight_scans_to_zero() {
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.5], &[0.5]);
        assert!(matches!(
            hs_integral(&pack, &pr, &tol).unwrap(),
            HsOutcome::Finite(v) if v == 0.0
        ));
        let sd = carleson_scan(&pack, &pr, &GridSpec::default(), &tol).unwrap();
        assert_eq!(sd.carleson_sup, 0.0);
    }

    #[test]
    fn scan_bounded_case_has_finite_sup_and_decaying_trace() {
        // b = (1+z²)/2, φ = (1−z²)/2: compact, so traces toward the contact
        // directions ±1 must decay.
        let tol = Tol::default();
        let (pack, pr) = setup(&[0.5, 0.0, 0.5], &[0.5, 0.0, -0.5]);
        let grid = GridSpec {
            q_max: 10,
            directions: 16,
        };
        let sd = carleson_scan(&pack, &pr, &grid, &tol).unwrap();
        assert!(sd.carleson_sup.is_finite() && sd.carleson_sup > 0.0);
        // Trace along direction 1: strictly decreasing for q ≥ 4.
        let mut along_one: Vec<(f64, f64)> = sd
            .boundary_trace
            .iter()
            .filter(|t| (C64::new(t.direction[0], t.direction[1]) - C64::new(1.0, 0.0)).norm() < 1e-9)
            .map(|t| (t.r, t.value))
            .collect();
        along_one.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert!(along_one.len() >= 7);
        for pair in along_one.windows(2) {
            if pair[0].0 >= 1.0 - 0.5f64.powi(4) {
                assert!(
                    pair[1].1 < pair[0].1,
                    "trace not decreasing: {:?}",
                    along_one
                );
            }
        }
        // Window ratios at the contact target η = 1 decay with r.
        let ratios: Vec<f64> = sd
            .window_ratios
            .iter()
            .filter(|w| (w.center[0] - 1.0).abs() < 1e-9)
            .map(|w| w.ratio)
            .collect();
        assert!(!ratios.is_empty());
        assert!(ratios.last().unwrap() < &ratios[0]);
    }

    #[test]
    fn scan_unbounded_weight_is_rejected() {
        let tol = Tol::default();
        // Cubic-mate square map has u ∉ H².
        let s = 3.0 * 3.0_f64.sqrt() / 16.0;
        let num = (&(&crate::polyrat::CPoly::from_real(&[-1.0, 1.0])
            * &crate::polyrat::CPoly::from_real(&[1.0, 1.0]))
            * &crate::polyrat::CPoly::from_real(&[1.0, 1.0]))
            .scale(C64::new(s, 0.0));
        let a = RatFunc::new(num, crate::polyrat::CPoly::from_real(&[1.0])).unwrap();
        let m = crate::mate::mate_from_a(&a, &tol).unwrap();
        let pr = profile(&rf(&[0.0, 0.0, 1.0], &[1.0]), &m, &tol).unwrap();
        let pack = build_u(&pr, &m, &tol).unwrap();
        assert!(matches!(
            carleson_scan(&pack, &pr, &GridSpec::default(), &tol),
            Err(Error::NotInHardy { .. })
        ));
    }
}
