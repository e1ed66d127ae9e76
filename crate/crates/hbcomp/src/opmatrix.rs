//! Finite truncations of the operators, and the exact intertwining check.
//!
//! Two matrix views are computed:
//!
//! * `truncate_weighted` — the weighted composition `f ↦ u·(f∘φ)` against
//!   the `H²` monomial basis: entry `(m, n)` is the m-th Taylor coefficient
//!   of `u·φⁿ`, extracted by FFT from circle samples.
//! * `hb_cphi_matrix` — `C_φ` against the orthonormal basis
//!   `{z^j : j < N} ∪ {a₁·zⁱ : i ≥ 0}` of `H(b)`, assembled column by
//!   column from the decomposition of each basis image.
//!
//! `verify_intertwining` checks the rational identity
//! `(a₁∘φ)·(B∘φ)·φⁿ = a₁·ψ_w·φⁿ` by decomposing the difference of the two
//! sides in `H(b)` for n < K: the two sides are built along independent
//! construction paths (composition of `a₁·B·zⁿ` with φ, versus the
//! deflation-built weight), so a residual here exposes any inconsistency in
//! the whole pipeline.

use crate::error::Error;
use crate::hbspace::{decompose_with_basis, hermite_basis};
use crate::mate::MateData;
use crate::polyrat::{CPoly, RatFunc, C64};
use crate::symbol::SymbolProfile;
use crate::tol::Tol;
use crate::weight::UPack;
use crate::Result;
use nalgebra::DMatrix;
use rustfft::FftPlanner;

/// Which basis a truncation is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    /// Monomials of `H²`.
    H2Monomials,
    /// `{z^j : j < N} ∪ {a₁·zⁱ}` of `H(b)`.
    HbSplit,
}

/// A K×K truncation of an operator.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub matrix: DMatrix<C64>,
    pub basis: BasisTag,
    pub k: usize,
}

impl TruncatedOperator {
    /// Squared Frobenius norm (equals the sum of squared singular values).
    pub fn frobenius_sq(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest singular values, in decreasing order.
    pub fn top_singular_values(&self, count: usize) -> Vec<f64> {
        let svd = self.matrix.clone().svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv.truncate(count);
        sv
    }
}

const MAX_TRUNCATION: usize = 512;

/// Sampling radius: 1, backed off to 1 − 2⁻¹² when a pole sits within 1e-6
/// of the circle.
fn sampling_radius(funcs: &[&RatFunc], tol: &Tol) -> Result<f64> {
    let mut radius = 1.0;
    let mut poles: Vec<C64> = Vec::new();
    for f in funcs {
        for p in f.poles(tol.cluster)? {
            poles.push(p.location);
        }
    }
    if poles.iter().any(|p| (p.norm() - 1.0).abs() <= 1e-6) {
        radius = 1.0 - 0.5f64.powi(12);
    }
    for &p in &poles {
        if (p.norm() - radius).abs() <= 1e-9 {
            return Err(Error::PoleOnSamplingCircle { pole: p });
        }
    }
    Ok(radius)
}

/// Taylor coefficients 0..k of each column function, extracted by one FFT
/// per column from `samples` values on the circle of radius `radius`.
fn coefficients_by_fft(
    columns: Vec<Vec<C64>>,
    k: usize,
    radius: f64,
) -> Vec<Vec<C64>> {
    let m = columns[0].len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let mut out = Vec::with_capacity(columns.len());
    for col in columns {
        let mut buf = col;
        fft.process(&mut buf);
        let mut coeffs = Vec::with_capacity(k);
        let mut rp = 1.0;
        for (i, value) in buf.iter().take(k).enumerate() {
            coeffs.push(value / (m as f64) / rp);
            let _ = i;
            rp *= radius;
        }
        out.push(coeffs);
    }
    out
}

/// K×K truncation of the weighted composition `f ↦ u·(f∘φ)` on `H²`.
///
/// Columns are the Taylor coefficients of `u·φⁿ`, read off by FFT from 4K
/// samples on a circle of radius ρ (1 when no pole is near the unit circle,
/// else 1 − 2⁻¹²). Sampling at M nodes folds coefficient t into row
/// t mod M, so row m carries the bias `Σ_{j≥1} c_{m+jM}·ρ^{jM}`, bounded by
/// `max_t |c_t| · ρ^M/(1 − ρ^M)`. For pole-free-near-T inputs the tail
/// decays geometrically and the bias is far below 1e-8; in the backed-off
/// regime (a pole within 1e-6 of the circle) the coefficients decay too
/// slowly for any fixed radius and the bias is of the order of the tail
/// mass — the truncation is still well-defined but carries that bias.
pub fn truncate_weighted(
    u: &RatFunc,
    phi: &RatFunc,
    k: usize,
    tol: &Tol,
) -> Result<TruncatedOperator> {
    if k == 0 || k > MAX_TRUNCATION {
        return Err(Error::InvalidInput {
            reason: format!("truncation K = {k} outside 1..={MAX_TRUNCATION}"),
        });
    }
    let radius = sampling_radius(&[u, phi], tol)?;
    let m = 4 * k;
    let mut u_vals = Vec::with_capacity(m);
    let mut phi_vals = Vec::with_capacity(m);
    for s in 0..m {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / m as f64;
        let z = C64::new(theta.cos(), theta.sin()) * radius;
        u_vals.push(u.eval(z));
        phi_vals.push(phi.eval(z));
    }
    let mut columns = Vec::with_capacity(k);
    let mut power: Vec<C64> = vec![C64::new(1.0, 0.0); m];
    for _ in 0..k {
        columns.push(
            u_vals
                .iter()
                .zip(&power)
                .map(|(uv, pw)| uv * pw)
                .collect::<Vec<C64>>(),
        );
        for (pw, pv) in power.iter_mut().zip(&phi_vals) {
            *pw *= pv;
        }
    }
    let coeffs = coefficients_by_fft(columns, k, radius);
    let matrix = DMatrix::from_fn(k, k, |row, col| coeffs[col][row]);
    Ok(TruncatedOperator {
        matrix,
        basis: BasisTag::H2Monomials,
        k,
    })
}

/// Max deviation ‖(a₁·B·zⁿ)∘φ − a₁·ψ_w·φⁿ‖_{H(b)} over n < K.
pub fn verify_intertwining(
    m: &MateData,
    pr: &SymbolProfile,
    pack: &UPack,
    k: usize,
    tol: &Tol,
) -> Result<f64> {
    let basis = hermite_basis(m)?;
    let a1 = RatFunc::from_poly(m.a1.clone());
    let left_base = &a1.compose(&pr.phi)? * &pack.blaschke.compose(&pr.phi)?;
    let right_base = &a1 * &pack.psi_w;
    let mut worst: f64 = 0.0;
    let mut phi_pow = RatFunc::one();
    for _ in 0..k {
        let left = &left_base * &phi_pow;
        let right = &right_base * &phi_pow;
        let diff = &left - &right;
        let dev = if diff.num().coeff_scale()
            <= 1e-14 * left.num().coeff_scale().max(right.num().coeff_scale())
        {
            // Exact cancellation at machine precision.
            0.0
        } else {
            decompose_with_basis(&diff, m, &basis, tol)?.norm_sq.max(0.0).sqrt()
        };
        worst = worst.max(dev);
        phi_pow = &phi_pow * &pr.phi;
    }
    Ok(worst)
}

/// K×K truncation of `C_φ` against the split basis of `H(b)`.
///
/// Column j is the decomposition of `e_j∘φ`: the first `N` rows are the
/// coefficients of the interpolation part, the remaining rows the Taylor
/// coefficients of the `H²` part, sampled on the circle of radius 1 − 2⁻⁸
/// (the division by `a₁` is ill-conditioned only within ~2⁻⁸ of a boundary
/// zero, and the radius keeps the coefficient amplification below e).
pub fn hb_cphi_matrix(
    m: &MateData,
    pr: &SymbolProfile,
    k: usize,
) -> Result<TruncatedOperator> {
    if k == 0 || k > MAX_TRUNCATION {
        return Err(Error::InvalidInput {
            reason: format!("truncation K = {k} outside 1..={MAX_TRUNCATION}"),
        });
    }
    let n = m.n;
    if k <= n {
        return Err(Error::InvalidInput {
            reason: format!("truncation K = {k} does not cover the {n} interpolation rows"),
        });
    }
    let basis = hermite_basis(m)?;
    let zeros = m.zeros();
    let radius = 1.0 - 0.5f64.powi(8);
    let nodes = 4 * k;

    // Local series of φ at every boundary zero, long enough for every jet.
    let mut phi_jets: Vec<Vec<C64>> = Vec::new();
    for &(xi, mult) in &zeros {
        phi_jets.push(pr.phi.taylor_at(xi, mult)?);
    }

    // Point data on the sampling circle.
    let mut zs = Vec::with_capacity(nodes);
    let mut phi_vals = Vec::with_capacity(nodes);
    let mut a1_vals = Vec::with_capacity(nodes);
    let mut a1_of_phi = Vec::with_capacity(nodes);
    for s in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / nodes as f64;
        let z = C64::new(theta.cos(), theta.sin()) * radius;
        let w = pr.phi.eval(z);
        zs.push(z);
        phi_vals.push(w);
        a1_vals.push(m.a1.eval(z));
        a1_of_phi.push(m.a1.eval(w));
    }

    let mut matrix = DMatrix::<C64>::zeros(k, k);
    let mut tail_columns: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut w_pow: Vec<C64> = vec![C64::new(1.0, 0.0); nodes];
    // Jet power bookkeeping for the basis functions e_j evaluated on the
    // local series of φ: for column c the function is either z^c (c < N)
    // or a₁·z^{c−N}.
    for c in 0..k {
        // 1) Hermite data of g = e_c∘φ at each ξ: compose the shifted
        //    series of e_c at w₀ = φ(ξ) with the local series of φ.
        let mut p_g = CPoly::zero();
        for (j, &(xi, mult)) in zeros.iter().enumerate() {
            let e_poly = basis_function(m, c);
            let shifted = e_poly.taylor_shift(pr.values[j]);
            let jet = compose_series(&shifted, &phi_jets[j], mult);
            for (l, coeff) in jet.iter().enumerate() {
                let mut fact = 1.0;
                for t in 1..=l {
                    fact *= t as f64;
                }
                // g^{(l)}(ξ)/l! = jet[l]; the dual basis wants g^{(l)}(ξ).
                p_g = &p_g + &basis.polys[j][l].scale(coeff * fact);
            }
            let _ = xi;
        }
        for (row, coeff) in p_g.coeffs().iter().enumerate() {
            if row < n {
                matrix[(row, c)] = *coeff;
            }
        }

        // 2) Tail samples (g − p_g)/a₁ on the circle.
        let mut samples = Vec::with_capacity(nodes);
        for s in 0..nodes {
            let g_val = if c < n {
                w_pow[s]
            } else {
                a1_of_phi[s] * w_pow[s]
            };
            samples.push((g_val - p_g.eval(zs[s])) / a1_vals[s]);
        }
        tail_columns.push(samples);

        // Advance the running power of φ(node): column c uses φ^c for
        // c < N and φ^{c−N} afterward; reset at the switch.
        if c + 1 == n {
            w_pow = vec![C64::new(1.0, 0.0); nodes];
        } else {
            for (pw, w) in w_pow.iter_mut().zip(&phi_vals) {
                *pw *= w;
            }
        }
    }

    let tail_len = k - n;
    let coeffs = coefficients_by_fft(tail_columns, tail_len, radius);
    for (c, col) in coeffs.iter().enumerate() {
        for (i, value) in col.iter().enumerate() {
            matrix[(n + i, c)] = *value;
        }
    }
    Ok(TruncatedOperator {
        matrix,
        basis: BasisTag::HbSplit,
        k,
    })
}

/// The c-th orthonormal basis function of the split: `z^c` below N, else
/// `a₁·z^{c−N}`.
fn basis_function(m: &MateData, c: usize) -> CPoly {
    if c < m.n {
        CPoly::from_coeffs(&{
            let mut v = vec![C64::new(0.0, 0.0); c + 1];
            v[c] = C64::new(1.0, 0.0);
            v
        })
    } else {
        m.a1.mul_zk(c - m.n)
    }
}

/// Truncated composition of power series: `E(S(t) − S(0))` to `len` terms,
/// where `shifted` holds E's coefficients around S(0) and `jet` holds S's.
fn compose_series(shifted: &[C64], jet: &[C64], len: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); len];
    if len == 0 {
        return out;
    }
    // s = jet − constant term, truncated.
    let mut s = vec![C64::new(0.0, 0.0); len];
    for (i, v) in jet.iter().take(len).enumerate() {
        s[i] = *v;
    }
    s[0] = C64::new(0.0, 0.0);
    // Horner on the truncated series: out = E_0 + s·(E_1 + s·(E_2 + …)).
    let top = shifted.len().min(64 + len);
    for idx in (0..top).rev() {
        // out = out·s + E_idx
        let mut next = vec![C64::new(0.0, 0.0); len];
        for i in 0..len {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..=i {
                acc += out[t] * s[i - t];
            }
            next[i] = acc;
        }
        next[0] += shifted.get(idx).copied().unwrap_or_else(|| C64::new(0.0, 0.0));
        out = next;
    }
    out
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

    #[test]
    fn identity_symbol_truncates_to_identity() {
        let tol = Tol::default();
        let t = truncate_weighted(&RatFunc::one(), &RatFunc::identity(), 16, &tol).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((t.matrix[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        assert!((t.frobenius_sq() - 16.0).abs() < 1e-10);
    }

    #[test]
    fn square_symbol_selects_even_rows() {
        let tol = Tol::default();
        let phi = rf(&[0.0, 0.0, 1.0], &[1.0]);
        let t = truncate_weighted(&RatFunc::one(), &phi, 16, &tol).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == 2 * j { 1.0 } else { 0.0 };
                assert!(
                    (t.matrix[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12,
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn weighted_truncation_partial_sums() {
        // u = (z+1)/4, φ = (1−z)/2: Frobenius² grows toward the full
        // Hilbert–Schmidt mass 1/4 (slowly; the tail is O(K^{-1/2})).
        let tol = Tol::default();
        let u = rf(&[0.25, 0.25], &[1.0]);
        let phi = rf(&[0.5, -0.5], &[1.0]);
        let t64 = truncate_weighted(&u, &phi, 64, &tol).unwrap().frobenius_sq();
        let t128 = truncate_weighted(&u, &phi, 128, &tol).unwrap().frobenius_sq();
        let t256 = truncate_weighted(&u, &phi, 256, &tol).unwrap().frobenius_sq();
        assert!(t64 < t128 && t128 < t256 && t256 < 0.25);
        // Independent oracle: sum of ‖u·φⁿ‖² over n < K by quadrature.
        let mut direct = 0.0;
        for n in 0..64usize {
            let up = &u * &phi.pow(n);
            direct += up.h2_norm_sq(&tol).unwrap();
        }
        assert!((t64 - direct).abs() < 1e-8, "fft {t64} vs direct {direct}");
    }

    #[test]
    fn backoff_radius_for_circle_pole() {
        let tol = Tol::default();
        // u with pole at z = 1 is analytic inside; sampling backs off to
        // ρ = 1 − 2⁻¹². All Taylor coefficients of 1/(z−1) = −Σ zⁿ equal
        // −1, so row 0 of column 0 carries the full documented alias sum
        // −Σ_j ρ^{jM} = −1/(1 − ρ^M) at M = 32 nodes. Checking that value
        // in closed form confirms both the backoff and the bias bound.
        let u = rf(&[1.0], &[-1.0, 1.0]);
        let t = truncate_weighted(&u, &rf(&[0.0, 0.5], &[1.0]), 8, &tol).unwrap();
        let rho = 1.0 - 0.5f64.powi(12);
        let aliased = -1.0 / (1.0 - rho.powi(32));
        let got = t.matrix[(0, 0)];
        assert!(
            (got - C64::new(aliased, 0.0)).norm() < 1e-6 * aliased.abs(),
            "row 0 = {got}, closed form {aliased}"
        );
    }

    #[test]
    fn pole_colliding_with_backoff_circle_is_an_error() {
        let tol = Tol::default();
        // One pole at 1 forces the backoff; a second pole sitting exactly
        // on the backed-off circle (placed at angle π/2 so the two poles
        // stay resolvable) cannot be sampled across.
        let rho = 1.0 - 0.5f64.powi(12);
        let den = CPoly::from_roots(&[(C64::new(1.0, 0.0), 1), (C64::new(0.0, rho), 1)]);
        let u = RatFunc::new_with_tol(CPoly::from_coeffs(&[C64::new(1.0, 0.0)]), den, 1e-12)
            .unwrap();
        assert!(matches!(
            truncate_weighted(&u, &rf(&[0.0, 0.5], &[1.0]), 8, &tol),
            Err(Error::PoleOnSamplingCircle { .. })
        ));
    }

    #[test]
    fn intertwining_for_fixed_point_and_interior_cases() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        for phi in [
            rf(&[0.5, 0.5], &[1.0]),
            rf(&[0.5, -0.5], &[1.0]),
            rf(&[0.0, 0.5], &[1.0]),
            RatFunc::identity(),
        ] {
            let pr = profile(&phi, &m, &tol).unwrap();
            let pack = build_u(&pr, &m, &tol).unwrap();
            let dev = verify_intertwining(&m, &pr, &pack, 16, &tol).unwrap();
            assert!(dev <= 1e-7, "deviation {dev} for φ = {phi}");
        }
    }

    #[test]
    fn hb_matrix_identity_symbol() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let pr = profile(&RatFunc::identity(), &m, &tol).unwrap();
        let t = hb_cphi_matrix(&m, &pr, 16).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (t.matrix[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-9,
                    "entry ({i},{j}) = {}",
                    t.matrix[(i, j)]
                );
            }
        }
    }

    #[test]
    fn hb_matrix_constant_symbol_rank_one() {
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let pr = profile(&rf(&[0.5], &[1.0]), &m, &tol).unwrap();
        let t = hb_cphi_matrix(&m, &pr, 12).unwrap();
        let sv = t.top_singular_values(3);
        assert!(sv[0] > 0.5);
        assert!(sv[1] < 1e-9, "second singular value {}", sv[1]);
    }

    #[test]
    fn hb_matrix_frobenius_matches_weighted_mass() {
        // For the all-yes case the squared Frobenius norm of the H(b)
        // truncation stabilizes near the full Hilbert–Schmidt mass of the
        // operator; here just check growth and finiteness.
        let tol = Tol::default();
        let m = pythagorean_mate(&rf(&[0.5, 0.5], &[1.0]), &tol).unwrap();
        let pr = profile(&rf(&[0.5, -0.5], &[1.0]), &m, &tol).unwrap();
        let f32v = hb_cphi_matrix(&m, &pr, 32).unwrap().frobenius_sq();
        let f64v = hb_cphi_matrix(&m, &pr, 64).unwrap().frobenius_sq();
        assert!(f32v <= f64v + 1e-9);
        assert!(f64v.is_finite());
    }

    #[test]
    fn oversized_truncation_rejected() {
        let tol = Tol::default();
        assert!(matches!(
            truncate_weighted(&RatFunc::one(), &RatFunc::identity(), 1000, &tol),
            Err(Error::InvalidInput { .. })
        ));
    }
}
