//! The characteristic spectrum by two independent routes, and the limit back
//! to the bare damped pair.
//!
//! Route one reads Ω± off the effective equations of motion:
//!
//! ```text
//! Ω±² = (ν₁² + ν₂² + γ₁γ₂)/2 ± ½ √( γ₁γ₂(2ν₁² + 2ν₂² + γ₁γ₂) + (ν₁² − ν₂²)² )
//! ```
//!
//! Route two diagonalizes the commuting-coordinates Hamiltonian with the
//! 4×4 rotation of [`crate::transforms::diag_transform`] and reports
//! Ω̃ᵢ = 2kᵢσᵢ. The two routes agree to ~1e−12 relative across the positive
//! regime whenever γ₁γ₂ ≥ 0; [`spectrum_report`] measures that agreement.
//!
//! Branch fixing, once and for all: Ω₊ is the root with the larger real part
//! of Ω², ties broken by the larger imaginary part, and the canonical-route
//! labels are matched to the same rule (`label_swapped` in the metadata says
//! when the raw formula order was the other way around). The closure values
//! (a/b and tan 2u) used here are the ones that actually zero the cross
//! couplings of the transported quadratic form — `quadform_diag_check`
//! verifies that independently by matrix congruence.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonians::{build, HamiltonianKind};
use crate::params::{derive, gamma_renormalized, bateman_roots, DerivedParams, SystemParams};
use crate::transforms::diag_transform;

/// Orders a pair of Ω² values: larger real part first, ties by imaginary
/// part. Returns (Ω₊², Ω₋²).
fn order_omega_sq(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    if (a.re, a.im) >= (b.re, b.im) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Characteristic frequencies (Ω₊, Ω₋) from the effective equations of
/// motion. Complex-capable: with γ₁γ₂ < 0 the inner radicand may turn
/// negative and the pair comes back as a conjugate pair (a dynamically
/// unstable, mixed regime).
pub fn pathintegral_spectrum(d: &DerivedParams) -> (Complex64, Complex64) {
    let gg = d.gamma1 * d.gamma2;
    let s = d.nu1_sq + d.nu2_sq + gg;
    let disc = gg * (2.0 * (d.nu1_sq + d.nu2_sq) + gg) + (d.nu1_sq - d.nu2_sq) * (d.nu1_sq - d.nu2_sq);
    let root = disc.sqrt();
    let (plus_sq, minus_sq) = order_omega_sq((s + root) / 2.0, (s - root) / 2.0);
    (plus_sq.sqrt(), minus_sq.sqrt())
}

/// Closure data of the diagonalizing rotation, in raw formula order
/// (mode 1 = the (q₁, π₁) pair).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CanonicalDiag {
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub a_over_b: f64,
    pub k1_sq: f64,
    pub k2_sq: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Largest coefficient magnitude entering the λ expressions; residuals
    /// are reported relative to this.
    pub coeff_scale: f64,
    /// 2k₁σ₁ and 2k₂σ₂ before any relabeling.
    pub omega_raw: (f64, f64),
    pub special_path: bool,
    pub tan2u_singular: bool,
}

/// Solves the closure conditions λ₁ = λ₂ = 0 for the rotation parameters and
/// evaluates the diagonal coefficients:
///
/// ```text
/// (a/b)²  = (μ₁γ₁ + μ₂γ₂) / ( μ μ₁μ₂ (γ₁ω₁² + γ₂ω₂²) )
/// tan 2u  = −(a/b) · μμ₁μ₂(γ₁ω₁² + γ₂ω₂²) / ( μ (μ₂ω₁² − μ₁ω₂²) )
/// ```
///
/// with 2u placed in (0, π]. The overall scale of (a, b) is a gauge choice;
/// ab = 1 here. When both effective couplings vanish the form is already
/// diagonal and the a/b formula is 0/0; that special path takes u = 0,
/// a = b = 1, for which Ω̃ᵢ = √(μ/μᵢ)·ωᵢ. When μ₂ω₁² = μ₁ω₂² the tangent
/// blows up; atan2 places 2u at π/2 and the case is flagged.
///
/// Requires the positive regime and γ₁γ₂ ≥ 0; the mixed-sign region has no
/// real rotation of this family.
pub fn canonical_diagonalization(p: &SystemParams, d: &DerivedParams) -> Result<CanonicalDiag> {
    if !p.positive_regime() {
        return Err(Error::RegimeViolation {
            context: "canonical diagonalization",
        });
    }
    let r = d.require_real("canonical diagonalization")?;
    let (mu, m1, m2) = (r.mu, r.mu1, r.mu2);
    let (g1, g2) = (r.gamma1, r.gamma2);
    let (w1s, w2s) = (r.omega1_sq, r.omega2_sq);

    // scale of the effective couplings, for the zero tests
    let gscale = (p.gamma / mu).abs() + mu.abs() * p.theta * (w1s.abs() + w2s.abs()) / p.hbar;
    let gtol = 1e-14 * (1.0 + gscale);
    let special = g1.abs() <= gtol && g2.abs() <= gtol;

    if !special && g1 * g2 < -gtol * gtol {
        return Err(Error::RegimeViolation {
            context: "canonical diagonalization needs gamma1*gamma2 >= 0 (mixed-sign couplings)",
        });
    }

    let (a, b, u, ab_ratio, singular) = if special {
        (1.0, 1.0, 0.0, 1.0, false)
    } else {
        let d_num = m1 * g1 + m2 * g2;
        let e_den = mu * m1 * m2 * (g1 * w1s + g2 * w2s);
        let ratio = (d_num / e_den).sqrt();
        let delta = m2 * w1s - m1 * w2s;
        let t_num = -ratio * e_den;
        let t_den = mu * delta;
        let singular = t_den.abs() <= 1e-12 * (t_num.abs() + t_den.abs());
        let mut two_u = t_num.atan2(t_den);
        if two_u <= 0.0 {
            two_u += std::f64::consts::PI;
        }
        let a = ratio.sqrt();
        (a, a / ratio, two_u / 2.0, ratio, singular)
    };

    let (s, c) = u.sin_cos();
    let (s2, c2) = (2.0 * u).sin_cos();
    let k1_sq = b * b * s * s / (2.0 * m2) + mu * w1s * a * a * c * c / 2.0 - g2 * a * b * s2 / 4.0;
    let k2_sq = b * b * s * s / (2.0 * m1) + mu * w2s * a * a * c * c / 2.0 + g1 * a * b * s2 / 4.0;
    let sigma1_sq = c * c / (2.0 * m1 * a * a) + mu * w2s * s * s / (2.0 * b * b) - g1 * s2 / (4.0 * a * b);
    let sigma2_sq = c * c / (2.0 * m2 * a * a) + mu * w1s * s * s / (2.0 * b * b) + g2 * s2 / (4.0 * a * b);
    let lambda1 = (mu * w1s * a / (2.0 * b) - b / (2.0 * m2 * a)) * s2 + g2 * c2 / 2.0;
    let lambda2 = (mu * w2s * a / (2.0 * b) - b / (2.0 * m1 * a)) * s2 - g1 * c2 / 2.0;
    let coeff_scale = [
        mu * w1s * a / (2.0 * b),
        mu * w2s * a / (2.0 * b),
        b / (2.0 * m1 * a),
        b / (2.0 * m2 * a),
        g1 / 2.0,
        g2 / 2.0,
    ]
    .iter()
    .fold(0.0f64, |m, x| m.max(x.abs()));

    // the transported form is positive definite in this regime, so every
    // diagonal coefficient must come out positive
    if k1_sq <= 0.0 || k2_sq <= 0.0 || sigma1_sq <= 0.0 || sigma2_sq <= 0.0 {
        return Err(Error::RegimeViolation {
            context: "diagonal coefficients not positive; outside the validated region",
        });
    }
    let omega_raw = (
        2.0 * (k1_sq * sigma1_sq).sqrt(),
        2.0 * (k2_sq * sigma2_sq).sqrt(),
    );
    Ok(CanonicalDiag {
        a,
        b,
        u,
        a_over_b: ab_ratio,
        k1_sq,
        k2_sq,
        sigma1_sq,
        sigma2_sq,
        lambda1,
        lambda2,
        coeff_scale,
        omega_raw,
        special_path: special,
        tan2u_singular: singular,
    })
}

/// Diagnostics carried alongside the two spectra.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RouteMetadata {
    pub a_over_b: f64,
    pub u: f64,
    pub k1_sq: f64,
    pub k2_sq: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    /// |λᵢ| at the closure point, relative to the largest coefficient.
    pub lambda1_residual: f64,
    pub lambda2_residual: f64,
    /// Raw formula order had 2k₂σ₂ > 2k₁σ₁ and the labels were flipped to
    /// match the Ω₊ branch rule.
    pub label_swapped: bool,
    pub special_path: bool,
    pub tan2u_singular: bool,
    /// γ₁γ₂ < 0: the canonical route is skipped and Ω̃, agreement are NaN.
    pub mixed_regime: bool,
}

/// Frequencies from both quantization routes plus agreement diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumReport {
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    pub omega_tilde_1: Complex64,
    pub omega_tilde_2: Complex64,
    /// max relative deviation between matched route outputs.
    pub agreement_error: f64,
    pub metadata: RouteMetadata,
}

/// Computes both routes and their agreement. Requires the positive regime.
pub fn spectrum_report(p: &SystemParams, d: &DerivedParams) -> Result<SpectrumReport> {
    if !p.positive_regime() {
        return Err(Error::RegimeViolation {
            context: "spectrum report",
        });
    }
    let (omega_plus, omega_minus) = pathintegral_spectrum(d);
    let r = d.require_real("spectrum report")?;
    let gscale = (p.gamma / r.mu).abs()
        + r.mu.abs() * p.theta * (r.omega1_sq.abs() + r.omega2_sq.abs()) / p.hbar;
    let gtol = 1e-14 * (1.0 + gscale);
    if r.gamma1 * r.gamma2 < -gtol * gtol {
        // mixed-sign couplings: no real diagonalizing rotation of this family
        return Ok(SpectrumReport {
            omega_plus,
            omega_minus,
            omega_tilde_1: Complex64::new(f64::NAN, f64::NAN),
            omega_tilde_2: Complex64::new(f64::NAN, f64::NAN),
            agreement_error: f64::NAN,
            metadata: RouteMetadata {
                a_over_b: f64::NAN,
                u: f64::NAN,
                k1_sq: f64::NAN,
                k2_sq: f64::NAN,
                sigma1_sq: f64::NAN,
                sigma2_sq: f64::NAN,
                lambda1_residual: f64::NAN,
                lambda2_residual: f64::NAN,
                label_swapped: false,
                special_path: false,
                tan2u_singular: false,
                mixed_regime: true,
            },
        });
    }
    let diag = canonical_diagonalization(p, d)?;
    let (raw1, raw2) = diag.omega_raw;
    let label_swapped = raw2 > raw1;
    let (ot1, ot2) = if label_swapped { (raw2, raw1) } else { (raw1, raw2) };
    let omega_tilde_1 = Complex64::from(ot1);
    let omega_tilde_2 = Complex64::from(ot2);
    let agreement_error = f64::max(
        (omega_tilde_1 - omega_plus).norm() / omega_plus.norm(),
        (omega_tilde_2 - omega_minus).norm() / omega_minus.norm(),
    );
    Ok(SpectrumReport {
        omega_plus,
        omega_minus,
        omega_tilde_1,
        omega_tilde_2,
        agreement_error,
        metadata: RouteMetadata {
            a_over_b: diag.a_over_b,
            u: diag.u,
            k1_sq: diag.k1_sq,
            k2_sq: diag.k2_sq,
            sigma1_sq: diag.sigma1_sq,
            sigma2_sq: diag.sigma2_sq,
            lambda1_residual: diag.lambda1.abs() / diag.coeff_scale.max(f64::MIN_POSITIVE),
            lambda2_residual: diag.lambda2.abs() / diag.coeff_scale.max(f64::MIN_POSITIVE),
            label_swapped,
            special_path: diag.special_path,
            tan2u_singular: diag.tan2u_singular,
            mixed_regime: false,
        },
    })
}

/// Residuals of the congruence check Q′ = MᵀQM.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiagCheck {
    /// max(|Q′(q₁,π₂)|, |Q′(q₂,π₁)|): the entries the closure must kill.
    pub max_cross_entry: f64,
    /// Largest of the structurally-zero entries (q₁q₂, q₁π₁, q₂π₂, π₁π₂).
    pub max_structural_entry: f64,
    /// Frobenius norm of Q, the scale for both residuals.
    pub q_norm: f64,
    /// max |Q′ᵢᵢ/2 − coefficient from the closed forms| — ties the matrix
    /// route to the formula route.
    pub max_coefficient_mismatch: f64,
}

/// Transports the commuting-coordinates form through an explicit rotation
/// (a, b, u) and reports the surviving cross entries, relative to ‖Q‖.
pub fn quadform_cross_entries(
    p: &SystemParams,
    d: &DerivedParams,
    a: f64,
    b: f64,
    u: f64,
) -> Result<(f64, f64)> {
    let q = build(HamiltonianKind::Commuting, p, d)?;
    let map = diag_transform(a, b, u)?;
    let qp = q.transported(&map);
    let cross = f64::max(qp[(0, 3)].abs(), qp[(1, 2)].abs());
    Ok((cross, q.norm()))
}

/// Full congruence check at the closed-form closure point.
pub fn quadform_diag_check(p: &SystemParams, d: &DerivedParams) -> Result<DiagCheck> {
    let diag = canonical_diagonalization(p, d)?;
    let q = build(HamiltonianKind::Commuting, p, d)?;
    let map = diag_transform(diag.a, diag.b, diag.u)?;
    let qp = q.transported(&map);
    let max_cross_entry = f64::max(qp[(0, 3)].abs(), qp[(1, 2)].abs());
    let max_structural_entry = [qp[(0, 1)], qp[(0, 2)], qp[(1, 3)], qp[(2, 3)]]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let max_coefficient_mismatch = [
        (qp[(0, 0)] / 2.0 - diag.k1_sq).abs(),
        (qp[(1, 1)] / 2.0 - diag.k2_sq).abs(),
        (qp[(2, 2)] / 2.0 - diag.sigma1_sq).abs(),
        (qp[(3, 3)] / 2.0 - diag.sigma2_sq).abs(),
    ]
    .iter()
    .fold(0.0f64, |m, x| m.max(*x));
    Ok(DiagCheck {
        max_cross_entry,
        max_structural_entry,
        q_norm: q.norm(),
        max_coefficient_mismatch,
    })
}

/// One row of the limit study.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimitRow {
    pub delta: f64,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    /// max |Ω±²(δ) − (λ±^R)²| under the optimal pairing of the two pairs.
    pub error: f64,
}

/// The ε, η → 0 study: frequencies along a δ-path against the renormalized
/// damped-pair roots.
#[derive(Debug, Clone, Serialize)]
pub struct BatemanLimitStudy {
    pub gamma_r: f64,
    /// λ±^R = iγ_R/2 ± √(ω² − γ_R²/4).
    pub target_plus: Complex64,
    pub target_minus: Complex64,
    /// |Ω±²(ε=η=0) − (λ±^R)²| evaluated exactly at the endpoint.
    pub endpoint_error: f64,
    pub rows: Vec<LimitRow>,
}

fn pair_error(a: (Complex64, Complex64), t: (Complex64, Complex64)) -> f64 {
    let d1 = f64::max((a.0 - t.0).norm(), (a.1 - t.1).norm());
    let d2 = f64::max((a.0 - t.1).norm(), (a.1 - t.0).norm());
    d1.min(d2)
}

/// Evaluates the spectrum along ε = η = δ for each δ in `deltas` (strictly
/// decreasing, inside (0, 1); δ = 1 sits on the η-singularity and is
/// rejected) and compares Ω±² against (λ±^R)². The path keeps η below 1
/// throughout, so the principal branch of μ = √((η+1)(η−1)) walks the
/// imaginary axis continuously and no detour around η = 1 is needed.
pub fn bateman_limit_spectrum(p: &SystemParams, deltas: &[f64]) -> Result<BatemanLimitStudy> {
    for window in deltas.windows(2) {
        if window[1] >= window[0] {
            return Err(Error::OutOfRange {
                name: "delta",
                value: window[1],
                requirement: "strictly decreasing sequence",
            });
        }
    }
    for &delta in deltas {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                requirement: "inside (0, 1)",
            });
        }
    }
    let gamma_r = gamma_renormalized(p);
    let (target_plus, target_minus) = bateman_roots(gamma_r, p.omega);
    let targets = (target_plus * target_plus, target_minus * target_minus);

    let at = |delta: f64| -> Result<(Complex64, Complex64, f64)> {
        let q = SystemParams {
            epsilon: delta,
            eta: delta,
            ..*p
        };
        let d = derive(&q)?;
        let (op, om) = pathintegral_spectrum(&d);
        Ok((op, om, pair_error((op * op, om * om), targets)))
    };

    let (_, _, endpoint_error) = at(0.0)?;
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let (omega_plus, omega_minus, error) = at(delta)?;
        rows.push(LimitRow {
            delta,
            omega_plus,
            omega_minus,
            error,
        });
    }
    Ok(BatemanLimitStudy {
        gamma_r,
        target_plus,
        target_minus,
        endpoint_error,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn p0() -> SystemParams {
        SystemParams::new(0.4, 1.0, 2.0, 3.0, 0.05)
    }

    #[test]
    fn decoupled_spectrum_collapses_to_frequencies() {
        let p = SystemParams::new(0.0, 1.0, 2.0, 3.0, 0.0);
        let d = derive(&p).unwrap();
        let (op, om) = pathintegral_spectrum(&d);
        assert_relative_eq!(op.re, 0.86602540378443865, max_relative = 1e-14);
        assert_relative_eq!(om.re, 0.70710678118654752, max_relative = 1e-14);
        assert_abs_diff_eq!(op.im, 0.0, epsilon = 1e-15);
        // Vieta product on the quartic
        assert_relative_eq!((op * op * om * om).re, 0.375, max_relative = 1e-13);
    }

    #[test]
    fn reference_point_spectrum() {
        // frozen from the 50-digit evaluation
        let d = derive(&p0()).unwrap();
        let (op, om) = pathintegral_spectrum(&d);
        assert_relative_eq!(op.re, 0.87013893714764526, max_relative = 1e-13);
        assert_relative_eq!(om.re, 0.70376397326061402, max_relative = 1e-13);
    }

    #[test]
    fn reference_point_dual_route() {
        let p = p0();
        let d = derive(&p).unwrap();
        let rep = spectrum_report(&p, &d).unwrap();
        assert!(rep.agreement_error < 1e-10, "agreement {}", rep.agreement_error);
        assert!(rep.metadata.lambda1_residual < 1e-10);
        assert!(rep.metadata.lambda2_residual < 1e-10);
        // frozen closure values
        assert_relative_eq!(rep.metadata.a_over_b, 0.42978349567086736, max_relative = 1e-12);
        assert_relative_eq!(rep.metadata.u, 1.4044534175684992, max_relative = 1e-12);
        // at this point the raw order is (Ω₋, Ω₊); the report relabels
        assert!(rep.metadata.label_swapped);
        assert_relative_eq!(rep.omega_tilde_1.re, 0.87013893714764526, max_relative = 1e-11);
    }

    #[test]
    fn special_path_already_diagonal() {
        let p = SystemParams::new(0.0, 1.0, 2.0, 3.0, 0.0);
        let d = derive(&p).unwrap();
        let diag = canonical_diagonalization(&p, &d).unwrap();
        assert!(diag.special_path);
        assert_eq!(diag.u, 0.0);
        assert_abs_diff_eq!(diag.lambda1, 0.0, epsilon = 1e-15);
        let rep = spectrum_report(&p, &d).unwrap();
        assert!(rep.agreement_error < 1e-12);
        assert_relative_eq!(rep.omega_tilde_1.re, 0.86602540378443865, max_relative = 1e-13);
        assert_relative_eq!(rep.omega_tilde_2.re, 0.70710678118654752, max_relative = 1e-13);
    }

    #[test]
    fn vieta_sums_and_products() {
        let d = derive(&p0()).unwrap();
        let (op, om) = pathintegral_spectrum(&d);
        let lhs_sum = op * op + om * om;
        let rhs_sum = d.nu1_sq + d.nu2_sq + d.gamma1 * d.gamma2;
        assert_relative_eq!(lhs_sum.re, rhs_sum.re, max_relative = 1e-12);
        let lhs_prod = op * op * om * om;
        let rhs_prod = d.nu1_sq * d.nu2_sq;
        assert_relative_eq!(lhs_prod.re, rhs_prod.re, max_relative = 1e-12);
    }

    #[test]
    fn diag_check_cross_entries_vanish_only_at_closure() {
        let p = p0();
        let d = derive(&p).unwrap();
        let check = quadform_diag_check(&p, &d).unwrap();
        assert!(check.max_cross_entry < 1e-10 * check.q_norm);
        assert!(check.max_structural_entry < 1e-12 * check.q_norm);
        assert!(check.max_coefficient_mismatch < 1e-12 * check.q_norm);

        // detune u by 0.1: the cross entries reappear
        let diag = canonical_diagonalization(&p, &d).unwrap();
        let (cross, norm) = quadform_cross_entries(&p, &d, diag.a, diag.b, diag.u + 0.1).unwrap();
        assert!(cross > 1e-3 * norm);

        // already-diagonal case: exactly zero
        let q = SystemParams::new(0.0, 1.0, 2.0, 3.0, 0.0);
        let dq = derive(&q).unwrap();
        let (cross, _) = quadform_cross_entries(&q, &dq, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(cross, 0.0);
    }

    #[test]
    fn limit_study_endpoint_and_monotonicity() {
        let p = SystemParams::new(0.2, 1.0, 0.0, 0.0, 0.1);
        let study = bateman_limit_spectrum(&p, &[1e-2, 1e-3, 1e-4]).unwrap();
        assert_abs_diff_eq!(study.gamma_r, 0.299, epsilon = 1e-15);
        assert!(study.endpoint_error < 1e-12, "endpoint {}", study.endpoint_error);
        assert!(study.rows[0].error > study.rows[1].error);
        assert!(study.rows[1].error > study.rows[2].error);
        // O(δ²) approach: the δ = 1e-2 row is already small
        assert!(study.rows[0].error < 1e-4);
    }

    #[test]
    fn limit_study_rejects_bad_sequences() {
        let p = SystemParams::new(0.2, 1.0, 0.0, 0.0, 0.1);
        assert!(bateman_limit_spectrum(&p, &[1e-3, 1e-2]).is_err());
        assert!(bateman_limit_spectrum(&p, &[1.0, 0.5]).is_err());
        assert!(bateman_limit_spectrum(&p, &[0.5, 0.0]).is_err());
    }

    #[test]
    fn undamped_commutative_limit_case() {
        // θ = 0, γ = 0: the targets are ±ω and the endpoint is exact
        let p = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let study = bateman_limit_spectrum(&p, &[1e-2]).unwrap();
        assert_eq!(study.gamma_r, 0.0);
        assert_relative_eq!(study.target_plus.re, 1.0, max_relative = 1e-15);
        assert!(study.endpoint_error < 1e-13);
    }

    #[test]
    fn regime_guard() {
        let p = SystemParams::new(0.4, 1.0, 0.5, 3.0, 0.05);
        let d = derive(&p).unwrap();
        assert!(matches!(
            spectrum_report(&p, &d),
            Err(Error::RegimeViolation { .. })
        ));
    }

    #[test]
    fn mixed_sign_couplings_are_flagged_not_computed() {
        // θ between γℏ/μ²ω₁² and γℏ/μ²ω₂² splits the coupling signs
        let mut p = SystemParams::new(0.4, 1.0, 2.0, 3.0, 0.05);
        p.theta = 0.08; // γ₁ > 0 > γ₂ here
        let d = derive(&p).unwrap();
        let r = d.require_real("test").unwrap();
        assert!(r.gamma1 * r.gamma2 < 0.0, "intended mixed point");
        let rep = spectrum_report(&p, &d).unwrap();
        assert!(rep.metadata.mixed_regime);
        assert!(rep.agreement_error.is_nan());
        assert!(rep.omega_plus.norm() > 0.0);
    }
}
