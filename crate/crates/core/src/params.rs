//! Physical inputs and every scalar derived from them.
//!
//! The model couples a damped oscillator x and its anti-damped mirror y
//! (damping γ, frequency ω) through a linear spring ε and an acceleration
//! coupling η, and places the pair on a plane whose coordinates fail to
//! commute by θ. All derived quantities are kept complex-valued: outside the
//! positive regime the mass parameter μ = √((η+1)(η−1)) turns imaginary, and
//! the limit study in [`crate::spectra`] walks straight through that region.
//!
//! Conventions: natural units with the oscillator mass set to 1 and ℏ
//! configurable; principal-branch square roots throughout, with branch
//! continuity handled by callers.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Scale-aware test that a complex scalar is real up to round-off.
pub(crate) fn effectively_real(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol * (1.0 + z.re.abs())
}

/// The six physical inputs.
///
/// `gamma` is the bare damping rate, `omega` the bare angular frequency,
/// `epsilon` the linear coupling strength, `eta` the acceleration-coupling
/// mass, `theta` the noncommutativity parameter (a length squared) and
/// `hbar` the reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    pub gamma: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub theta: f64,
    pub hbar: f64,
}

impl SystemParams {
    /// Parameters with ℏ = 1.
    pub fn new(gamma: f64, omega: f64, epsilon: f64, eta: f64, theta: f64) -> Self {
        Self {
            gamma,
            omega,
            epsilon,
            eta,
            theta,
            hbar: 1.0,
        }
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    /// Checks the admissible ranges and returns the parameters unchanged.
    ///
    /// Rejects non-finite inputs, θ < 0 (θ can be taken nonnegative without
    /// loss of generality), ℏ ≤ 0, and negative γ, ω, ε. γ = 0 is allowed:
    /// the duality map is specifically interesting there.
    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("gamma", self.gamma),
            ("omega", self.omega),
            ("epsilon", self.epsilon),
            ("eta", self.eta),
            ("theta", self.theta),
            ("hbar", self.hbar),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if self.theta < 0.0 {
            return Err(Error::OutOfRange {
                name: "theta",
                value: self.theta,
                requirement: "theta >= 0",
            });
        }
        if self.hbar <= 0.0 {
            return Err(Error::OutOfRange {
                name: "hbar",
                value: self.hbar,
                requirement: "hbar > 0",
            });
        }
        for (name, value) in [
            ("gamma", self.gamma),
            ("omega", self.omega),
            ("epsilon", self.epsilon),
        ] {
            if value < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    requirement: ">= 0",
                });
            }
        }
        Ok(self)
    }

    /// True iff η > 1 and ε > ω² (both strict), the region where the
    /// augmented Hamiltonian is bounded below.
    pub fn positive_regime(&self) -> bool {
        self.eta > 1.0 && self.epsilon > self.omega * self.omega
    }
}

/// Scalars derived from [`SystemParams`], complex-capable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// μ = √((η+1)(η−1)), the geometric-mean mass of the two normal modes.
    pub mu: Complex64,
    /// ω₁² = γ²/4(η²−1) + (ε+ω²)/(η+1).
    pub omega1_sq: Complex64,
    /// ω₂² = γ²/4(η²−1) + (ε−ω²)/(η−1).
    pub omega2_sq: Complex64,
    /// γ₁ = γ/μ − μθω₂²/ℏ, the effective coupling felt by mode 1.
    pub gamma1: Complex64,
    /// γ₂ = γ/μ − μθω₁²/ℏ.
    pub gamma2: Complex64,
    /// μ₁ = μ/(1 − γθ/2ℏ + μ²θ²ω₂²/4ℏ²).
    pub mu1: Complex64,
    /// μ₂ = μ/(1 − γθ/2ℏ + μ²θ²ω₁²/4ℏ²).
    pub mu2: Complex64,
    /// ν₁² = ω₁² − γ²/4μ²; equals (ε+ω²)/(η+1) identically.
    pub nu1_sq: Complex64,
    /// ν₂² = ω₂² − γ²/4μ²; equals (ε−ω²)/(η−1) identically.
    pub nu2_sq: Complex64,
}

/// Real projection of [`DerivedParams`], available in the positive regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealDerived {
    pub mu: f64,
    pub omega1_sq: f64,
    pub omega2_sq: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub nu1_sq: f64,
    pub nu2_sq: f64,
}

impl DerivedParams {
    fn fields(&self) -> [Complex64; 9] {
        [
            self.mu,
            self.omega1_sq,
            self.omega2_sq,
            self.gamma1,
            self.gamma2,
            self.mu1,
            self.mu2,
            self.nu1_sq,
            self.nu2_sq,
        ]
    }

    /// Largest imaginary part across all fields, scaled by 1 + |re|.
    pub fn max_scaled_imag(&self) -> f64 {
        self.fields()
            .iter()
            .map(|z| z.im.abs() / (1.0 + z.re.abs()))
            .fold(0.0, f64::max)
    }

    /// Drops imaginary parts, provided each is below `tol` × (1 + |re|).
    pub fn require_real(&self, context: &'static str) -> Result<RealDerived> {
        let tol = 1e-9;
        if self.fields().iter().any(|z| !effectively_real(*z, tol)) {
            return Err(Error::ComplexCoefficients {
                max_imag: self.max_scaled_imag(),
                context,
            });
        }
        Ok(RealDerived {
            mu: self.mu.re,
            omega1_sq: self.omega1_sq.re,
            omega2_sq: self.omega2_sq.re,
            gamma1: self.gamma1.re,
            gamma2: self.gamma2.re,
            mu1: self.mu1.re,
            mu2: self.mu2.re,
            nu1_sq: self.nu1_sq.re,
            nu2_sq: self.nu2_sq.re,
        })
    }
}

/// Computes every derived scalar. Errors when η = ±1 (one of the effective
/// masses η±1 vanishes; the η → 1 system is constrained, see
/// [`dirac_bracket`]).
pub fn derive(p: &SystemParams) -> Result<DerivedParams> {
    if p.eta == 1.0 || p.eta == -1.0 {
        return Err(Error::EtaSingular(p.eta));
    }
    let eta = p.eta;
    let g = p.gamma;
    let hb = p.hbar;
    let mu_sq = (eta + 1.0) * (eta - 1.0); // real, possibly negative
    let mu = Complex64::from(mu_sq).sqrt();
    // omega_i^2 and nu_i^2 stay real for every real eta
    let omega1_sq = Complex64::from(g * g / (4.0 * mu_sq) + (p.epsilon + p.omega * p.omega) / (eta + 1.0));
    let omega2_sq = Complex64::from(g * g / (4.0 * mu_sq) + (p.epsilon - p.omega * p.omega) / (eta - 1.0));
    let gamma1 = g / mu - mu * p.theta * omega2_sq / hb;
    let gamma2 = g / mu - mu * p.theta * omega1_sq / hb;
    let common = 1.0 - g * p.theta / (2.0 * hb);
    let mu1 = mu / (common + mu_sq * p.theta * p.theta * omega2_sq / (4.0 * hb * hb));
    let mu2 = mu / (common + mu_sq * p.theta * p.theta * omega1_sq / (4.0 * hb * hb));
    let nu1_sq = omega1_sq - g * g / (4.0 * mu_sq);
    let nu2_sq = omega2_sq - g * g / (4.0 * mu_sq);
    Ok(DerivedParams {
        mu,
        omega1_sq,
        omega2_sq,
        gamma1,
        gamma2,
        mu1,
        mu2,
        nu1_sq,
        nu2_sq,
    })
}

/// Renormalized damping γ_R = γ + θω²/ℏ − θγ²/4ℏ.
///
/// This is the damping the pair is left with after the quantum-noncommutative
/// corrections: affine in θ with slope ω²/ℏ − γ²/4ℏ, and nonzero even at
/// γ = 0 whenever θ > 0.
pub fn gamma_renormalized(p: &SystemParams) -> f64 {
    p.gamma + p.theta * p.omega * p.omega / p.hbar - p.theta * p.gamma * p.gamma / (4.0 * p.hbar)
}

/// The fine-tuned θ* = γℏ/(γ²/4 − ω²) that cancels the renormalized damping.
///
/// Only exists (as a nonnegative θ) when γ²/4 > ω², i.e. for a bare-overdamped
/// pair; returns `None` otherwise. Absence is a value, not an error.
pub fn theta_star(p: &SystemParams) -> Option<f64> {
    let excess = p.gamma * p.gamma / 4.0 - p.omega * p.omega;
    if excess > 0.0 {
        Some(p.gamma * p.hbar / excess)
    } else {
        None
    }
}

/// The η → 1 constrained system leaves x and y with the residual bracket
/// 4γ/(7γ² + 8(ε−ω²)).
pub fn dirac_bracket(p: &SystemParams) -> Result<f64> {
    let denom = 7.0 * p.gamma * p.gamma + 8.0 * (p.epsilon - p.omega * p.omega);
    if denom == 0.0 {
        return Err(Error::ZeroDenominator {
            context: "dirac_bracket: 7*gamma^2 + 8*(epsilon - omega^2)",
        });
    }
    Ok(4.0 * p.gamma / denom)
}

/// Characteristic roots λ± = iγ/2 ± √(ω² − γ²/4) of the bare damped pair,
/// under the x(t) = e^{iλt} ansatz. For γ = 0 the pair is (±ω) directly.
///
/// The product is λ₊λ₋ = −ω² for every (γ, ω).
pub fn bateman_roots(gamma: f64, omega: f64) -> (Complex64, Complex64) {
    if gamma == 0.0 {
        return (Complex64::from(omega), Complex64::from(-omega));
    }
    let radical = Complex64::from(omega * omega - gamma * gamma / 4.0).sqrt();
    let shift = Complex64::new(0.0, gamma / 2.0);
    (shift + radical, shift - radical)
}

/// Damping classification of the (renormalized) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Oscillatory,
    Critical,
    Overdamped,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Oscillatory => write!(f, "oscillatory"),
            Regime::Critical => write!(f, "critical"),
            Regime::Overdamped => write!(f, "overdamped"),
        }
    }
}

/// γ_R, θ*, and the critical ratio R = 4ω²/γ_R² in one record.
///
/// Edge cases: γ_R = 0 gives R = +∞ for ω > 0 (oscillatory) and R = NaN for
/// ω = 0 (classified overdamped by the fall-through arm; a free pair).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualityReport {
    pub gamma_r: f64,
    pub theta_star: Option<f64>,
    pub critical_ratio: f64,
    pub regime: Regime,
}

/// Tolerance for calling the critical ratio exactly 1.
pub const CRITICAL_RATIO_TOL: f64 = 1e-12;

/// Assembles the duality record for `p`.
pub fn duality_report(p: &SystemParams) -> DualityReport {
    let gamma_r = gamma_renormalized(p);
    let critical_ratio = 4.0 * p.omega * p.omega / (gamma_r * gamma_r);
    let regime = if (critical_ratio - 1.0).abs() <= CRITICAL_RATIO_TOL {
        Regime::Critical
    } else if critical_ratio > 1.0 {
        Regime::Oscillatory
    } else {
        Regime::Overdamped
    };
    DualityReport {
        gamma_r,
        theta_star: theta_star(p),
        critical_ratio,
        regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Reference point used across the crate's tests.
    pub(crate) fn p0() -> SystemParams {
        SystemParams::new(0.4, 1.0, 2.0, 3.0, 0.05)
    }

    #[test]
    fn validate_flags_regime() {
        let p = p0().validate().unwrap();
        assert!(p.positive_regime());
        let q = SystemParams::new(0.4, 1.0, 0.5, 3.0, 0.05).validate().unwrap();
        assert!(!q.positive_regime());
    }

    #[test]
    fn validate_rejects_bad_inputs() {
        assert!(matches!(
            SystemParams::new(0.4, 1.0, 2.0, 3.0, -0.1).validate(),
            Err(Error::OutOfRange { name: "theta", .. })
        ));
        assert!(matches!(
            SystemParams::new(0.4, 1.0, 2.0, 3.0, 0.1).with_hbar(0.0).validate(),
            Err(Error::OutOfRange { name: "hbar", .. })
        ));
        assert!(matches!(
            SystemParams::new(f64::NAN, 1.0, 2.0, 3.0, 0.1).validate(),
            Err(Error::NonFinite { name: "gamma", .. })
        ));
        assert!(matches!(
            SystemParams::new(-0.4, 1.0, 2.0, 3.0, 0.1).validate(),
            Err(Error::OutOfRange { name: "gamma", .. })
        ));
    }

    #[test]
    fn derive_rejects_eta_one() {
        let p = SystemParams::new(0.4, 1.0, 2.0, 1.0, 0.05);
        assert_eq!(derive(&p), Err(Error::EtaSingular(1.0)));
    }

    #[test]
    fn derive_undamped_commutative() {
        // γ = 0, θ = 0, ε = 2, η = 3: hand-evaluated closed forms.
        let p = SystemParams::new(0.0, 1.0, 2.0, 3.0, 0.0);
        let d = derive(&p).unwrap();
        assert_relative_eq!(d.mu.re, 2.0 * std::f64::consts::SQRT_2, max_relative = 1e-15);
        assert_abs_diff_eq!(d.omega1_sq.re, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(d.omega2_sq.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.gamma1.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.gamma2.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.nu1_sq.re, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(d.nu2_sq.re, 0.5, epsilon = 1e-15);
        // θ = 0 collapses both effective masses onto μ
        assert_relative_eq!(d.mu1.re, d.mu.re, max_relative = 1e-15);
        assert_relative_eq!(d.mu2.re, d.mu.re, max_relative = 1e-15);
    }

    #[test]
    fn derive_reference_point() {
        // Values frozen from a 50-digit independent evaluation of the same
        // closed forms.
        let d = derive(&p0()).unwrap();
        assert_relative_eq!(d.gamma1.re, 0.070003571337468205, max_relative = 1e-14);
        assert_relative_eq!(d.gamma2.re, 0.034648232278140829, max_relative = 1e-14);
        assert_relative_eq!(d.mu1.re, 2.8497288478841239, max_relative = 1e-14);
        assert_relative_eq!(d.mu2.re, 2.8461443734710474, max_relative = 1e-14);
        assert_abs_diff_eq!(d.nu1_sq.re, 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(d.nu2_sq.re, 0.5, epsilon = 1e-14);
        assert!(d.max_scaled_imag() == 0.0);
        // μ² reproduces (η+1)(η−1) exactly up to round-off
        assert_relative_eq!((d.mu * d.mu).re, 8.0, max_relative = 1e-15);
    }

    #[test]
    fn derive_is_complex_capable_below_eta_one() {
        let p = SystemParams::new(0.2, 1.0, 0.01, 0.01, 0.1);
        let d = derive(&p).unwrap();
        // μ is purely imaginary below |η| = 1
        assert_abs_diff_eq!(d.mu.re, 0.0, epsilon = 1e-15);
        assert!(d.mu.im > 0.0);
        // γ₁, γ₂ purely imaginary as well; ν² real
        assert_abs_diff_eq!(d.gamma1.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.nu1_sq.im, 0.0, epsilon = 1e-15);
        assert!(d.require_real("test").is_err());
    }

    #[test]
    fn gamma_renormalized_examples() {
        let p = SystemParams::new(0.2, 1.0, 0.0, 0.0, 0.1);
        assert_abs_diff_eq!(gamma_renormalized(&p), 0.299, epsilon = 1e-15);
        let q = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.1);
        assert_abs_diff_eq!(gamma_renormalized(&q), 0.1, epsilon = 1e-15);
        let r = SystemParams::new(0.7, 1.3, 0.0, 0.0, 0.0);
        assert_abs_diff_eq!(gamma_renormalized(&r), 0.7, epsilon = 1e-15);
    }

    #[test]
    fn theta_star_examples() {
        let p = SystemParams::new(4.0, 1.0, 0.0, 0.0, 0.0);
        let ts = theta_star(&p).unwrap();
        assert_relative_eq!(ts, 4.0 / 3.0, max_relative = 1e-15);
        // substituting θ* cancels the renormalized damping
        let tuned = SystemParams::new(4.0, 1.0, 0.0, 0.0, ts);
        assert_abs_diff_eq!(gamma_renormalized(&tuned), 0.0, epsilon = 1e-12);

        assert_eq!(theta_star(&SystemParams::new(1.0, 1.0, 0.0, 0.0, 0.0)), None);
        let s = SystemParams::new(2.0, 0.0, 0.0, 0.0, 0.0);
        assert_relative_eq!(theta_star(&s).unwrap(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn dirac_bracket_examples() {
        let p = SystemParams::new(1.0, 0.0, 1.0, 1.0, 0.0);
        assert_relative_eq!(dirac_bracket(&p).unwrap(), 4.0 / 15.0, max_relative = 1e-15);
        let q = SystemParams::new(0.0, 1.0, 2.0, 1.0, 0.0);
        assert_abs_diff_eq!(dirac_bracket(&q).unwrap(), 0.0, epsilon = 0.0);
        let r = SystemParams::new(1.0, 1.0, 1.0, 1.0, 0.0);
        assert_relative_eq!(dirac_bracket(&r).unwrap(), 4.0 / 7.0, max_relative = 1e-15);
        let s = SystemParams::new(0.0, 1.0, 1.0, 1.0, 0.0);
        assert!(matches!(dirac_bracket(&s), Err(Error::ZeroDenominator { .. })));
    }

    #[test]
    fn bateman_roots_examples() {
        let (lp, lm) = bateman_roots(0.0, 2.0);
        assert_eq!((lp.re, lp.im), (2.0, 0.0));
        assert_eq!((lm.re, lm.im), (-2.0, 0.0));

        // critical damping: degenerate pair at i
        let (lp, lm) = bateman_roots(2.0, 1.0);
        assert_abs_diff_eq!((lp - Complex64::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((lm - Complex64::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);

        // renormalized input: γ_R(0.2, 1, 0.1) = 0.299
        let p = SystemParams::new(0.2, 1.0, 0.0, 0.0, 0.1);
        let gr = gamma_renormalized(&p);
        let (lp, _) = bateman_roots(gr, 1.0);
        assert_relative_eq!(lp.re, 0.98876172559418986, max_relative = 1e-14);
        assert_relative_eq!(lp.im, 0.1495, max_relative = 1e-14);
    }

    #[test]
    fn bateman_roots_product_is_minus_omega_sq() {
        for &(g, w) in &[(0.0, 2.0), (0.5, 1.0), (2.0, 1.0), (3.0, 0.7), (1.0, 0.0)] {
            let (lp, lm) = bateman_roots(g, w);
            assert_abs_diff_eq!((lp * lm + w * w).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn duality_regimes() {
        let osc = duality_report(&SystemParams::new(0.2, 1.0, 0.0, 0.0, 0.0));
        assert_eq!(osc.regime, Regime::Oscillatory);
        let over = duality_report(&SystemParams::new(4.0, 1.0, 0.0, 0.0, 0.0));
        assert_eq!(over.regime, Regime::Overdamped);
        assert!(over.theta_star.is_some());
        // exactly critical: γ_R = 2ω at θ = 0
        let crit = duality_report(&SystemParams::new(2.0, 1.0, 0.0, 0.0, 0.0));
        assert_eq!(crit.regime, Regime::Critical);
        // γ_R = 0, ω > 0: infinite ratio, oscillatory
        let free = duality_report(&SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0));
        assert_eq!(free.regime, Regime::Oscillatory);
        assert!(free.critical_ratio.is_infinite());
    }
}
