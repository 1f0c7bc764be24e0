//! The model's Hamiltonians as explicit quadratic forms on phase space.
//!
//! Every Hamiltonian in this model is quadratic, so each is stored as a
//! symmetric 4×4 matrix Q with the value convention H(z) = ½ zᵀQz in the
//! (x₁, x₂, p₁, p₂) ordering. Definiteness tests and transformation checks
//! then reduce to plain linear algebra.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{DerivedParams, SystemParams};
use crate::transforms::{CanonicalMap, PhasePoint};

/// Which Hamiltonian a [`QuadraticForm`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HamiltonianKind {
    /// The bare damped/anti-damped pair in mixed coordinates:
    /// H = ½(p₁−γx₂/2)² − ½(p₂+γx₁/2)² + ½ω²(x₁²−x₂²). Indefinite.
    Bateman,
    /// The pair augmented by the ε, η couplings; bounded below exactly in
    /// the positive regime.
    Augmented,
    /// The mass-balanced form in primed coordinates, with the single mass μ
    /// and frequencies ω₁, ω₂.
    Final,
    /// The same operator written in commuting coordinates: effective masses
    /// μ₁, μ₂ and cross couplings γ₁, γ₂.
    Commuting,
}

/// A symmetric 4×4 quadratic form; H(z) = ½ zᵀQz.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticForm {
    pub matrix: Matrix4<f64>,
    pub kind: HamiltonianKind,
}

impl QuadraticForm {
    /// Evaluates H(z) = ½ zᵀQz.
    pub fn value(&self, z: &PhasePoint) -> f64 {
        0.5 * (z.transpose() * self.matrix * z)[(0, 0)]
    }

    /// The congruent form MᵀQM, i.e. the same Hamiltonian read in the
    /// preimage variables of `map`.
    pub fn transported(&self, map: &CanonicalMap) -> Matrix4<f64> {
        map.matrix.transpose() * self.matrix * map.matrix
    }

    /// Frobenius norm of Q.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// Builds the requested Hamiltonian. `Final` and `Commuting` require the
/// positive regime (their coefficients must be real).
pub fn build(kind: HamiltonianKind, p: &SystemParams, d: &DerivedParams) -> Result<QuadraticForm> {
    let g = p.gamma;
    let w2 = p.omega * p.omega;
    let mut q = Matrix4::zeros();
    match kind {
        HamiltonianKind::Bateman => {
            q[(0, 0)] = w2 - g * g / 4.0;
            q[(1, 1)] = g * g / 4.0 - w2;
            q[(2, 2)] = 1.0;
            q[(3, 3)] = -1.0;
            q[(0, 3)] = -g / 2.0;
            q[(3, 0)] = -g / 2.0;
            q[(1, 2)] = -g / 2.0;
            q[(2, 1)] = -g / 2.0;
        }
        HamiltonianKind::Augmented => {
            if p.eta == 1.0 || p.eta == -1.0 {
                return Err(Error::EtaSingular(p.eta));
            }
            let ep = p.eta + 1.0;
            let em = p.eta - 1.0;
            q[(0, 0)] = g * g / (4.0 * em) + p.epsilon + w2;
            q[(1, 1)] = g * g / (4.0 * ep) + p.epsilon - w2;
            q[(2, 2)] = 1.0 / ep;
            q[(3, 3)] = 1.0 / em;
            q[(0, 3)] = g / (2.0 * em);
            q[(3, 0)] = g / (2.0 * em);
            q[(1, 2)] = -g / (2.0 * ep);
            q[(2, 1)] = -g / (2.0 * ep);
        }
        HamiltonianKind::Final => {
            if !p.positive_regime() {
                return Err(Error::RegimeViolation {
                    context: "mass-balanced Hamiltonian",
                });
            }
            let r = d.require_real("mass-balanced Hamiltonian")?;
            q[(0, 0)] = r.mu * r.omega1_sq;
            q[(1, 1)] = r.mu * r.omega2_sq;
            q[(2, 2)] = 1.0 / r.mu;
            q[(3, 3)] = 1.0 / r.mu;
            q[(0, 3)] = g / (2.0 * r.mu);
            q[(3, 0)] = g / (2.0 * r.mu);
            q[(1, 2)] = -g / (2.0 * r.mu);
            q[(2, 1)] = -g / (2.0 * r.mu);
        }
        HamiltonianKind::Commuting => {
            if !p.positive_regime() {
                return Err(Error::RegimeViolation {
                    context: "commuting-coordinates Hamiltonian",
                });
            }
            let r = d.require_real("commuting-coordinates Hamiltonian")?;
            q[(0, 0)] = r.mu * r.omega1_sq;
            q[(1, 1)] = r.mu * r.omega2_sq;
            q[(2, 2)] = 1.0 / r.mu1;
            q[(3, 3)] = 1.0 / r.mu2;
            q[(0, 3)] = r.gamma2 / 2.0;
            q[(3, 0)] = r.gamma2 / 2.0;
            q[(1, 2)] = -r.gamma1 / 2.0;
            q[(2, 1)] = -r.gamma1 / 2.0;
        }
    }
    Ok(QuadraticForm { matrix: q, kind })
}

/// The positive split of the bare pair: H = H₁ − H₂ with
/// H₁ = ½(p₁ − γx₂/2)² + ½ω²x₁² and H₂ = ½(p₂ + γx₁/2)² + ½ω²x₂²,
/// each a sum of squares. The difference equals the Bateman form pointwise.
pub fn split_h1_h2(p: &SystemParams, z: &PhasePoint) -> (f64, f64) {
    let (x1, x2, p1, p2) = (z[0], z[1], z[2], z[3]);
    let w2 = p.omega * p.omega;
    let h1 = 0.5 * (p1 - p.gamma * x2 / 2.0).powi(2) + 0.5 * w2 * x1 * x1;
    let h2 = 0.5 * (p2 + p.gamma * x1 / 2.0).powi(2) + 0.5 * w2 * x2 * x2;
    (h1, h2)
}

/// Definiteness verdict for a quadratic form.
#[derive(Debug, Clone, Serialize)]
pub struct Definiteness {
    pub positive: bool,
    /// Smallest eigenvalue of Q.
    pub min_eigenvalue: f64,
    /// On an indefinite form, a unit direction z with zᵀQz ≤ 0 and its value.
    pub witness: Option<(Vector4<f64>, f64)>,
}

/// Relative eigenvalue threshold for the definiteness test: all eigenvalues
/// must exceed this times ‖Q‖ (scale-free across parameter sweeps).
pub const DEFINITENESS_REL_TOL: f64 = 1e-12;

/// Tests positive definiteness of Q by its eigenvalues; on failure returns
/// an eigenvector witness along the most negative direction.
pub fn is_positive_definite(q: &QuadraticForm) -> Definiteness {
    let se = q.matrix.symmetric_eigen();
    let scale = se.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut min_i = 0;
    for i in 1..4 {
        if se.eigenvalues[i] < se.eigenvalues[min_i] {
            min_i = i;
        }
    }
    let min_eigenvalue = se.eigenvalues[min_i];
    let positive = min_eigenvalue > DEFINITENESS_REL_TOL * scale;
    let witness = if positive {
        None
    } else {
        let dir: Vector4<f64> = se.eigenvectors.column(min_i).into_owned();
        let value = 0.5 * (dir.transpose() * q.matrix * dir)[(0, 0)];
        Some((dir, value))
    };
    Definiteness {
        positive,
        min_eigenvalue,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn pt(a: f64, b: f64, c: f64, d: f64) -> PhasePoint {
        Vector4::new(a, b, c, d)
    }

    #[test]
    fn bateman_value_examples() {
        let p = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let d = derive(&SystemParams::new(0.0, 1.0, 2.0, 3.0, 0.0)).unwrap();
        let h = build(HamiltonianKind::Bateman, &p, &d).unwrap();
        assert_abs_diff_eq!(h.value(&pt(1.0, 0.0, 0.0, 0.0)), 0.5, epsilon = 1e-15);
        // symmetric by construction
        assert!((h.matrix - h.matrix.transpose()).iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn augmented_value_example() {
        let p = SystemParams::new(0.0, 1.0, 2.0, 3.0, 0.0);
        let d = derive(&p).unwrap();
        let h = build(HamiltonianKind::Augmented, &p, &d).unwrap();
        assert_abs_diff_eq!(h.value(&pt(0.0, 0.0, 1.0, 0.0)), 0.125, epsilon = 1e-15);
    }

    #[test]
    fn split_matches_bateman() {
        let p = SystemParams::new(0.7, 1.3, 0.0, 0.0, 0.0);
        let d = derive(&SystemParams::new(0.7, 1.3, 2.0, 3.0, 0.0)).unwrap();
        let h = build(HamiltonianKind::Bateman, &p, &d).unwrap();
        let (h1, h2) = split_h1_h2(&p, &pt(0.0, 0.0, 0.0, 0.0));
        assert_eq!((h1, h2), (0.0, 0.0));

        let q = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let (h1, h2) = split_h1_h2(&q, &pt(1.0, 1.0, 0.0, 0.0));
        assert_abs_diff_eq!(h1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h2, 0.5, epsilon = 1e-15);

        for z in [
            pt(0.3, -1.2, 0.8, 2.1),
            pt(-2.0, 0.4, -0.6, 1.1),
            pt(5.0, 5.0, -5.0, 5.0),
        ] {
            let (h1, h2) = split_h1_h2(&p, &z);
            assert!(h1 >= 0.0 && h2 >= 0.0);
            assert_relative_eq!(h1 - h2, h.value(&z), epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn augmented_definite_iff_positive_regime() {
        let inside = SystemParams::new(1.0, 1.0, 2.0, 3.0, 0.0);
        let d = derive(&inside).unwrap();
        let h = build(HamiltonianKind::Augmented, &inside, &d).unwrap();
        assert!(is_positive_definite(&h).positive);

        // η < 1 flips the sign of the p₂² coefficient
        let out = SystemParams::new(0.0, 1.0, 2.0, 0.5, 0.0);
        let d = derive(&out).unwrap();
        let h = build(HamiltonianKind::Augmented, &out, &d).unwrap();
        let verdict = is_positive_definite(&h);
        assert!(!verdict.positive);
        let (dir, val) = verdict.witness.unwrap();
        assert!(val <= 0.0);
        assert!(h.value(&dir) <= 0.0);
    }

    #[test]
    fn bateman_always_indefinite() {
        for &(g, w) in &[(0.0, 1.0), (0.5, 1.0), (2.0, 0.3)] {
            let p = SystemParams::new(g, w, 0.0, 0.0, 0.0);
            let d = derive(&SystemParams::new(g, w, 2.0, 3.0, 0.0)).unwrap();
            let h = build(HamiltonianKind::Bateman, &p, &d).unwrap();
            let verdict = is_positive_definite(&h);
            assert!(!verdict.positive);
            assert!(verdict.witness.is_some());
        }
    }

    #[test]
    fn regime_guard_on_final_and_commuting() {
        let p = SystemParams::new(0.4, 1.0, 0.5, 3.0, 0.05);
        let d = derive(&p).unwrap();
        assert!(matches!(
            build(HamiltonianKind::Final, &p, &d),
            Err(Error::RegimeViolation { .. })
        ));
        assert!(matches!(
            build(HamiltonianKind::Commuting, &p, &d),
            Err(Error::RegimeViolation { .. })
        ));
    }

    #[test]
    fn completing_the_square_identity() {
        // H_augmented(z) = (p₁−γx₂/2)²/2(η+1) + (p₂+γx₁/2)²/2(η−1)
        //                + (ε+ω²)x₁²/2 + (ε−ω²)x₂²/2
        let p = SystemParams::new(0.9, 1.1, 2.5, 2.2, 0.0);
        let d = derive(&p).unwrap();
        let h = build(HamiltonianKind::Augmented, &p, &d).unwrap();
        for z in [pt(0.3, -1.2, 0.8, 2.1), pt(1.0, 0.0, -0.4, 0.7)] {
            let (x1, x2, p1, p2) = (z[0], z[1], z[2], z[3]);
            let w2 = p.omega * p.omega;
            let direct = (p1 - p.gamma * x2 / 2.0).powi(2) / (2.0 * (p.eta + 1.0))
                + (p2 + p.gamma * x1 / 2.0).powi(2) / (2.0 * (p.eta - 1.0))
                + (p.epsilon + w2) * x1 * x1 / 2.0
                + (p.epsilon - w2) * x2 * x2 / 2.0;
            assert_relative_eq!(h.value(&z), direct, epsilon = 1e-12, max_relative = 1e-12);
        }
    }
}
