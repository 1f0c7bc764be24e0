//! Linear phase-space maps: the x–y mixing rotation, the mass-balancing
//! scaling, the 4×4 diagonalizing rotation, and the shift between commuting
//! and noncommuting coordinates.
//!
//! Phase-space ordering is fixed as (x₁, x₂, p₁, p₂) everywhere in this
//! crate; the symplectic form J is block off-diagonal in that ordering. The
//! sources for this model mix orderings across displays, and a single
//! convention is the cheapest way to keep the signs straight.

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};

/// A point (x₁, x₂, p₁, p₂) of the four-dimensional phase space.
pub type PhasePoint = Vector4<f64>;

/// The standard symplectic form J in the (x₁, x₂, p₁, p₂) ordering.
pub fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let j = Matrix4::new(
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
       -1.0, 0.0, 0.0, 0.0,
        0.0,-1.0, 0.0, 0.0,
    );
    j
}

/// Which map a [`CanonicalMap`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MapLabel {
    /// Phase-space lift of the configuration rotation T₁ (same block on
    /// momenta).
    T1Config,
    /// Mass-balancing scaling T₂ = diag(c, 1/c, 1/c, c).
    T2Phase { eta: f64 },
    /// The diagonalizing rotation in the (x₁,p₂) and (x₂,p₁) planes.
    DiagRotation { a: f64, b: f64, u: f64 },
    /// Shift from commuting coordinates to the noncommuting ones. Not
    /// canonical for θ > 0.
    XcShift { theta: f64, hbar: f64 },
}

/// A linear phase-space map together with its symplecticity verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalMap {
    pub matrix: Matrix4<f64>,
    pub label: MapLabel,
    /// Whether MᵀJM = J holds for this map (decided analytically, verified
    /// numerically by [`CanonicalMap::symplectic_defect`]).
    pub canonical: bool,
}

impl CanonicalMap {
    pub fn apply(&self, z: &PhasePoint) -> PhasePoint {
        self.matrix * z
    }

    /// ‖MᵀJM − J‖∞, zero (to round-off) exactly for canonical maps.
    pub fn symplectic_defect(&self) -> f64 {
        let j = symplectic_form();
        let d = self.matrix.transpose() * j * self.matrix - j;
        d.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// The 2×2 configuration rotation: (x₁, x₂) = ((x+y)/√2, (x−y)/√2).
/// Symmetric orthogonal with determinant −1, hence an involution.
pub fn t1_matrix() -> Matrix2<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(s, s, s, -s)
}

/// Applies T₁ to a configuration pair.
pub fn t1_config(x: f64, y: f64) -> (f64, f64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ((x + y) * s, (x - y) * s)
}

/// Phase-space lift of T₁: the same 2×2 block acting on the coordinates and
/// on the momenta. Canonical because T₁ is orthogonal. The same matrix maps
/// velocity states (x, y, ẋ, ẏ) → (x₁, x₂, ẋ₁, ẋ₂).
pub fn t1_phase_lift() -> CanonicalMap {
    let t = t1_matrix();
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&t);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&t);
    CanonicalMap {
        matrix: m,
        label: MapLabel::T1Config,
        canonical: true,
    }
}

/// The mass-balancing scaling diag(c, 1/c, 1/c, c) with
/// c = ((η+1)/(η−1))^{1/4}, defined for η > 1.
pub fn t2_phase(eta: f64) -> Result<CanonicalMap> {
    if !(eta > 1.0) {
        return Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            requirement: "> 1 for the mass-balancing scaling",
        });
    }
    let c = ((eta + 1.0) / (eta - 1.0)).powf(0.25);
    let m = Matrix4::from_diagonal(&Vector4::new(c, 1.0 / c, 1.0 / c, c));
    Ok(CanonicalMap {
        matrix: m,
        label: MapLabel::T2Phase { eta },
        canonical: true,
    })
}

/// The diagonalizing map (q₁,q₂,π₁,π₂) → (x₁,x₂,p₁,p₂):
///
/// ```text
/// x₁ =  a·cos u · q₁ + (1/b)·sin u · π₂
/// x₂ =  a·cos u · q₂ + (1/b)·sin u · π₁
/// p₁ = −b·sin u · q₂ + (1/a)·cos u · π₁
/// p₂ = −b·sin u · q₁ + (1/a)·cos u · π₂
/// ```
///
/// A rotation (modulo the scales a, b) in the (x₁,p₂) plane and in the
/// (x₂,p₁) plane; symplectic for every nonzero a, b and any real u.
pub fn diag_transform(a: f64, b: f64, u: f64) -> Result<CanonicalMap> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            requirement: "nonzero finite",
        });
    }
    if b == 0.0 || !b.is_finite() {
        return Err(Error::OutOfRange {
            name: "b",
            value: b,
            requirement: "nonzero finite",
        });
    }
    let (s, c) = u.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        a * c,  0.0,    0.0,    s / b,
        0.0,    a * c,  s / b,  0.0,
        0.0,   -b * s,  c / a,  0.0,
       -b * s,  0.0,    0.0,    c / a,
    );
    Ok(CanonicalMap {
        matrix: m,
        label: MapLabel::DiagRotation { a, b, u },
        canonical: true,
    })
}

/// The shift (x₁ᶜ, x₂ᶜ, p₁, p₂) → (x₁, x₂, p₁, p₂) between commuting
/// coordinates and the noncommuting ones:
/// x₁ = x₁ᶜ − (θ/2ℏ)p₂, x₂ = x₂ᶜ + (θ/2ℏ)p₁, momenta unchanged.
///
/// Deliberately *not* canonical for θ > 0: its symplectic defect is exactly
/// θ/ℏ, which is the whole point — the two coordinate sets generate
/// inequivalent dynamics.
pub fn xc_shift(theta: f64, hbar: f64) -> Result<CanonicalMap> {
    if hbar <= 0.0 || !hbar.is_finite() {
        return Err(Error::OutOfRange {
            name: "hbar",
            value: hbar,
            requirement: "> 0",
        });
    }
    let tau = theta / (2.0 * hbar);
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0, 0.0, 0.0, -tau,
        0.0, 1.0, tau,  0.0,
        0.0, 0.0, 1.0,  0.0,
        0.0, 0.0, 0.0,  1.0,
    );
    Ok(CanonicalMap {
        matrix: m,
        label: MapLabel::XcShift { theta, hbar },
        canonical: theta == 0.0,
    })
}
