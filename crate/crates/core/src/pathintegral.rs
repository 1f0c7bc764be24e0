//! The time-slicing matrix of the momentum integration and its closed-form
//! eigenstructure.
//!
//! Slicing the propagation interval into N steps of length ε produces a
//! Gaussian momentum integral with the N×N matrix
//!
//! ```text
//! M_{l,r} = σ δ_{l,r} + (θ/2ℏ²) δ_{l+1,r},   σ = −( iε/2μℏ + θ/2ℏ² )
//! ```
//!
//! The off-diagonal band exists only for θ > 0. The entrywise definition
//! above lacks the wrap-around element; the closed-form eigenvalues
//! λ_k = σ + (θ/2ℏ²)e^{2πik/N} are those of the *circulant completion*, so
//! the wrap entry M_{N−1,0} is included here deliberately, and the tests
//! pin the completed matrix against a generic dense eigensolver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{DerivedParams, SystemParams};

/// A time-sliced momentum kernel: N slices of step ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirculantModel {
    /// Slice count N ≥ 1.
    pub n: usize,
    /// Time step ε of one slice.
    pub eps_step: f64,
    /// Diagonal constant σ = −(iε/2μℏ + θ/2ℏ²).
    pub sigma: Complex64,
    /// Band value θ/2ℏ².
    pub offdiag: f64,
}

impl CirculantModel {
    /// Builds the model from raw ingredients; μ is the (real, positive-
    /// regime) mass parameter.
    pub fn new(n: usize, eps_step: f64, theta: f64, hbar: f64, mu: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                value: 0.0,
                requirement: ">= 1 slice",
            });
        }
        for (name, value) in [("eps_step", eps_step), ("theta", theta), ("hbar", hbar), ("mu", mu)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if hbar <= 0.0 {
            return Err(Error::OutOfRange {
                name: "hbar",
                value: hbar,
                requirement: "> 0",
            });
        }
        if mu <= 0.0 {
            return Err(Error::OutOfRange {
                name: "mu",
                value: mu,
                requirement: "> 0 (real positive-regime mass)",
            });
        }
        let offdiag = theta / (2.0 * hbar * hbar);
        let sigma = Complex64::new(-offdiag, -eps_step / (2.0 * mu * hbar));
        Ok(Self {
            n,
            eps_step,
            sigma,
            offdiag,
        })
    }

    /// Convenience constructor from the system parameters (requires the
    /// positive regime so μ is real).
    pub fn from_params(n: usize, eps_step: f64, p: &SystemParams, d: &DerivedParams) -> Result<Self> {
        if !p.positive_regime() {
            return Err(Error::RegimeViolation {
                context: "time-slicing kernel (needs a real mass parameter)",
            });
        }
        let r = d.require_real("time-slicing kernel")?;
        Self::new(n, eps_step, p.theta, p.hbar, r.mu)
    }

    /// The dense N×N matrix: σ on the diagonal and the band θ/2ℏ² on the
    /// cyclic superdiagonal, wrap entry included. For N = 1 the diagonal and
    /// the wrapped band land on the same entry, which therefore holds
    /// σ + θ/2ℏ².
    pub fn build_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n;
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for l in 0..n {
            m[(l, l)] += self.sigma;
            m[(l, (l + 1) % n)] += Complex64::from(self.offdiag);
        }
        m
    }

    /// Closed-form eigenpairs: λ_k = σ + (θ/2ℏ²)e^{2πik/N} with the Fourier
    /// eigenvectors u_k = N^{−1/2}(1, e^{2πik/N}, e^{4πik/N}, …), k = 0…N−1.
    pub fn closed_form_eigs(&self) -> Vec<(Complex64, DVector<Complex64>)> {
        let n = self.n;
        let norm = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|k| {
                let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                let lambda = self.sigma + self.offdiag * root;
                let v = DVector::from_iterator(
                    n,
                    (0..n).map(|l| {
                        Complex64::from_polar(
                            norm,
                            2.0 * std::f64::consts::PI * (k * l % n) as f64 / n as f64,
                        )
                    }),
                );
                (lambda, v)
            })
            .collect()
    }

    /// Just the closed-form eigenvalues.
    pub fn closed_form_eigenvalues(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / self.n as f64);
                self.sigma + self.offdiag * root
            })
            .collect()
    }

    /// Solves M x = rhs through the Fourier eigenbasis (the matrix is
    /// normal, so this is exact diagonalization, O(N log N)).
    ///
    /// Errors when some |λ_k| ≤ 1e−14·|σ| — the kernel is then singular and
    /// the slice sum has no inverse.
    pub fn inverse_action(&self, rhs: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        assert_eq!(rhs.len(), self.n, "rhs length must equal the slice count");
        let n = self.n;
        let lambdas = self.closed_form_eigenvalues();
        let floor = 1e-14 * self.sigma.norm();
        for (k, l) in lambdas.iter().enumerate() {
            if l.norm() <= floor {
                return Err(Error::SingularCirculant {
                    k,
                    magnitude: l.norm(),
                });
            }
        }
        // With U the inverse-DFT unitary (columns u_k), M = U Λ U*, so
        // x = IFFT( FFT(rhs) / λ ) / N in unnormalized FFT conventions.
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut buf: Vec<Complex64> = rhs.iter().copied().collect();
        fwd.process(&mut buf);
        for (k, v) in buf.iter_mut().enumerate() {
            *v /= lambdas[k];
        }
        inv.process(&mut buf);
        let scale = 1.0 / n as f64;
        Ok(DVector::from_iterator(n, buf.into_iter().map(|z| z * scale)))
    }
}
