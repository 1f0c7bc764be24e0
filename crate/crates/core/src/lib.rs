//! A damped oscillator and its anti-damped mirror, coupled, mass-balanced,
//! and placed on a plane whose coordinates do not commute.
//!
//! The crate computes everything that model pins down numerically:
//!
//! - [`params`] — the physical inputs, every derived scalar, and the duality
//!   map between dissipation and noncommutativity (the renormalized damping
//!   γ_R and the fine-tuned θ* that cancels it);
//! - [`transforms`] — the coordinate and phase-space maps, with symplectic
//!   verification;
//! - [`hamiltonians`] — each Hamiltonian as an explicit quadratic form, with
//!   definiteness tests;
//! - [`spectra`] — the characteristic frequencies by two independent routes
//!   (closed form vs. canonical diagonalization) and their agreement, plus
//!   the ε, η → 0 limit study;
//! - [`dynamics`] — exact propagation of the six linear ODE variants, an
//!   eigenvalue oracle, spectral peak extraction and envelope fits;
//! - [`pathintegral`] — the time-slicing circulant matrix and its
//!   closed-form eigenstructure;
//! - [`verify`] — the seeded end-to-end verification suite the CLI and the
//!   acceptance tests share.
//!
//! Everything is a pure function of its inputs; all values are immutable
//! after construction and freely shareable across threads.

pub mod error;
pub mod params;
pub mod transforms;
pub mod hamiltonians;
pub mod spectra;
pub mod dynamics;
pub mod pathintegral;
pub mod linalg;
pub mod verify;

pub mod book;

pub use error::{Error, Result};
pub use params::{
    bateman_roots, derive, dirac_bracket, duality_report, gamma_renormalized, theta_star,
    DerivedParams, DualityReport, Regime, SystemParams,
};
pub use spectra::{pathintegral_spectrum, spectrum_report, SpectrumReport};
