//! The six linear ODE variants, exact propagation, and measurement tools
//! (eigenvalue oracle, spectral peak extraction, envelope fits).
//!
//! Every equation of motion in this model is linear, so trajectories are
//! computed exactly — eigenbasis expansion when the system matrix is
//! diagonalizable, scaling-and-squaring matrix exponential otherwise — and a
//! fixed-step integrator exists only as a cross-check in the tests. Exact
//! propagation matters here because the observables of interest are damping
//! rates; integrator dissipation would contaminate them.

use nalgebra::{Complex, Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{gamma_renormalized, DerivedParams, SystemParams};
use crate::transforms::t1_phase_lift;

/// Which second-order system a [`LinearModel`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    /// The bare pair: ẍ + γẋ + ω²x = 0 and ÿ − γẏ + ω²y = 0.
    Bateman,
    /// The ε, η-coupled pair in (x, y).
    AugmentedXy,
    /// Effective equations in the noncommutative frame:
    /// ẍ₁ = −γ₁ẋ₂ − ν₁²x₁, ẍ₂ = +γ₂ẋ₁ − ν₂²x₂.
    NcEffective,
    /// The θ → 0 limit of the effective equations (γ₁ = γ₂ = γ/μ).
    CommutativeLimit,
    /// The (x, y)-frame image of the effective equations with ε, η retained.
    NcXyPrelimit,
    /// The ε, η → 0 endpoint: the bare pair with γ replaced by γ_R.
    BatemanRenormalized,
}

impl ModelVariant {
    pub const ALL: [ModelVariant; 6] = [
        ModelVariant::Bateman,
        ModelVariant::AugmentedXy,
        ModelVariant::NcEffective,
        ModelVariant::CommutativeLimit,
        ModelVariant::NcXyPrelimit,
        ModelVariant::BatemanRenormalized,
    ];

    pub fn frame(&self) -> Frame {
        match self {
            ModelVariant::Bateman
            | ModelVariant::AugmentedXy
            | ModelVariant::NcXyPrelimit
            | ModelVariant::BatemanRenormalized => Frame::Xy,
            ModelVariant::NcEffective | ModelVariant::CommutativeLimit => Frame::X1X2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelVariant::Bateman => "bateman",
            ModelVariant::AugmentedXy => "augmented_xy",
            ModelVariant::NcEffective => "nc_effective",
            ModelVariant::CommutativeLimit => "commutative_limit",
            ModelVariant::NcXyPrelimit => "nc_xy_prelimit",
            ModelVariant::BatemanRenormalized => "bateman_renormalized",
        }
    }

    pub fn parse(s: &str) -> Option<ModelVariant> {
        Self::ALL.iter().copied().find(|v| v.name() == s)
    }
}

/// Coordinate frame of the state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// (x, y, ẋ, ẏ)
    Xy,
    /// (x₁, x₂, ẋ₁, ẋ₂) — primed (mass-balanced) coordinates for the
    /// effective variants.
    X1X2,
}

/// A first-order system u̇ = A u over the state (u₁, u₂, v₁, v₂) with
/// v = u̇.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearModel {
    pub variant: ModelVariant,
    pub a: Matrix4<f64>,
    pub frame: Frame,
}

/// State vector (u₁, u₂, v₁, v₂).
pub type State = Vector4<f64>;

fn companion(pos_block: Matrix2<f64>, vel_block: Matrix2<f64>) -> Matrix4<f64> {
    // u̇ = v; v̇ = pos_block·u + vel_block·v
    let mut a = Matrix4::zeros();
    a[(0, 2)] = 1.0;
    a[(1, 3)] = 1.0;
    a.view_mut((2, 0), (2, 2)).copy_from(&pos_block);
    a.view_mut((2, 2), (2, 2)).copy_from(&vel_block);
    a
}

/// Minimum |1 − η²| for inverting the acceleration coupling [[1, η], [η, 1]].
pub const MASS_MATRIX_COND_TOL: f64 = 1e-8;

fn inverted_mass_matrix(eta: f64) -> Result<Matrix2<f64>> {
    let det = 1.0 - eta * eta;
    if det.abs() <= MASS_MATRIX_COND_TOL {
        return Err(Error::SingularMassMatrix(det.abs()));
    }
    Ok(Matrix2::new(1.0, -eta, -eta, 1.0) / det)
}

/// Builds the first-order matrix for `variant` at the given parameters.
pub fn build_model(
    variant: ModelVariant,
    p: &SystemParams,
    d: &DerivedParams,
) -> Result<LinearModel> {
    let w2 = p.omega * p.omega;
    let a = match variant {
        ModelVariant::Bateman => companion(
            Matrix2::new(-w2, 0.0, 0.0, -w2),
            Matrix2::new(-p.gamma, 0.0, 0.0, p.gamma),
        ),
        ModelVariant::BatemanRenormalized => {
            let gr = gamma_renormalized(p);
            companion(
                Matrix2::new(-w2, 0.0, 0.0, -w2),
                Matrix2::new(-gr, 0.0, 0.0, gr),
            )
        }
        ModelVariant::AugmentedXy => {
            let minv = inverted_mass_matrix(p.eta)?;
            // ẍ = −γẋ − ω²x − εy ; ÿ = +γẏ − ω²y − εx (before mass inversion)
            let pos = minv * Matrix2::new(-w2, -p.epsilon, -p.epsilon, -w2);
            let vel = minv * Matrix2::new(-p.gamma, 0.0, 0.0, p.gamma);
            companion(pos, vel)
        }
        ModelVariant::NcXyPrelimit => {
            let minv = inverted_mass_matrix(p.eta)?;
            let gr_like = p.gamma + p.theta * w2 / p.hbar
                - p.theta * p.gamma * p.gamma / (4.0 * p.hbar)
                - p.epsilon * p.eta * p.theta / p.hbar;
            let b = p.epsilon * p.theta / p.hbar - p.eta * p.theta * w2 / p.hbar;
            let pos = minv * Matrix2::new(-w2, -p.epsilon, -p.epsilon, -w2);
            let vel = minv * Matrix2::new(-gr_like, -b, b, gr_like);
            companion(pos, vel)
        }
        ModelVariant::NcEffective => {
            let r = d.require_real("effective equations of motion")?;
            companion(
                Matrix2::new(-r.nu1_sq, 0.0, 0.0, -r.nu2_sq),
                Matrix2::new(0.0, -r.gamma1, r.gamma2, 0.0),
            )
        }
        ModelVariant::CommutativeLimit => {
            let r = d.require_real("commutative-limit equations of motion")?;
            let gm = p.gamma / r.mu;
            companion(
                Matrix2::new(-r.nu1_sq, 0.0, 0.0, -r.nu2_sq),
                Matrix2::new(0.0, -gm, gm, 0.0),
            )
        }
    };
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            name: "model matrix",
            value: f64::NAN,
        });
    }
    Ok(LinearModel {
        variant,
        a,
        frame: variant.frame(),
    })
}

/// Eigenvalues of the system matrix by a general dense solver, sorted by
/// (re, im). For the effective variant these are {±iΩ₊, ±iΩ₋}; this is the
/// crate's independent check on the closed-form spectrum.
pub fn eigen_oracle(m: &LinearModel) -> Vec<Complex64> {
    let mut eigs: Vec<Complex64> = m
        .a
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    crate::linalg::sort_complex(&mut eigs);
    eigs
}

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagationMethod {
    /// x(t) = V e^{Λt} V⁻¹ x₀ with a well-conditioned eigenbasis.
    EigenBasis,
    /// Defective (or ill-conditioned) system matrix: per-sample
    /// scaling-and-squaring matrix exponential.
    MatrixExponential,
}

/// A sampled solution of u̇ = A u.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub model: LinearModel,
    pub method: PropagationMethod,
}

/// Growth cap for anti-damped modes: propagation refuses horizons that
/// amplify the fastest-growing mode by more than this factor.
pub const MAX_GROWTH_FACTOR: f64 = 1e6;

type C64Matrix4 = Matrix4<Complex64>;

/// Attempts an eigendecomposition A = V Λ V⁻¹ suitable for propagation.
/// Returns None when A is defective or the basis is ill-conditioned.
fn eigenbasis(a: &Matrix4<f64>) -> Option<(Vector4<Complex64>, C64Matrix4, C64Matrix4)> {
    let ac: C64Matrix4 = a.map(|x| Complex::new(x, 0.0));
    let eigs = a.complex_eigenvalues();
    let scale = eigs.iter().fold(0.0f64, |m, z| m.max(z.norm())) + 1.0;

    // cluster nearly equal eigenvalues so repeated roots are handled as one
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| {
        (eigs[i].re, eigs[i].im)
            .partial_cmp(&(eigs[j].re, eigs[j].im))
            .unwrap()
    });
    let cluster_tol = 1e-7 * scale;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &i in &order {
        let z = Complex64::new(eigs[i].re, eigs[i].im);
        match clusters.last_mut() {
            Some((mean, count)) if (z - *mean).norm() < cluster_tol => {
                *mean = (*mean * (*count as f64) + z) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((z, 1)),
        }
    }

    let mut lambdas = Vector4::from_element(Complex64::new(0.0, 0.0));
    let mut v = C64Matrix4::zeros();
    let mut col = 0;
    for (lambda, mult) in clusters {
        let b = ac - C64Matrix4::from_diagonal_element(lambda);
        let svd = b.svd(false, true);
        let smax = svd.singular_values[0].max(f64::MIN_POSITIVE);
        let vt = svd.v_t.as_ref()?;
        let mut found = 0;
        for k in (0..4).rev() {
            if svd.singular_values[k] <= 1e-8 * smax && found < mult {
                for j in 0..4 {
                    v[(j, col)] = vt[(k, j)].conj();
                }
                lambdas[col] = lambda;
                col += 1;
                found += 1;
            }
        }
        if found < mult {
            return None; // defective: not enough independent eigenvectors
        }
    }
    debug_assert_eq!(col, 4);

    // conditioning and reconstruction guards
    let vsvd = v.svd(false, false);
    if vsvd.singular_values[3] <= 1e-8 * vsvd.singular_values[0] {
        return None;
    }
    let vinv = v.try_inverse()?;
    let recon = v * C64Matrix4::from_diagonal(&lambdas) * vinv;
    let resid = (recon - ac).norm() / scale;
    if resid > 1e-10 {
        return None;
    }
    Some((lambdas, v, vinv))
}

/// Propagates the model exactly over `times` from `x0`.
///
/// The grid must be strictly increasing. For growing modes the horizon is
/// capped: the fastest Re λ must satisfy e^{Re λ · t_max} ≤
/// [`MAX_GROWTH_FACTOR`].
pub fn propagate(m: &LinearModel, x0: &State, times: &[f64]) -> Result<Trajectory> {
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonMonotonicGrid);
    }
    let eigs = m.a.complex_eigenvalues();
    let max_re = eigs.iter().fold(0.0f64, |mx, z| mx.max(z.re));
    let t_last = *times.last().unwrap();
    if max_re > 1e-12 {
        let allowed = MAX_GROWTH_FACTOR.ln() / max_re;
        if t_last > allowed {
            return Err(Error::GrowthCapExceeded {
                requested: t_last,
                allowed,
                max_factor: MAX_GROWTH_FACTOR,
            });
        }
    }

    let x0c = x0.map(|x| Complex64::new(x, 0.0));
    let (states, method) = match eigenbasis(&m.a) {
        Some((lambdas, v, vinv)) => {
            let coeffs = vinv * x0c;
            let states = times
                .iter()
                .map(|&t| {
                    let mut z = Vector4::from_element(Complex64::new(0.0, 0.0));
                    for k in 0..4 {
                        let phase = (lambdas[k] * t).exp() * coeffs[k];
                        for j in 0..4 {
                            z[j] += v[(j, k)] * phase;
                        }
                    }
                    z.map(|c| c.re)
                })
                .collect();
            (states, PropagationMethod::EigenBasis)
        }
        None => {
            let states = times.iter().map(|&t| (m.a * t).exp() * x0).collect();
            (states, PropagationMethod::MatrixExponential)
        }
    };
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        model: m.clone(),
        method,
    })
}

/// Evenly spaced grid over [0, t_max] with `samples` points (endpoint
/// excluded, which keeps the spacing commensurate for Fourier analysis).
pub fn uniform_grid(t_max: f64, samples: usize) -> Vec<f64> {
    let dt = t_max / samples as f64;
    (0..samples).map(|i| i as f64 * dt).collect()
}

fn uniform_dt(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::TrajectoryUnsuitable {
            context: "spectral analysis",
            reason: "need at least two samples",
        });
    }
    let dt = times[1] - times[0];
    let mut worst = 0.0f64;
    for w in times.windows(2) {
        worst = worst.max(((w[1] - w[0]) - dt).abs());
    }
    if worst > 1e-9 * dt.abs() {
        return Err(Error::NonUniformGrid(worst));
    }
    Ok(dt)
}

/// Relative magnitude floor for accepting a spectral peak.
const PEAK_REL_FLOOR: f64 = 1e-3;

/// Windowed DTFT magnitude of a series at angular frequency ω.
fn dtft_mag(x: &[f64], window: &[f64], dt: f64, omega: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (&xi, &wi)) in x.iter().zip(window).enumerate() {
        let phase = -omega * dt * i as f64;
        acc += Complex64::from_polar(xi * wi, phase);
    }
    acc.norm()
}

fn refine_peak(x: &[f64], window: &[f64], dt: f64, lo: f64, hi: f64) -> f64 {
    // golden-section maximization of the windowed DTFT magnitude
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (lo, hi);
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let mut fc = dtft_mag(x, window, dt, c);
    let mut fd = dtft_mag(x, window, dt, d);
    for _ in 0..60 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = dtft_mag(x, window, dt, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = dtft_mag(x, window, dt, d);
        }
    }
    0.5 * (lo + hi)
}

/// Dominant angular frequencies present in the trajectory, across all four
/// state components, merged and sorted descending.
///
/// Hann-windowed FFT peaks, parabolic sub-bin estimate, then direct DTFT
/// maximization for the final digit. Accuracy is grid-bound; expect ~1e−5
/// absolute on well-resolved tones and budget 1e−3. A constant trajectory
/// has no peak above the floor and yields an empty list.
pub fn extract_frequencies(tr: &Trajectory) -> Result<Vec<f64>> {
    let dt = uniform_dt(&tr.times)?;
    let n = tr.times.len();
    if n < 32 {
        return Err(Error::TrajectoryUnsuitable {
            context: "spectral analysis",
            reason: "need at least 32 samples",
        });
    }
    let bin = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);

    let mut found: Vec<(f64, f64)> = Vec::new(); // (omega, magnitude)
    for comp in 0..4 {
        let series: Vec<f64> = tr.states.iter().map(|s| s[comp]).collect();
        let mean = series.iter().sum::<f64>() / n as f64;
        let x: Vec<f64> = series.iter().map(|v| v - mean).collect();
        let amp = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if amp <= 1e-12 * (1.0 + mean.abs()) {
            continue; // flat component
        }
        let mut buf: Vec<Complex64> = x
            .iter()
            .zip(&window)
            .map(|(&v, &w)| Complex64::new(v * w, 0.0))
            .collect();
        fft.process(&mut buf);
        let half = n / 2;
        let mags: Vec<f64> = buf[..half].iter().map(|c| c.norm()).collect();
        let max_mag = mags.iter().fold(0.0f64, |m, &v| m.max(v));
        if max_mag <= 0.0 {
            continue;
        }

        let mut candidates: Vec<usize> = (1..half - 1)
            .filter(|&k| {
                mags[k] >= mags[k - 1] && mags[k] > mags[k + 1] && mags[k] >= PEAK_REL_FLOOR * max_mag
            })
            .collect();
        candidates.sort_by(|&a, &b| mags[b].partial_cmp(&mags[a]).unwrap());
        let mut taken: Vec<usize> = Vec::new();
        for k in candidates {
            if taken.iter().any(|&t| (t as isize - k as isize).abs() <= 4) {
                continue; // inside the mainlobe of an accepted peak
            }
            taken.push(k);
            // parabolic interpolation on log magnitude
            let (l0, l1, l2) = (mags[k - 1].max(1e-300).ln(), mags[k].ln(), mags[k + 1].max(1e-300).ln());
            let denom = l0 - 2.0 * l1 + l2;
            let off = if denom.abs() > 1e-300 { 0.5 * (l0 - l2) / denom } else { 0.0 };
            let guess = (k as f64 + off.clamp(-0.5, 0.5)) * bin;
            let omega = refine_peak(&x, &window, dt, guess - bin, guess + bin);
            found.push((omega, mags[k]));
        }
    }

    // merge coincident peaks across components, keep the strongest
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (w, m) in found {
        match merged.last_mut() {
            Some((w0, m0)) if (w - *w0).abs() < 0.5 * bin => {
                if m > *m0 {
                    *w0 = w;
                    *m0 = m;
                }
            }
            _ => merged.push((w, m)),
        }
    }
    let mut freqs: Vec<f64> = merged.into_iter().map(|(w, _)| w).collect();
    freqs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(freqs)
}

/// Fits ln|u_comp| at its local maxima against time and returns the slope.
///
/// For an exponentially enveloped oscillation e^{st}·cos(Ωt + φ) the maxima
/// of the absolute value lie exactly on a line in the log domain with slope
/// s, so this is an unbiased estimate limited only by the grid resolution of
/// the peak positions (refined by quadratic interpolation here).
pub fn log_envelope_slope(tr: &Trajectory, comp: usize) -> Result<f64> {
    assert!(comp < 4);
    let n = tr.times.len();
    if n < 8 {
        return Err(Error::TrajectoryUnsuitable {
            context: "envelope fit",
            reason: "need at least 8 samples",
        });
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for i in 1..n - 1 {
        let (y0, y1, y2) = (
            tr.states[i - 1][comp].abs(),
            tr.states[i][comp].abs(),
            tr.states[i + 1][comp].abs(),
        );
        if y1 >= y0 && y1 > y2 && y1 > 1e-280 {
            let denom = y0 - 2.0 * y1 + y2;
            let off = if denom.abs() > 1e-300 { (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5) } else { 0.0 };
            let h = tr.times[i] - tr.times[i - 1];
            let t_star = tr.times[i] + off * h;
            let v_star = y1 - 0.25 * (y0 - y2) * off;
            pts.push((t_star, v_star.ln()));
        }
    }
    if pts.len() < 4 {
        return Err(Error::TrajectoryUnsuitable {
            context: "envelope fit",
            reason: "fewer than 4 envelope peaks in the trajectory",
        });
    }
    let n = pts.len() as f64;
    let (st, sv): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), (t, v)| (a + t, b + v));
    let (mt, mv) = (st / n, sv / n);
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in &pts {
        num += (t - mt) * (v - mv);
        den += (t - mt) * (t - mt);
    }
    Ok(num / den)
}

/// Peak-to-peak drift of the oscillation amplitude of component `comp`,
/// relative to the first peak. Zero (to round-off) for an undamped mode.
pub fn amplitude_drift(tr: &Trajectory, comp: usize) -> Result<f64> {
    let n = tr.times.len();
    let mut first: Option<f64> = None;
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let (y0, y1, y2) = (
            tr.states[i - 1][comp].abs(),
            tr.states[i][comp].abs(),
            tr.states[i + 1][comp].abs(),
        );
        if y1 >= y0 && y1 > y2 {
            let denom = y0 - 2.0 * y1 + y2;
            let off = if denom.abs() > 1e-300 { (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5) } else { 0.0 };
            let v_star = y1 - 0.25 * (y0 - y2) * off;
            match first {
                None => first = Some(v_star),
                Some(f) => worst = worst.max((v_star - f).abs() / f),
            }
        }
    }
    if first.is_none() {
        return Err(Error::TrajectoryUnsuitable {
            context: "amplitude drift",
            reason: "no envelope peaks in the trajectory",
        });
    }
    Ok(worst)
}

/// State map (x, y, ẋ, ẏ) → (x₁, x₂, ẋ₁, ẋ₂): the configuration rotation
/// applied to positions and velocities alike.
pub fn xy_to_x1x2_state_map() -> Matrix4<f64> {
    t1_phase_lift().matrix
}

/// State map (x₁, x₂, ẋ₁, ẋ₂) → primed coordinates: the mass-balancing
/// scaling acts as diag(c, 1/c) on positions *and* velocities (the momentum
/// scaling of the phase-space map does not apply to velocity states).
pub fn x1x2_to_primed_state_map(eta: f64) -> Result<Matrix4<f64>> {
    if !(eta > 1.0) {
        return Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            requirement: "> 1 for the mass-balancing scaling",
        });
    }
    let c = ((eta + 1.0) / (eta - 1.0)).powf(0.25);
    Ok(Matrix4::from_diagonal(&Vector4::new(c, 1.0 / c, c, 1.0 / c)))
}

/// Full state map (x, y, ẋ, ẏ) → primed coordinates.
pub fn xy_to_primed_state_map(eta: f64) -> Result<Matrix4<f64>> {
    Ok(x1x2_to_primed_state_map(eta)? * xy_to_x1x2_state_map())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive;
    use crate::spectra::pathintegral_spectrum;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn p0() -> SystemParams {
        SystemParams::new(0.4, 1.0, 2.0, 3.0, 0.05)
    }

    fn d0() -> DerivedParams {
        derive(&p0()).unwrap()
    }

    #[test]
    fn bateman_undamped_is_two_oscillators() {
        let p = SystemParams::new(0.0, 1.3, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let eig = eigen_oracle(&m);
        for z in &eig {
            assert_abs_diff_eq!(z.re, 0.0, epsilon = 1e-12);
            assert_relative_eq!(z.im.abs(), 1.3, max_relative = 1e-12);
        }
    }

    #[test]
    fn bateman_critical_damping_eigenvalues() {
        let p = SystemParams::new(2.0, 1.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let eig = eigen_oracle(&m);
        let expect = [-1.0, -1.0, 1.0, 1.0];
        for (z, e) in eig.iter().zip(expect) {
            assert_relative_eq!(z.re, e, max_relative = 1e-7);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn nc_effective_matches_closed_form_spectrum() {
        let m = build_model(ModelVariant::NcEffective, &p0(), &d0()).unwrap();
        assert_abs_diff_eq!(m.a.trace(), 0.0, epsilon = 1e-15);
        let eig = eigen_oracle(&m);
        let (op, om) = pathintegral_spectrum(&d0());
        let mut target = vec![
            Complex64::new(0.0, op.re),
            Complex64::new(0.0, -op.re),
            Complex64::new(0.0, om.re),
            Complex64::new(0.0, -om.re),
        ];
        crate::linalg::sort_complex(&mut target);
        let dist = crate::linalg::multiset_match_distance(&eig, &target).unwrap();
        assert!(dist < 1e-9, "distance {dist}");
    }

    #[test]
    fn renormalized_eigenvalues() {
        let p = SystemParams::new(0.2, 1.0, 0.0, 0.0, 0.1);
        let m = build_model(ModelVariant::BatemanRenormalized, &p, &d0()).unwrap();
        let eig = eigen_oracle(&m);
        // ±γ_R/2 ± i√(ω² − γ_R²/4) with γ_R = 0.299
        let re = 0.1495;
        let im = 0.98876172559418986;
        let mut target = vec![
            Complex64::new(-re, im),
            Complex64::new(-re, -im),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ];
        crate::linalg::sort_complex(&mut target);
        let dist = crate::linalg::multiset_match_distance(&eig, &target).unwrap();
        assert!(dist < 1e-12, "distance {dist}");
    }

    #[test]
    fn commutative_collapse_is_entrywise() {
        let p = SystemParams::new(0.4, 1.0, 2.0, 3.0, 0.0);
        let d = derive(&p).unwrap();
        let nc = build_model(ModelVariant::NcEffective, &p, &d).unwrap();
        let cl = build_model(ModelVariant::CommutativeLimit, &p, &d).unwrap();
        assert!((nc.a - cl.a).iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn prelimit_collapse_is_entrywise() {
        let p = SystemParams::new(0.3, 1.1, 0.0, 0.0, 0.2);
        let d = d0();
        let pre = build_model(ModelVariant::NcXyPrelimit, &p, &d).unwrap();
        let ren = build_model(ModelVariant::BatemanRenormalized, &p, &d).unwrap();
        assert!((pre.a - ren.a).iter().all(|x| x.abs() == 0.0));
    }

    #[test]
    fn prelimit_is_similar_to_effective() {
        // the (x, y)-frame system and the primed-frame effective system are
        // the same dynamics up to the state map
        let p = p0();
        let d = d0();
        let pre = build_model(ModelVariant::NcXyPrelimit, &p, &d).unwrap();
        let eff = build_model(ModelVariant::NcEffective, &p, &d).unwrap();
        let s = xy_to_primed_state_map(p.eta).unwrap();
        let mapped = s * pre.a * s.try_inverse().unwrap();
        assert!((mapped - eff.a).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn mass_matrix_guard() {
        let p = SystemParams::new(0.4, 1.0, 2.0, 1.0, 0.05);
        assert!(matches!(
            build_model(ModelVariant::AugmentedXy, &p, &d0()),
            Err(Error::SingularMassMatrix(_))
        ));
    }

    #[test]
    fn propagate_reproduces_cosine() {
        let p = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let grid = uniform_grid(40.0 * std::f64::consts::PI, 2048);
        let tr = propagate(&m, &Vector4::new(1.0, 0.0, 0.0, 0.0), &grid).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            assert_abs_diff_eq!(s[0], t.cos(), epsilon = 1e-10);
            assert_abs_diff_eq!(s[1], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn propagate_flags_defective_systems() {
        let p = SystemParams::new(2.0, 1.0, 0.0, 0.0, 0.0); // critical damping
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let grid = uniform_grid(5.0, 64);
        let tr = propagate(&m, &Vector4::new(1.0, 0.0, 0.0, 0.0), &grid).unwrap();
        assert_eq!(tr.method, PropagationMethod::MatrixExponential);
        // x(t) = (1 + t) e^{-t} for the critically damped unit start
        for (t, s) in tr.times.iter().zip(&tr.states) {
            assert_abs_diff_eq!(s[0], (1.0 + t) * (-t).exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn propagate_enforces_growth_cap() {
        let p = SystemParams::new(1.0, 2.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        // max Re λ = γ/2 = 0.5; allowed horizon = ln(1e6)/0.5 ≈ 27.6
        let grid = uniform_grid(100.0, 64);
        assert!(matches!(
            propagate(&m, &Vector4::new(0.0, 1.0, 0.0, 0.0), &grid),
            Err(Error::GrowthCapExceeded { .. })
        ));
    }

    #[test]
    fn envelope_slopes_of_the_bare_pair() {
        let p = SystemParams::new(0.5, 1.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let grid = uniform_grid(50.0, 4096);
        // damped x-mode
        let tr = propagate(&m, &Vector4::new(1.0, 0.0, 0.0, 0.0), &grid).unwrap();
        let slope = log_envelope_slope(&tr, 0).unwrap();
        assert_relative_eq!(slope, -0.25, max_relative = 1e-3);
        // anti-damped y-mode grows with the mirrored rate
        let tr = propagate(&m, &Vector4::new(0.0, 1.0, 0.0, 0.0), &grid).unwrap();
        let slope = log_envelope_slope(&tr, 1).unwrap();
        assert_relative_eq!(slope, 0.25, max_relative = 1e-3);
    }

    #[test]
    fn extract_frequency_of_cosine() {
        let p = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let grid = uniform_grid(40.0 * std::f64::consts::PI, 4096);
        let tr = propagate(&m, &Vector4::new(1.0, 0.0, 0.0, 0.0), &grid).unwrap();
        let freqs = extract_frequencies(&tr).unwrap();
        assert_eq!(freqs.len(), 1);
        assert_abs_diff_eq!(freqs[0], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn extract_frequencies_of_effective_model() {
        let m = build_model(ModelVariant::NcEffective, &p0(), &d0()).unwrap();
        let grid = uniform_grid(400.0, 8192);
        let tr = propagate(&m, &Vector4::new(1.0, 0.7, 0.0, 0.3), &grid).unwrap();
        let freqs = extract_frequencies(&tr).unwrap();
        assert_eq!(freqs.len(), 2, "freqs {freqs:?}");
        assert_abs_diff_eq!(freqs[0], 0.87013893714764526, epsilon = 1e-3);
        assert_abs_diff_eq!(freqs[1], 0.70376397326061402, epsilon = 1e-3);
    }

    #[test]
    fn constant_trajectory_has_no_peaks() {
        let p = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let grid = uniform_grid(10.0, 256);
        let tr = propagate(&m, &Vector4::zeros(), &grid).unwrap();
        assert!(extract_frequencies(&tr).unwrap().is_empty());
    }

    #[test]
    fn non_uniform_grid_is_rejected_for_spectra() {
        let p = SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0);
        let m = build_model(ModelVariant::Bateman, &p, &d0()).unwrap();
        let mut grid = uniform_grid(10.0, 256);
        grid[100] += 1e-3;
        let tr = propagate(&m, &Vector4::new(1.0, 0.0, 0.0, 0.0), &grid).unwrap();
        assert!(matches!(
            extract_frequencies(&tr),
            Err(Error::NonUniformGrid(_))
        ));
    }
}
