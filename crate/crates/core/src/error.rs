//! Error type shared by every module of the crate.

/// Everything that can go wrong when building or evaluating the model.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("parameter `{name}` out of range: got {value}, need {requirement}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// η = ±1 collapses one of the two effective masses η±1; the derived
    /// scalars and the acceleration coupling are singular there.
    #[error("eta = {0} is singular: both effective masses eta+1 and eta-1 must be nonzero")]
    EtaSingular(f64),

    #[error("acceleration coupling matrix [[1, eta], [eta, 1]] is singular: |1 - eta^2| = {0:.3e}")]
    SingularMassMatrix(f64),

    #[error("operation requires the positive regime (eta > 1 and epsilon > omega^2): {context}")]
    RegimeViolation { context: &'static str },

    #[error("derived parameters are not real here (max scaled imaginary part {max_imag:.3e}): {context}")]
    ComplexCoefficients { max_imag: f64, context: &'static str },

    #[error("denominator vanishes in {context}")]
    ZeroDenominator { context: &'static str },

    #[error("circulant matrix is numerically singular: |lambda_{k}| = {magnitude:.3e}")]
    SingularCirculant { k: usize, magnitude: f64 },

    #[error("time grid must be strictly increasing")]
    NonMonotonicGrid,

    #[error("time grid must be uniform for spectral analysis (max spacing deviation {0:.3e})")]
    NonUniformGrid(f64),

    #[error(
        "horizon {requested:.3} amplifies the fastest growing mode beyond the cap \
         (growth factor limit {max_factor:.1e}, allowed horizon {allowed:.3})"
    )]
    GrowthCapExceeded {
        requested: f64,
        allowed: f64,
        max_factor: f64,
    },

    #[error("trajectory unsuitable for {context}: {reason}")]
    TrajectoryUnsuitable {
        context: &'static str,
        reason: &'static str,
    },

    #[error("dense eigenvalue iteration failed to converge for a {n}x{n} matrix")]
    EigenFailed { n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
