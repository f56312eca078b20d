//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("root finding did not converge for polynomial {poly} (residual {residual:.3e} > {threshold:.3e})")]
    RootFinding {
        poly: String,
        residual: f64,
        threshold: f64,
    },

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error(
        "ill-conditioned partial fractions: reconstruction residual {residual:.3e} \
         (minimum pole gap {min_pole_gap:.3e})"
    )]
    IllConditioned { residual: f64, min_pole_gap: f64 },

    #[error("composition mismatch: probe residual {residual:.3e} exceeds {threshold:.3e}")]
    CompositionMismatch { residual: f64, threshold: f64 },

    #[error("quadrature for {what} did not reach tolerance (value {value:.6e}, error estimate {error_estimate:.3e})")]
    QuadratureTolerance {
        what: String,
        value: f64,
        error_estimate: f64,
    },

    #[error("integrand tail grows like t^{growth:.2}; not a member of H^p for this p")]
    NotInHp { growth: f64 },

    #[error("witness search exhausted for the pole term at {pole} (order {order})")]
    WitnessSearchExhausted { pole: String, order: usize },

    #[error("internal consistency assertion failed: {detail}")]
    ConsistencyAssertion { detail: String },

    #[error("precondition violated: {what}")]
    Precondition { what: String },

    #[error("config error: {detail}")]
    Config { detail: String },
}
