//! Certified enclosures of stationary densities and Lyapunov exponents for
//! one-dimensional maps with additive Gaussian noise on the circle [−1, 1).
//!
//! The annealed transfer operator of the random system is discretized in the
//! Fourier basis by validated oscillatory quadrature; the Gaussian noise acts
//! as an exact diagonal multiplier. An approximate stationary density is then
//! certified a posteriori: a rigorous residual, computed mixing-norm bounds on
//! the zero-mean subspace, and a tail estimate combine into an L² error bound
//! for the true density, which in turn gives a certified interval for the
//! Lyapunov exponent via the closed-form Fourier coefficients of log|T'|.
//!
//! Every quantity that feeds a certificate is an outward-rounded interval;
//! floating point is used only to produce candidates (the approximate fixed
//! point) whose quality is verified, never trusted.

pub mod assemble;
pub mod certify;
pub mod complex;
pub mod emit;
pub mod explore;
pub mod fourier;
pub mod interval;
pub mod linalg;
pub mod lyapunov;
pub mod maps;
pub mod operator;
pub mod si;
pub mod simulate;
pub mod taylor;
pub mod trig;

pub use complex::IvComplex;
pub use interval::IvReal;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("assembly failed on row {row}: worst entry width {worst_width:e} above hard cap {cap:e}")]
    Assembly { row: i64, worst_width: f64, cap: f64 },

    #[error("power iteration did not converge in {iterations} iterations (last change {last_change:e})")]
    Convergence { iterations: usize, last_change: f64 },

    #[error("mixing target not reached within {steps} steps (best bound {best_c})")]
    Certification { steps: usize, best_c: f64 },

    #[error("invalid mixing certificate: C_N >= 1")]
    InvalidCertificate,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("crossing refinement stalled: {0}")]
    Refinement(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
