use thiserror::Error;

/// Errors raised by the numerical kernels and the physical model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    PoleOfGamma(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("series for I_(i{nu})({x}) is ill-conditioned (cancellation factor {condition:.3e})")]
    IllConditioned { nu: f64, x: f64, condition: f64 },

    #[error("eigenfrequency scan over [{lo}, {hi}] found {found} of {wanted} roots")]
    Bracketing {
        lo: f64,
        hi: f64,
        found: usize,
        wanted: usize,
    },

    #[error("adaptive quadrature on [{lo}, {hi}] exceeded {cap} subdivisions")]
    Quadrature { lo: f64, hi: f64, cap: usize },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid detector configuration: {0}")]
    Detector(String),
}

impl Error {
    /// True for errors that reflect bad inputs rather than a numerical failure.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Geometry(_) | Error::Detector(_) | Error::PoleOfGamma(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
