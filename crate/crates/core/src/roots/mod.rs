//! Simultaneous root finding and root continuation along paths.

mod aberth;
mod path;
mod track;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use aberth::roots_all;
pub use path::{Path, Segment};
pub use track::{continue_roots, continue_roots_with, final_permutation, TrackOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootsError {
    #[error("precision must be at least 53 bits, got {0}")]
    Precision(u32),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("polynomial must have degree at least 1")]
    Degree,
    #[error("root iteration did not converge")]
    NonConvergence,
    #[error("leading coefficient vanishes along the path near t = {t}")]
    LeadingCoefficient { t: f64 },
    #[error("path passes too close to a critical value near t = {t}")]
    MarginViolation { t: f64 },
    #[error("strand matching ambiguous after maximal precision escalation near t = {t}")]
    MatchingAmbiguity { t: f64 },
}

/// Approximate complex number with a certified error radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CxApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl CxApprox {
    pub fn new(z: Complex64, err: f64) -> Self {
        CxApprox { re: z.re, im: z.im, err }
    }

    pub fn exact(z: Complex64) -> Self {
        CxApprox::new(z, 0.0)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Roots at one parameter value; position in `roots` is strand identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub roots: Vec<CxApprox>,
}
