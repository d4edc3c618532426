//! Shared numerical kernels: adaptive quadrature, bracketed root-finding,
//! the standard normal distribution, exponent-shifted ratio evaluation,
//! and seeded random number streams.

mod logexp;
mod normal;
pub(crate) mod quad;
mod rng;
mod root;

pub use logexp::{log_sum_exp, shifted_exp_ratio};
pub use normal::{inverse_normal_cdf, normal_cdf, normal_pdf};
pub use quad::integrate;
pub use rng::{standard_normal, stream_rng, uniform_open01, Seed};
pub use root::find_root;

use thiserror::Error;

/// Numerical control parameters shared by quadrature, root-finding and
/// domain truncation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative tolerance for quadrature results.
    pub quad_rel_tol: f64,
    /// Absolute tolerance on the bracket width for root-finding.
    pub root_abs_tol: f64,
    /// Prior probability mass allowed outside a truncated domain.
    pub tail_mass: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad_rel_tol: 1e-8,
            root_abs_tol: 1e-10,
            tail_mass: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.quad_rel_tol > 0.0 && self.root_abs_tol > 0.0 && self.tail_mass > 0.0) {
            return Err(NumericsError::InvalidTolerances);
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("all tolerances must be strictly positive")]
    InvalidTolerances,

    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error(
        "quadrature did not converge: best estimate {best}, achieved tolerance {achieved}, requested {requested}"
    )]
    QuadNonConvergence {
        best: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("no sign change over bracket [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("root-finding did not converge: best estimate {best}, bracket width {width}")]
    RootNonConvergence { best: f64, width: f64 },

    #[error("term collection is empty")]
    EmptyTerms,

    #[error("denominator underflows to zero after exponent shift (degenerate posterior)")]
    DegenerateDenominator,
}
