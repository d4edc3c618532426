//! Core model objects: priors, the default map, the term structure, the
//! information process, and the Bayesian filter.

mod curve;
mod filter;
mod kernel;
mod map;
mod prior;

pub use curve::TermStructure;
pub use filter::{
    conditional_density, conditional_mean_factor, f_functional, posterior_survival,
    FValue, FactorPosterior,
};
pub(crate) use filter::{factor_truncation, ln_factor_prior};
pub use kernel::{KernelEval, PosteriorKernel};
pub use map::{DefaultMap, Monotonicity, PhiSpec};
pub use prior::PriorDensity;

use thiserror::Error;

use crate::numerics::{NumericsError, Tolerances};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("information flow rate must be nonnegative and finite")]
    InvalidSigma,

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid default map: {0}")]
    InvalidMap(String),

    #[error("invalid term structure: {0}")]
    InvalidCurve(String),

    #[error("phi is not strictly monotone on the prior support")]
    NonMonotonePhi,

    #[error("default map inverse check failed: f(phi({t})) = {round_trip}")]
    InverseMismatch { t: f64, round_trip: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("query undefined after default")]
    PostDefaultQuery,

    #[error("degenerate posterior: all mass lost to truncation or underflow")]
    DegeneratePosterior,

    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Time t, observed information value xi_t, and the survival flag 1{tau > t}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationState {
    pub t: f64,
    pub xi: f64,
    pub survived: bool,
}

impl InformationState {
    pub fn new(t: f64, xi: f64, survived: bool) -> Result<Self, ModelError> {
        if !(t >= 0.0) || !t.is_finite() || !xi.is_finite() {
            return Err(ModelError::InvalidState(format!(
                "require finite t >= 0 and finite xi, got t={t}, xi={xi}"
            )));
        }
        Ok(InformationState { t, xi, survived })
    }
}

/// The single-name information model: flow rate sigma, a priori law of the
/// default time, and the default map. Immutable after construction.
#[derive(Debug, Clone)]
pub struct InfoModel {
    sigma: f64,
    prior: PriorDensity,
    map: DefaultMap,
    tol: Tolerances,
}

impl InfoModel {
    pub fn new(
        sigma: f64,
        prior: PriorDensity,
        map: DefaultMap,
        tol: Tolerances,
    ) -> Result<Self, ModelError> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(ModelError::InvalidSigma);
        }
        tol.validate()?;

        // Verify strict monotonicity of phi and the inverse identity
        // f(phi(t)) = t on a grid over the prior truncation.
        let (lo, hi) = prior.truncation();
        let n = 1000usize;
        let h = (hi - lo) / (n - 1) as f64;
        let mut prev = map.phi(lo);
        for i in 1..n {
            let u = lo + i as f64 * h;
            let v = map.phi(u);
            if !v.is_finite() || v == prev {
                return Err(ModelError::NonMonotonePhi);
            }
            let increasing = v > prev;
            if increasing != (map.direction() == Monotonicity::Increasing) {
                return Err(ModelError::NonMonotonePhi);
            }
            prev = v;
        }
        for i in 0..101usize {
            let t = lo + (hi - lo) * i as f64 / 100.0;
            let rt = map.f(map.phi(t));
            if (rt - t).abs() > 1e-9 * t.abs().max(1.0) {
                return Err(ModelError::InverseMismatch { t, round_trip: rt });
            }
        }

        Ok(InfoModel {
            sigma,
            prior,
            map,
            tol,
        })
    }

    /// Same prior and map with a different information flow rate.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self, ModelError> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(ModelError::InvalidSigma);
        }
        Ok(InfoModel {
            sigma,
            ..self.clone()
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn prior(&self) -> &PriorDensity {
        &self.prior
    }

    pub fn map(&self) -> &DefaultMap {
        &self.map
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Log posterior weight in default-time parameterization:
    /// ln p(u) + sigma phi(u) xi - 1/2 sigma^2 phi(u)^2 t.
    pub(crate) fn log_weight(&self, u: f64, t: f64, xi: f64) -> f64 {
        let phi = self.map.phi(u);
        self.prior.ln_density(u) + self.sigma * phi * xi - 0.5 * self.sigma * self.sigma * phi * phi * t
    }
}
