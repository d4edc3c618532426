//! Built-in distribution families used as a priori laws for default times
//! and market factors.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Exp, Gamma, LogNormal, Normal, Uniform};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DistError {
    #[error("invalid distribution parameters: {0}")]
    InvalidParams(String),
}

/// A univariate continuous distribution from the built-in catalog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Dist {
    /// Exponential with the given rate; support (0, inf).
    Exponential { rate: f64 },
    /// Gamma with shape and rate; support (0, inf).
    Gamma { shape: f64, rate: f64 },
    /// Lognormal with log-scale location mu and shape s; support (0, inf).
    LogNormal { mu: f64, s: f64 },
    /// Normal with mean and standard deviation; support (-inf, inf).
    Normal { mean: f64, sd: f64 },
    /// Uniform on (lo, hi).
    Uniform { lo: f64, hi: f64 },
}

macro_rules! with_dist {
    ($self:expr, $d:ident => $body:expr) => {
        match $self.backend() {
            Backend::Exponential($d) => $body,
            Backend::Gamma($d) => $body,
            Backend::LogNormal($d) => $body,
            Backend::Normal($d) => $body,
            Backend::Uniform($d) => $body,
        }
    };
}

enum Backend {
    Exponential(Exp),
    Gamma(Gamma),
    LogNormal(LogNormal),
    Normal(Normal),
    Uniform(Uniform),
}

impl Dist {
    pub fn validate(&self) -> Result<(), DistError> {
        let bad = |m: &str| Err(DistError::InvalidParams(m.to_string()));
        match *self {
            Dist::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                bad("exponential rate must be positive")
            }
            Dist::Gamma { shape, rate } if !(shape > 0.0 && rate > 0.0) => {
                bad("gamma shape and rate must be positive")
            }
            Dist::LogNormal { mu, s } if !(s > 0.0 && mu.is_finite()) => {
                bad("lognormal s must be positive")
            }
            Dist::Normal { mean, sd } if !(sd > 0.0 && mean.is_finite()) => {
                bad("normal sd must be positive")
            }
            Dist::Uniform { lo, hi } if !(lo < hi && lo.is_finite() && hi.is_finite()) => {
                bad("uniform requires lo < hi")
            }
            _ => Ok(()),
        }
    }

    fn backend(&self) -> Backend {
        match *self {
            Dist::Exponential { rate } => Backend::Exponential(Exp::new(rate).unwrap()),
            Dist::Gamma { shape, rate } => Backend::Gamma(Gamma::new(shape, rate).unwrap()),
            Dist::LogNormal { mu, s } => Backend::LogNormal(LogNormal::new(mu, s).unwrap()),
            Dist::Normal { mean, sd } => Backend::Normal(Normal::new(mean, sd).unwrap()),
            Dist::Uniform { lo, hi } => Backend::Uniform(Uniform::new(lo, hi).unwrap()),
        }
    }

    /// Natural support of the distribution (possibly infinite).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Dist::Exponential { .. } | Dist::Gamma { .. } | Dist::LogNormal { .. } => {
                (0.0, f64::INFINITY)
            }
            Dist::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Dist::Uniform { lo, hi } => (lo, hi),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x >= hi {
            // statrs is inconsistent about boundary behavior across families.
            if x < lo || x > hi {
                return 0.0;
            }
        }
        with_dist!(self, d => d.pdf(x))
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return f64::NEG_INFINITY;
        }
        with_dist!(self, d => d.ln_pdf(x))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        with_dist!(self, d => d.cdf(x))
    }

    /// Survival function 1 - cdf, using the complementary form where the
    /// backend provides one.
    pub fn survival(&self, x: f64) -> f64 {
        with_dist!(self, d => d.sf(x))
    }

    pub fn quantile(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0, "quantile probability must lie in (0,1)");
        with_dist!(self, d => d.inverse_cdf(p))
    }
}
