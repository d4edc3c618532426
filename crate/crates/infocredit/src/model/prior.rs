//! A priori law of the default time, with cached domain truncation.
//!
//! The canonical internal parameterization is the density p(u) of the
//! default time tau. A factor-parameterized prior rho_0(x) for X is
//! converted on construction via p(u) = rho_0(phi(u)) |phi'(u)|.

use crate::dist::Dist;
use crate::numerics::{integrate, Tolerances};

use super::map::{DefaultMap, Monotonicity};
use super::ModelError;

#[derive(Debug, Clone)]
enum PriorKind {
    /// Density stated directly in default-time parameterization.
    Tau(Dist),
    /// Density induced on tau = f(X) by a factor law.
    Factor { x: Dist, map: DefaultMap },
}

#[derive(Debug, Clone)]
pub struct PriorDensity {
    kind: PriorKind,
    support: (f64, f64),
    trunc: (f64, f64),
}

impl PriorDensity {
    /// Prior given directly as the law p(u) of the default time.
    pub fn for_default_time(dist: Dist, tol: &Tolerances) -> Result<Self, ModelError> {
        dist.validate().map_err(|e| ModelError::InvalidPrior(e.to_string()))?;
        let support = dist.support();
        if support.0 < 0.0 {
            return Err(ModelError::InvalidPrior(
                "default-time prior must have nonnegative support".into(),
            ));
        }
        let trunc = truncate(&dist, tol);
        let p = PriorDensity {
            kind: PriorKind::Tau(dist),
            support,
            trunc,
        };
        p.check_normalization(tol)?;
        Ok(p)
    }

    /// Prior given as the law rho_0 of the market factor X, converted to
    /// default-time parameterization through the map.
    pub fn from_factor(x: Dist, map: DefaultMap, tol: &Tolerances) -> Result<Self, ModelError> {
        x.validate().map_err(|e| ModelError::InvalidPrior(e.to_string()))?;
        let (xl, xh) = truncate(&x, tol);
        let (a, b) = (map.f(xl), map.f(xh));
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        // A finite factor endpoint can still map to tau = infinity (e.g. a
        // support edge where the map diverges); trim such an endpoint back
        // to the induced default-time quantile instead.
        let half = 0.5 * tol.tail_mass;
        let tau_q = |q: f64| match map.direction() {
            Monotonicity::Increasing => map.f(x.quantile(q)),
            Monotonicity::Decreasing => map.f(x.quantile(1.0 - q)),
        };
        if !lo.is_finite() {
            lo = tau_q(half);
        }
        if !hi.is_finite() {
            hi = tau_q(1.0 - half);
        }
        let trunc = (lo, hi);
        if !(trunc.0.is_finite() && trunc.1.is_finite() && trunc.0 < trunc.1) {
            return Err(ModelError::InvalidPrior(
                "factor truncation does not map to a finite default-time interval".into(),
            ));
        }
        if trunc.1 <= 0.0 {
            return Err(ModelError::InvalidPrior(
                "default map sends the factor prior to nonpositive times".into(),
            ));
        }
        let support = {
            let (sl, sh) = x.support();
            let image = |v: f64, toward_hi: bool| {
                if v.is_finite() {
                    map.f(v)
                } else {
                    let grows = toward_hi == (map.direction() == Monotonicity::Increasing);
                    if grows {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                }
            };
            let (a, b) = (image(sl, false), image(sh, true));
            (a.min(b), a.max(b))
        };
        let p = PriorDensity {
            kind: PriorKind::Factor { x, map },
            support,
            trunc,
        };
        p.check_normalization(tol)?;
        Ok(p)
    }

    fn check_normalization(&self, tol: &Tolerances) -> Result<(), ModelError> {
        let (lo, hi) = self.trunc;
        let mass = integrate(|u| self.density(u), lo, hi, tol)
            .map_err(ModelError::Numerics)?;
        if (mass - 1.0).abs() > 100.0 * tol.quad_rel_tol + tol.tail_mass {
            return Err(ModelError::InvalidPrior(format!(
                "prior mass over truncation is {mass}, expected 1"
            )));
        }
        Ok(())
    }

    /// Density p(u) of the default time.
    pub fn density(&self, u: f64) -> f64 {
        match &self.kind {
            PriorKind::Tau(d) => d.pdf(u),
            PriorKind::Factor { x, map } => x.pdf(map.phi(u)) * map.phi_prime(u).abs(),
        }
    }

    pub fn ln_density(&self, u: f64) -> f64 {
        match &self.kind {
            PriorKind::Tau(d) => d.ln_pdf(u),
            PriorKind::Factor { x, map } => {
                x.ln_pdf(map.phi(u)) + map.phi_prime(u).abs().ln()
            }
        }
    }

    /// Prior probability Q(tau <= u).
    pub fn cdf(&self, u: f64) -> f64 {
        match &self.kind {
            PriorKind::Tau(d) => d.cdf(u),
            PriorKind::Factor { x, map } => match map.direction() {
                Monotonicity::Increasing => x.cdf(map.phi(u)),
                Monotonicity::Decreasing => x.survival(map.phi(u)),
            },
        }
    }

    /// Prior survival probability Q(tau > u).
    pub fn survival(&self, u: f64) -> f64 {
        match &self.kind {
            PriorKind::Tau(d) => d.survival(u),
            PriorKind::Factor { x, map } => match map.direction() {
                Monotonicity::Increasing => x.survival(map.phi(u)),
                Monotonicity::Decreasing => x.cdf(map.phi(u)),
            },
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match &self.kind {
            PriorKind::Tau(d) => d.quantile(p),
            PriorKind::Factor { x, map } => match map.direction() {
                Monotonicity::Increasing => map.f(x.quantile(p)),
                Monotonicity::Decreasing => map.f(x.quantile(1.0 - p)),
            },
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Cached truncation interval carrying at least 1 - tail_mass of the
    /// prior mass.
    pub fn truncation(&self) -> (f64, f64) {
        self.trunc
    }
}

fn truncate(dist: &Dist, tol: &Tolerances) -> (f64, f64) {
    let (sl, sh) = dist.support();
    let half = 0.5 * tol.tail_mass;
    let lo = if sl.is_finite() { sl } else { dist.quantile(half) };
    let hi = if sh.is_finite() { sh } else { dist.quantile(1.0 - half) };
    (lo, hi)
}
