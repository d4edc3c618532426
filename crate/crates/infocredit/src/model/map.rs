//! The default map: a monotone function f from market factor to default
//! time, together with its inverse phi = f^-1.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Catalog of validated phi parameterizations. Restricting phi to this
/// catalog keeps monotonicity certifiable in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    /// phi(u) = exp(-a u), a > 0 (decreasing).
    ExpDecay { a: f64 },
    /// phi(u) = exp(a u), a > 0 (increasing).
    ExpGrowth { a: f64 },
    /// phi(u) = a + b u, b != 0.
    Linear { a: f64, b: f64 },
    /// phi(u) = a u^b on u > 0, a != 0, b != 0.
    Power { a: f64, b: f64 },
}

type DynFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum MapImpl {
    Catalog(PhiSpec),
    Custom {
        phi: DynFn,
        phi_prime: Option<DynFn>,
        f: Option<DynFn>,
        /// Domain on which monotonicity was verified; also the bracket used
        /// for numerical inversion when no analytic f is supplied.
        domain: (f64, f64),
    },
}

#[derive(Clone)]
pub struct DefaultMap {
    inner: MapImpl,
    direction: Monotonicity,
}

impl fmt::Debug for DefaultMap {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            MapImpl::Catalog(spec) => write!(fm, "DefaultMap({spec:?})"),
            MapImpl::Custom { domain, .. } => {
                write!(fm, "DefaultMap(custom, {:?}, domain {domain:?})", self.direction)
            }
        }
    }
}

const MONOTONE_GRID: usize = 1000;

impl DefaultMap {
    pub fn from_spec(spec: PhiSpec) -> Result<Self, ModelError> {
        let direction = match spec {
            PhiSpec::ExpDecay { a } => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(ModelError::InvalidMap("exp_decay requires a > 0".into()));
                }
                Monotonicity::Decreasing
            }
            PhiSpec::ExpGrowth { a } => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(ModelError::InvalidMap("exp_growth requires a > 0".into()));
                }
                Monotonicity::Increasing
            }
            PhiSpec::Linear { a, b } => {
                if !(b != 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(ModelError::InvalidMap("linear requires b != 0".into()));
                }
                if b > 0.0 {
                    Monotonicity::Increasing
                } else {
                    Monotonicity::Decreasing
                }
            }
            PhiSpec::Power { a, b } => {
                if !(a != 0.0 && b != 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(ModelError::InvalidMap("power requires a != 0 and b != 0".into()));
                }
                if a * b > 0.0 {
                    Monotonicity::Increasing
                } else {
                    Monotonicity::Decreasing
                }
            }
        };
        Ok(DefaultMap {
            inner: MapImpl::Catalog(spec),
            direction,
        })
    }

    /// Build a map from closures. Monotonicity is verified on a 1000-point
    /// grid over `domain`; a violation is a construction error. When no
    /// analytic derivative is supplied, phi' is computed by central finite
    /// difference; when no analytic inverse is supplied, f is computed by
    /// bracketed root-finding over `domain`.
    pub fn custom<P>(
        phi: P,
        phi_prime: Option<DynFn>,
        f: Option<DynFn>,
        domain: (f64, f64),
    ) -> Result<Self, ModelError>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = domain;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(ModelError::InvalidMap("custom map domain must be a finite interval".into()));
        }
        let phi: DynFn = Arc::new(phi);
        let direction = verify_monotone(|u| phi(u), lo, hi)?;
        Ok(DefaultMap {
            inner: MapImpl::Custom {
                phi,
                phi_prime,
                f,
                domain,
            },
            direction,
        })
    }

    pub fn direction(&self) -> Monotonicity {
        self.direction
    }

    pub fn spec(&self) -> Option<PhiSpec> {
        match self.inner {
            MapImpl::Catalog(spec) => Some(spec),
            MapImpl::Custom { .. } => None,
        }
    }

    /// phi(u) = f^-1(u): factor value implied by default time u.
    pub fn phi(&self, u: f64) -> f64 {
        match &self.inner {
            MapImpl::Catalog(spec) => match *spec {
                PhiSpec::ExpDecay { a } => (-a * u).exp(),
                PhiSpec::ExpGrowth { a } => (a * u).exp(),
                PhiSpec::Linear { a, b } => a + b * u,
                PhiSpec::Power { a, b } => a * u.powf(b),
            },
            MapImpl::Custom { phi, .. } => phi(u),
        }
    }

    /// d phi / du. Analytic for catalog maps, central finite difference with
    /// step h = 1e-6 * max(1, |u|) otherwise.
    pub fn phi_prime(&self, u: f64) -> f64 {
        match &self.inner {
            MapImpl::Catalog(spec) => match *spec {
                PhiSpec::ExpDecay { a } => -a * (-a * u).exp(),
                PhiSpec::ExpGrowth { a } => a * (a * u).exp(),
                PhiSpec::Linear { b, .. } => b,
                PhiSpec::Power { a, b } => a * b * u.powf(b - 1.0),
            },
            MapImpl::Custom {
                phi, phi_prime, ..
            } => match phi_prime {
                Some(d) => d(u),
                None => {
                    let h = 1e-6 * u.abs().max(1.0);
                    (phi(u + h) - phi(u - h)) / (2.0 * h)
                }
            },
        }
    }

    /// f(x): default time implied by factor value x.
    pub fn f(&self, x: f64) -> f64 {
        match &self.inner {
            MapImpl::Catalog(spec) => match *spec {
                PhiSpec::ExpDecay { a } => -x.ln() / a,
                PhiSpec::ExpGrowth { a } => x.ln() / a,
                PhiSpec::Linear { a, b } => (x - a) / b,
                PhiSpec::Power { a, b } => (x / a).powf(1.0 / b),
            },
            MapImpl::Custom { f, phi, domain, .. } => match f {
                Some(g) => g(x),
                None => invert_monotone(|u| phi(u), x, *domain, self.direction),
            },
        }
    }
}

fn verify_monotone<P: Fn(f64) -> f64>(
    phi: P,
    lo: f64,
    hi: f64,
) -> Result<Monotonicity, ModelError> {
    let h = (hi - lo) / (MONOTONE_GRID - 1) as f64;
    let mut prev = phi(lo);
    let mut dir: Option<Monotonicity> = None;
    for i in 1..MONOTONE_GRID {
        let v = phi(lo + i as f64 * h);
        if !v.is_finite() {
            return Err(ModelError::InvalidMap("phi is not finite on the domain".into()));
        }
        let step = match v.partial_cmp(&prev) {
            Some(std::cmp::Ordering::Greater) => Monotonicity::Increasing,
            Some(std::cmp::Ordering::Less) => Monotonicity::Decreasing,
            _ => return Err(ModelError::NonMonotonePhi),
        };
        match dir {
            None => dir = Some(step),
            Some(d) if d != step => return Err(ModelError::NonMonotonePhi),
            _ => {}
        }
        prev = v;
    }
    dir.ok_or(ModelError::NonMonotonePhi)
}

fn invert_monotone<P: Fn(f64) -> f64>(
    phi: P,
    x: f64,
    (lo, hi): (f64, f64),
    dir: Monotonicity,
) -> f64 {
    let g = |u: f64| phi(u) - x;
    let (mut a, mut b) = (lo, hi);
    let (mut ga, mut gb) = (g(a), g(b));
    if ga == 0.0 {
        return a;
    }
    if gb == 0.0 {
        return b;
    }
    debug_assert!(
        ga.signum() != gb.signum(),
        "inverse target outside verified domain"
    );
    // Plain bisection; the caller guarantees a monotone phi.
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 || (b - a) < 1e-14 * (1.0 + m.abs()) {
            return m;
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
            gb = gm;
        }
    }
    let _ = (gb, dir);
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_decay_inverse_round_trip() {
        let m = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.025 }).unwrap();
        assert_eq!(m.direction(), Monotonicity::Decreasing);
        for &t in &[0.1, 1.0, 10.0, 100.0] {
            assert!((m.f(m.phi(t)) - t).abs() < 1e-9 * t.max(1.0));
        }
    }

    #[test]
    fn catalog_directions() {
        assert_eq!(
            DefaultMap::from_spec(PhiSpec::ExpGrowth { a: 0.05 }).unwrap().direction(),
            Monotonicity::Increasing
        );
        assert_eq!(
            DefaultMap::from_spec(PhiSpec::Linear { a: 1.0, b: -0.2 }).unwrap().direction(),
            Monotonicity::Decreasing
        );
        assert_eq!(
            DefaultMap::from_spec(PhiSpec::Power { a: 2.0, b: 0.5 }).unwrap().direction(),
            Monotonicity::Increasing
        );
    }

    #[test]
    fn invalid_catalog_params() {
        assert!(DefaultMap::from_spec(PhiSpec::ExpDecay { a: -1.0 }).is_err());
        assert!(DefaultMap::from_spec(PhiSpec::Linear { a: 0.0, b: 0.0 }).is_err());
    }

    #[test]
    fn custom_map_numeric_inverse_and_derivative() {
        // phi(u) = -ln(u): f(x) = exp(-x).
        let m = DefaultMap::custom(|u: f64| -u.ln(), None, None, (1e-9, 1e3)).unwrap();
        assert_eq!(m.direction(), Monotonicity::Decreasing);
        let u = 2.5;
        assert!((m.phi_prime(u) - (-1.0 / u)).abs() < 1e-6);
        assert!((m.f(m.phi(u)) - u).abs() < 1e-9);
    }

    #[test]
    fn non_monotone_custom_rejected() {
        let e = DefaultMap::custom(|u: f64| (u - 5.0) * (u - 5.0), None, None, (0.0, 10.0));
        assert!(matches!(e, Err(ModelError::NonMonotonePhi)));
    }
}
