//! The Bayesian filter: conditional density of the market factor given the
//! information process, and the F_{tu} functional family.

use crate::numerics::integrate;

use super::{InfoModel, InformationState, ModelError};

/// A nonnegative quantity represented as mantissa * exp(shift), so ratios of
/// F values can be formed without overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FValue {
    pub mantissa: f64,
    pub shift: f64,
    /// Set when the query point lies beyond the prior truncation and the
    /// value is an exact zero by convention.
    pub underflow: bool,
}

impl FValue {
    pub fn ln(&self) -> f64 {
        if self.mantissa <= 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.shift
        }
    }

    pub fn value(&self) -> f64 {
        self.mantissa * self.shift.exp()
    }
}

const SHIFT_SCAN_POINTS: usize = 257;

/// Maximum of the log weight over a scan grid on [lo, hi]; used as the
/// exponent shift. The integrand is smooth, so a slight underestimate of the
/// true maximum is harmless.
fn scan_shift(model: &InfoModel, lo: f64, hi: f64, t: f64, xi: f64) -> f64 {
    let h = (hi - lo) / (SHIFT_SCAN_POINTS - 1) as f64;
    let mut m = f64::NEG_INFINITY;
    for i in 0..SHIFT_SCAN_POINTS {
        let w = model.log_weight(lo + i as f64 * h, t, xi);
        if w > m {
            m = w;
        }
    }
    m
}

/// F_{tu} = integral over {v > u} of p(v) exp(sigma phi(v) xi - 1/2 sigma^2
/// phi(v)^2 t) dv, computed with max-exponent shifting over the prior
/// truncation.
pub fn f_functional(
    model: &InfoModel,
    state: &InformationState,
    u: f64,
) -> Result<FValue, ModelError> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(ModelError::InvalidState(format!("require u >= 0, got {u}")));
    }
    let (lo, hi) = model.prior().truncation();
    let lower = u.max(lo);
    if lower >= hi {
        return Ok(FValue {
            mantissa: 0.0,
            shift: 0.0,
            underflow: true,
        });
    }
    let shift = scan_shift(model, lower, hi, state.t, state.xi);
    if shift == f64::NEG_INFINITY {
        return Ok(FValue {
            mantissa: 0.0,
            shift: 0.0,
            underflow: true,
        });
    }
    let mantissa = integrate(
        |v| (model.log_weight(v, state.t, state.xi) - shift).exp(),
        lower,
        hi,
        model.tolerances(),
    )?;
    Ok(FValue {
        mantissa,
        shift,
        underflow: false,
    })
}

/// G_t-conditional survival probability to u, given survival to t:
/// F_{tu} / F_{tt}.
pub fn posterior_survival(
    model: &InfoModel,
    state: &InformationState,
    u: f64,
) -> Result<f64, ModelError> {
    if !state.survived {
        return Err(ModelError::PostDefaultQuery);
    }
    if u < state.t {
        return Err(ModelError::InvalidState(format!(
            "require u >= t, got u={u}, t={}",
            state.t
        )));
    }
    let den = f_functional(model, state, state.t)?;
    if den.mantissa <= 0.0 {
        return Err(ModelError::DegeneratePosterior);
    }
    let num = f_functional(model, state, u)?;
    if num.mantissa <= 0.0 {
        return Ok(0.0);
    }
    Ok((num.ln() - den.ln()).exp().clamp(0.0, 1.0))
}

/// Conditional factor posterior rho_t(x) for a fixed information state,
/// with the normalizing integral computed once at construction so the
/// density can be evaluated repeatedly at per-point cost.
pub struct FactorPosterior<'a> {
    model: &'a InfoModel,
    t: f64,
    xi: f64,
    /// ln of the normalizer over the truncated factor domain.
    log_den: f64,
}

impl<'a> FactorPosterior<'a> {
    pub fn new(model: &'a InfoModel, state: &InformationState) -> Result<Self, ModelError> {
        let (xlo, xhi) = factor_truncation(model);
        let s = model.sigma();
        let (t, xi) = (state.t, state.xi);
        let log_kernel =
            |x: f64| ln_factor_prior(model, x) + s * x * xi - 0.5 * s * s * x * x * t;

        let shift = {
            let n = SHIFT_SCAN_POINTS;
            let h = (xhi - xlo) / (n - 1) as f64;
            let mut m = f64::NEG_INFINITY;
            for i in 0..n {
                let w = log_kernel(xlo + i as f64 * h);
                if w > m {
                    m = w;
                }
            }
            m
        };
        if shift == f64::NEG_INFINITY {
            return Err(ModelError::DegeneratePosterior);
        }
        let mantissa =
            integrate(|v| (log_kernel(v) - shift).exp(), xlo, xhi, model.tolerances())?;
        if mantissa <= 0.0 {
            return Err(ModelError::DegeneratePosterior);
        }
        Ok(FactorPosterior { model, t, xi, log_den: mantissa.ln() + shift })
    }

    /// rho_t(x), normalized over the truncated factor domain.
    pub fn density(&self, x: f64) -> f64 {
        let s = self.model.sigma();
        let lk = ln_factor_prior(self.model, x) + s * x * self.xi
            - 0.5 * s * s * x * x * self.t;
        (lk - self.log_den).exp()
    }
}

/// One-shot rho_t(x); build a [`FactorPosterior`] instead when evaluating
/// the same state at many points.
pub fn conditional_density(
    model: &InfoModel,
    state: &InformationState,
    x: f64,
) -> Result<f64, ModelError> {
    Ok(FactorPosterior::new(model, state)?.density(x))
}

/// Posterior mean of the market factor X = phi(tau) restricted to survival
/// past `lower`: E[X | xi_t, tau > lower].
pub fn conditional_mean_factor(
    model: &InfoModel,
    t: f64,
    xi: f64,
    lower: f64,
) -> Result<f64, ModelError> {
    let (lo, hi) = model.prior().truncation();
    let a = lower.max(lo);
    if a >= hi {
        return Err(ModelError::DegeneratePosterior);
    }
    let shift = scan_shift(model, a, hi, t, xi);
    if shift == f64::NEG_INFINITY {
        return Err(ModelError::DegeneratePosterior);
    }
    let den = integrate(
        |v| (model.log_weight(v, t, xi) - shift).exp(),
        a,
        hi,
        model.tolerances(),
    )?;
    if den <= 0.0 {
        return Err(ModelError::DegeneratePosterior);
    }
    let num = integrate(
        |v| model.map().phi(v) * (model.log_weight(v, t, xi) - shift).exp(),
        a,
        hi,
        model.tolerances(),
    )?;
    Ok(num / den)
}

/// Factor-space image of the prior truncation.
pub(crate) fn factor_truncation(model: &InfoModel) -> (f64, f64) {
    let (lo, hi) = model.prior().truncation();
    let (a, b) = (model.map().phi(lo), model.map().phi(hi));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Log of the factor-space prior density rho_0(x), derived from the
/// default-time density by change of variables when necessary.
pub(crate) fn ln_factor_prior(model: &InfoModel, x: f64) -> f64 {
    // rho_0(x) = p(f(x)) |f'(x)| and f'(x) = 1 / phi'(f(x)).
    let u = model.map().f(x);
    if !u.is_finite() {
        return f64::NEG_INFINITY;
    }
    model.prior().ln_density(u) - model.map().phi_prime(u).abs().ln()
}
