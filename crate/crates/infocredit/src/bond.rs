//! Single-name defaultable discount bond pricing, hazard rates, and bond
//! volatility.

use crate::model::{
    conditional_density, f_functional, posterior_survival, InfoModel, InformationState,
    ModelError, TermStructure,
};
use crate::numerics::integrate;

/// A defaultable zero-coupon bond.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BondSpec {
    /// Maturity T.
    pub maturity: f64,
    /// Principal N.
    pub principal: f64,
    /// Fixed recovery fraction R of the principal paid at T on default.
    pub recovery: f64,
}

impl BondSpec {
    pub fn new(maturity: f64, principal: f64, recovery: f64) -> Result<Self, ModelError> {
        if !(maturity > 0.0 && maturity.is_finite()) {
            return Err(ModelError::InvalidState("bond maturity must be positive".into()));
        }
        if !(principal > 0.0 && principal.is_finite()) {
            return Err(ModelError::InvalidState("bond principal must be positive".into()));
        }
        if !(0.0..=1.0).contains(&recovery) {
            return Err(ModelError::InvalidState("recovery must lie in [0, 1]".into()));
        }
        Ok(BondSpec {
            maturity,
            principal,
            recovery,
        })
    }

    /// Unit zero-recovery bond with the given maturity.
    pub fn zero_recovery(maturity: f64) -> Result<Self, ModelError> {
        BondSpec::new(maturity, 1.0, 0.0)
    }
}

/// Zero-recovery bond price B_tT = P_tT 1{tau>t} F_tT / F_tt times the
/// principal. Returns 0 after default.
pub fn bond_price(
    model: &InfoModel,
    curve: &TermStructure,
    state: &InformationState,
    spec: &BondSpec,
) -> Result<f64, ModelError> {
    if state.t > spec.maturity {
        return Err(ModelError::InvalidState(format!(
            "valuation time {} exceeds bond maturity {}",
            state.t, spec.maturity
        )));
    }
    if !state.survived {
        return Ok(0.0);
    }
    let p_tt = curve.forward_discount(state.t, spec.maturity);
    let q = posterior_survival(model, state, spec.maturity)?;
    Ok(spec.principal * p_tt * q)
}

/// Fixed-recovery bond price: N B + R N (P_tT - B) with B the unit
/// zero-recovery price in the same state. Linear in R; R=1 reproduces the
/// riskless bond.
pub fn recovery_bond_price(
    model: &InfoModel,
    curve: &TermStructure,
    state: &InformationState,
    spec: &BondSpec,
) -> Result<f64, ModelError> {
    let unit = BondSpec::new(spec.maturity, 1.0, 0.0)?;
    let b = bond_price(model, curve, state, &unit)?;
    let p_tt = curve.forward_discount(state.t, spec.maturity);
    Ok(spec.principal * b + spec.recovery * spec.principal * (p_tt - b))
}

/// Hazard rate h_t perceived from the information xi_t, pre-default only.
pub fn hazard_rate(model: &InfoModel, state: &InformationState) -> Result<f64, ModelError> {
    forward_hazard(model, state, state.t)
}

/// Forward hazard rate h_tu for u >= t: the posterior default density at u
/// conditional on survival to u.
pub fn forward_hazard(
    model: &InfoModel,
    state: &InformationState,
    u: f64,
) -> Result<f64, ModelError> {
    if !state.survived {
        return Err(ModelError::PostDefaultQuery);
    }
    if u < state.t {
        return Err(ModelError::InvalidState(format!(
            "forward hazard requires u >= t, got u={u}, t={}",
            state.t
        )));
    }
    let den = f_functional(model, state, u)?;
    if den.mantissa <= 0.0 {
        return Err(ModelError::DegeneratePosterior);
    }
    let num_log = model_log_weight(model, u, state);
    // p(u) = 0 (e.g. support starting after u) gives hazard 0, not an error.
    if num_log == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((num_log - den.ln()).exp())
}

fn model_log_weight(model: &InfoModel, u: f64, state: &InformationState) -> f64 {
    let phi = model.map().phi(u);
    let s = model.sigma();
    model.prior().ln_density(u) + s * phi * state.xi - 0.5 * s * s * phi * phi * state.t
}

/// Defaultable bond volatility Sigma_tT: the difference of the T- and
/// t-conditioned posterior means of the factor, computed in factor
/// parameterization.
pub fn bond_volatility(
    model: &InfoModel,
    state: &InformationState,
    maturity: f64,
) -> Result<f64, ModelError> {
    if !state.survived {
        return Err(ModelError::PostDefaultQuery);
    }
    if state.t > maturity {
        return Err(ModelError::InvalidState(format!(
            "bond volatility requires t <= T, got t={}, T={maturity}",
            state.t
        )));
    }
    let m_t = restricted_factor_mean(model, state, state.t)?;
    let m_cap = restricted_factor_mean(model, state, maturity)?;
    Ok(m_cap - m_t)
}

/// E[1{f(X)>u} X | F_t] / E[1{f(X)>u} | F_t] via x-integrals against the
/// posterior kernel.
fn restricted_factor_mean(
    model: &InfoModel,
    state: &InformationState,
    u: f64,
) -> Result<f64, ModelError> {
    use crate::model::Monotonicity;

    let (xlo, xhi) = crate::model::factor_truncation(model);
    let boundary = model.map().phi(u);
    // {f(x) > u} is x > phi(u) for increasing f, x < phi(u) otherwise.
    let (a, b) = match model.map().direction() {
        Monotonicity::Increasing => (boundary.max(xlo), xhi),
        Monotonicity::Decreasing => (xlo, boundary.min(xhi)),
    };
    if !(a < b) {
        return Err(ModelError::DegeneratePosterior);
    }
    let s = model.sigma();
    let log_kernel =
        |x: f64| crate::model::ln_factor_prior(model, x) + s * x * state.xi - 0.5 * s * s * x * x * state.t;

    let n = 257usize;
    let h = (b - a) / (n - 1) as f64;
    let mut shift = f64::NEG_INFINITY;
    for i in 0..n {
        let w = log_kernel(a + i as f64 * h);
        if w > shift {
            shift = w;
        }
    }
    if shift == f64::NEG_INFINITY {
        return Err(ModelError::DegeneratePosterior);
    }
    let den = integrate(|x| (log_kernel(x) - shift).exp(), a, b, model.tolerances())?;
    if den <= 0.0 {
        return Err(ModelError::DegeneratePosterior);
    }
    let num = integrate(|x| x * (log_kernel(x) - shift).exp(), a, b, model.tolerances())?;
    Ok(num / den)
}

/// Conditional density restricted check used by tests: integral of rho_t
/// over {x : f(x) > u} equals posterior survival.
pub fn posterior_survival_by_density(
    model: &InfoModel,
    state: &InformationState,
    u: f64,
) -> Result<f64, ModelError> {
    use crate::model::Monotonicity;

    let (xlo, xhi) = crate::model::factor_truncation(model);
    let boundary = model.map().phi(u);
    let (a, b) = match model.map().direction() {
        Monotonicity::Increasing => (boundary.max(xlo), xhi),
        Monotonicity::Decreasing => (xlo, boundary.min(xhi)),
    };
    if !(a < b) {
        return Ok(0.0);
    }
    Ok(integrate(
        |x| conditional_density(model, state, x).unwrap_or(0.0),
        a,
        b,
        model.tolerances(),
    )?)
}
