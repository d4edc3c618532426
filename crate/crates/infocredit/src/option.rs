//! European calls on defaultable discount bonds: critical-value solving,
//! the closed-form price, a direct-quadrature oracle, Arrow-Debreu prices,
//! and implied flow-rate calibration.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{
    f_functional, InfoModel, InformationState, ModelError, Monotonicity, PosteriorKernel,
    TermStructure,
};
use crate::numerics::{find_root, integrate, normal_cdf, NumericsError};

/// A European call on a defaultable zero-coupon bond.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OptionSpec {
    /// Strike K.
    pub strike: f64,
    /// Option maturity t.
    pub option_maturity: f64,
    /// Maturity T of the underlying bond.
    pub bond_maturity: f64,
}

impl OptionSpec {
    pub fn new(strike: f64, option_maturity: f64, bond_maturity: f64) -> Result<Self, OptionError> {
        if !(option_maturity > 0.0 && option_maturity < bond_maturity) {
            return Err(OptionError::InvalidSpec(format!(
                "require 0 < t < T, got t={option_maturity}, T={bond_maturity}"
            )));
        }
        if !strike.is_finite() {
            return Err(OptionError::InvalidSpec("strike must be finite".into()));
        }
        Ok(OptionSpec {
            strike,
            option_maturity,
            bond_maturity,
        })
    }
}

#[derive(Debug, Error)]
pub enum OptionError {
    #[error("invalid option spec: {0}")]
    InvalidSpec(String),

    #[error("strike at or above the riskless forward price: the option is never in the money")]
    InTheMoneyNever,

    #[error("nonpositive strike: the option is always exercised (no interior critical value)")]
    AlwaysInTheMoney,

    #[error("critical-value bracket expansion failed (width limit reached without sign change)")]
    BracketExpansionFailed,

    #[error("call price is not monotone in sigma on the calibration grid")]
    NonMonotonePrice,

    #[error("observed price {observed} outside attainable range [{lo}, {hi}]")]
    PriceOutOfRange { observed: f64, lo: f64, hi: f64 },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Time-t bond value as a function of the information level y:
/// B(t, y) = P_tT F_tT(y) / F_tt(y). Lies in (0, P_tT).
pub fn bond_value_function(
    model: &InfoModel,
    curve: &TermStructure,
    t: f64,
    bond_maturity: f64,
    y: f64,
) -> Result<f64, OptionError> {
    if !(t < bond_maturity) {
        return Err(OptionError::InvalidSpec(format!(
            "bond value function requires t < T, got t={t}, T={bond_maturity}"
        )));
    }
    let state = InformationState::new(t, y, true)?;
    let den = f_functional(model, &state, t)?;
    if den.mantissa <= 0.0 {
        return Err(ModelError::DegeneratePosterior.into());
    }
    let num = f_functional(model, &state, bond_maturity)?;
    let ratio = (num.ln() - den.ln()).exp().clamp(0.0, 1.0);
    Ok(curve.forward_discount(t, bond_maturity) * ratio)
}

/// Joint density rho(u, y) of the default time tau and the information
/// value xi_t.
pub fn joint_density(model: &InfoModel, t: f64, u: f64, y: f64) -> Result<f64, OptionError> {
    if !(t > 0.0) {
        return Err(OptionError::InvalidSpec("joint density requires t > 0".into()));
    }
    let p = model.prior().density(u);
    if p == 0.0 {
        return Ok(0.0);
    }
    let s = model.sigma();
    let phi = model.map().phi(u);
    Ok((2.0 * PI * t).sqrt().recip()
        * p
        * (-0.5 * y * y / t).exp()
        * (s * phi * y - 0.5 * s * s * phi * phi * t).exp())
}

/// Price density A_0(u, y) of the defaultable Arrow-Debreu security paying
/// on survival past u jointly with xi_t near y.
pub fn arrow_debreu(
    model: &InfoModel,
    curve: &TermStructure,
    t: f64,
    u: f64,
    y: f64,
) -> Result<f64, OptionError> {
    if !(t > 0.0) {
        return Err(OptionError::InvalidSpec("Arrow-Debreu price requires t > 0".into()));
    }
    let state = InformationState::new(t, y, true)?;
    let f = f_functional(model, &state, u.max(0.0))?;
    let log_gauss = -0.5 * y * y / t - 0.5 * (2.0 * PI * t).ln();
    Ok(curve.discount(t) * (log_gauss + f.ln()).exp())
}

/// Critical information level at which B(t, y) crosses the strike: y* for
/// decreasing phi (in the money for y < y*), y-dagger for increasing phi
/// (in the money for y > y-dagger).
pub fn critical_value(
    model: &InfoModel,
    curve: &TermStructure,
    spec: &OptionSpec,
) -> Result<f64, OptionError> {
    let t = spec.option_maturity;
    let p_tt = curve.forward_discount(t, spec.bond_maturity);
    if spec.strike >= p_tt {
        return Err(OptionError::InTheMoneyNever);
    }
    if spec.strike <= 0.0 {
        return Err(OptionError::AlwaysInTheMoney);
    }

    let g = |y: f64| -> Result<f64, OptionError> {
        Ok(bond_value_function(model, curve, t, spec.bond_maturity, y)? - spec.strike)
    };

    // B(t, y) is monotone in y for monotone phi, so a sign change exists for
    // interior strikes; expand the bracket until it is found.
    let mut half_width = 10.0 * t.sqrt() * (1.0 + model.sigma());
    loop {
        let (lo, hi) = (-half_width, half_width);
        if g(lo)?.signum() != g(hi)?.signum() {
            let tol = *model.tolerances();
            return Ok(find_root(
                |y| g(y).unwrap_or(f64::NAN),
                lo,
                hi,
                &tol,
            )?);
        }
        half_width *= 2.0;
        if 2.0 * half_width > 1e6 {
            return Err(OptionError::BracketExpansionFailed);
        }
    }
}

/// Closed-form call price via the critical value and the normal CDF.
pub fn call_price(
    model: &InfoModel,
    curve: &TermStructure,
    spec: &OptionSpec,
) -> Result<f64, OptionError> {
    let t = spec.option_maturity;
    let cap = spec.bond_maturity;
    let k = spec.strike;
    let p_0t = curve.discount(t);
    let p_0cap = curve.discount(cap);
    let p_tt = p_0cap / p_0t;

    // Riskless and degenerate strike limits are analytic.
    if k >= p_tt {
        return Ok(0.0);
    }
    let bond_now = p_0cap * model.prior().survival(cap);
    if k <= 0.0 {
        return Ok(bond_now - k * p_0t);
    }
    if model.sigma() == 0.0 {
        // Deterministic B(t, y): the payoff is a constant on survival.
        let q_t = model.prior().survival(t);
        let q_cap = model.prior().survival(cap);
        let intrinsic = (p_tt * q_cap / q_t - k).max(0.0);
        return Ok(p_0t * q_t * intrinsic);
    }

    let y_star = critical_value(model, curve, spec)?;
    let s = model.sigma();
    let sqrt_t = t.sqrt();
    let weight = |u: f64| -> f64 {
        let arg = match model.map().direction() {
            Monotonicity::Decreasing => (y_star - s * model.map().phi(u) * t) / sqrt_t,
            Monotonicity::Increasing => (s * model.map().phi(u) * t - y_star) / sqrt_t,
        };
        model.prior().density(u) * normal_cdf(arg)
    };

    let (lo, hi) = model.prior().truncation();
    let tol = model.tolerances();
    let tail_term = integrate(&weight, cap.max(lo), hi, tol)?;
    let full_term = integrate(&weight, t.max(lo), hi, tol)?;
    Ok((p_0cap * tail_term - p_0t * k * full_term).max(0.0))
}

/// Direct-quadrature oracle: nested y- and u-integration of the discounted
/// positive part, independent of the critical-value code path.
pub fn call_price_oracle(
    model: &InfoModel,
    curve: &TermStructure,
    spec: &OptionSpec,
) -> Result<f64, OptionError> {
    let t = spec.option_maturity;
    let cap = spec.bond_maturity;
    let k = spec.strike;
    let p_0t = curve.discount(t);
    let p_tt = curve.forward_discount(t, cap);

    let kernel = PosteriorKernel::new(model, t, Some(cap))?;
    let integrand = |y: f64| {
        let ev = kernel.eval(y);
        let bracket = p_tt * ev.tail - k * ev.total;
        if bracket <= 0.0 {
            0.0
        } else {
            (-0.5 * y * y / t + ev.shift).exp() * bracket
        }
    };

    // For each default time v the y-integrand is a Gaussian centered at
    // sigma phi(v) t, so the window must span every such center plus a
    // 12 sqrt(t) envelope (leaving < 1e-30 of each Gaussian outside).
    let (ulo, uhi) = model.prior().truncation();
    let (phi_a, phi_b) = (model.map().phi(ulo.max(t)), model.map().phi(uhi));
    let s = model.sigma();
    let (c_lo, c_hi) = (
        (s * phi_a * t).min(s * phi_b * t),
        (s * phi_a * t).max(s * phi_b * t),
    );
    let pad = 12.0 * t.sqrt();
    let v = integrate(integrand, c_lo.min(0.0) - pad, c_hi.max(0.0) + pad, model.tolerances())?;
    Ok(p_0t / (2.0 * PI * t).sqrt() * v)
}

/// Back out the information flow rate from an observed call price.
///
/// The price is verified to be monotone in sigma on a coarse grid before
/// inversion; the observed price must lie in the attainable range.
pub fn implied_sigma(
    model: &InfoModel,
    curve: &TermStructure,
    spec: &OptionSpec,
    observed_price: f64,
    sigma_max: f64,
) -> Result<f64, OptionError> {
    if !(sigma_max > 0.0) {
        return Err(OptionError::InvalidSpec("sigma_max must be positive".into()));
    }
    let price_at = |sigma: f64| -> Result<f64, OptionError> {
        call_price(&model.with_sigma(sigma)?, curve, spec)
    };

    const GRID: usize = 9;
    let sigmas: Vec<f64> = (0..=GRID).map(|i| sigma_max * i as f64 / GRID as f64).collect();
    let mut prices = Vec::with_capacity(sigmas.len());
    for &s in &sigmas {
        prices.push(price_at(s)?);
    }
    let increasing = prices[GRID] >= prices[0];
    for w in prices.windows(2) {
        let d = w[1] - w[0];
        if (increasing && d < -1e-12) || (!increasing && d > 1e-12) {
            return Err(OptionError::NonMonotonePrice);
        }
    }
    let (lo_p, hi_p) = (
        prices.iter().cloned().fold(f64::INFINITY, f64::min),
        prices.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    if observed_price < lo_p - 1e-12 || observed_price > hi_p + 1e-12 {
        return Err(OptionError::PriceOutOfRange {
            observed: observed_price,
            lo: lo_p,
            hi: hi_p,
        });
    }

    // Locate the grid segment bracketing the observed price.
    let mut bracket = None;
    for i in 0..GRID {
        let (a, b) = (prices[i], prices[i + 1]);
        if (observed_price - a) * (observed_price - b) <= 0.0 {
            bracket = Some((sigmas[i].max(1e-12), sigmas[i + 1]));
            break;
        }
    }
    let (lo, hi) = bracket.ok_or(OptionError::PriceOutOfRange {
        observed: observed_price,
        lo: lo_p,
        hi: hi_p,
    })?;

    let tol = *model.tolerances();
    Ok(find_root(
        |s| price_at(s).map(|p| p - observed_price).unwrap_or(f64::NAN),
        lo,
        hi,
        &tol,
    )?)
}
