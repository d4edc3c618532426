//! Multi-name extension: correlated default times through shared market
//! factors, and Monte Carlo valuation of kth-to-default payoffs at time 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::Dist;
use crate::model::{DefaultMap, PhiSpec, TermStructure};
use crate::numerics::{stream_rng, uniform_open01, Seed};

#[derive(Debug, Error)]
pub enum PortfolioError {
    #[error("invalid portfolio configuration: {0}")]
    Invalid(String),

    #[error("name {name} produced a nonpositive or non-finite default time {value}")]
    BadDefaultTime { name: usize, value: f64 },
}

/// One independent market factor with its prior law and information flow
/// rate. The flow rate plays no role in time-0 pricing but is part of the
/// factor description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub prior: Dist,
    #[serde(default)]
    pub sigma: f64,
}

/// The independent market factors X_1, ..., X_N.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactorSet {
    pub factors: Vec<Factor>,
}

impl FactorSet {
    pub fn validate(&self) -> Result<(), PortfolioError> {
        if self.factors.is_empty() {
            return Err(PortfolioError::Invalid("need at least one factor".into()));
        }
        for (i, f) in self.factors.iter().enumerate() {
            f.prior
                .validate()
                .map_err(|e| PortfolioError::Invalid(format!("factor {i}: {e}")))?;
            if !(f.sigma >= 0.0) {
                return Err(PortfolioError::Invalid(format!("factor {i}: sigma must be >= 0")));
            }
        }
        Ok(())
    }
}

/// Composable expression mapping the factor vector to a default time.
/// Leaves apply a monotone catalog map to one factor; combinators take
/// min/max or positive-weighted sums, which preserve positivity checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum NameExpr {
    Map { factor: usize, phi: PhiSpec },
    Min { terms: Vec<NameExpr> },
    Max { terms: Vec<NameExpr> },
    WeightedSum { terms: Vec<(f64, NameExpr)> },
}

impl NameExpr {
    fn validate(&self, n_factors: usize) -> Result<(), PortfolioError> {
        match self {
            NameExpr::Map { factor, phi } => {
                if *factor >= n_factors {
                    return Err(PortfolioError::Invalid(format!(
                        "factor index {factor} out of range (N = {n_factors})"
                    )));
                }
                DefaultMap::from_spec(*phi)
                    .map_err(|e| PortfolioError::Invalid(e.to_string()))?;
                Ok(())
            }
            NameExpr::Min { terms } | NameExpr::Max { terms } => {
                if terms.is_empty() {
                    return Err(PortfolioError::Invalid("min/max needs at least one term".into()));
                }
                terms.iter().try_for_each(|t| t.validate(n_factors))
            }
            NameExpr::WeightedSum { terms } => {
                if terms.is_empty() {
                    return Err(PortfolioError::Invalid("weighted sum needs at least one term".into()));
                }
                for (w, t) in terms {
                    if !(*w > 0.0) {
                        return Err(PortfolioError::Invalid("weights must be positive".into()));
                    }
                    t.validate(n_factors)?;
                }
                Ok(())
            }
        }
    }

    fn eval(&self, xs: &[f64]) -> f64 {
        match self {
            NameExpr::Map { factor, phi } => {
                // Catalog maps are validated at construction.
                DefaultMap::from_spec(*phi).expect("validated").f(xs[*factor])
            }
            NameExpr::Min { terms } => terms
                .iter()
                .map(|t| t.eval(xs))
                .fold(f64::INFINITY, f64::min),
            NameExpr::Max { terms } => terms
                .iter()
                .map(|t| t.eval(xs))
                .fold(f64::NEG_INFINITY, f64::max),
            NameExpr::WeightedSum { terms } => {
                terms.iter().map(|(w, t)| w * t.eval(xs)).sum()
            }
        }
    }

    fn factors_read(&self, out: &mut Vec<usize>) {
        match self {
            NameExpr::Map { factor, .. } => out.push(*factor),
            NameExpr::Min { terms } | NameExpr::Max { terms } => {
                terms.iter().for_each(|t| t.factors_read(out))
            }
            NameExpr::WeightedSum { terms } => {
                terms.iter().for_each(|(_, t)| t.factors_read(out))
            }
        }
    }
}

/// The default-time maps tau_alpha = f_alpha(X_1, ..., X_N).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NameMap {
    pub names: Vec<NameExpr>,
}

impl NameMap {
    pub fn validate(&self, factors: &FactorSet) -> Result<(), PortfolioError> {
        factors.validate()?;
        if self.names.is_empty() {
            return Err(PortfolioError::Invalid("need at least one name".into()));
        }
        self.names
            .iter()
            .try_for_each(|n| n.validate(factors.factors.len()))
    }

    /// Factor indices each name depends on.
    pub fn factor_usage(&self) -> Vec<Vec<usize>> {
        self.names
            .iter()
            .map(|n| {
                let mut v = Vec::new();
                n.factors_read(&mut v);
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }
}

/// A kth-to-default note paying K at the horizon if at least k of the n
/// names have defaulted by then.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasketSpec {
    pub k: usize,
    pub payoff: f64,
    pub horizon: f64,
}

impl BasketSpec {
    pub fn validate(&self, n_names: usize) -> Result<(), PortfolioError> {
        if self.k == 0 || self.k > n_names {
            return Err(PortfolioError::Invalid(format!(
                "order statistic index k = {} must lie in 1..={n_names}",
                self.k
            )));
        }
        if !(self.payoff > 0.0 && self.horizon > 0.0) {
            return Err(PortfolioError::Invalid("payoff and horizon must be positive".into()));
        }
        Ok(())
    }
}

/// Draw one default-time vector. Each factor consumes exactly one uniform,
/// in factor order, so the draw is deterministic under the seed.
pub fn sample_default_vector(
    factors: &FactorSet,
    names: &NameMap,
    seed: Seed,
) -> Result<Vec<f64>, PortfolioError> {
    names.validate(factors)?;
    let mut rng = stream_rng(seed);
    draw_vector(factors, names, &mut rng)
}

fn draw_vector(
    factors: &FactorSet,
    names: &NameMap,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Result<Vec<f64>, PortfolioError> {
    let xs: Vec<f64> = factors
        .factors
        .iter()
        .map(|f| f.prior.quantile(uniform_open01(rng)))
        .collect();
    let mut taus = Vec::with_capacity(names.names.len());
    for (i, expr) in names.names.iter().enumerate() {
        let tau = expr.eval(&xs);
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(PortfolioError::BadDefaultTime { name: i, value: tau });
        }
        taus.push(tau);
    }
    Ok(taus)
}

/// Monte Carlo price with attached standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceEstimate {
    pub price: f64,
    pub std_err: f64,
    pub n_paths: usize,
}

/// Time-0 price of the kth-to-default note: P_{0T} K Q(tau-bar_k <= T)
/// estimated over `n_paths` seeded draws.
pub fn kth_to_default_price(
    factors: &FactorSet,
    names: &NameMap,
    basket: &BasketSpec,
    curve: &TermStructure,
    n_paths: usize,
    seed: Seed,
) -> Result<PriceEstimate, PortfolioError> {
    names.validate(factors)?;
    basket.validate(names.names.len())?;
    if n_paths == 0 {
        return Err(PortfolioError::Invalid("n_paths must be >= 1".into()));
    }

    let hits: Vec<Result<bool, PortfolioError>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed.for_path(i as u64));
            let mut taus = draw_vector(factors, names, &mut rng)?;
            taus.sort_by(f64::total_cmp);
            Ok(taus[basket.k - 1] <= basket.horizon)
        })
        .collect();

    let mut count = 0usize;
    for h in hits {
        if h? {
            count += 1;
        }
    }
    let n = n_paths as f64;
    let frac = count as f64 / n;
    let disc = curve.discount(basket.horizon) * basket.payoff;
    let se = disc * (frac * (1.0 - frac) / n).sqrt();
    Ok(PriceEstimate {
        price: disc * frac,
        std_err: se,
        n_paths,
    })
}

/// Pairwise correlation matrix of the default indicators 1{tau_alpha <= T}.
/// Entries are None when an indicator column is degenerate (all defaults or
/// none) so the correlation is undefined.
pub fn default_correlation(
    factors: &FactorSet,
    names: &NameMap,
    horizon: f64,
    n_paths: usize,
    seed: Seed,
) -> Result<Vec<Vec<Option<f64>>>, PortfolioError> {
    names.validate(factors)?;
    let n_names = names.names.len();
    if n_names < 2 {
        return Err(PortfolioError::Invalid("correlation needs at least two names".into()));
    }
    if n_paths == 0 {
        return Err(PortfolioError::Invalid("n_paths must be >= 1".into()));
    }

    let draws: Vec<Result<Vec<bool>, PortfolioError>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed.for_path(i as u64));
            let taus = draw_vector(factors, names, &mut rng)?;
            Ok(taus.iter().map(|&t| t <= horizon).collect())
        })
        .collect();

    let mut sums = vec![0.0f64; n_names];
    let mut cross = vec![vec![0.0f64; n_names]; n_names];
    let mut n_ok = 0usize;
    for d in draws {
        let ind = d?;
        n_ok += 1;
        for a in 0..n_names {
            let ia = ind[a] as u8 as f64;
            sums[a] += ia;
            for b in a..n_names {
                cross[a][b] += ia * (ind[b] as u8 as f64);
            }
        }
    }
    let n = n_ok as f64;
    let means: Vec<f64> = sums.iter().map(|s| s / n).collect();
    let vars: Vec<f64> = means.iter().map(|m| m * (1.0 - m)).collect();

    let mut out = vec![vec![None; n_names]; n_names];
    for a in 0..n_names {
        for b in a..n_names {
            let entry = if a == b {
                Some(1.0)
            } else if vars[a] <= 0.0 || vars[b] <= 0.0 {
                None
            } else {
                let cov = cross[a][b] / n - means[a] * means[b];
                Some((cov / (vars[a] * vars[b]).sqrt()).clamp(-1.0, 1.0))
            };
            out[a][b] = entry;
            out[b][a] = entry;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_factor() -> Factor {
        Factor {
            prior: Dist::Uniform { lo: 0.0, hi: 1.0 },
            sigma: 0.0,
        }
    }

    fn exp_map(a: f64, factor: usize) -> NameExpr {
        // tau = -ln(X)/a with X uniform on (0,1) is Exponential(a).
        NameExpr::Map {
            factor,
            phi: PhiSpec::ExpDecay { a },
        }
    }

    fn flat_curve() -> TermStructure {
        TermStructure::Flat { flat_rate: 0.02 }
    }

    #[test]
    fn marginal_default_law_matches_prior() {
        let factors = FactorSet { factors: vec![uniform_factor()] };
        let names = NameMap { names: vec![exp_map(0.2, 0)] };
        let horizon = 4.0;
        let n = 40_000usize;
        let mut count = 0usize;
        for i in 0..n {
            let taus =
                sample_default_vector(&factors, &names, Seed::new(13, 0).for_path(i as u64))
                    .unwrap();
            if taus[0] <= horizon {
                count += 1;
            }
        }
        let frac = count as f64 / n as f64;
        let p = 1.0 - (-0.2f64 * horizon).exp();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((frac - p).abs() < 4.0 * se, "frac = {frac}, p = {p}");
    }

    #[test]
    fn comonotone_basket_is_independent_of_k() {
        // Three names driven by the same factor with the same map default
        // together, so every order statistic has the same law.
        let factors = FactorSet { factors: vec![uniform_factor()] };
        let names = NameMap {
            names: vec![exp_map(0.2, 0), exp_map(0.2, 0), exp_map(0.2, 0)],
        };
        let n = 5_000usize;
        let seed = Seed::new(21, 0);
        let prices: Vec<f64> = (1..=3)
            .map(|k| {
                let basket = BasketSpec { k, payoff: 1.0, horizon: 4.0 };
                kth_to_default_price(&factors, &names, &basket, &flat_curve(), n, seed)
                    .unwrap()
                    .price
            })
            .collect();
        assert_eq!(prices[0], prices[1]);
        assert_eq!(prices[1], prices[2]);
    }

    #[test]
    fn independent_first_to_default_matches_binomial_oracle() {
        let factors = FactorSet { factors: vec![uniform_factor(), uniform_factor()] };
        let names = NameMap { names: vec![exp_map(0.15, 0), exp_map(0.15, 1)] };
        let basket = BasketSpec { k: 1, payoff: 1.0, horizon: 3.0 };
        let n = 40_000usize;
        let est = kth_to_default_price(&factors, &names, &basket, &flat_curve(), n, Seed::new(4, 0))
            .unwrap();
        let p_one = 1.0 - (-0.15f64 * 3.0).exp();
        let exact = flat_curve().discount(3.0) * (1.0 - (1.0 - p_one) * (1.0 - p_one));
        assert!(
            (est.price - exact).abs() < 3.0 * est.std_err,
            "price = {}, exact = {exact}, se = {}",
            est.price,
            est.std_err
        );
    }

    #[test]
    fn correlation_separates_shared_and_independent_factors() {
        let factors = FactorSet { factors: vec![uniform_factor(), uniform_factor()] };
        let names = NameMap {
            names: vec![exp_map(0.2, 0), exp_map(0.2, 0), exp_map(0.2, 1)],
        };
        let corr =
            default_correlation(&factors, &names, 4.0, 20_000, Seed::new(8, 0)).unwrap();
        assert_eq!(corr[0][0], Some(1.0));
        // Names 0 and 1 share a factor and map: indicators coincide.
        assert!((corr[0][1].unwrap() - 1.0).abs() < 1e-12);
        // Name 2 is driven by an independent factor.
        assert!(corr[0][2].unwrap().abs() < 0.03, "{:?}", corr[0][2]);
    }

    #[test]
    fn weighted_sum_and_min_expressions_evaluate() {
        let factors = FactorSet { factors: vec![uniform_factor(), uniform_factor()] };
        let names = NameMap {
            names: vec![NameExpr::Min {
                terms: vec![
                    exp_map(0.1, 0),
                    NameExpr::WeightedSum {
                        terms: vec![(0.5, exp_map(0.2, 0)), (0.5, exp_map(0.2, 1))],
                    },
                ],
            }],
        };
        let taus = sample_default_vector(&factors, &names, Seed::new(2, 0)).unwrap();
        assert!(taus[0] > 0.0 && taus[0].is_finite());
        assert_eq!(names.factor_usage(), vec![vec![0, 1]]);
    }

    #[test]
    fn invalid_configurations_rejected() {
        let factors = FactorSet { factors: vec![uniform_factor()] };
        let names = NameMap { names: vec![exp_map(0.1, 3)] };
        assert!(names.validate(&factors).is_err());
        let names = NameMap { names: vec![exp_map(0.1, 0)] };
        let basket = BasketSpec { k: 2, payoff: 1.0, horizon: 1.0 };
        assert!(basket.validate(names.names.len()).is_err());
    }
}
