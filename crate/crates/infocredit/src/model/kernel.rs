//! Frozen-node posterior kernel for repeated evaluation at a fixed time.
//!
//! Monte Carlo paths and option oracles evaluate the posterior integrals at
//! the same time t for many values of xi. The node layout is frozen once
//! (adaptive subdivision of the prior-weighted integrand, 15-point
//! Gauss-Legendre nodes per panel) and each evaluation is a single
//! max-shifted pass over the nodes.

use crate::numerics::quad::{adaptive_panels, gl15_nodes};

use super::{InfoModel, ModelError};

#[derive(Debug, Clone, Copy)]
pub struct KernelEval {
    /// Exponent shift applied to all sums.
    pub shift: f64,
    /// Shifted integral over (t, inf): the F_{tt} mantissa.
    pub total: f64,
    /// Shifted integral over (cutoff, inf): the F_{tT} mantissa.
    pub tail: f64,
    /// phi-weighted shifted integral over (t, inf); mean_factor() divides.
    pub weighted_factor: f64,
}

impl KernelEval {
    /// F_{tT} / F_{tt}.
    pub fn survival_ratio(&self) -> f64 {
        (self.tail / self.total).clamp(0.0, 1.0)
    }

    /// Survival-restricted posterior mean of the factor, E[X | xi_t, tau > t].
    pub fn mean_factor(&self) -> f64 {
        self.weighted_factor / self.total
    }
}

#[derive(Debug, Clone)]
pub struct PosteriorKernel {
    t: f64,
    sigma: f64,
    /// Per node: ln p(v) + ln w - 1/2 sigma^2 phi(v)^2 t.
    base: Vec<f64>,
    phi: Vec<f64>,
    /// First node index at or beyond the tail cutoff.
    cutoff_idx: usize,
    /// ln p(t) - 1/2 sigma^2 phi(t)^2 t for hazard evaluation.
    hazard_base: f64,
    phi_t: f64,
}

const PANEL_REL_TOL: f64 = 1e-11;

impl PosteriorKernel {
    /// Kernel for time `t`. `tail_cutoff` (typically the bond maturity)
    /// becomes an exact panel breakpoint so tail sums carry no straddling
    /// error.
    pub fn new(model: &InfoModel, t: f64, tail_cutoff: Option<f64>) -> Result<Self, ModelError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(ModelError::InvalidState(format!("require t >= 0, got {t}")));
        }
        let (lo, hi) = model.prior().truncation();
        let lower = t.max(lo);
        if lower >= hi {
            return Err(ModelError::DegeneratePosterior);
        }
        let sigma = model.sigma();
        let weight0 = |v: f64| {
            let phi = model.map().phi(v);
            model.prior().density(v) * (-0.5 * sigma * sigma * phi * phi * t).exp()
        };

        let mut cuts = adaptive_panels(weight0, lower, hi, PANEL_REL_TOL);
        let cutoff = tail_cutoff.map(|c| c.clamp(lower, hi));
        if let Some(c) = cutoff {
            if c > lower && c < hi {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut base = Vec::new();
        let mut phi = Vec::new();
        let mut nodes_v = Vec::new();
        for pair in cuts.windows(2) {
            if pair[1] <= pair[0] {
                continue;
            }
            for (v, w) in gl15_nodes(pair[0], pair[1]) {
                let ph = model.map().phi(v);
                base.push(model.prior().ln_density(v) + w.ln() - 0.5 * sigma * sigma * ph * ph * t);
                phi.push(ph);
                nodes_v.push(v);
            }
        }
        let cutoff_idx = match cutoff {
            Some(c) => nodes_v.partition_point(|&v| v < c),
            None => 0,
        };

        let phi_t = model.map().phi(t);
        let hazard_base = model.prior().ln_density(t) - 0.5 * sigma * sigma * phi_t * phi_t * t;

        Ok(PosteriorKernel {
            t,
            sigma,
            base,
            phi,
            cutoff_idx,
            hazard_base,
            phi_t,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, xi: f64) -> KernelEval {
        let s = self.sigma;
        let mut shift = f64::NEG_INFINITY;
        for (b, p) in self.base.iter().zip(&self.phi) {
            let e = b + s * p * xi;
            if e > shift {
                shift = e;
            }
        }
        let mut total = 0.0;
        let mut tail = 0.0;
        let mut weighted = 0.0;
        for (j, (b, p)) in self.base.iter().zip(&self.phi).enumerate() {
            let a = (b + s * p * xi - shift).exp();
            total += a;
            weighted += a * p;
            if j >= self.cutoff_idx {
                tail += a;
            }
        }
        KernelEval {
            shift,
            total,
            tail,
            weighted_factor: weighted,
        }
    }

    /// Hazard rate h_t at this kernel's time, given an evaluation at the
    /// same xi.
    pub fn hazard(&self, xi: f64, eval: &KernelEval) -> f64 {
        (self.hazard_base + self.sigma * self.phi_t * xi - eval.shift).exp() / eval.total
    }

    /// ln F_{tt} implied by an evaluation.
    pub fn ln_total(&self, eval: &KernelEval) -> f64 {
        eval.total.ln() + eval.shift
    }

    /// ln F_{tT} implied by an evaluation.
    pub fn ln_tail(&self, eval: &KernelEval) -> f64 {
        eval.tail.ln() + eval.shift
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Dist;
    use crate::model::filter::{conditional_mean_factor, f_functional};
    use crate::model::map::{DefaultMap, PhiSpec};
    use crate::model::prior::PriorDensity;
    use crate::model::InformationState;
    use crate::numerics::Tolerances;

    fn reference_model(sigma: f64) -> InfoModel {
        let tol = Tolerances::default();
        let map = DefaultMap::from_spec(PhiSpec::ExpDecay { a: 0.025 }).unwrap();
        let prior = PriorDensity::for_default_time(Dist::Exponential { rate: 0.1 }, &tol).unwrap();
        InfoModel::new(sigma, prior, map, tol).unwrap()
    }

    #[test]
    fn kernel_matches_adaptive_filter() {
        let m = reference_model(0.3);
        let t = 0.75;
        let maturity = 5.0;
        let kernel = PosteriorKernel::new(&m, t, Some(maturity)).unwrap();
        for &xi in &[-2.0, -0.5, 0.0, 0.4, 1.5, 6.0] {
            let ev = kernel.eval(xi);
            let state = InformationState::new(t, xi, true).unwrap();
            let f_tt = f_functional(&m, &state, t).unwrap();
            let f_tcap = f_functional(&m, &state, maturity).unwrap();
            assert!(
                (kernel.ln_total(&ev) - f_tt.ln()).abs() < 1e-9,
                "xi = {xi}: ln F_tt"
            );
            assert!(
                (kernel.ln_tail(&ev) - f_tcap.ln()).abs() < 1e-9,
                "xi = {xi}: ln F_tT"
            );
            let mean = conditional_mean_factor(&m, t, xi, t).unwrap();
            assert!((ev.mean_factor() - mean).abs() < 1e-9, "xi = {xi}: mean factor");
        }
    }

    #[test]
    fn kernel_hazard_matches_direct_ratio() {
        let m = reference_model(0.25);
        let t = 1.2;
        let kernel = PosteriorKernel::new(&m, t, Some(5.0)).unwrap();
        for &xi in &[-1.0, 0.0, 0.8] {
            let ev = kernel.eval(xi);
            let state = InformationState::new(t, xi, true).unwrap();
            let den = f_functional(&m, &state, t).unwrap();
            let phi = m.map().phi(t);
            let num = m.prior().ln_density(t) + 0.25 * phi * xi - 0.5 * 0.0625 * phi * phi * t;
            let direct = (num - den.ln()).exp();
            assert!(
                (kernel.hazard(xi, &ev) - direct).abs() < 1e-10 * direct.max(1.0),
                "xi = {xi}"
            );
        }
    }

    #[test]
    fn survival_ratio_is_one_at_cutoff_equal_to_t() {
        let m = reference_model(0.3);
        let kernel = PosteriorKernel::new(&m, 5.0, Some(5.0)).unwrap();
        let ev = kernel.eval(0.3);
        assert_eq!(ev.survival_ratio(), 1.0);
    }

    #[test]
    fn degenerate_beyond_truncation() {
        let m = reference_model(0.3);
        let (_, hi) = m.prior().truncation();
        assert!(PosteriorKernel::new(&m, hi + 1.0, None).is_err());
    }
}
