//! Monte Carlo engine: sample the default time from its a priori law, build
//! the information process from an exact Brownian path, and evaluate bond
//! price, hazard, and innovation paths on a time grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bond::BondSpec;
use crate::model::{
    conditional_mean_factor, InfoModel, ModelError, PosteriorKernel, TermStructure,
};
use crate::numerics::{standard_normal, stream_rng, uniform_open01, Seed};

/// Uniform time grid 0 = t_0 < ... < t_n = t_max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub n_steps: usize,
}

impl GridSpec {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self, ModelError> {
        if !(t_max > 0.0 && t_max.is_finite()) || n_steps == 0 {
            return Err(ModelError::InvalidState(
                "grid requires t_max > 0 and n_steps >= 1".into(),
            ));
        }
        Ok(GridSpec { t_max, n_steps })
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps)
            .map(|i| self.t_max * i as f64 / self.n_steps as f64)
            .collect()
    }
}

/// One simulated path. Vectors are indexed by grid point; hazard is NaN
/// from the first grid point at or beyond the default time.
#[derive(Debug, Clone)]
pub struct PathRecord {
    /// Drawn market factor X = phi(tau).
    pub x: f64,
    /// Exact default time (retained even when it falls between grid points).
    pub tau: f64,
    pub xi: Vec<f64>,
    pub bond_price: Vec<f64>,
    pub hazard: Vec<f64>,
    /// Innovation process W, constant after default.
    pub innovation: Vec<f64>,
}

impl PathRecord {
    pub fn survived(&self, t: f64) -> bool {
        self.tau > t
    }
}

/// Seeded ensemble of simulated paths.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    pub grid: GridSpec,
    pub seed: Seed,
    pub paths: Vec<PathRecord>,
}

/// Simulate `n_paths` paths of the information process and the bond price.
///
/// The Brownian path is built from exact Normal(0, dt) increments, so the
/// law of xi_t conditional on X is Normal(sigma t X, t) with no
/// discretization error. Default is recorded at the first grid point at or
/// beyond tau; the exact tau is retained in the path record. Paths draw from
/// independent substreams derived from (seed, path index), so the path count
/// can grow without reshuffling earlier paths.
pub fn simulate_paths(
    model: &InfoModel,
    curve: &TermStructure,
    spec: &BondSpec,
    grid: &GridSpec,
    n_paths: usize,
    seed: Seed,
) -> Result<PathEnsemble, ModelError> {
    if grid.t_max > spec.maturity {
        return Err(ModelError::InvalidState(format!(
            "grid horizon {} exceeds bond maturity {}",
            grid.t_max, spec.maturity
        )));
    }
    if n_paths == 0 {
        return Err(ModelError::InvalidState("n_paths must be >= 1".into()));
    }
    GridSpec::new(grid.t_max, grid.n_steps)?;

    let times = grid.times();
    let dt = grid.dt();
    let sqrt_dt = dt.sqrt();
    let sigma = model.sigma();

    // One frozen kernel per grid time; shared read-only across paths.
    let kernels: Vec<PosteriorKernel> = times
        .iter()
        .map(|&t| PosteriorKernel::new(model, t, Some(spec.maturity)))
        .collect::<Result<_, _>>()?;
    let discounts: Vec<f64> = times
        .iter()
        .map(|&t| curve.forward_discount(t, spec.maturity))
        .collect();

    let paths: Vec<Result<PathRecord, ModelError>> = (0..n_paths)
        .into_par_iter()
        .map(|idx| {
            simulate_one(
                model, spec, &times, dt, sqrt_dt, sigma, &kernels, &discounts,
                seed.for_path(idx as u64),
            )
            .map_err(|e| {
                ModelError::InvalidState(format!("path {idx} failed: {e}"))
            })
        })
        .collect();

    let mut out = Vec::with_capacity(n_paths);
    for p in paths {
        out.push(p?);
    }
    Ok(PathEnsemble {
        grid: *grid,
        seed,
        paths: out,
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate_one(
    model: &InfoModel,
    spec: &BondSpec,
    times: &[f64],
    dt: f64,
    sqrt_dt: f64,
    sigma: f64,
    kernels: &[PosteriorKernel],
    discounts: &[f64],
    seed: Seed,
) -> Result<PathRecord, ModelError> {
    let mut rng = stream_rng(seed);

    // Fixed stream layout: one u64 for tau, then one per Brownian increment.
    let tau = model.prior().quantile(uniform_open01(&mut rng));
    let x = model.map().phi(tau);

    let n = times.len();
    let mut xi = Vec::with_capacity(n);
    let mut brownian = 0.0f64;
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            brownian += sqrt_dt * standard_normal(&mut rng);
        }
        xi.push(sigma * t * x + brownian);
    }

    let mut bond = Vec::with_capacity(n);
    let mut hazard = Vec::with_capacity(n);
    let mut mean_factor = vec![0.0f64; n];
    for i in 0..n {
        if tau > times[i] {
            let ev = kernels[i].eval(xi[i]);
            if !(ev.total > 0.0) {
                return Err(ModelError::DegeneratePosterior);
            }
            bond.push(spec.principal * discounts[i] * ev.survival_ratio());
            hazard.push(kernels[i].hazard(xi[i], &ev));
            mean_factor[i] = ev.mean_factor();
        } else {
            bond.push(0.0);
            hazard.push(f64::NAN);
        }
    }

    // W_{i+1} = W_i + 1{tau > t_i} (dxi_i - sigma E[X | G_{t_i}] dt).
    let mut w = Vec::with_capacity(n);
    w.push(0.0);
    for i in 0..n - 1 {
        let incr = if tau > times[i] {
            (xi[i + 1] - xi[i]) - sigma * mean_factor[i] * dt
        } else {
            0.0
        };
        w.push(w[i] + incr);
    }

    Ok(PathRecord {
        x,
        tau,
        xi,
        bond_price: bond,
        hazard,
        innovation: w,
    })
}

/// Recompute the innovation path of one simulated path through the adaptive
/// filter (independent of the frozen-kernel fast path used during
/// simulation).
pub fn innovation_path(
    model: &InfoModel,
    ensemble: &PathEnsemble,
    path_index: usize,
) -> Result<Vec<f64>, ModelError> {
    let path = ensemble
        .paths
        .get(path_index)
        .ok_or_else(|| ModelError::InvalidState(format!("no path {path_index}")))?;
    let times = ensemble.grid.times();
    let dt = ensemble.grid.dt();
    let sigma = model.sigma();

    let mut w = Vec::with_capacity(times.len());
    w.push(0.0);
    for i in 0..times.len() - 1 {
        let incr = if path.tau > times[i] {
            let m = conditional_mean_factor(model, times[i], path.xi[i], times[i])?;
            (path.xi[i + 1] - path.xi[i]) - sigma * m * dt
        } else {
            0.0
        };
        w.push(w[i] + incr);
    }
    Ok(w)
}

impl PathEnsemble {
    /// One row per (path, grid time): path, t, xi, survived, bond_price,
    /// hazard, W. Hazard is empty after default.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["path", "t", "xi", "survived", "bond_price", "hazard", "W"])?;
        let times = self.grid.times();
        for (p, path) in self.paths.iter().enumerate() {
            for (i, &t) in times.iter().enumerate() {
                let survived = path.tau > t;
                let hazard = if survived {
                    format!("{}", path.hazard[i])
                } else {
                    String::new()
                };
                wtr.write_record([
                    p.to_string(),
                    format!("{t}"),
                    format!("{}", path.xi[i]),
                    (survived as u8).to_string(),
                    format!("{}", path.bond_price[i]),
                    hazard,
                    format!("{}", path.innovation[i]),
                ])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    /// Mean and standard error of the bond price across paths at grid index i.
    pub fn bond_price_stats(&self, i: usize) -> (f64, f64) {
        let n = self.paths.len() as f64;
        let mean = self.paths.iter().map(|p| p.bond_price[i]).sum::<f64>() / n;
        let var = self
            .paths
            .iter()
            .map(|p| (p.bond_price[i] - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (mean, (var / n).sqrt())
    }
}
