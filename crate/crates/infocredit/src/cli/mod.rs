//! Command runner behind the `infocredit` binary. Each run reads a JSON
//! config, writes `results.csv` and `run_meta.json` into the output
//! directory (atomically, via a temp file and rename), and optionally a
//! `plot.svg` of the primary series.

pub mod config;
pub mod plot;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{CommandConfig, ModelConfig, NumericsConfig, RunConfig};

use crate::bond::{self, BondSpec};
use crate::model::{conditional_density, InfoModel, InformationState};
use crate::option::{call_price, implied_sigma, OptionSpec};
use crate::portfolio::kth_to_default_price;
use crate::simulate::{simulate_paths, GridSpec};

/// Run failures, partitioned by exit code: bad configuration (2), numerical
/// or model failure (3), I/O failure (4).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn numerical<E: std::fmt::Display>(e: E) -> Self {
        CliError::Numerical(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Flags that override config fields.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub plot: bool,
    pub seed: Option<u64>,
    pub n_paths: Option<usize>,
}

/// Load a config file and check that the requested command matches its
/// command block.
pub fn load_config(path: &Path, command: &str) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let cfg = RunConfig::from_json(&text)?;
    if cfg.command.name() != command {
        return Err(CliError::Config(format!(
            "requested command '{command}' but config describes '{}'",
            cfg.command.name()
        )));
    }
    Ok(cfg)
}

/// Execute one command and write results.csv, run_meta.json, and optionally
/// plot.svg into the output directory.
pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<(), CliError> {
    let mut cfg = config.clone();
    if let Some(s) = opts.seed {
        cfg.numerics.seed = s;
    }
    if let Some(n) = opts.n_paths {
        cfg.numerics.n_paths = n;
    }
    cfg.numerics
        .tolerances
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;

    fs::create_dir_all(&opts.out_dir)?;
    let model = cfg.build_model().map_err(reclassify_build_error)?;
    let curve = &cfg.model.curve;

    let output = match &cfg.command {
        CommandConfig::Density { t, xi, points } => run_density(&model, *t, *xi, *points)?,
        CommandConfig::Bond {
            t,
            xi,
            maturity,
            principal,
            recovery,
            survived,
        } => run_bond(&model, curve, *t, *xi, *maturity, *principal, *recovery, *survived)?,
        CommandConfig::Hazard { t, xi, u_max, points } => {
            run_hazard(&model, *t, *xi, *u_max, *points)?
        }
        CommandConfig::Simulate {
            maturity,
            grid,
            principal,
        } => run_simulate(&model, curve, &cfg, *maturity, grid, *principal)?,
        CommandConfig::Option {
            strikes,
            option_maturities,
            bond_maturity,
        } => run_option(&model, curve, strikes, option_maturities, *bond_maturity)?,
        CommandConfig::ImpliedSigma {
            strike,
            option_maturity,
            bond_maturity,
            observed_price,
            sigma_max,
        } => run_implied_sigma(
            &model,
            curve,
            *strike,
            *option_maturity,
            *bond_maturity,
            *observed_price,
            *sigma_max,
        )?,
        CommandConfig::Basket {
            factors,
            names,
            basket,
        } => {
            let est = kth_to_default_price(
                factors,
                names,
                basket,
                curve,
                cfg.numerics.n_paths,
                cfg.numerics.seed(),
            )
            .map_err(CliError::numerical)?;
            CommandOutput {
                csv: format!(
                    "price,std_err,n_paths\n{},{},{}\n",
                    est.price, est.std_err, est.n_paths
                ),
                plot: None,
            }
        }
    };

    write_atomic(&opts.out_dir.join("results.csv"), output.csv.as_bytes())?;

    let mut meta_cfg = cfg.clone();
    meta_cfg.meta = Some(serde_json::json!({
        "command": cfg.command.name(),
        "package": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
    }));
    let meta = serde_json::to_string_pretty(&meta_cfg)
        .map_err(|e| CliError::Io(e.to_string()))?;
    write_atomic(&opts.out_dir.join("run_meta.json"), meta.as_bytes())?;

    if opts.plot {
        if let Some(svg) = output.plot {
            write_atomic(&opts.out_dir.join("plot.svg"), svg.as_bytes())?;
        }
    }
    Ok(())
}

/// Write a machine-readable error record into the output directory. Best
/// effort: failures to record the error are ignored.
pub fn write_error_record(out_dir: &Path, err: &CliError) {
    let record = serde_json::json!({
        "error": err.kind(),
        "message": err.to_string(),
        "exit_code": err.exit_code(),
    });
    if fs::create_dir_all(out_dir).is_ok() {
        let _ = write_atomic(
            &out_dir.join("error.json"),
            record.to_string().as_bytes(),
        );
    }
}

struct CommandOutput {
    csv: String,
    plot: Option<String>,
}

/// Model construction failures come from config values, so they map to the
/// config exit code rather than the numerical one.
fn reclassify_build_error(e: CliError) -> CliError {
    match e {
        CliError::Numerical(msg) => CliError::Config(msg),
        other => other,
    }
}

fn run_density(model: &InfoModel, t: f64, xi: f64, points: usize) -> Result<CommandOutput, CliError> {
    if points < 2 {
        return Err(CliError::Config("density needs at least 2 grid points".into()));
    }
    let state = InformationState::new(t, xi, true).map_err(CliError::numerical)?;
    let (lo, hi) = {
        let (a, b) = model.prior().truncation();
        (model.map().phi(a), model.map().phi(b))
    };
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let mut csv = String::from("x,density\n");
    let mut pts = Vec::with_capacity(points);
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let d = conditional_density(model, &state, x).map_err(CliError::numerical)?;
        csv.push_str(&format!("{x},{d}\n"));
        pts.push((x, d));
    }
    let svg = plot::line_chart(
        &[plot::Series { points: &pts }],
        &format!("Conditional factor density at t = {t}, xi = {xi}"),
        "x",
        "density",
    );
    Ok(CommandOutput { csv, plot: Some(svg) })
}

#[allow(clippy::too_many_arguments)]
fn run_bond(
    model: &InfoModel,
    curve: &crate::model::TermStructure,
    t: f64,
    xi: f64,
    maturity: f64,
    principal: f64,
    recovery: f64,
    survived: bool,
) -> Result<CommandOutput, CliError> {
    let spec = BondSpec::new(maturity, principal, recovery).map_err(|e| CliError::Config(e.to_string()))?;
    let state = InformationState::new(t, xi, survived).map_err(|e| CliError::Config(e.to_string()))?;
    let price = bond::recovery_bond_price(model, curve, &state, &spec).map_err(CliError::numerical)?;
    let hazard = if survived {
        format!("{}", bond::hazard_rate(model, &state).map_err(CliError::numerical)?)
    } else {
        String::new()
    };
    let csv = format!(
        "t,xi,maturity,survived,price,hazard\n{t},{xi},{maturity},{},{price},{hazard}\n",
        survived as u8
    );
    Ok(CommandOutput { csv, plot: None })
}

fn run_hazard(
    model: &InfoModel,
    t: f64,
    xi: f64,
    u_max: f64,
    points: usize,
) -> Result<CommandOutput, CliError> {
    if points < 2 || !(u_max > t) {
        return Err(CliError::Config(
            "hazard needs at least 2 grid points and u_max > t".into(),
        ));
    }
    let state = InformationState::new(t, xi, true).map_err(CliError::numerical)?;
    let mut csv = String::from("u,forward_hazard\n");
    let mut pts = Vec::with_capacity(points);
    for i in 0..points {
        let u = t + (u_max - t) * i as f64 / (points - 1) as f64;
        let h = bond::forward_hazard(model, &state, u).map_err(CliError::numerical)?;
        csv.push_str(&format!("{u},{h}\n"));
        pts.push((u, h));
    }
    let svg = plot::line_chart(
        &[plot::Series { points: &pts }],
        &format!("Forward hazard term structure at t = {t}, xi = {xi}"),
        "u",
        "h_tu",
    );
    Ok(CommandOutput { csv, plot: Some(svg) })
}

fn run_simulate(
    model: &InfoModel,
    curve: &crate::model::TermStructure,
    cfg: &RunConfig,
    maturity: f64,
    grid: &GridSpec,
    principal: f64,
) -> Result<CommandOutput, CliError> {
    let spec = BondSpec::new(maturity, principal, 0.0).map_err(|e| CliError::Config(e.to_string()))?;
    let ensemble = simulate_paths(
        model,
        curve,
        &spec,
        grid,
        cfg.numerics.n_paths,
        cfg.numerics.seed(),
    )
    .map_err(CliError::numerical)?;

    let mut buf = Vec::new();
    ensemble
        .write_csv(&mut buf)
        .map_err(|e| CliError::Io(e.to_string()))?;
    let csv = String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))?;

    // Plot up to the first 10 bond-price paths.
    let times = grid.times();
    let path_pts: Vec<Vec<(f64, f64)>> = ensemble
        .paths
        .iter()
        .take(10)
        .map(|p| times.iter().copied().zip(p.bond_price.iter().copied()).collect())
        .collect();
    let series: Vec<plot::Series<'_>> = path_pts
        .iter()
        .map(|pts| plot::Series { points: pts })
        .collect();
    let svg = plot::line_chart(
        &series,
        &format!("Simulated bond price paths (T = {maturity})"),
        "t",
        "bond price",
    );
    Ok(CommandOutput { csv, plot: Some(svg) })
}

fn run_option(
    model: &InfoModel,
    curve: &crate::model::TermStructure,
    strikes: &[f64],
    option_maturities: &[f64],
    bond_maturity: f64,
) -> Result<CommandOutput, CliError> {
    if strikes.is_empty() || option_maturities.is_empty() {
        return Err(CliError::Config("option sweep needs strikes and maturities".into()));
    }
    let mut csv = String::from("option_maturity,strike,price\n");
    let mut all_pts: Vec<Vec<(f64, f64)>> = Vec::new();
    for &t in option_maturities {
        let mut pts = Vec::with_capacity(strikes.len());
        for &k in strikes {
            let spec = OptionSpec::new(k, t, bond_maturity)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let price = call_price(model, curve, &spec).map_err(CliError::numerical)?;
            csv.push_str(&format!("{t},{k},{price}\n"));
            pts.push((k, price));
        }
        all_pts.push(pts);
    }
    let series: Vec<plot::Series<'_>> = all_pts
        .iter()
        .map(|pts| plot::Series { points: pts })
        .collect();
    let svg = plot::line_chart(
        &series,
        &format!("Call price vs strike (bond maturity {bond_maturity})"),
        "strike",
        "call price",
    );
    Ok(CommandOutput { csv, plot: Some(svg) })
}

fn run_implied_sigma(
    model: &InfoModel,
    curve: &crate::model::TermStructure,
    strike: f64,
    option_maturity: f64,
    bond_maturity: f64,
    observed_price: f64,
    sigma_max: f64,
) -> Result<CommandOutput, CliError> {
    let spec = OptionSpec::new(strike, option_maturity, bond_maturity)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let sigma = implied_sigma(model, curve, &spec, observed_price, sigma_max)
        .map_err(CliError::numerical)?;
    let model_price =
        call_price(&model.with_sigma(sigma).map_err(CliError::numerical)?, curve, &spec)
            .map_err(CliError::numerical)?;
    let csv = format!(
        "strike,option_maturity,bond_maturity,observed_price,implied_sigma,model_price\n{strike},{option_maturity},{bond_maturity},{observed_price},{sigma},{model_price}\n"
    );
    Ok(CommandOutput { csv, plot: None })
}

/// Write bytes to `path` through a temp file in the same directory followed
/// by an atomic rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().ok_or_else(|| CliError::Io("output path has no parent".into()))?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
