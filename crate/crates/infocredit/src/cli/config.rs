//! JSON run configuration: model block, command block, numerics block.
//! Unknown keys are rejected everywhere.

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::model::{DefaultMap, InfoModel, PhiSpec, PriorDensity, TermStructure};
use crate::numerics::{Seed, Tolerances};
use crate::portfolio::{BasketSpec, FactorSet, NameMap};
use crate::simulate::GridSpec;

use super::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub command: CommandConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    /// Provenance written into run_meta.json; ignored on input so a
    /// run_meta.json can be re-fed as a config.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub prior: Dist,
    pub phi: PhiSpec,
    pub sigma: f64,
    pub curve: TermStructure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub stream_id: u64,
    pub n_paths: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            tolerances: Tolerances::default(),
            seed: 0,
            stream_id: 0,
            n_paths: 10_000,
        }
    }
}

impl NumericsConfig {
    pub fn seed(&self) -> Seed {
        Seed::new(self.seed, self.stream_id)
    }
}

fn default_principal() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_points() -> usize {
    101
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandConfig {
    /// Conditional factor density rho_t(x) on a grid over the factor domain.
    Density {
        t: f64,
        xi: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
    /// Single defaultable bond price.
    Bond {
        t: f64,
        xi: f64,
        maturity: f64,
        #[serde(default = "default_principal")]
        principal: f64,
        #[serde(default)]
        recovery: f64,
        #[serde(default = "default_true")]
        survived: bool,
    },
    /// Forward hazard term structure h_tu over u in [t, u_max].
    Hazard {
        t: f64,
        xi: f64,
        u_max: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
    /// Monte Carlo path ensemble for a zero-recovery bond.
    Simulate {
        maturity: f64,
        grid: GridSpec,
        #[serde(default = "default_principal")]
        principal: f64,
    },
    /// Call-price sweep over strikes and option maturities.
    Option {
        strikes: Vec<f64>,
        option_maturities: Vec<f64>,
        bond_maturity: f64,
    },
    /// Back out sigma from an observed call price.
    ImpliedSigma {
        strike: f64,
        option_maturity: f64,
        bond_maturity: f64,
        observed_price: f64,
        #[serde(default = "default_sigma_max")]
        sigma_max: f64,
    },
    /// kth-to-default basket priced at time 0 (uses only the curve from the
    /// model block).
    Basket {
        factors: FactorSet,
        names: NameMap,
        basket: BasketSpec,
    },
}

fn default_sigma_max() -> f64 {
    2.0
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Density { .. } => "density",
            CommandConfig::Bond { .. } => "bond",
            CommandConfig::Hazard { .. } => "hazard",
            CommandConfig::Simulate { .. } => "simulate",
            CommandConfig::Option { .. } => "option",
            CommandConfig::ImpliedSigma { .. } => "implied-sigma",
            CommandConfig::Basket { .. } => "basket",
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Build the information model described by the model block.
    pub fn build_model(&self) -> Result<InfoModel, CliError> {
        let tol = self.numerics.tolerances;
        let map = DefaultMap::from_spec(self.model.phi).map_err(CliError::numerical)?;
        let prior =
            PriorDensity::for_default_time(self.model.prior, &tol).map_err(CliError::numerical)?;
        self.model.curve.validate().map_err(CliError::numerical)?;
        InfoModel::new(self.model.sigma, prior, map, tol).map_err(CliError::numerical)
    }
}
