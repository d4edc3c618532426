//! Information-based credit modelling: a hidden market factor determines the
//! default time of a credit name, and market participants observe a noisy
//! information process whose drift reveals the factor at rate sigma. The
//! crate prices defaultable bonds and bond options under the Bayesian filter
//! of that information, simulates price paths, and extends to correlated
//! multi-name baskets.
//!
//! Entry points:
//! - [`model::InfoModel`] assembles a prior for the default time, a monotone
//!   default map, and the flow rate sigma.
//! - [`bond`] prices defaultable discount bonds and hazard curves.
//! - [`simulate`] runs seeded Monte Carlo path ensembles.
//! - [`option`] prices European calls on the bond in closed form and by
//!   quadrature, and calibrates sigma to observed prices.
//! - [`portfolio`] prices kth-to-default baskets driven by shared factors.
//! - [`cli`] backs the `infocredit` binary; the `examples/` directory shows
//!   library usage for each capability.

pub mod bond;
pub mod cli;
pub mod dist;
pub mod model;
pub mod numerics;
pub mod option;
pub mod portfolio;
pub mod simulate;

pub use bond::BondSpec;
pub use dist::Dist;
pub use model::{DefaultMap, InfoModel, InformationState, ModelError, PhiSpec, PriorDensity, TermStructure};
pub use numerics::{Seed, Tolerances};
pub use option::OptionSpec;
pub use simulate::GridSpec;
