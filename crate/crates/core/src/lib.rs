//! Monte Carlo simulator for multi-operator mmWave downlink spectrum access.
//!
//! Every operator deploys base stations and users as independent Poisson
//! point processes. Background users attach to their minimum-pathloss cell
//! and a random carrier; a reference user at the centre of the area then
//! picks the (carrier, BS) pair with the best round-robin throughput. Three
//! licensing regimes are compared on identical realizations:
//!
//! - `hybrid`: exclusive 28 GHz, pooled 73 GHz
//! - `licensed`: exclusive on both carriers
//! - `pooled`: pooled on both carriers
//!
//! ```
//! use mmwsim::{run_iteration, Regime, ScenarioConfig};
//!
//! let config = ScenarioConfig { ue_density: 20.0, ..ScenarioConfig::default() };
//! let result = run_iteration(&config, Regime::Hybrid, 0);
//! assert!(result.rate >= 0.0);
//! ```

pub mod antenna;
pub mod association;
pub mod channel;
pub mod config;
pub mod deployment;
pub mod montecarlo;
pub mod output;
pub mod rng;

pub use config::{
    load_scenario, parse_scenario, AntennaCase, Carrier, ConfigError, Licensing, OutputFormat,
    Regime, ScenarioConfig,
};
pub use montecarlo::{
    percentile, run_campaign, run_iteration, Campaign, CampaignStats, CellStats, IterationResult,
};
pub use output::{write_results, OutputRow};
