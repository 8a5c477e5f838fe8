//! Config-driven runner around the `becphonon` simulation library:
//! scenario configuration, the feasibility chain, and the per-subcommand
//! execution and file writing used by the `becphonon` binary.

pub mod config;
pub mod scenario;
pub mod summary;

pub use config::{parse_config, ResolvedScenario, ScenarioConfig, DEFAULT_CONFIG};
pub use scenario::{run_scenario, RunOptions, RunOutcome, ScenarioError, Subcommand};
pub use summary::{feasibility, RunSummary};
