//! Mission planning for multi-swarm UAV data collection.
//!
//! A scenario of ground users (GUs) is partitioned into subregions, each
//! served by one tethered relay UAV (T-UAV) belonging to a swarm anchored by
//! a hub UAV (H-UAV). [`predeploy`] fixes the swarm sites and hover
//! candidates; [`moo`] then optimizes hover order, hover positions and
//! transmit powers against three objectives: total UAV energy, mean GU
//! energy and mean GU delay.

pub mod assignment;
pub mod channel;
pub mod energy;
pub mod error;
pub mod evaluator;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod moo;
pub mod predeploy;
pub mod scenario;

pub use error::{Error, Result};
pub use evaluator::{evaluate, feasibility, FeasibilityReport, ObjectiveVector, Solution};
pub use predeploy::{predeploy, Deployment};
pub use scenario::{generate_scenario, load_scenario, save_scenario, Scenario, ScenarioConfig};
