//! Monte Carlo simulation of "see and be seen" interactions between two
//! VFR aircraft: probabilistic pilot visual acquisition driven by a
//! nonhomogeneous Poisson sighting model, delayed stochastic avoidance
//! maneuvers, NMAC detection, and importance-weighted risk ratios across
//! visibility and search-effectiveness parameter sweeps.

pub mod acquisition;
pub mod avoidance;
pub mod chart;
pub mod config;
pub mod dynamics;
pub mod encounters;
pub mod error;
pub mod geom;
pub mod metrics;
pub mod rng;
pub mod silhouette;
pub mod sim;
pub mod sweep;
pub mod units;

pub use acquisition::{AcquisitionParams, AcquisitionState, DovConfig, DovMode, FovLimits};
pub use avoidance::{PilotResponseParams, PilotState, WellClearParams};
pub use config::SimConfig;
pub use dynamics::{AircraftState, ManeuverCommand};
pub use encounters::{AirframeClass, EncounterSet, EncounterSpec, ImportanceScheme};
pub use error::{Error, Result};
pub use metrics::{EncounterOutcome, RiskRatioReport};
pub use silhouette::{AreaTable, TriangleMesh, ViewAngles};
pub use sim::{RunMode, SimParams};
pub use sweep::{SweepOutput, SweepResult};
