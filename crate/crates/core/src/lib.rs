//! Physical-layer security for RIS-aided two-user NOMA downlinks.
//!
//! The crate is organised the way a trial flows through the simulator:
//!
//! * [`model`] draws Rician channels for a deployment and evaluates the
//!   effective (cascaded) channel gains.
//! * [`beamforming`] jointly aligns the RIS phase shifts and the BS
//!   beamformer towards the far user by alternating optimisation.
//! * [`an`] steers artificial noise into the null space of both users,
//!   either blindly or towards known eavesdroppers.
//! * [`power`] solves the power-sharing problems in closed form.
//! * [`metrics`] turns gains and power splits into SNRs and secrecy
//!   rates, composes the named schemes and runs Monte Carlo estimators.
//!
//! All randomness flows through explicitly seeded [`rng::SimRng`]
//! streams, so every result is reproducible.

pub mod an;
pub mod beamforming;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod power;
pub mod rng;

#[cfg(any(test, feature = "oracles"))]
pub mod oracle;

pub use an::{algorithm2_blind, algorithm3_csi, an_leakage, AnBeamformer, AnLeakage, AnMode};
pub use beamforming::{
    algorithm1, baseline_no_bf, reduced_phase_objective, IterationTrace, ReducedPhase, RisConfig, User,
};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use metrics::monte_carlo::{average_secrecy_rate, estimate_sop, monte_carlo, MonteCarloSummary, Scenario};
pub use metrics::scheme::{run_scheme, ScenarioResult, SchemeDesign, SchemeId};
pub use metrics::{secrecy_rate_external, secrecy_rate_internal, snrs, SnrSet};
pub use model::{
    effective_gains, perturb_csi, sample_channels, AllocationTarget, ChannelSet, Deployment, EffectiveGains, Geometry,
    LosPhase, Placement, Point, SystemConfig,
};
pub use num_complex::Complex64;
pub use power::{
    region_points, secrecy_objective, solve_internal, solve_no_csi, solve_with_csi, AllocationCase, AllocationGains,
    PowerSplit, RegionPoints,
};
pub use rng::SimRng;
