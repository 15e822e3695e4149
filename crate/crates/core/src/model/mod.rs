//! System configuration, node placement, channel generation and effective
//! channel gains.

mod channel;
mod config;
mod gains;
mod geometry;

pub use channel::{cascade, perturb_csi, sample_channels, ChannelSet, LinkVariances};
pub use config::{AllocationTarget, LosPhase, SystemConfig};
pub use gains::{effective_gains, EffectiveGains};
pub use geometry::{Deployment, Geometry, Placement, Point};
