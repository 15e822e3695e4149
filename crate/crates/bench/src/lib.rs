//! Shared fixtures for the benchmarks.

use risnoma::model::{sample_channels, ChannelSet, Geometry, LosPhase, SystemConfig};
use risnoma::rng::substream;

/// Uniform-LoS configuration with `m` eavesdroppers.
pub fn config(ns: usize, nr: usize, m: usize) -> SystemConfig {
    SystemConfig { ns, nr, m, los_phase: LosPhase::Uniform, ..Default::default() }
}

/// Users at 2 and 3, eavesdroppers spread over `[1, 1.5)`.
pub fn geometry(m: usize) -> Geometry {
    let eav: Vec<f64> = (0..m).map(|i| 1.0 + 0.5 * i as f64 / m.max(1) as f64).collect();
    Geometry::on_axis(0.5, 0.5, 2.0, 3.0, &eav)
}

pub fn channels(cfg: &SystemConfig, seed: u64) -> ChannelSet {
    sample_channels(cfg, &geometry(cfg.m), &mut substream(seed, &[])).expect("valid fixture")
}
