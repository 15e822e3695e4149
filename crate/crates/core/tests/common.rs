#![allow(dead_code)]

use risnoma::model::{sample_channels, ChannelSet, Geometry, LosPhase, SystemConfig};
use risnoma::rng::substream;

pub fn config(ns: usize, nr: usize, m: usize) -> SystemConfig {
    SystemConfig { ns, nr, m, ..Default::default() }
}

pub fn geometry(m: usize) -> Geometry {
    let eav: Vec<f64> = (0..m).map(|i| 1.0 + 0.5 * i as f64 / m.max(1) as f64).collect();
    Geometry::on_axis(0.5, 0.5, 2.0, 3.0, &eav)
}

pub fn channels(cfg: &SystemConfig, seed: u64) -> ChannelSet {
    sample_channels(cfg, &geometry(cfg.m), &mut substream(seed, &[])).unwrap()
}

pub fn uniform(mut cfg: SystemConfig) -> SystemConfig {
    cfg.los_phase = LosPhase::Uniform;
    cfg
}
