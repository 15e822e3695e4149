//! Seeded, order-independent Monte Carlo estimators.
//!
//! Trial `i` draws its geometry, channels, CSI error and scheme randomness
//! from `substream(seed, [i, purpose])`. Nothing depends on the sweep point
//! or the scheme, so every scheme and every sweep point sees the same
//! underlying draws (common random numbers) and results do not depend on
//! the thread count.

use rayon::prelude::*;

use super::scheme::{design_scheme, evaluate_design, SchemeId};
use crate::error::{Error, Result};
use crate::model::{perturb_csi, sample_channels, Deployment, SystemConfig};
use crate::rng::{stream, substream};

/// A system configuration together with where nodes are placed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub cfg: SystemConfig,
    pub deployment: Deployment,
    /// CSI error ratio `t`. When set, schemes are designed on estimated
    /// channels and the relative rate loss against perfect CSI is reported.
    pub csi_error: Option<f64>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        self.deployment.validate()?;
        if let Some(t) = self.csi_error {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::domain(format!("CSI error ratio must be non-negative, got {t}")));
            }
        }
        Ok(())
    }
}

/// Aggregates over all trials of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub avg_secrecy_rate: f64,
    /// Standard error of `avg_secrecy_rate`.
    pub secrecy_rate_stderr: f64,
    /// Fraction of trials where the near user is at least as strong as the
    /// far user after beamforming.
    pub sop: f64,
    /// Fraction of trials whose power allocation was infeasible.
    pub infeasible_fraction: f64,
    /// Fraction of trials flagged as outage (ordering or infeasibility).
    pub outage_fraction: f64,
    pub mean_iterations: f64,
    pub avg_h1: f64,
    pub avg_h2: f64,
    /// Mean of `|R_perfect − R_estimated| / R_perfect` over trials with a
    /// positive perfect-CSI rate; only with a CSI error model.
    pub relative_error: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
struct TrialRecord {
    rate: f64,
    ordering_outage: bool,
    infeasible: bool,
    outage: bool,
    iterations: usize,
    h1: f64,
    h2: f64,
    perfect_rate: Option<f64>,
}

fn run_trial(id: SchemeId, scenario: &Scenario, seed: u64, trial: u64) -> Result<TrialRecord> {
    let cfg = &scenario.cfg;
    let geo = scenario.deployment.sample(cfg.m, &mut substream(seed, &[trial, stream::GEOMETRY]));
    let ch = sample_channels(cfg, &geo, &mut substream(seed, &[trial, stream::CHANNELS]))?;
    let scheme_rng = || substream(seed, &[trial, stream::SCHEME]);

    let (result, perfect_rate) = match scenario.csi_error {
        None => {
            let design = design_scheme(id, &ch, cfg, &mut scheme_rng())?;
            (evaluate_design(&design, &ch, cfg)?, None)
        }
        Some(t) => {
            let est = perturb_csi(&ch, t, &mut substream(seed, &[trial, stream::CSI_ERROR]))?;
            let design = design_scheme(id, &est, cfg, &mut scheme_rng())?;
            let imperfect = evaluate_design(&design, &ch, cfg)?;
            let perfect = if t == 0.0 {
                imperfect.secrecy_rate
            } else {
                let design = design_scheme(id, &ch, cfg, &mut scheme_rng())?;
                evaluate_design(&design, &ch, cfg)?.secrecy_rate
            };
            (imperfect, Some(perfect))
        }
    };
    Ok(TrialRecord {
        rate: result.secrecy_rate,
        ordering_outage: result.gains.h1 >= result.gains.h2,
        infeasible: !result.split.feasible,
        outage: result.outage,
        iterations: result.iterations,
        h1: result.gains.h1,
        h2: result.gains.h2,
        perfect_rate,
    })
}

/// Sum with pairwise reduction, which keeps rounding error `O(log n)` and
/// is independent of how trials were scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        pairwise_sum(values) / values.len() as f64
    }
}

fn fraction(records: &[TrialRecord], flag: impl Fn(&TrialRecord) -> bool) -> f64 {
    records.iter().filter(|r| flag(r)).count() as f64 / records.len() as f64
}

/// Runs `trials` independent trials of `id` and aggregates them.
pub fn monte_carlo(id: SchemeId, scenario: &Scenario, trials: usize, seed: u64) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    scenario.validate()?;
    id.check(scenario.cfg.ns, scenario.cfg.m)?;

    let records: Vec<TrialRecord> =
        (0..trials as u64).into_par_iter().map(|i| run_trial(id, scenario, seed, i)).collect::<Result<_>>()?;

    let rates: Vec<f64> = records.iter().map(|r| r.rate).collect();
    let avg = mean(&rates);
    let stderr = if trials > 1 {
        let dev: Vec<f64> = rates.iter().map(|r| (r - avg) * (r - avg)).collect();
        (pairwise_sum(&dev) / (trials - 1) as f64 / trials as f64).sqrt()
    } else {
        0.0
    };
    let relative_error = scenario.csi_error.map(|_| {
        let errs: Vec<f64> = records
            .iter()
            .filter_map(|r| {
                let p = r.perfect_rate?;
                (p > 0.0).then(|| (p - r.rate).abs() / p)
            })
            .collect();
        mean(&errs)
    });
    let iters: Vec<f64> = records.iter().map(|r| r.iterations as f64).collect();
    let h1: Vec<f64> = records.iter().map(|r| r.h1).collect();
    let h2: Vec<f64> = records.iter().map(|r| r.h2).collect();

    Ok(MonteCarloSummary {
        trials,
        avg_secrecy_rate: avg,
        secrecy_rate_stderr: stderr,
        sop: fraction(&records, |r| r.ordering_outage),
        infeasible_fraction: fraction(&records, |r| r.infeasible),
        outage_fraction: fraction(&records, |r| r.outage),
        mean_iterations: mean(&iters),
        avg_h1: mean(&h1),
        avg_h2: mean(&h2),
        relative_error,
    })
}

/// Secrecy outage probability: the fraction of trials where beamforming
/// leaves the near user at least as strong as the far user.
pub fn estimate_sop(id: SchemeId, scenario: &Scenario, trials: usize, seed: u64) -> Result<f64> {
    Ok(monte_carlo(id, scenario, trials, seed)?.sop)
}

/// Average secrecy rate (outage trials contribute 0) and the number of
/// outage trials.
pub fn average_secrecy_rate(id: SchemeId, scenario: &Scenario, trials: usize, seed: u64) -> Result<(f64, usize)> {
    let s = monte_carlo(id, scenario, trials, seed)?;
    let outages = (s.outage_fraction * trials as f64).round() as usize;
    Ok((s.avg_secrecy_rate, outages))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::scheme::run_scheme;
    use crate::model::{Placement, Point};

    fn internal(ns: usize, nr: usize) -> Scenario {
        Scenario {
            cfg: SystemConfig { ns, nr, ..Default::default() },
            deployment: Deployment {
                ris: Point::new(0.5, 0.5),
                u1: Placement::Fixed(Point::new(2.0, 0.0)),
                u2: Placement::Fixed(Point::new(3.0, 0.0)),
                eavesdroppers: Placement::AxisInterval { lo: 1.0, hi: 1.5 },
            },
            csi_error: None,
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_exact_values() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(monte_carlo(SchemeId::ProposedInternal, &internal(4, 4), 0, 1).is_err());
    }

    #[test]
    fn single_trial_equals_scenario_result() {
        let sc = internal(4, 8);
        let (avg, _) = average_secrecy_rate(SchemeId::ProposedInternal, &sc, 1, 17).unwrap();
        let geo = sc.deployment.sample(0, &mut substream(17, &[0, stream::GEOMETRY]));
        let ch = sample_channels(&sc.cfg, &geo, &mut substream(17, &[0, stream::CHANNELS])).unwrap();
        let r = run_scheme(SchemeId::ProposedInternal, &ch, &sc.cfg, &mut substream(17, &[0, stream::SCHEME])).unwrap();
        assert_eq!(avg, r.secrecy_rate);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let sc = internal(4, 8);
        let a = monte_carlo(SchemeId::ProposedInternal, &sc, 64, 5).unwrap();
        let b = monte_carlo(SchemeId::ProposedInternal, &sc, 64, 5).unwrap();
        assert_eq!(a, b);
        assert!((0.0..=1.0).contains(&a.sop));
    }

    #[test]
    fn zero_csi_error_has_zero_relative_error() {
        let mut sc = internal(4, 8);
        sc.csi_error = Some(0.0);
        let s = monte_carlo(SchemeId::ProposedInternal, &sc, 32, 3).unwrap();
        assert_eq!(s.relative_error, Some(0.0));
        sc.csi_error = None;
        assert_eq!(monte_carlo(SchemeId::ProposedInternal, &sc, 32, 3).unwrap().relative_error, None);
    }
}
