//! Named transmission schemes: which beamformer, which AN construction and
//! which power allocation each one composes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{secrecy_rate_external, snrs, SnrSet};
use crate::an::{algorithm2_blind, algorithm3_csi, AnBeamformer};
use crate::beamforming::{algorithm1, baseline_no_bf, RisConfig, User};
use crate::error::{Error, Result};
use crate::model::{effective_gains, AllocationTarget, ChannelSet, EffectiveGains, SystemConfig};
use crate::power::{solve_internal, solve_no_csi, solve_with_csi, AllocationGains, PowerSplit};

const FIXED_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// Algorithm 1 with the optimal internal allocation.
    ProposedInternal,
    /// Algorithm 1 with `α = 0.05`.
    Scheme2,
    /// Algorithm 1, blind AN and the optimal `α` for the configured `ψ`.
    ProposedNoCsi,
    /// Algorithm 1, blind AN, `α = 0.05` and the configured `ψ`.
    Scheme3,
    /// Algorithm 1, CSI-steered AN and the joint `(ψ, α)` allocation.
    ProposedCsi,
    /// Algorithm 1, blind AN and the joint `(ψ, α)` allocation.
    Scheme4,
    /// Algorithm 1 with the optimal internal allocation and no AN.
    Scheme5,
    /// Algorithm 1, CSI-steered AN, `α = 0.05` and `ψ = 0.5`.
    Scheme6,
    /// No beamforming design with the optimal internal allocation.
    BaselineAlg4,
}

impl SchemeId {
    pub const ALL: [SchemeId; 9] = [
        SchemeId::ProposedInternal,
        SchemeId::Scheme2,
        SchemeId::ProposedNoCsi,
        SchemeId::Scheme3,
        SchemeId::ProposedCsi,
        SchemeId::Scheme4,
        SchemeId::Scheme5,
        SchemeId::Scheme6,
        SchemeId::BaselineAlg4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::ProposedInternal => "proposed_internal",
            SchemeId::Scheme2 => "scheme2",
            SchemeId::ProposedNoCsi => "proposed_no_csi",
            SchemeId::Scheme3 => "scheme3",
            SchemeId::ProposedCsi => "proposed_csi",
            SchemeId::Scheme4 => "scheme4",
            SchemeId::Scheme5 => "scheme5",
            SchemeId::Scheme6 => "scheme6",
            SchemeId::BaselineAlg4 => "baseline_alg4",
        }
    }

    /// Whether the scheme radiates artificial noise.
    pub fn uses_an(self) -> bool {
        matches!(
            self,
            SchemeId::ProposedNoCsi | SchemeId::Scheme3 | SchemeId::ProposedCsi | SchemeId::Scheme4 | SchemeId::Scheme6
        )
    }

    /// Whether the scheme needs eavesdropper CSI (and so at least one
    /// eavesdropper).
    pub fn needs_eavesdroppers(self) -> bool {
        matches!(self, SchemeId::ProposedCsi | SchemeId::Scheme4 | SchemeId::Scheme6)
    }

    /// Checks that the scheme can run with `ns` antennas and `m` eavesdroppers.
    pub fn check(self, ns: usize, m: usize) -> Result<()> {
        if self.uses_an() && ns < 3 {
            return Err(Error::domain(format!("scheme {self} radiates AN and needs at least 3 BS antennas, got {ns}")));
        }
        if self.needs_eavesdroppers() && m == 0 {
            return Err(Error::domain(format!("scheme {self} needs at least one external eavesdropper")));
        }
        Ok(())
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// Everything a scheme decides from the channels it was given.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeDesign {
    pub scheme: SchemeId,
    pub ris: RisConfig,
    pub an: Option<AnBeamformer>,
    pub split: PowerSplit,
    /// Algorithm 1 updates (0 when it was not run or fell back).
    pub iterations: usize,
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub scheme: SchemeId,
    /// Achieved secrecy rate in bps/Hz.
    pub secrecy_rate: f64,
    /// Set when the near user is at least as strong as the far user or the
    /// allocation was infeasible.
    pub outage: bool,
    pub snrs: SnrSet,
    pub split: PowerSplit,
    pub gains: EffectiveGains,
    pub iterations: usize,
}

fn internal_split(h1: f64, h2: f64, cfg: &SystemConfig) -> Result<PowerSplit> {
    if h1 > 0.0 && h2 > 0.0 {
        solve_internal(h1, h2, cfg)
    } else {
        Ok(PowerSplit::infeasible())
    }
}

/// Joint `(ψ, α)` allocation for designed gains, against the eavesdropper
/// selected by `cfg.allocation_target`.
fn joint_split(g: &EffectiveGains, nv: usize, cfg: &SystemConfig) -> Result<PowerSplit> {
    let solve = |(h_e1, h_e2): (f64, f64)| solve_with_csi(&AllocationGains { h1: g.h1, h2: g.h2, h_e1, h_e2, nv }, cfg);
    let strongest = solve(g.strongest_pair())?;
    if cfg.allocation_target == AllocationTarget::Strongest || g.h_e1.len() < 2 {
        return Ok(strongest);
    }
    let rate = |split: &PowerSplit| secrecy_rate_external(&snrs(g, split, nv, cfg));
    let mut best = (rate(&strongest), strongest);
    for pair in g.h_e1.iter().copied().zip(g.h_e2.iter().copied()) {
        let split = solve(pair)?;
        let r = rate(&split);
        if r > best.0 {
            best = (r, split);
        }
    }
    Ok(best.1)
}

/// Runs the scheme's design stage on `ch`, which may be an estimate of the
/// true channels.
pub fn design_scheme<R: Rng + ?Sized>(
    id: SchemeId,
    ch: &ChannelSet,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<SchemeDesign> {
    id.check(cfg.ns, ch.m())?;
    let (ris, iterations) = if id == SchemeId::BaselineAlg4 {
        (baseline_no_bf(cfg), 0)
    } else {
        match algorithm1(ch, User::U2, cfg) {
            Ok((ris, trace)) => (ris, trace.iterations),
            Err(Error::Degenerate(msg)) => {
                log::debug!("beamformer design degenerate ({msg}); using the baseline");
                (baseline_no_bf(cfg), 0)
            }
            Err(e) => return Err(e),
        }
    };

    let an = match id {
        SchemeId::ProposedNoCsi | SchemeId::Scheme3 | SchemeId::Scheme4 => Some(algorithm2_blind(ch, &ris, cfg, rng)?),
        SchemeId::ProposedCsi | SchemeId::Scheme6 => Some(algorithm3_csi(ch, &ris, cfg, rng)?),
        _ => None,
    };

    let g = effective_gains(ch, &ris, an.as_ref())?;
    let (h1, h2) = (g.h1, g.h2);
    let split = match id {
        SchemeId::ProposedInternal | SchemeId::Scheme5 | SchemeId::BaselineAlg4 => internal_split(h1, h2, cfg)?,
        SchemeId::Scheme2 => PowerSplit::fixed(FIXED_ALPHA, 1.0),
        SchemeId::ProposedNoCsi => {
            if h1 > 0.0 && h2 > 0.0 {
                solve_no_csi(h1, h2, cfg.psi, cfg)?
            } else {
                PowerSplit::infeasible()
            }
        }
        SchemeId::Scheme3 => PowerSplit::fixed(FIXED_ALPHA, cfg.psi),
        SchemeId::ProposedCsi | SchemeId::Scheme4 => {
            if h1 > 0.0 && h2 > 0.0 {
                joint_split(&g, an.as_ref().map_or(0, AnBeamformer::nv), cfg)?
            } else {
                PowerSplit::infeasible()
            }
        }
        SchemeId::Scheme6 => PowerSplit::fixed(FIXED_ALPHA, 0.5),
    };
    Ok(SchemeDesign { scheme: id, ris, an, split, iterations })
}

/// Evaluates a design on the true channels.
pub fn evaluate_design(design: &SchemeDesign, ch: &ChannelSet, cfg: &SystemConfig) -> Result<ScenarioResult> {
    let gains = effective_gains(ch, &design.ris, design.an.as_ref())?;
    let nv = design.an.as_ref().map_or(0, AnBeamformer::nv);
    let snr = snrs(&gains, &design.split, nv, cfg);
    let secrecy_rate = secrecy_rate_external(&snr);
    Ok(ScenarioResult {
        scheme: design.scheme,
        secrecy_rate,
        outage: gains.h1 >= gains.h2 || !design.split.feasible,
        snrs: snr,
        split: design.split,
        gains,
        iterations: design.iterations,
    })
}

/// Designs and evaluates a scheme with perfect CSI.
pub fn run_scheme<R: Rng + ?Sized>(
    id: SchemeId,
    ch: &ChannelSet,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<ScenarioResult> {
    let design = design_scheme(id, ch, cfg, rng)?;
    evaluate_design(&design, ch, cfg)
}
