use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How the line-of-sight component of each Rician entry is phased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LosPhase {
    /// Every entry shares the real mean `sqrt(K/(K+1))`.
    #[default]
    Aligned,
    /// Each entry's LoS term carries an independent uniform phase.
    Uniform,
}

impl fmt::Display for LosPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LosPhase::Aligned => "aligned",
            LosPhase::Uniform => "uniform",
        })
    }
}

impl FromStr for LosPhase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aligned" => Ok(LosPhase::Aligned),
            "uniform" => Ok(LosPhase::Uniform),
            other => Err(Error::domain(format!("unknown LoS phase model `{other}` (expected aligned or uniform)"))),
        }
    }
}

/// Which external eavesdropper the joint power allocation is solved
/// against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AllocationTarget {
    /// The eavesdropper with the largest signal gain.
    #[default]
    Strongest,
    /// Solve against each eavesdropper in turn and keep the split with the
    /// best secrecy rate over all of them.
    Binding,
}

impl fmt::Display for AllocationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AllocationTarget::Strongest => "strongest",
            AllocationTarget::Binding => "binding",
        })
    }
}

impl FromStr for AllocationTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strongest" => Ok(AllocationTarget::Strongest),
            "binding" => Ok(AllocationTarget::Binding),
            other => Err(Error::domain(format!("unknown allocation target `{other}` (expected strongest or binding)"))),
        }
    }
}

/// Link-level parameters shared by every trial of a simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// BS antenna count.
    pub ns: usize,
    /// RIS element count.
    pub nr: usize,
    /// Number of external eavesdroppers.
    pub m: usize,
    pub p_dbm: f64,
    pub n0_dbm: f64,
    /// Rician K-factor.
    pub k_factor: f64,
    pub path_loss_exponent: f64,
    /// Minimum rate of the near user, bps/Hz.
    pub r1_th: f64,
    /// Minimum rate of the far user, bps/Hz.
    pub r2_th: f64,
    /// Convergence tolerance of the alternating optimisation.
    pub epsilon: f64,
    pub max_iters: usize,
    pub los_phase: LosPhase,
    /// Prescribed signal share `ψ` for schemes that cannot optimise it.
    pub psi: f64,
    pub allocation_target: AllocationTarget,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            ns: 16,
            nr: 16,
            m: 0,
            p_dbm: 25.0,
            n0_dbm: 0.0,
            k_factor: 10.0,
            path_loss_exponent: 2.0,
            r1_th: 1.0,
            r2_th: 1.0,
            epsilon: 1e-4,
            max_iters: 1000,
            los_phase: LosPhase::Aligned,
            psi: 0.5,
            allocation_target: AllocationTarget::Strongest,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::domain(msg.to_string()));
        if self.ns < 1 {
            return fail("ns must be at least 1");
        }
        if self.nr < 1 {
            return fail("nr must be at least 1");
        }
        if !(self.k_factor > 0.0 && self.k_factor.is_finite()) {
            return fail("k_factor must be positive");
        }
        if !(self.path_loss_exponent >= 0.0 && self.path_loss_exponent.is_finite()) {
            return fail("path_loss_exponent must be non-negative");
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return fail("epsilon must be positive");
        }
        if self.max_iters < 1 {
            return fail("max_iters must be at least 1");
        }
        if !self.p_dbm.is_finite() || !self.n0_dbm.is_finite() {
            return fail("powers must be finite");
        }
        if !(self.r1_th >= 0.0 && self.r2_th >= 0.0) {
            return fail("rate thresholds must be non-negative");
        }
        if !(self.psi > 0.0 && self.psi <= 1.0) {
            return fail("psi must lie in (0, 1]");
        }
        let p = self.p_linear();
        let n0 = self.n0_linear();
        if !(p > 0.0 && p.is_finite() && n0 > 0.0 && n0.is_finite()) {
            return fail("linear powers must be positive and finite");
        }
        Ok(())
    }

    /// Transmit power in linear units (mW).
    pub fn p_linear(&self) -> f64 {
        10f64.powf(self.p_dbm / 10.0)
    }

    /// Noise power in linear units (mW).
    pub fn n0_linear(&self) -> f64 {
        10f64.powf(self.n0_dbm / 10.0)
    }

    pub fn gamma1_th(&self) -> f64 {
        2f64.powf(self.r1_th) - 1.0
    }

    pub fn gamma2_th(&self) -> f64 {
        2f64.powf(self.r2_th) - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_simulation_setup() {
        let cfg = SystemConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.p_linear() - 316.227_766_016_837_94).abs() < 1e-9);
        assert_eq!(cfg.n0_linear(), 1.0);
        assert_eq!(cfg.gamma1_th(), 1.0);
        assert_eq!(cfg.gamma2_th(), 1.0);
    }

    #[test]
    fn rejects_invalid_fields() {
        let bad = [
            SystemConfig { ns: 0, ..Default::default() },
            SystemConfig { nr: 0, ..Default::default() },
            SystemConfig { k_factor: 0.0, ..Default::default() },
            SystemConfig { path_loss_exponent: -1.0, ..Default::default() },
            SystemConfig { epsilon: 0.0, ..Default::default() },
            SystemConfig { max_iters: 0, ..Default::default() },
            SystemConfig { psi: 0.0, ..Default::default() },
            SystemConfig { psi: 1.5, ..Default::default() },
            SystemConfig { p_dbm: f64::NAN, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn los_phase_parses() {
        assert_eq!("uniform".parse::<LosPhase>().unwrap(), LosPhase::Uniform);
        assert_eq!(LosPhase::Aligned.to_string(), "aligned");
        assert!("random".parse::<LosPhase>().is_err());
        assert_eq!("binding".parse::<AllocationTarget>().unwrap(), AllocationTarget::Binding);
        assert_eq!(AllocationTarget::Strongest.to_string(), "strongest");
        assert!("weakest".parse::<AllocationTarget>().is_err());
    }
}
