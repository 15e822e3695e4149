//! SNRs, secrecy rates, the scheme registry and Monte Carlo estimators.

pub mod monte_carlo;
pub mod scheme;

use crate::model::{EffectiveGains, SystemConfig};
use crate::power::PowerSplit;

/// Post-detection SNRs of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrSet {
    /// Near user decoding `x1` (after SIC of `x2`).
    pub g1_x1: f64,
    /// Far user decoding `x1` (the SIC step).
    pub g2_x1: f64,
    /// Near user eavesdropping `x2`.
    pub g1_x2: f64,
    /// Far user decoding `x2`.
    pub g2_x2: f64,
    /// Each external eavesdropper on `x2`, assuming `x1` is already removed.
    pub ge_x2: Vec<f64>,
}

/// Evaluates every SNR for the given gains and power split. `nv` is the
/// number of AN columns; the AN term vanishes when it is 0.
pub fn snrs(gains: &EffectiveGains, split: &PowerSplit, nv: usize, cfg: &SystemConfig) -> SnrSet {
    let p = cfg.p_linear();
    let n0 = cfg.n0_linear();
    let (alpha, psi) = (split.alpha, split.psi);
    let sp = psi * p;
    let interfered = |h: f64| h * (1.0 - alpha) * sp / (h * alpha * sp + n0);
    let clean = |h: f64| h * alpha * sp / n0;
    let an_power = if nv == 0 { 0.0 } else { (1.0 - psi) * p / nv as f64 };
    SnrSet {
        g1_x1: interfered(gains.h1),
        g2_x1: interfered(gains.h2),
        g1_x2: clean(gains.h1),
        g2_x2: clean(gains.h2),
        ge_x2: gains.h_e1.iter().zip(&gains.h_e2).map(|(&e1, &e2)| e1 * alpha * sp / (an_power * e2 + n0)).collect(),
    }
}

fn rate_gap(legit: f64, eavesdropper: f64) -> f64 {
    ((1.0 + legit).log2() - (1.0 + eavesdropper).log2()).max(0.0)
}

/// Secrecy rate of `x2` against the near user only, in bps/Hz.
pub fn secrecy_rate_internal(s: &SnrSet) -> f64 {
    rate_gap(s.g2_x2, s.g1_x2)
}

/// Secrecy rate of `x2` against the near user and every external
/// eavesdropper, in bps/Hz.
pub fn secrecy_rate_external(s: &SnrSet) -> f64 {
    let worst = s.ge_x2.iter().copied().fold(s.g1_x2, f64::max);
    rate_gap(s.g2_x2, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::PowerSplit;

    fn gains(h1: f64, h2: f64, e1: Vec<f64>, e2: Vec<f64>) -> EffectiveGains {
        EffectiveGains { h1, h2, h_e1: e1, h_e2: e2, strongest: None, an_enabled: false }
    }

    fn cfg_p(p: f64) -> SystemConfig {
        SystemConfig { p_dbm: 10.0 * p.log10(), n0_dbm: 0.0, ..Default::default() }
    }

    #[test]
    fn zero_alpha_puts_everything_on_x1() {
        let cfg = cfg_p(10.0);
        let s = snrs(&gains(2.0, 8.0, vec![], vec![]), &PowerSplit::fixed(0.0, 0.5), 0, &cfg);
        assert_eq!(s.g1_x2, 0.0);
        assert_eq!(s.g2_x2, 0.0);
        assert!((s.g1_x1 - 2.0 * 0.5 * 10.0).abs() < 1e-12);
    }

    #[test]
    fn hand_evaluated_snrs() {
        let cfg = cfg_p(10.0);
        let s = snrs(&gains(2.0, 8.0, vec![1.0], vec![3.0]), &PowerSplit::fixed(0.4, 1.0), 2, &cfg);
        assert!((s.g2_x2 - 32.0).abs() < 1e-12);
        assert!((s.g1_x2 - 8.0).abs() < 1e-12);
        assert!((s.g1_x1 - 12.0 / 9.0).abs() < 1e-12);
        assert!((s.ge_x2[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rates() {
        let mut s = SnrSet { g1_x1: 0.0, g2_x1: 0.0, g1_x2: 1.0, g2_x2: 3.0, ge_x2: vec![] };
        assert_eq!(secrecy_rate_internal(&s), 1.0);
        s.g1_x2 = 3.0;
        assert_eq!(secrecy_rate_internal(&s), 0.0);
        s.g1_x2 = 8.0;
        s.g2_x2 = 32.0;
        assert!((secrecy_rate_internal(&s) - 1.874_469_117_916_142).abs() < 1e-12);
        s.ge_x2 = vec![15.0, 3.0];
        assert!((secrecy_rate_external(&s) - (33.0f64 / 16.0).log2()).abs() < 1e-12);
        s.ge_x2 = vec![1.0, 2.0];
        assert_eq!(secrecy_rate_external(&s), secrecy_rate_internal(&s));
        s.ge_x2 = vec![32.0];
        assert_eq!(secrecy_rate_external(&s), 0.0);
    }
}
