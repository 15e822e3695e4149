use super::channel::{cascade, ChannelSet};
use crate::an::AnBeamformer;
use crate::beamforming::RisConfig;
use crate::error::{Error, Result};
use crate::linalg::{bilinear, CVector};

/// Integrated channel gains of one realisation under a given RIS
/// configuration and AN matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveGains {
    pub h1: f64,
    pub h2: f64,
    /// Signal gain `‖h_REi^H Φ H_RS w‖²` of each eavesdropper.
    pub h_e1: Vec<f64>,
    /// AN gain `‖h_REi^H Φ H_RS T‖²` of each eavesdropper (0 without AN).
    pub h_e2: Vec<f64>,
    /// Eavesdropper with the largest `h_e1`, lowest index on ties.
    pub strongest: Option<usize>,
    pub an_enabled: bool,
}

impl EffectiveGains {
    /// `(hE1, hE2)` of the strongest eavesdropper, or zeros without one.
    pub fn strongest_pair(&self) -> (f64, f64) {
        self.strongest.map(|k| (self.h_e1[k], self.h_e2[k])).unwrap_or((0.0, 0.0))
    }
}

pub(crate) fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if values[b] >= v => {}
            _ => best = Some(i),
        }
    }
    best
}

fn signal_gain(c: &CVector, w: &CVector) -> f64 {
    bilinear(c, w).norm_sqr()
}

fn an_gain(c: &CVector, an: &AnBeamformer) -> f64 {
    an.t.column_iter()
        .map(|t| c.iter().zip(t.iter()).map(|(a, b)| a * b).sum::<num_complex::Complex64>().norm_sqr())
        .sum()
}

/// Evaluates every effective gain for `ris` (and `an`, when present).
pub fn effective_gains(ch: &ChannelSet, ris: &RisConfig, an: Option<&AnBeamformer>) -> Result<EffectiveGains> {
    ch.check_shapes()?;
    let mismatch = |what, expected, actual| Error::DimensionMismatch { what, expected, actual };
    if ris.phases.len() != ch.nr() {
        return Err(mismatch("RIS phase count", ch.nr(), ris.phases.len()));
    }
    if ris.w.len() != ch.ns() {
        return Err(mismatch("beamformer length", ch.ns(), ris.w.len()));
    }
    if let Some(an) = an {
        if an.t.nrows() != ch.ns() {
            return Err(mismatch("AN matrix rows", ch.ns(), an.t.nrows()));
        }
    }

    let gain = |h| signal_gain(&cascade(h, &ris.phases, &ch.h_rs), &ris.w);
    let mut h_e1 = Vec::with_capacity(ch.m());
    let mut h_e2 = Vec::with_capacity(ch.m());
    for h in &ch.h_re {
        let d = cascade(h, &ris.phases, &ch.h_rs);
        h_e1.push(signal_gain(&d, &ris.w));
        h_e2.push(an.map_or(0.0, |an| an_gain(&d, an)));
    }
    let an_enabled = an.is_some_and(|an| an.nv() > 0);
    Ok(EffectiveGains { h1: gain(&ch.h_ru1), h2: gain(&ch.h_ru2), strongest: argmax(&h_e1), h_e1, h_e2, an_enabled })
}
