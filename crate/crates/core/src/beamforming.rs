//! Joint RIS phase and transmit beamformer design.
//!
//! [`algorithm1`] alternates between the two closed-form partial optima:
//! for fixed `w` the best phases co-phase every RIS path, and for fixed
//! `Φ` the best unit `w` is the matched filter of the cascaded channel.
//! Each half-step can only increase the target gain, so the iteration
//! converges.

use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{polar_angle, wrap_phase, CMatrix, CVector};
use crate::model::{cascade, ChannelSet, SystemConfig};

/// One of the two NOMA users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum User {
    /// The near user (weaker after beamforming).
    U1,
    /// The far user whose gain the beamformer maximises.
    U2,
}

impl FromStr for User {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u1" | "U1" => Ok(User::U1),
            "u2" | "U2" => Ok(User::U2),
            other => Err(Error::domain(format!("unknown user `{other}`"))),
        }
    }
}

/// RIS phase shifts and the unit-norm BS beamformer.
#[derive(Debug, Clone, PartialEq)]
pub struct RisConfig {
    /// `φ_n ∈ [0, 2π)`, the diagonal of `Φ = Diag(e^{jφ_n})`.
    pub phases: Vec<f64>,
    pub w: CVector,
}

impl RisConfig {
    pub fn phase_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationTrace {
    /// Target gain after initialisation followed by one entry per update.
    pub h2_values: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl IterationTrace {
    pub fn final_gain(&self) -> f64 {
        self.h2_values.last().copied().unwrap_or(0.0)
    }
}

fn target_channel(ch: &ChannelSet, target: User) -> &CVector {
    match target {
        User::U1 => &ch.h_ru1,
        User::U2 => &ch.h_ru2,
    }
}

/// Matched filter for the cascaded direction `c`, with its gain `‖c‖²`.
fn matched(c: &CVector) -> Option<(CVector, f64)> {
    let norm = c.norm();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some((c.map(|z| z.conj() / norm), norm * norm))
}

struct Aligner<'a> {
    h: &'a CVector,
    h_rs: &'a CMatrix,
    /// Angles of the entries of `h^H`.
    beta: Vec<f64>,
}

impl<'a> Aligner<'a> {
    fn new(h: &'a CVector, h_rs: &'a CMatrix) -> Self {
        let beta = h.iter().map(|z| polar_angle(z.conj())).collect();
        Self { h, h_rs, beta }
    }

    fn configure(&self, phases: Vec<f64>) -> Option<(RisConfig, f64)> {
        let (w, gain) = matched(&cascade(self.h, &phases, self.h_rs))?;
        Some((RisConfig { phases, w }, gain))
    }

    fn initial(&self) -> Option<(RisConfig, f64)> {
        self.configure(self.beta.iter().map(|&b| wrap_phase(-b)).collect())
    }

    fn step(&self, w: &CVector) -> Option<(RisConfig, f64)> {
        let hw = self.h_rs * w;
        let phases = self.beta.iter().zip(hw.iter()).map(|(&b, &z)| wrap_phase(-b - polar_angle(z))).collect();
        self.configure(phases)
    }
}

fn degenerate() -> Error {
    Error::Degenerate("cascaded channel towards the target user is zero".into())
}

/// Maximises the target user's gain `‖h^H Φ H_RS w‖²` over `Φ` and `w`.
///
/// Stops once successive gains differ by less than `cfg.epsilon`, or after
/// `cfg.max_iters` updates with `converged = false`. An update that would
/// lower the gain (possible only through rounding) is discarded, recorded
/// as a repeat of the previous value and ends the iteration, so the trace
/// is nondecreasing.
pub fn algorithm1(ch: &ChannelSet, target: User, cfg: &SystemConfig) -> Result<(RisConfig, IterationTrace)> {
    ch.check_shapes()?;
    let aligner = Aligner::new(target_channel(ch, target), &ch.h_rs);
    let (mut ris, mut gain) = aligner.initial().ok_or_else(degenerate)?;
    let mut trace = IterationTrace { h2_values: vec![gain], ..Default::default() };
    while trace.iterations < cfg.max_iters {
        let (next, next_gain) = aligner.step(&ris.w).ok_or_else(degenerate)?;
        trace.iterations += 1;
        if next_gain < gain {
            // Keep the previous iterate; the step made no progress.
            trace.h2_values.push(gain);
            trace.converged = true;
            break;
        }
        let delta = next_gain - gain;
        ris = next;
        gain = next_gain;
        trace.h2_values.push(gain);
        if delta < cfg.epsilon {
            trace.converged = true;
            break;
        }
    }
    Ok((ris, trace))
}

/// Applies a single alternating update to `ris` and returns the new
/// configuration with its target gain.
pub fn algorithm1_step(ch: &ChannelSet, target: User, ris: &RisConfig) -> Result<(RisConfig, f64)> {
    Aligner::new(target_channel(ch, target), &ch.h_rs).step(&ris.w).ok_or_else(degenerate)
}

/// The configuration without beamforming design: `Φ = I`, `w = 1/sqrt(Ns)`.
pub fn baseline_no_bf(cfg: &SystemConfig) -> RisConfig {
    let amp = 1.0 / (cfg.ns as f64).sqrt();
    RisConfig { phases: vec![0.0; cfg.nr], w: CVector::from_element(cfg.ns, Complex64::new(amp, 0.0)) }
}

/// The target gain as a function of a single phase `φ_i`,
/// `offset + τ cos(μ + φ_i)`, with everything else held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPhase {
    pub offset: f64,
    pub tau: f64,
    pub mu: f64,
}

impl ReducedPhase {
    pub fn eval(&self, phi: f64) -> f64 {
        self.offset + self.tau * (self.mu + phi).cos()
    }
}

pub fn reduced_phase_objective(ch: &ChannelSet, ris: &RisConfig, target: User, i: usize) -> Result<ReducedPhase> {
    let h = target_channel(ch, target);
    if i >= h.len() {
        return Err(Error::domain(format!("element index {i} out of range")));
    }
    let hw = &ch.h_rs * &ris.w;
    let term = |n: usize| h[n].conj() * hw[n];
    let q1 = term(i);
    let q2: Complex64 =
        (0..h.len()).filter(|&n| n != i).map(|n| term(n) * Complex64::from_polar(1.0, ris.phases[n])).sum();
    let cross = q1 * q2.conj();
    Ok(ReducedPhase { offset: q1.norm_sqr() + q2.norm_sqr(), tau: 2.0 * cross.norm(), mu: polar_angle(cross) })
}
