//! Power sharing between the two NOMA signals (`α`) and between signal and
//! artificial noise (`ψ`).
//!
//! The feasible region `D_R` in the `(ψ, α)` plane is bounded above by the
//! near user's SIC constraint and below by the far user's rate constraint:
//!
//! ```text
//! α ≤ (h1ψP − N0γ1) / (h1ψP(1 + γ1))      (upper boundary)
//! α ≥ N0γ2 / (h2ψP)                      (lower boundary)
//! ```
//!
//! The with-CSI solver enumerates the corner and stationary points of that
//! region and keeps the best one.

use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// How a [`PowerSplit`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationCase {
    /// Optimal `α` without AN (`ψ = 1`).
    Internal,
    /// Optimal `α` for a prescribed `ψ`.
    NoCsi,
    /// With CSI, the near user is the stronger eavesdropper everywhere.
    CaseI,
    /// With CSI, the external eavesdropper dominates the whole region.
    CaseII,
    /// With CSI, the dominant eavesdropper changes inside the region.
    CaseIII,
    /// A prescribed `(ψ, α)` pair; rate constraints are not enforced.
    Fixed,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    /// Share of the signal power carried by `x2`.
    pub alpha: f64,
    /// Share of the total power carried by the signal (the rest is AN).
    pub psi: f64,
    pub feasible: bool,
    pub case: AllocationCase,
}

impl PowerSplit {
    pub fn infeasible() -> Self {
        Self { alpha: 0.0, psi: 1.0, feasible: false, case: AllocationCase::Infeasible }
    }

    pub fn fixed(alpha: f64, psi: f64) -> Self {
        Self { alpha, psi, feasible: true, case: AllocationCase::Fixed }
    }

    fn at(point: OperatingPoint, case: AllocationCase) -> Self {
        Self { alpha: point.alpha, psi: point.psi, feasible: true, case }
    }
}

/// The gains that enter the with-CSI allocation: both users plus the
/// strongest eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationGains {
    pub h1: f64,
    pub h2: f64,
    pub h_e1: f64,
    pub h_e2: f64,
    /// Number of AN columns.
    pub nv: usize,
}

/// A point `(ψ, α)` of the allocation plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub psi: f64,
    pub alpha: f64,
}

impl OperatingPoint {
    pub const fn new(psi: f64, alpha: f64) -> Self {
        Self { psi, alpha }
    }
}

/// Corner and stationary points of the feasible region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoints {
    /// Upper boundary at `ψ = O_bound`; absent without AN at the eavesdropper.
    pub a: Option<OperatingPoint>,
    /// Lower boundary at `ψ = 1`.
    pub b: OperatingPoint,
    /// Upper boundary at `ψ = 1`.
    pub c: OperatingPoint,
    /// Intersection of the two boundaries.
    pub d: OperatingPoint,
    /// Closed-form stationary point on the upper boundary, when it exists.
    pub g: Option<OperatingPoint>,
    /// The `ψ` at which the near user and the eavesdropper see equal SNR.
    pub o_bound: Option<f64>,
}

const REGION_TOLERANCE: f64 = 1e-9;
const FEASIBILITY_SLACK: f64 = 1e-12;

fn check_gains(h1: f64, h2: f64) -> Result<()> {
    if h1 > 0.0 && h2 > 0.0 && h1.is_finite() && h2.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("user gains must be positive, got h1={h1}, h2={h2}")))
    }
}

/// Upper `α` boundary (near-user SIC constraint) at `ψ`.
pub fn upper_boundary(psi: f64, h1: f64, cfg: &SystemConfig) -> f64 {
    let (p, n0, g1) = (cfg.p_linear(), cfg.n0_linear(), cfg.gamma1_th());
    (h1 * psi * p - n0 * g1) / (h1 * psi * p * (1.0 + g1))
}

/// Lower `α` boundary (far-user rate constraint) at `ψ`.
pub fn lower_boundary(psi: f64, h2: f64, cfg: &SystemConfig) -> f64 {
    cfg.n0_linear() * cfg.gamma2_th() / (h2 * psi * cfg.p_linear())
}

/// Smallest signal power `ψP` for which both rate constraints can hold.
pub fn min_signal_power(h1: f64, h2: f64, cfg: &SystemConfig) -> f64 {
    let (n0, g1, g2) = (cfg.n0_linear(), cfg.gamma1_th(), cfg.gamma2_th());
    (g1 + 1.0) * n0 * g2 / h2 + g1 * n0 / h1
}

fn feasible_at(psi: f64, h1: f64, h2: f64, cfg: &SystemConfig) -> bool {
    psi * cfg.p_linear() >= min_signal_power(h1, h2, cfg) * (1.0 - FEASIBILITY_SLACK)
}

/// Optimal `α` without AN: the largest value the near user's SIC
/// constraint allows.
pub fn solve_internal(h1: f64, h2: f64, cfg: &SystemConfig) -> Result<PowerSplit> {
    check_gains(h1, h2)?;
    if !feasible_at(1.0, h1, h2, cfg) {
        return Ok(PowerSplit::infeasible());
    }
    let point = OperatingPoint::new(1.0, upper_boundary(1.0, h1, cfg));
    Ok(PowerSplit::at(point, AllocationCase::Internal))
}

/// Optimal `α` for a prescribed signal share `ψ`.
pub fn solve_no_csi(h1: f64, h2: f64, psi: f64, cfg: &SystemConfig) -> Result<PowerSplit> {
    if !(psi > 0.0 && psi <= 1.0) {
        return Err(Error::domain(format!("psi must lie in (0, 1], got {psi}")));
    }
    check_gains(h1, h2)?;
    if !feasible_at(psi, h1, h2, cfg) {
        return Ok(PowerSplit::infeasible());
    }
    let point = OperatingPoint::new(psi, upper_boundary(psi, h1, cfg));
    Ok(PowerSplit::at(point, AllocationCase::NoCsi))
}

/// Whether `(ψ, α)` lies in the feasible region, up to a relative
/// tolerance of `1e-9` on each boundary.
pub fn in_region(psi: f64, alpha: f64, h1: f64, h2: f64, cfg: &SystemConfig) -> bool {
    if !(psi > 0.0 && psi <= 1.0 + REGION_TOLERANCE && alpha > 0.0 && alpha < 1.0) {
        return false;
    }
    let upper = upper_boundary(psi, h1, cfg);
    let lower = lower_boundary(psi, h2, cfg);
    alpha <= upper + REGION_TOLERANCE * upper.abs() && alpha >= lower - REGION_TOLERANCE * lower.abs()
}

fn eavesdropper_snr(psi: f64, alpha: f64, g: &AllocationGains, cfg: &SystemConfig) -> f64 {
    let p = cfg.p_linear();
    let n0 = cfg.n0_linear();
    let an = if g.nv == 0 { 0.0 } else { (1.0 - psi) * p * g.h_e2 / g.nv as f64 };
    g.h_e1 * alpha * psi * p / (an + n0)
}

/// The secrecy objective `f_R(ψ, α)` in bps/Hz: the rate gap between the
/// far user and the strongest eavesdropper of `x2`, clamped at 0, and 0
/// outside the feasible region.
pub fn secrecy_objective(psi: f64, alpha: f64, g: &AllocationGains, cfg: &SystemConfig) -> f64 {
    if !(g.h1 > 0.0 && g.h2 > 0.0) || !in_region(psi, alpha, g.h1, g.h2, cfg) {
        return 0.0;
    }
    let p = cfg.p_linear();
    let n0 = cfg.n0_linear();
    let g2x2 = g.h2 * alpha * psi * p / n0;
    let g1x2 = g.h1 * alpha * psi * p / n0;
    let ge = eavesdropper_snr(psi, alpha, g, cfg);
    ((1.0 + g2x2).log2() - (1.0 + g1x2.max(ge)).log2()).max(0.0)
}

/// Evaluates the closed-form corner points and `O_bound`.
pub fn region_points(g: &AllocationGains, cfg: &SystemConfig) -> Result<RegionPoints> {
    check_gains(g.h1, g.h2)?;
    let (p, n0, g1, g2) = (cfg.p_linear(), cfg.n0_linear(), cfg.gamma1_th(), cfg.gamma2_th());
    let (h1, h2, e1, e2) = (g.h1, g.h2, g.h_e1, g.h_e2);
    let nv = g.nv as f64;

    let b = OperatingPoint::new(1.0, n0 * g2 / (h2 * p));
    let c = OperatingPoint::new(1.0, (p * h1 - n0 * g1) / (h1 * p * (1.0 + g1)));
    let k = g2 * (1.0 + g1) * h1 + h2 * g1;
    let d = OperatingPoint::new(k * n0 / (h1 * h2 * p), g2 * h1 / k);

    if e2.is_nan() || e2 <= 0.0 || g.nv == 0 {
        return Ok(RegionPoints { a: None, b, c, d, g: None, o_bound: None });
    }

    let x = (h1 - e1) * nv * n0 + p * h1 * e2;
    let o_bound = x / (p * h1 * e2);
    let a = OperatingPoint::new(o_bound, ((nv * h1 - nv * e1 - e2 * g1) * n0 + p * h1 * e2) / x / (1.0 + g1));

    let s = h2
        * e1
        * e2
        * (1.0 + g1)
        * nv
        * ((-n0 * g1 + h1 * p) * e2 + n0 * h1 * nv)
        * (e2 * ((-n0 * g1 + h1 * p) * h2 + n0 * h1 * (1.0 + g1)) + n0 * h1 * (h2 - e1) * nv);
    let gx_den = h2 * p * e2 * h1 * ((-g1 - 1.0) * e2 + e1 * nv);
    let s2 = (1.0 + g1)
        * e1
        * h2
        * e2
        * nv
        * ((nv * n0 + p * e2) * h1 - n0 * e2 * g1)
        * (h1 * ((e2 * g1 + e2 + nv * h2 - e1 * nv) * n0 + p * h2 * e2) - n0 * g1 * h2 * e2);
    let g_point = if s >= 0.0 && s2 >= 0.0 && gx_den != 0.0 {
        let root = s.sqrt();
        let root2 = s2.sqrt();
        let gx =
            (-p * h1 * h2 * (1.0 + g1) * e2 * e2 - h2 * ((1.0 + g1) * h1 - e1 * g1) * nv * n0 * e2 + root) / gx_den;
        let gy_den =
            (1.0 + g1) * (-p * h1 * h2 * (1.0 + g1) * e2 * e2 - h2 * n0 * e2 * nv * ((h1 - e1) * g1 + h1) + root2);
        let gy =
            (-h2 * (1.0 + g1) * (-n0 * g1 + h1 * p) * e2 * e2 - n0 * h1 * h2 * e2 * (1.0 + g1) * nv + root2) / gy_den;
        (gx.is_finite() && gy.is_finite()).then_some(OperatingPoint::new(gx, gy))
    } else {
        None
    };

    Ok(RegionPoints { a: Some(a), b, c, d, g: g_point, o_bound: Some(o_bound) })
}

/// Golden-section search for the maximiser of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Objective along the upper boundary when the external eavesdropper
/// dominates: `(1 + γ2,x2) / (1 + γE,x2)` as a function of `ψ`.
pub fn upper_boundary_ratio(psi: f64, g: &AllocationGains, cfg: &SystemConfig) -> f64 {
    let alpha = upper_boundary(psi, g.h1, cfg);
    let g2x2 = g.h2 * alpha * psi * cfg.p_linear() / cfg.n0_linear();
    (1.0 + g2x2) / (1.0 + eavesdropper_snr(psi, alpha, g, cfg))
}

const STATIONARY_TOLERANCE: f64 = 1e-6;

/// The stationary point on the upper boundary within `[lo, 1]`: the closed
/// form when it agrees with a numeric search, otherwise the numeric one.
fn stationary_point(
    closed: Option<OperatingPoint>,
    lo: f64,
    g: &AllocationGains,
    cfg: &SystemConfig,
) -> Option<OperatingPoint> {
    let lo = lo.max(0.0);
    if lo >= 1.0 {
        return None;
    }
    let numeric = golden_max(|psi| upper_boundary_ratio(psi, g, cfg), lo, 1.0, 1e-12);
    let numeric_interior = numeric > lo + 1e-9 && numeric < 1.0 - 1e-9;
    let closed = closed.filter(|p| p.psi >= lo && p.psi <= 1.0);
    let numeric_point = OperatingPoint::new(numeric, upper_boundary(numeric, g.h1, cfg));
    match closed {
        Some(p) if (p.psi - numeric).abs() <= STATIONARY_TOLERANCE => Some(p),
        Some(p) => {
            log::warn!("closed-form stationary point psi={} disagrees with numeric optimum psi={numeric}", p.psi);
            Some(numeric_point)
        }
        None if numeric_interior => Some(numeric_point),
        None => None,
    }
}

/// Joint `(ψ, α)` allocation against the strongest known eavesdropper.
pub fn solve_with_csi(g: &AllocationGains, cfg: &SystemConfig) -> Result<PowerSplit> {
    check_gains(g.h1, g.h2)?;
    if !(g.h_e1 >= 0.0 && g.h_e2 >= 0.0) {
        return Err(Error::domain("eavesdropper gains must be non-negative"));
    }
    if !feasible_at(1.0, g.h1, g.h2, cfg) {
        return Ok(PowerSplit::infeasible());
    }
    let pts = region_points(g, cfg)?;
    let o_bound = match pts.o_bound {
        Some(o) if o < 1.0 => o,
        _ => return Ok(PowerSplit::at(pts.c, AllocationCase::CaseI)),
    };

    let d = OperatingPoint::new(pts.d.psi.min(1.0), pts.d.alpha);
    let (case, candidates) = if o_bound <= d.psi {
        let mut c = Vec::with_capacity(3);
        c.extend(stationary_point(pts.g, d.psi, g, cfg));
        c.push(d);
        c.push(pts.c);
        (AllocationCase::CaseII, c)
    } else {
        let a = pts.a.expect("A exists whenever O_bound does");
        let mut c = vec![a];
        c.extend(stationary_point(pts.g, o_bound, g, cfg));
        c.push(pts.c);
        (AllocationCase::CaseIII, c)
    };

    let mut best = candidates[0];
    let mut best_value = secrecy_objective(best.psi, best.alpha, g, cfg);
    for &p in &candidates[1..] {
        let v = secrecy_objective(p.psi, p.alpha, g, cfg);
        if v > best_value {
            best = p;
            best_value = v;
        }
    }
    Ok(PowerSplit::at(best, case))
}
