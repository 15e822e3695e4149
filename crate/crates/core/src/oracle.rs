//! Brute-force reference solutions used by the test suites.
//!
//! Nothing here calls into the optimised code paths: every oracle re-derives
//! its quantity from the raw channel entries or the raw SNR formulas.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{CMatrix, CVector};
use crate::model::SystemConfig;
use crate::power::AllocationGains;
use crate::rng::complex_normal;

/// `|h^H Φ H w|²` by explicit loops.
pub fn naive_gain(h: &CVector, phases: &[f64], h_rs: &CMatrix, w: &CVector) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..h.len() {
        let phase = Complex64::new(phases[n].cos(), phases[n].sin());
        for j in 0..w.len() {
            acc += h[n].conj() * phase * h_rs[(n, j)] * w[j];
        }
    }
    acc.norm_sqr()
}

/// Maximum of `max_w |h^H Φ H w|²` over a uniform grid of `steps` values
/// per phase. The first phase is pinned to 0, which loses nothing because
/// a common rotation of all phases does not change the optimum.
///
/// Cost is `steps^(Nr-1)`, so this is meant for `Nr <= 3`.
pub fn phase_grid_max(h: &CVector, h_rs: &CMatrix, steps: usize) -> f64 {
    let nr = h.len();
    let ns = h_rs.ncols();
    let rows: Vec<Vec<Complex64>> = (0..nr).map(|n| (0..ns).map(|j| h[n].conj() * h_rs[(n, j)]).collect()).collect();
    let unit: Vec<Complex64> =
        (0..steps).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / steps as f64)).collect();
    let mut best = 0.0f64;
    let mut idx = vec![0usize; nr.saturating_sub(1)];
    let mut c = vec![Complex64::new(0.0, 0.0); ns];
    loop {
        c.copy_from_slice(&rows[0]);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..ns {
                c[j] += unit[i] * rows[k + 1][j];
            }
        }
        best = best.max(c.iter().map(|z| z.norm_sqr()).sum());
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < steps {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn boundary_a(psi: f64, h1: f64, p: f64, n0: f64, g1: f64) -> f64 {
    (h1 * psi * p - n0 * g1) / (h1 * psi * p * (1.0 + g1))
}

fn boundary_b(psi: f64, h2: f64, p: f64, n0: f64, g2: f64) -> f64 {
    n0 * g2 / (h2 * psi * p)
}

/// Best `α` on a grid of step `1/n` for a fixed `ψ`, maximising
/// `(h2αψP + N0)/(h1αψP + N0)` subject to both rate constraints.
pub fn alpha_grid(h1: f64, h2: f64, psi: f64, cfg: &SystemConfig, n: usize) -> Option<f64> {
    let (p, n0) = (cfg.p_linear(), cfg.n0_linear());
    let (g1, g2) = (cfg.gamma1_th(), cfg.gamma2_th());
    let mut best: Option<(f64, f64)> = None;
    for k in 1..n {
        let alpha = k as f64 / n as f64;
        let sp = alpha * psi * p;
        let sinr1 = h1 * (1.0 - alpha) * psi * p / (h1 * sp + n0);
        let snr2 = h2 * sp / n0;
        if sinr1 < g1 || snr2 < g2 {
            continue;
        }
        let value = (h2 * sp + n0) / (h1 * sp + n0);
        if best.is_none_or(|(_, v)| value > v) {
            best = Some((alpha, value));
        }
    }
    best.map(|(a, _)| a)
}

/// Secrecy objective recomputed from the SNR definitions, with the
/// region given by the two rate constraints.
pub fn objective(psi: f64, alpha: f64, g: &AllocationGains, cfg: &SystemConfig) -> Option<f64> {
    let (p, n0) = (cfg.p_linear(), cfg.n0_linear());
    let (g1, g2) = (cfg.gamma1_th(), cfg.gamma2_th());
    let sp = alpha * psi * p;
    let sinr1 = g.h1 * (1.0 - alpha) * psi * p / (g.h1 * sp + n0);
    let snr2 = g.h2 * sp / n0;
    if sinr1 < g1 || snr2 < g2 {
        return None;
    }
    let an = if g.nv == 0 { 0.0 } else { (1.0 - psi) * p * g.h_e2 / g.nv as f64 };
    let eve = (g.h1 * sp / n0).max(g.h_e1 * sp / (an + n0));
    Some(((1.0 + snr2) / (1.0 + eve)).log2().max(0.0))
}

/// Maximum of the secrecy objective over an `n x n` grid of
/// `(ψ, α) ∈ (0, 1] x (0, 1)`, skipping infeasible cells.
pub fn grid_2d(g: &AllocationGains, cfg: &SystemConfig, n: usize) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 1..=n {
        let psi = i as f64 / n as f64;
        for k in 1..n {
            let alpha = k as f64 / n as f64;
            if let Some(v) = objective(psi, alpha, g, cfg) {
                if best.is_none_or(|(b, _, _)| v > b) {
                    best = Some((v, psi, alpha));
                }
            }
        }
    }
    best
}

/// The boundary-restricted with-noise objective, evaluated along the
/// near-user boundary at `ψ`.
pub fn boundary_ratio(psi: f64, g: &AllocationGains, cfg: &SystemConfig) -> f64 {
    let (p, n0) = (cfg.p_linear(), cfg.n0_linear());
    let alpha = boundary_a(psi, g.h1, p, n0, cfg.gamma1_th());
    let an = (1.0 - psi) * p * g.h_e2 / g.nv as f64;
    (1.0 + g.h2 * alpha * psi * p / n0) / (1.0 + g.h_e1 * alpha * psi * p / (an + n0))
}

/// Maximiser of [`boundary_ratio`] on `[lo, hi]`: a dense scan followed
/// by golden-section refinement around the best scan point.
pub fn boundary_maximiser(g: &AllocationGains, cfg: &SystemConfig, lo: f64, hi: f64) -> f64 {
    let n = 20_000;
    let step = (hi - lo) / n as f64;
    let f = |x: f64| boundary_ratio(x, g, cfg);
    let mut best = lo;
    let mut best_v = f(lo);
    for k in 1..=n {
        let x = lo + step * k as f64;
        let v = f(x);
        if v > best_v {
            best = x;
            best_v = v;
        }
    }
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-13 {
        let x1 = b - r * (b - a);
        let x2 = a + r * (b - a);
        if f(x1) < f(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    0.5 * (a + b)
}

/// Lower boundary used by oracle checks on corner points.
pub fn lower_boundary(psi: f64, h2: f64, cfg: &SystemConfig) -> f64 {
    boundary_b(psi, h2, cfg.p_linear(), cfg.n0_linear(), cfg.gamma2_th())
}

/// Upper boundary used by oracle checks on corner points.
pub fn upper_boundary(psi: f64, h1: f64, cfg: &SystemConfig) -> f64 {
    boundary_a(psi, h1, cfg.p_linear(), cfg.n0_linear(), cfg.gamma1_th())
}

/// Orthonormal basis of `{t : c^T t = 0 for every c}` from an SVD.
pub fn bilinear_null_basis(cs: &[&CVector]) -> Vec<CVector> {
    let ns = cs[0].len();
    // Rows c^T padded to a square matrix so the SVD returns a full V.
    let m = CMatrix::from_fn(ns, ns, |i, j| if i < cs.len() { cs[i][j] } else { Complex64::new(0.0, 0.0) });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let largest = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    (0..ns)
        .filter(|&k| svd.singular_values[k] <= 1e-10 * largest)
        .map(|k| v_t.row(k).transpose().map(|z| z.conj()))
        .collect()
}

/// Largest `|d^T t|` over `samples` random unit vectors of the null space.
pub fn null_space_search<R: Rng + ?Sized>(basis: &[CVector], d: &CVector, samples: usize, rng: &mut R) -> f64 {
    let mut best = 0.0f64;
    for _ in 0..samples {
        let mut t = CVector::zeros(d.len());
        for b in basis {
            t += b * complex_normal(rng, 1.0);
        }
        let norm = t.norm();
        if norm == 0.0 {
            continue;
        }
        let value: Complex64 = d.iter().zip(t.iter()).map(|(x, y)| x * y).sum();
        best = best.max(value.norm() / norm);
    }
    best
}

/// Which branch of the with-CSI case analysis an instance falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    I,
    II,
    III,
}

/// Branch of an instance from the raw definitions, or `None` when the
/// region is empty.
pub fn classify(g: &AllocationGains, cfg: &SystemConfig) -> Option<CaseKind> {
    let (p, n0) = (cfg.p_linear(), cfg.n0_linear());
    let (g1, g2) = (cfg.gamma1_th(), cfg.gamma2_th());
    let d_x = (g2 * (1.0 + g1) * g.h1 + g.h2 * g1) * n0 / (g.h1 * g.h2 * p);
    if d_x > 1.0 {
        return None;
    }
    if g.h_e2 <= 0.0 || g.nv == 0 {
        return Some(CaseKind::I);
    }
    let nv = g.nv as f64;
    let o = ((g.h1 - g.h_e1) * nv * n0 + p * g.h1 * g.h_e2) / (p * g.h1 * g.h_e2);
    Some(if o >= 1.0 {
        CaseKind::I
    } else if o <= d_x {
        CaseKind::II
    } else {
        CaseKind::III
    })
}

/// Draws feasible allocation instances with `h2 > h1` until one lands in
/// the requested branch.
pub fn random_gains<R: Rng + ?Sized>(rng: &mut R, kind: CaseKind, cfg: &SystemConfig) -> AllocationGains {
    let log_uniform = |rng: &mut R, lo: f64, hi: f64| (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp();
    loop {
        let h1 = log_uniform(rng, 0.01, 1.0);
        let g = AllocationGains {
            h1,
            h2: h1 * log_uniform(rng, 1.2, 50.0),
            h_e1: h1 * log_uniform(rng, 0.3, 30.0),
            h_e2: log_uniform(rng, 1e-3, 10.0),
            nv: rng.random_range(1..=14),
        };
        if classify(&g, cfg) == Some(kind) {
            return g;
        }
    }
}
