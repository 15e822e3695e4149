use rand::Rng;

use super::config::{LosPhase, SystemConfig};
use super::geometry::Geometry;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::rng::complex_normal;
use num_complex::Complex64;

/// Per-entry variance of each link's generating distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkVariances {
    pub h_rs: f64,
    pub h_ru1: f64,
    pub h_ru2: f64,
    pub h_re: Vec<f64>,
}

/// One realisation of every channel in the system.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// BS to RIS, `Nr x Ns`.
    pub h_rs: CMatrix,
    /// RIS to the near user.
    pub h_ru1: CVector,
    /// RIS to the far user.
    pub h_ru2: CVector,
    /// RIS to each external eavesdropper.
    pub h_re: Vec<CVector>,
    pub variances: LinkVariances,
}

impl ChannelSet {
    pub fn nr(&self) -> usize {
        self.h_rs.nrows()
    }

    pub fn ns(&self) -> usize {
        self.h_rs.ncols()
    }

    pub fn m(&self) -> usize {
        self.h_re.len()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let nr = self.nr();
        let vectors = std::iter::once(&self.h_ru1).chain(std::iter::once(&self.h_ru2)).chain(self.h_re.iter());
        for v in vectors {
            if v.len() != nr {
                return Err(Error::DimensionMismatch { what: "RIS channel length", expected: nr, actual: v.len() });
            }
        }
        Ok(())
    }
}

/// The cascaded direction `c = (h^H Φ H)^T` seen by a receiver with RIS
/// channel `h`, so that the received gain is `|c^T w|²`.
pub fn cascade(h: &CVector, phases: &[f64], h_rs: &CMatrix) -> CVector {
    let weights: Vec<Complex64> =
        h.iter().zip(phases).map(|(hn, &phi)| hn.conj() * Complex64::from_polar(1.0, phi)).collect();
    CVector::from_fn(h_rs.ncols(), |j, _| weights.iter().zip(h_rs.column(j).iter()).map(|(a, b)| a * b).sum())
}

struct Rician {
    los: f64,
    nlos_var: f64,
    phase: LosPhase,
}

impl Rician {
    fn new(cfg: &SystemConfig) -> Self {
        let k = cfg.k_factor;
        Self { los: (k / (k + 1.0)).sqrt(), nlos_var: 1.0 / (k + 1.0), phase: cfg.los_phase }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> Complex64 {
        let los = match self.phase {
            LosPhase::Aligned => Complex64::new(self.los, 0.0),
            LosPhase::Uniform => Complex64::from_polar(self.los, std::f64::consts::TAU * rng.random::<f64>()),
        };
        (los + complex_normal(rng, self.nlos_var)) * scale
    }

    /// Entry variance before path loss.
    fn variance(&self) -> f64 {
        match self.phase {
            LosPhase::Aligned => self.nlos_var,
            LosPhase::Uniform => self.los * self.los + self.nlos_var,
        }
    }
}

fn path_gain(d: f64, eta: f64) -> f64 {
    d.powf(-eta / 2.0)
}

/// Draws every channel for the given geometry.
///
/// Entries are drawn in the order `H_RS` (row-major), `h_RU1`, `h_RU2`,
/// then each eavesdropper, so geometries that differ only in the number
/// of eavesdroppers share all common channels.
pub fn sample_channels<R: Rng + ?Sized>(cfg: &SystemConfig, geo: &Geometry, rng: &mut R) -> Result<ChannelSet> {
    cfg.validate()?;
    geo.validate()?;
    let eta = cfg.path_loss_exponent;
    let rician = Rician::new(cfg);
    let base_var = rician.variance();

    let a_rs = path_gain(geo.d_bs_ris(), eta);
    let mut h_rs = CMatrix::zeros(cfg.nr, cfg.ns);
    for i in 0..cfg.nr {
        for j in 0..cfg.ns {
            h_rs[(i, j)] = rician.draw(rng, a_rs);
        }
    }
    let mut vector = |d: f64| {
        let a = path_gain(d, eta);
        (CVector::from_fn(cfg.nr, |_, _| rician.draw(rng, a)), a * a * base_var)
    };
    let (h_ru1, v1) = vector(geo.d_ris_u1());
    let (h_ru2, v2) = vector(geo.d_ris_u2());
    let (h_re, v_re): (Vec<_>, Vec<_>) =
        (0..geo.eavesdroppers.len()).map(|i| vector(geo.d_ris_eavesdropper(i))).unzip();

    Ok(ChannelSet {
        h_rs,
        h_ru1,
        h_ru2,
        h_re,
        variances: LinkVariances { h_rs: a_rs * a_rs * base_var, h_ru1: v1, h_ru2: v2, h_re: v_re },
    })
}

/// Models estimated CSI `ĥ = h + e` with `e ~ CN(0, t²σ_h²)` per entry.
///
/// The same standard-normal draws are used for every `t`, so a sweep over
/// `t` with a fixed stream scales one error realisation.
pub fn perturb_csi<R: Rng + ?Sized>(ch: &ChannelSet, t: f64, rng: &mut R) -> Result<ChannelSet> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("CSI error ratio must be non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(ch.clone());
    }
    let mut out = ch.clone();
    let mut noisy = |v: &mut Complex64, var: f64| {
        *v += complex_normal(rng, 1.0) * (t * var.sqrt());
    };
    let (nr, ns) = out.h_rs.shape();
    for i in 0..nr {
        for j in 0..ns {
            noisy(&mut out.h_rs[(i, j)], ch.variances.h_rs);
        }
    }
    out.h_ru1.iter_mut().for_each(|v| noisy(v, ch.variances.h_ru1));
    out.h_ru2.iter_mut().for_each(|v| noisy(v, ch.variances.h_ru2));
    for (h, &var) in out.h_re.iter_mut().zip(&ch.variances.h_re) {
        h.iter_mut().for_each(|v| noisy(v, var));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn cfg(ns: usize, nr: usize) -> SystemConfig {
        SystemConfig { ns, nr, ..Default::default() }
    }

    #[test]
    fn shapes_follow_config() {
        let geo = Geometry::on_axis(0.5, 0.5, 2.0, 3.0, &[1.0, 1.2]);
        let ch = sample_channels(&cfg(4, 6), &geo, &mut substream(1, &[])).unwrap();
        assert_eq!(ch.h_rs.shape(), (6, 4));
        assert_eq!(ch.h_ru1.len(), 6);
        assert_eq!(ch.m(), 2);
        ch.check_shapes().unwrap();
    }

    #[test]
    fn unit_distance_has_unit_weight() {
        assert_eq!(path_gain(1.0, 2.0), 1.0);
        assert_eq!(path_gain(2.0, 2.0), 0.5);
        assert_eq!(path_gain(4.0, 4.0), 1.0 / 16.0);
    }

    #[test]
    fn entry_moments_at_distance_two() {
        // BS-RIS distance 2: RIS at (0, 2).
        let geo = Geometry::on_axis(0.0, 2.0, 1.0, 3.0, &[]);
        let c = SystemConfig { ns: 1, nr: 1, ..Default::default() };
        let mut rng = substream(42, &[]);
        let n = 100_000;
        let samples: Vec<Complex64> =
            (0..n).map(|_| sample_channels(&c, &geo, &mut rng).unwrap().h_rs[(0, 0)]).collect();
        let mean = samples.iter().sum::<Complex64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64;
        let want_mean = 0.5 * (10.0f64 / 11.0).sqrt();
        assert!((mean.re - want_mean).abs() < 0.02 * want_mean, "{mean}");
        assert!(mean.im.abs() < 0.02 * want_mean);
        let want_var = 0.25 / 11.0;
        assert!((var - want_var).abs() < 0.02 * want_var, "{var}");
    }

    #[test]
    fn uniform_los_is_zero_mean_with_unit_power() {
        let geo = Geometry::on_axis(0.0, 1.0, 1.0, 3.0, &[]);
        let c = SystemConfig { ns: 1, nr: 1, los_phase: LosPhase::Uniform, ..Default::default() };
        let mut rng = substream(43, &[]);
        let n = 50_000;
        let samples: Vec<Complex64> =
            (0..n).map(|_| sample_channels(&c, &geo, &mut rng).unwrap().h_rs[(0, 0)]).collect();
        let mean = samples.iter().sum::<Complex64>() / n as f64;
        let power = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
        assert!(mean.norm() < 0.02);
        assert!((power - 1.0).abs() < 0.02);
        let ch = sample_channels(&c, &geo, &mut rng).unwrap();
        assert_eq!(ch.variances.h_rs, 1.0);
    }

    #[test]
    fn zero_error_ratio_is_identity() {
        let geo = Geometry::on_axis(0.5, 0.5, 2.0, 3.0, &[1.0]);
        let ch = sample_channels(&cfg(3, 4), &geo, &mut substream(2, &[])).unwrap();
        assert_eq!(perturb_csi(&ch, 0.0, &mut substream(3, &[])).unwrap(), ch);
        assert!(perturb_csi(&ch, -0.1, &mut substream(3, &[])).is_err());
    }

    #[test]
    fn error_variance_scales_with_ratio() {
        let geo = Geometry::on_axis(0.5, 0.5, 2.0, 3.0, &[]);
        let c = cfg(100, 100);
        let ch = sample_channels(&c, &geo, &mut substream(4, &[])).unwrap();
        for t in [0.1, 1.0] {
            let est = perturb_csi(&ch, t, &mut substream(5, &[])).unwrap();
            let diff = &est.h_rs - &ch.h_rs;
            let var = diff.iter().map(|d| d.norm_sqr()).sum::<f64>() / diff.len() as f64;
            let want = t * t * ch.variances.h_rs;
            assert!((var - want).abs() < 0.02 * want, "t={t}: {var} vs {want}");
        }
    }

    #[test]
    fn cascade_matches_matrix_product() {
        let geo = Geometry::on_axis(0.5, 0.5, 2.0, 3.0, &[]);
        let ch = sample_channels(&cfg(3, 5), &geo, &mut substream(6, &[])).unwrap();
        let phases = [0.1, 1.0, 2.0, 3.0, 4.0];
        let phi =
            CMatrix::from_diagonal(&CVector::from_iterator(5, phases.iter().map(|&p| Complex64::from_polar(1.0, p))));
        let want = (ch.h_ru2.adjoint() * phi * &ch.h_rs).transpose();
        let got = cascade(&ch.h_ru2, &phases, &ch.h_rs);
        assert!((got - want).norm() < 1e-12);
    }
}
