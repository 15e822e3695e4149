//! Artificial-noise beamforming in the null space of both users.
//!
//! Orthogonality to a user is bilinear, `c^T t = 0` with
//! `c = (h_RU^H Φ H_RS)^T`. It is enforced by working Hermitian-orthogonally
//! to `c*`, which lets every construction reuse plain Gram-Schmidt.

use rand::Rng;

use crate::beamforming::RisConfig;
use crate::error::{Error, Result};
use crate::linalg::{bilinear, rank, CMatrix, CVector, OrthonormalBasis, RANK_TOLERANCE};
use crate::model::{cascade, ChannelSet, SystemConfig};
use crate::rng::complex_normal;

/// How the AN matrix was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnMode {
    /// No AN directions (for example `Ns = 2`).
    None,
    /// Random null-space directions, no eavesdropper CSI.
    Blind,
    /// One column per eavesdropper, `M <= Ns - 2`.
    CsiCase1,
    /// `Ns - 2` columns steered at a selected subset of eavesdroppers.
    CsiCase2,
}

/// The noise beamforming matrix `T` (`Ns x Nv`, unit columns).
#[derive(Debug, Clone, PartialEq)]
pub struct AnBeamformer {
    pub t: CMatrix,
    pub mode: AnMode,
    /// Eavesdropper index each column is steered at (CSI modes only).
    pub selected: Vec<usize>,
    /// Number of CSI columns replaced by a blind column because the
    /// eavesdropper direction lay in the users' span.
    pub fallback_columns: usize,
}

impl AnBeamformer {
    pub fn empty(ns: usize) -> Self {
        Self { t: CMatrix::zeros(ns, 0), mode: AnMode::None, selected: Vec::new(), fallback_columns: 0 }
    }

    pub fn nv(&self) -> usize {
        self.t.ncols()
    }

    pub fn column(&self, i: usize) -> CVector {
        self.t.column(i).into_owned()
    }
}

fn from_columns(ns: usize, columns: &[CVector]) -> CMatrix {
    CMatrix::from_fn(ns, columns.len(), |i, j| columns[j][i])
}

fn user_directions(ch: &ChannelSet, ris: &RisConfig) -> (CVector, CVector) {
    (cascade(&ch.h_ru1, &ris.phases, &ch.h_rs), cascade(&ch.h_ru2, &ris.phases, &ch.h_rs))
}

/// Orthonormal basis of `span{c1*, c2*}`; its complement is the AN null space.
fn conjugate_basis(c1: &CVector, c2: &CVector) -> OrthonormalBasis {
    let mut basis = OrthonormalBasis::new();
    basis.extend(&c1.map(|z| z.conj()));
    basis.extend(&c2.map(|z| z.conj()));
    basis
}

fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_normal(rng, 1.0))
}

const MAX_RESAMPLES: usize = 64;

fn check_ns(cfg: &SystemConfig, ch: &ChannelSet, ris: &RisConfig) -> Result<()> {
    ch.check_shapes()?;
    if ch.ns() != cfg.ns {
        return Err(Error::DimensionMismatch { what: "BS antenna count", expected: cfg.ns, actual: ch.ns() });
    }
    if ris.w.len() != cfg.ns || ris.phases.len() != ch.nr() {
        return Err(Error::DimensionMismatch { what: "RIS configuration size", expected: cfg.ns, actual: ris.w.len() });
    }
    Ok(())
}

/// Blind AN: `Ns - 2` orthonormal columns spanning random directions of the
/// users' null space.
pub fn algorithm2_blind<R: Rng + ?Sized>(
    ch: &ChannelSet,
    ris: &RisConfig,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<AnBeamformer> {
    check_ns(cfg, ch, ris)?;
    let ns = cfg.ns;
    if ns < 2 {
        return Err(Error::domain("AN design needs at least 2 BS antennas"));
    }
    if ns == 2 {
        return Ok(AnBeamformer::empty(ns));
    }
    let nv = ns - 2;
    let (c1, c2) = user_directions(ch, ris);
    let base_rank = rank(&[&c1, &c2]);

    for _ in 0..MAX_RESAMPLES {
        let p: Vec<CVector> = (0..nv).map(|_| random_vector(rng, ns)).collect();
        let mut all: Vec<&CVector> = vec![&c1, &c2];
        all.extend(p.iter());
        if rank(&all) != base_rank + nv {
            continue;
        }
        let mut basis = conjugate_basis(&c1, &c2);
        let columns: Option<Vec<CVector>> = p.iter().map(|v| basis.extend(v)).collect();
        if let Some(columns) = columns {
            return Ok(AnBeamformer {
                t: from_columns(ns, &columns),
                mode: AnMode::Blind,
                selected: Vec::new(),
                fallback_columns: 0,
            });
        }
    }
    Err(Error::Degenerate("could not draw independent AN directions".into()))
}

/// Orders eavesdroppers by their signal leakage `|d_i^T w|²`, strongest
/// first, keeping index order on ties.
pub fn leakage_order(directions: &[CVector], w: &CVector) -> Vec<usize> {
    let leak: Vec<f64> = directions.iter().map(|d| bilinear(d, w).norm_sqr()).collect();
    let mut order: Vec<usize> = (0..directions.len()).collect();
    order.sort_by(|&a, &b| leak[b].total_cmp(&leak[a]));
    order
}

/// Picks `nv` eavesdroppers in leakage order, skipping directions that add
/// no rank to `{c1, c2, chosen...}`. If the directions span fewer than `nv`
/// new dimensions, the remaining slots are filled in leakage order.
fn select_case2(c1: &CVector, c2: &CVector, directions: &[CVector], order: &[usize], nv: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(nv);
    let mut current = rank(&[c1, c2]);
    for &i in order {
        if chosen.len() == nv {
            break;
        }
        let mut cols: Vec<&CVector> = vec![c1, c2];
        cols.extend(chosen.iter().map(|&k| &directions[k]));
        cols.push(&directions[i]);
        let r = rank(&cols);
        if r > current {
            current = r;
            chosen.push(i);
        }
    }
    for &i in order {
        if chosen.len() == nv {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    chosen
}

/// AN steered at known eavesdroppers.
///
/// Each column is `ω*/‖ω‖`, where `ω` is the part of the eavesdropper
/// direction Hermitian-orthogonal to the users' directions; this maximises
/// `|d^T t|` over unit null-space vectors.
pub fn algorithm3_csi<R: Rng + ?Sized>(
    ch: &ChannelSet,
    ris: &RisConfig,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<AnBeamformer> {
    check_ns(cfg, ch, ris)?;
    let ns = cfg.ns;
    let m = ch.m();
    if m == 0 {
        return Err(Error::domain("CSI-based AN needs at least one eavesdropper"));
    }
    if ns < 3 {
        return Err(Error::domain("CSI-based AN needs at least 3 BS antennas"));
    }
    let (c1, c2) = user_directions(ch, ris);
    let directions: Vec<CVector> = ch.h_re.iter().map(|h| cascade(h, &ris.phases, &ch.h_rs)).collect();

    let (mode, selected) = if m <= ns - 2 {
        (AnMode::CsiCase1, (0..m).collect::<Vec<_>>())
    } else {
        let order = leakage_order(&directions, &ris.w);
        (AnMode::CsiCase2, select_case2(&c1, &c2, &directions, &order, ns - 2))
    };

    let mut users = OrthonormalBasis::new();
    users.extend(&c1);
    users.extend(&c2);
    let null = conjugate_basis(&c1, &c2);

    let mut fallback_columns = 0;
    let mut columns = Vec::with_capacity(selected.len());
    for &i in &selected {
        let d = &directions[i];
        let omega = users.residual(d);
        let norm = omega.norm();
        if norm > RANK_TOLERANCE * d.norm() {
            columns.push(omega.map(|z| z.conj() / norm));
        } else {
            fallback_columns += 1;
            columns.push(blind_column(&null, ns, rng)?);
        }
    }
    Ok(AnBeamformer { t: from_columns(ns, &columns), mode, selected, fallback_columns })
}

fn blind_column<R: Rng + ?Sized>(null: &OrthonormalBasis, ns: usize, rng: &mut R) -> Result<CVector> {
    for _ in 0..MAX_RESAMPLES {
        let mut basis = null.clone();
        if let Some(t) = basis.extend(&random_vector(rng, ns)) {
            return Ok(t);
        }
    }
    Err(Error::Degenerate("could not draw a null-space direction".into()))
}

/// Received AN power at each user and at each eavesdropper.
#[derive(Debug, Clone, PartialEq)]
pub struct AnLeakage {
    pub users: [f64; 2],
    pub eavesdroppers: Vec<f64>,
}

/// Evaluates `((1 - ψ)P/Nv)·‖h^H Φ H_RS T‖²` at every receiver.
pub fn an_leakage(
    ch: &ChannelSet,
    ris: &RisConfig,
    an: &AnBeamformer,
    psi: f64,
    cfg: &SystemConfig,
) -> Result<AnLeakage> {
    if !(psi > 0.0 && psi <= 1.0) {
        return Err(Error::domain(format!("psi must lie in (0, 1], got {psi}")));
    }
    let nv = an.nv();
    if nv == 0 {
        if psi < 1.0 {
            return Err(Error::domain("AN power allocated but no AN directions"));
        }
        return Ok(AnLeakage { users: [0.0, 0.0], eavesdroppers: vec![0.0; ch.m()] });
    }
    let per_column = (1.0 - psi) * cfg.p_linear() / nv as f64;
    let power = |h: &CVector| {
        let c = cascade(h, &ris.phases, &ch.h_rs);
        let g: f64 = (0..nv).map(|k| bilinear(&c, &an.column(k)).norm_sqr()).sum();
        per_column * g
    };
    Ok(AnLeakage { users: [power(&ch.h_ru1), power(&ch.h_ru2)], eavesdroppers: ch.h_re.iter().map(power).collect() })
}
