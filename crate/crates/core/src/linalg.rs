//! Small complex linear-algebra helpers shared by the beamforming code.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative singular-value threshold used for every rank decision.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Non-conjugating product `a^T b`.
pub fn bilinear(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian inner product `a^H b`.
pub fn hdot(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Polar angle of `z`, with the angle of zero defined as 0.
pub fn polar_angle(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_phase(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Numerical rank of the matrix whose columns are `columns`.
pub fn rank(columns: &[&CVector]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let rows = columns[0].len();
    let m = CMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    let sv = m.singular_values();
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * largest).count()
}

/// Orthonormal basis grown one vector at a time by Gram-Schmidt with one
/// re-orthogonalisation pass.
#[derive(Debug, Clone, Default)]
pub struct OrthonormalBasis {
    vectors: Vec<CVector>,
}

impl OrthonormalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Component of `v` Hermitian-orthogonal to the span of the basis.
    pub fn residual(&self, v: &CVector) -> CVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.vectors {
                let coeff = hdot(q, &r);
                r.axpy(-coeff, q, Complex64::new(1.0, 0.0));
            }
        }
        r
    }

    /// Add `v` to the basis if it is numerically outside the current span.
    /// Returns the new unit vector, or `None` if `v` was rejected.
    pub fn extend(&mut self, v: &CVector) -> Option<CVector> {
        let scale = v.norm();
        if scale == 0.0 {
            return None;
        }
        let r = self.residual(v);
        let norm = r.norm();
        if norm <= RANK_TOLERANCE * scale {
            return None;
        }
        let q = r.unscale(norm);
        self.vectors.push(q.clone());
        Some(q)
    }
}
