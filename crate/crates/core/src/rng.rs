//! Seeded random streams.
//!
//! A Monte Carlo run has a single master seed. Every trial (and every
//! purpose within a trial) gets its own ChaCha stream whose key is derived
//! from `(seed, path...)`, so the draws seen by trial `i` never depend on
//! how many other trials ran before it or on which thread they ran.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub type SimRng = rand_chacha::ChaCha8Rng;

/// Sub-stream labels used by the Monte Carlo driver.
pub mod stream {
    pub const GEOMETRY: u64 = 1;
    pub const CHANNELS: u64 = 2;
    pub const CSI_ERROR: u64 = 3;
    pub const SCHEME: u64 = 4;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent generator from a master seed and a label path.
pub fn substream(seed: u64, path: &[u64]) -> SimRng {
    let mut state = seed;
    for &label in path {
        state = splitmix64(&mut state) ^ label.wrapping_mul(0xD1B5_4A32_D192_ED03);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    SimRng::from_seed(key)
}

/// Circularly-symmetric complex Gaussian sample with the given variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a = substream(7, &[3, stream::CHANNELS]).next_u64();
        let b = substream(7, &[3, stream::CHANNELS]).next_u64();
        let c = substream(7, &[4, stream::CHANNELS]).next_u64();
        let d = substream(7, &[3, stream::GEOMETRY]).next_u64();
        let e = substream(8, &[3, stream::CHANNELS]).next_u64();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_ne!(a, e);
    }

    #[test]
    fn complex_normal_moments() {
        let mut rng = substream(1, &[]);
        let n = 200_000;
        let (mut mean, mut power) = (Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let z = complex_normal(&mut rng, 2.0);
            mean += z;
            power += z.norm_sqr();
        }
        mean /= n as f64;
        power /= n as f64;
        assert!(mean.norm() < 0.01);
        assert!((power - 2.0).abs() < 0.02);
    }
}
