//! Seeded random inputs for property checks.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::C64;

/// Largest sample radius in the ball; keeps conformal factors finite.
pub const MAX_RADIUS: f64 = 0.995;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// Uniform point of the ball of the given radius (capped at
    /// [`MAX_RADIUS`]), by rejection from the cube.
    pub fn ball_point(&mut self, n: usize, radius: f64) -> Vec<f64> {
        let r = radius.min(MAX_RADIUS);
        loop {
            let v: Vec<f64> = (0..n).map(|_| self.uniform(-1.0, 1.0)).collect();
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 <= 1.0 {
                return v.into_iter().map(|x| x * r).collect();
            }
        }
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v = self.ball_point(n, 1.0);
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nrm > 0.1 {
                return v.into_iter().map(|x| x / nrm).collect();
            }
        }
    }

    pub fn spinor(&mut self, dim: usize) -> Vec<C64> {
        (0..dim)
            .map(|_| C64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)))
            .collect()
    }

    pub fn unit_spinor(&mut self, dim: usize) -> Vec<C64> {
        let s = self.spinor(dim);
        let nrm = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        s.into_iter().map(|z| z / nrm).collect()
    }

    /// Integer in `[lo, hi]`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_bounded() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..50 {
            let p = a.ball_point(4, 0.9);
            assert_eq!(p, b.ball_point(4, 0.9));
            assert!(p.iter().map(|x| x * x).sum::<f64>() <= 0.81 + 1e-15);
        }
        let u = a.unit_vector(3);
        assert!((u.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
