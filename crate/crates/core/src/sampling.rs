//! Reproducible sample sets: seeded RNGs and Cranley–Patterson rotated
//! Halton sequences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// Quasi-random points in `[0,1)^dim`, rotated by a seeded random shift.
#[derive(Clone, Debug)]
pub struct Halton {
    dim: usize,
    shift: Vec<f64>,
    index: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton sequence supports up to {} dimensions", PRIMES.len());
        let mut r = rng(seed);
        Self { dim, shift: (0..dim).map(|_| r.gen::<f64>()).collect(), index: 1 }
    }
}

impl Iterator for Halton {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let i = self.index;
        self.index += 1;
        Some((0..self.dim).map(|k| (radical_inverse(i, PRIMES[k]) + self.shift[k]).fract()).collect())
    }
}

/// `count` quasi-random points in the box `[lo, hi]^dim`.
pub fn box_points(dim: usize, lo: f64, hi: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    Halton::new(dim, seed).take(count).map(|p| p.into_iter().map(|x| lo + (hi - lo) * x).collect()).collect()
}

/// `count` quasi-random points in the closed euclidean ball of `radius`.
pub fn ball_points(dim: usize, radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    Halton::new(dim, seed)
        .map(|p| p.into_iter().map(|x| radius * (2.0 * x - 1.0)).collect::<Vec<f64>>())
        .filter(|p| p.iter().map(|x| x * x).sum::<f64>() <= radius * radius)
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_in_range() {
        let a: Vec<_> = Halton::new(3, 7).take(100).collect();
        let b: Vec<_> = Halton::new(3, 7).take(100).collect();
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }

    #[test]
    fn ball_points_inside() {
        let p = ball_points(3, 1.0, 500, 1);
        assert_eq!(p.len(), 500);
        assert!(p.iter().all(|x| x.iter().map(|v| v * v).sum::<f64>() <= 1.0));
    }
}
