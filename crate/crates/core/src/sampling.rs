//! Seeded random sampling helpers. Every randomized routine takes an explicit seed.

use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a labelled sub-task.
pub fn sub_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ (h >> 31)
}

pub fn uniform<T: Real>(rng: &mut SeededRng, lo: f64, hi: f64) -> T {
    T::lit(rng.gen_range(lo..=hi))
}

pub fn uniform_vec<T: Real>(rng: &mut SeededRng, n: usize, radius: f64) -> Vec<T> {
    (0..n).map(|_| uniform(rng, -radius, radius)).collect()
}

pub fn normal(rng: &mut SeededRng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn normal_vec<T: Real>(rng: &mut SeededRng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::lit(normal(rng))).collect()
}

/// Uniform point on the probability simplex.
pub fn simplex_point<T: Real>(rng: &mut SeededRng, n: usize) -> Vec<T> {
    let e: Vec<f64> = (0..n).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| T::lit(x / s)).collect()
}
