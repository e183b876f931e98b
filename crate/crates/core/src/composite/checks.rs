//! Sampled tests of `K`-convexity and of monotonicity of the outer function.

use crate::cones::Cone;
use crate::extended::ExtPoint;
use crate::map::ConeMap;
use crate::oracle::Oracle;
use crate::sampling::{rng, sub_seed, uniform_vec};
use crate::scalar::{add, Real};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Verdict<T> {
    Consistent { samples: usize },
    /// Named witness points and the size of the violation.
    Refuted { witness: Vec<(String, Vec<T>)>, violation: T },
}

impl<T> Verdict<T> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent { .. })
    }

    pub fn witness(&self, name: &str) -> Option<&[T]> {
        match self {
            Verdict::Refuted { witness, .. } => witness.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_slice()),
            Verdict::Consistent { .. } => None,
        }
    }
}

fn slack<T: Real>(vals: &[T]) -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(1e3)) * vals.iter().fold(T::one(), |m, v| m.max(v.abs()))
}

/// First refutation in sample order, found in parallel.
fn first_refutation<T: Real>(count: usize, test: impl Fn(usize) -> Option<Verdict<T>> + Sync) -> Verdict<T> {
    (0..count)
        .into_par_iter()
        .filter_map(|i| test(i).map(|v| (i, v)))
        .min_by_key(|(i, _)| *i)
        .map_or(Verdict::Consistent { samples: count }, |(_, v)| v)
}

/// Midpoint convexity of `⟨v, F⟩` for sampled `v ∈ −K°` and sampled pairs of `dom F`.
pub fn check_scalarization_convexity<T: Real>(map: &ConeMap<T>, k: &Cone<T>, samples: usize, seed: u64) -> Verdict<T> {
    let samples = samples.max(1);
    let vs = k.sample_polar(samples, T::one(), sub_seed(seed, "polar"));
    let pts = map.domain.sample_ri(2 * samples + 1, T::lit(2.0), sub_seed(seed, "points"));
    if vs.is_empty() || pts.len() < 2 {
        return Verdict::Consistent { samples: 0 };
    }
    let half = T::lit(0.5);
    first_refutation(samples, |i| {
        let v = &vs[i % vs.len()];
        let x = &pts[(2 * i + 1) % pts.len()];
        let y = &pts[(2 * i + 2) % pts.len()];
        let mid: Vec<T> = x.iter().zip(y).map(|(&a, &b)| (a + b) * half).collect();
        let vals: Vec<T> = [&mid, x, y].iter().map(|z| map.scalar_eval(v, z).to_raw()).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let gap = vals[0] - half * (vals[1] + vals[2]);
        (gap > slack(&vals)).then(|| Verdict::Refuted {
            witness: vec![("v".into(), v.clone()), ("x".into(), x.clone()), ("y".into(), y.clone())],
            violation: gap,
        })
    })
}

/// `g(F(x)) ≤ g(F(x) + k)` for sampled `x ∈ dom F` and `k ∈ K`.
pub fn check_monotone_condition<T: Real>(g: &Oracle<T>, map: &ConeMap<T>, k: &Cone<T>, samples: usize, seed: u64) -> Verdict<T> {
    let samples = samples.max(1);
    let xs = map.domain.sample_ri(samples, T::lit(2.0), sub_seed(seed, "points"));
    let ks = k.sample(samples, T::lit(2.0), sub_seed(seed, "cone"));
    if xs.is_empty() || ks.is_empty() {
        return Verdict::Consistent { samples: 0 };
    }
    first_refutation(samples, |i| {
        let x = &xs[i % xs.len()];
        let kk = &ks[i % ks.len()];
        let ExtPoint::Point(fx) = map.eval(x) else { return None };
        let (a, b) = (g.eval(&fx), g.eval(&add(&fx, kk)));
        let violated = match (a.finite(), b.finite()) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a - b > slack(&[a, b]),
            _ => false,
        };
        violated.then(|| Verdict::Refuted {
            witness: vec![("x".into(), x.clone()), ("k".into(), kk.clone())],
            violation: (a.to_raw() - b.to_raw()).min(T::max_value()),
        })
    })
}

/// `g(u) ≤ g(u + k)` for `u` uniform in the box `[−radius, radius]^m` and `k ∈ K`.
pub fn check_cone_increasing<T: Real>(g: &Oracle<T>, k: &Cone<T>, samples: usize, radius: f64, seed: u64) -> Verdict<T> {
    let samples = samples.max(1);
    let mut r = rng(sub_seed(seed, "box"));
    let us: Vec<Vec<T>> = (0..samples).map(|_| uniform_vec(&mut r, g.dim(), radius)).collect();
    let ks = k.sample(samples, T::lit(radius), sub_seed(seed, "cone"));
    if ks.is_empty() {
        return Verdict::Consistent { samples: 0 };
    }
    first_refutation(samples, |i| {
        let u = &us[i];
        let kk = &ks[i % ks.len()];
        let (a, b) = (g.eval(u), g.eval(&add(u, kk)));
        let violated = match (a.finite(), b.finite()) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a - b > slack(&[a, b]),
            _ => false,
        };
        violated.then(|| Verdict::Refuted {
            witness: vec![("u".into(), u.clone()), ("k".into(), kk.clone())],
            violation: (a.to_raw() - b.to_raw()).min(T::max_value()),
        })
    })
}
