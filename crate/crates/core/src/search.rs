//! Derivative-free minimization of extended-valued convex objectives over an
//! affine set `{v : E v = r}`: a coarse grid in null-space coordinates, a
//! zooming pattern search, and radius doubling until the incumbent is interior.

use crate::extended::Extended;
use crate::linalg::{solve_affine, AffineSolution};
use crate::sampling::{rng, uniform};
use crate::scalar::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchSpec {
    /// Points in the coarse grid of each radius stage.
    pub budget: usize,
    /// Number of halvings of the zoom step.
    pub zoom_rounds: usize,
    /// Initial half-width of the search box in null-space coordinates.
    pub radius: f64,
    pub max_doublings: usize,
    /// Extra random starting points per stage.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec { budget: 20_000, zoom_rounds: 40, radius: 2.0, max_doublings: 8, random_starts: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome<T> {
    pub value: Extended<T>,
    pub argmin: Option<Vec<T>>,
    /// The incumbent is interior to the final box and stopped improving, or the
    /// answer is exact (zero-dimensional or inconsistent affine set).
    pub certified: bool,
    /// Residual of the affine system at its least-squares solution.
    pub residual: T,
    pub evals: usize,
}

fn grid_points<T: Real>(center: &[T], half: T, res: usize) -> Vec<Vec<T>> {
    let k = center.len();
    let total = res.pow(k as u32);
    let step = if res > 1 { T::lit(2.0) * half / T::lit((res - 1) as f64) } else { T::zero() };
    (0..total)
        .map(|mut idx| {
            let mut z = vec![T::zero(); k];
            for j in (0..k).rev() {
                let i = idx % res;
                idx /= res;
                z[j] = center[j] - half + step * T::lit(i as f64);
            }
            z
        })
        .collect()
}

fn compass_points<T: Real>(center: &[T], half: T) -> Vec<Vec<T>> {
    let mut out = vec![center.to_vec()];
    for j in 0..center.len() {
        for s in [-T::one(), T::one()] {
            let mut z = center.to_vec();
            z[j] = z[j] + s * half;
            out.push(z);
        }
    }
    out
}

/// Compass moves that keep the near-zero original coordinates fixed (all of
/// them, then all but one). Orthant boundaries and kinks of support functions
/// sit on such faces, where rotated grid moves stall.
fn face_points<T: Real>(sol: &AffineSolution<T>, z: &[T], h: T) -> Vec<Vec<T>> {
    let k = z.len();
    let x = sol.point(z);
    let near = T::lit(4.0) * h;
    let active: Vec<usize> = (0..x.len())
        .filter(|&i| x[i].abs() <= near && sol.null_basis.iter().any(|b| b[i] != T::zero()))
        .collect();
    if active.is_empty() {
        return vec![];
    }
    let mut subsets = vec![active.clone()];
    if active.len() > 1 {
        subsets.extend((0..active.len()).map(|skip| active.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect()));
    }
    let mut out = Vec::new();
    for set in subsets {
        let rows: Vec<Vec<T>> = set.iter().map(|&i| sol.null_basis.iter().map(|b| b[i]).collect()).collect();
        let dirs = solve_affine(k, &rows, &vec![T::zero(); rows.len()]).null_basis;
        if dirs.len() == k {
            continue;
        }
        for d in dirs {
            for s in [-h, h] {
                out.push(z.iter().zip(&d).map(|(&a, &b)| a + s * b).collect());
            }
        }
    }
    out
}

fn resolution(budget: usize, k: usize, max: usize) -> usize {
    let mut r = ((budget.max(1) as f64).powf(1.0 / k as f64)).floor() as usize;
    r = r.clamp(3, max);
    if r % 2 == 0 {
        r -= 1;
    }
    r
}

fn raw<T: Real>(e: Extended<T>) -> T {
    match e {
        Extended::Finite(v) if !v.is_nan() => v,
        _ => T::infinity(),
    }
}

struct Incumbent<T> {
    value: T,
    z: Vec<T>,
}

impl<T: Real> Incumbent<T> {
    /// Deterministic update: strictly smaller values win, ties keep the earlier candidate.
    fn offer(&mut self, cands: &[Vec<T>], vals: &[T]) -> bool {
        let mut improved = false;
        for (z, &v) in cands.iter().zip(vals) {
            if v < self.value {
                self.value = v;
                self.z = z.clone();
                improved = true;
            }
        }
        improved
    }
}

/// Minimizes `objective` over `{v ∈ R^dim : rows·v = rhs}`.
///
/// `hints` are points of `R^dim` that are projected onto the affine set and
/// evaluated before the grid.
pub fn minimize_affine<T: Real>(
    dim: usize,
    rows: &[Vec<T>],
    rhs: &[T],
    objective: &(dyn Fn(&[T]) -> Extended<T> + Sync),
    hints: &[Vec<T>],
    spec: &SearchSpec,
) -> SearchOutcome<T> {
    let sol = solve_affine(dim, rows, rhs);
    let scale = T::one().max(crate::scalar::norm_inf(rhs));
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(1e4)) * scale;
    if !sol.is_consistent(tol) {
        return SearchOutcome { value: Extended::PosInf, argmin: None, certified: true, residual: sol.residual, evals: 0 };
    }
    let k = sol.null_basis.len();
    let eval_all = |zs: &[Vec<T>]| -> Vec<T> { zs.par_iter().map(|z| raw(objective(&sol.point(z)))).collect() };
    let mut evals = 0usize;
    if k == 0 {
        let v = objective(&sol.particular);
        let finite = v.is_finite();
        return SearchOutcome {
            value: v,
            argmin: finite.then(|| sol.particular.clone()),
            certified: true,
            residual: sol.residual,
            evals: 1,
        };
    }
    let mut inc = Incumbent { value: T::infinity(), z: vec![T::zero(); k] };
    let mut starts: Vec<Vec<T>> = vec![vec![T::zero(); k]];
    starts.extend(hints.iter().map(|h| sol.project_coords(h)));
    let vals = eval_all(&starts);
    evals += starts.len();
    inc.offer(&starts, &vals);

    let gres = resolution(spec.budget, k, 257);
    let full_grid = gres.pow(k as u32) <= spec.budget.max(3usize.pow(k.min(12) as u32));
    let zres = resolution(spec.budget / 20, k, 9);
    let zoom_full = zres.pow(k as u32) <= (spec.budget / 4).max(1);
    let mut r = T::lit(spec.radius);
    let mut center = inc.z.clone();
    let mut prev_stage = T::infinity();
    let mut certified = false;
    let mut rng = rng(spec.seed);
    for stage in 0..=spec.max_doublings {
        let mut cands = if full_grid && k <= 12 { grid_points(&center, r, gres) } else { compass_points(&center, r) };
        for _ in 0..spec.random_starts {
            cands.push(center.iter().map(|&c| c + T::lit(uniform::<f64>(&mut rng, -1.0, 1.0)) * r).collect());
        }
        let vals = eval_all(&cands);
        evals += cands.len();
        inc.offer(&cands, &vals);

        if inc.value.is_finite() {
            let mut h = if full_grid { T::lit(2.0) * r / T::lit((gres - 1) as f64) } else { r / T::lit(2.0) };
            let mut halvings = 0;
            let mut rounds = 0;
            while halvings < spec.zoom_rounds && rounds < 8 * spec.zoom_rounds {
                rounds += 1;
                let pts = if zoom_full { grid_points(&inc.z, h, zres) } else { compass_points(&inc.z, h) };
                let vals = eval_all(&pts);
                evals += pts.len();
                if inc.offer(&pts, &vals) {
                    continue;
                }
                let face = face_points(&sol, &inc.z, h);
                if !face.is_empty() {
                    let vals = eval_all(&face);
                    evals += face.len();
                    if inc.offer(&face, &vals) {
                        continue;
                    }
                }
                h = h / T::lit(2.0);
                halvings += 1;
            }
        }

        let dist = inc.z.iter().zip(&center).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        let interior = dist <= r * T::lit(0.999);
        let stalled = stage > 0 && prev_stage - inc.value <= T::lit(1e-12) * (T::one() + inc.value.abs());
        if inc.value.is_finite() && (interior || stalled) {
            certified = interior;
            break;
        }
        prev_stage = inc.value;
        if inc.value.is_finite() {
            center = inc.z.clone();
        }
        r = r * T::lit(2.0);
    }
    let value = if inc.value.is_finite() { Extended::Finite(inc.value) } else { Extended::PosInf };
    SearchOutcome {
        argmin: inc.value.is_finite().then(|| sol.point(&inc.z)),
        value,
        certified,
        residual: sol.residual,
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::dot;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_on_a_line() {
        // min ½‖v‖² s.t. v1 + v2 = 2 → v = (1, 1), value 1
        let f = |v: &[f64]| Extended::Finite(0.5 * dot(v, v));
        let out = minimize_affine(2, &[vec![1.0, 1.0]], &[2.0], &f, &[], &SearchSpec::default());
        assert_abs_diff_eq!(out.value.to_raw(), 1.0, epsilon = 1e-9);
        assert!(out.certified);
    }

    #[test]
    fn inconsistent_system_is_infinite() {
        let f = |_: &[f64]| Extended::Finite(0.0);
        let out = minimize_affine(2, &[vec![1.0, 1.0], vec![2.0, 2.0]], &[1.0, 3.0], &f, &[], &SearchSpec::default());
        assert!(out.value.is_inf() && out.certified);
    }

    #[test]
    fn far_minimizer_needs_doubling() {
        let f = |v: &[f64]| Extended::Finite((v[0] - 30.0).abs());
        let out = minimize_affine(1, &[], &[], &f, &[], &SearchSpec::default());
        assert_abs_diff_eq!(out.value.to_raw(), 0.0, epsilon = 1e-8);
        assert!(out.certified);
    }

    #[test]
    fn linear_objective_on_a_simplex_vertex() {
        // min v1 - 2 v2 over the simplex: vertex (0, 1), value -2
        let f = |v: &[f64]| {
            if v.iter().all(|&x| x >= -1e-12) {
                Extended::Finite(v[0] - 2.0 * v[1])
            } else {
                Extended::PosInf
            }
        };
        let out = minimize_affine(2, &[vec![1.0, 1.0]], &[1.0], &f, &[], &SearchSpec::default());
        assert_abs_diff_eq!(out.value.to_raw(), -2.0, epsilon = 1e-9);
    }

    #[test]
    fn deterministic_ties() {
        let f = |_: &[f64]| Extended::Finite(1.0);
        let a = minimize_affine(2, &[], &[], &f, &[], &SearchSpec::default());
        let b = minimize_affine(2, &[], &[], &f, &[], &SearchSpec::default());
        assert_eq!(a, b);
    }
}
