//! Brute-force conjugation on grids, infimal convolution, the sum rule for
//! conjugates, and Fenchel–Young gaps.

use crate::error::{check_dim, Error, Result};
use crate::extended::Extended;
use crate::oracle::Oracle;
use crate::polyhedral::ri_intersection_witness;
use crate::scalar::{dot, norm, sub, Real};
use crate::search::{minimize_affine, SearchSpec};
use crate::sets::ConvexSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Values above this are treated as evidence of an unbounded supremum.
pub const UNBOUNDED_THRESHOLD: f64 = 1e12;
/// Consecutive growing box expansions that flag a supremum as `+∞`.
pub const GROWTH_LIMIT: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Per-axis `[lo, hi]`; a single entry is broadcast to every axis.
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    pub resolution: usize,
    pub refine: usize,
    pub max_points: usize,
    /// Largest dimension accepted unless `allow_high_dim` is set.
    pub dim_guard: usize,
    pub allow_high_dim: bool,
    /// Lipschitz constant of the function on the box; estimated from the grid when absent.
    pub lipschitz: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            bounds: vec![[-8.0, 8.0]],
            resolution: 257,
            refine: 3,
            max_points: 10_000_000,
            dim_guard: 6,
            allow_high_dim: false,
            lipschitz: None,
        }
    }
}

impl GridSpec {
    pub fn cube(lo: f64, hi: f64, resolution: usize) -> Self {
        GridSpec { bounds: vec![[lo, hi]], resolution, ..Default::default() }
    }

    pub fn with_refine(mut self, refine: usize) -> Self {
        self.refine = refine;
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn bounds_for(&self, dim: usize) -> Result<Vec<[f64; 2]>> {
        let b = match self.bounds.len() {
            1 => vec![self.bounds[0]; dim],
            n if n == dim => self.bounds.clone(),
            n => return Err(Error::DimensionMismatch { expected: dim, found: n }),
        };
        if b.iter().any(|[lo, hi]| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::InvalidInput("grid bounds need finite lo < hi".into()));
        }
        Ok(b)
    }

    /// Resolution actually used in `dim` dimensions: odd and capped so the grid has at most `max_points` points.
    pub fn effective_resolution(&self, dim: usize) -> Result<usize> {
        if self.resolution < 3 {
            return Err(Error::InvalidInput("grid resolution must be at least 3".into()));
        }
        if dim > self.dim_guard && !self.allow_high_dim {
            return Err(Error::DimensionGuard { dim, limit: self.dim_guard });
        }
        let cap = (self.max_points as f64).powf(1.0 / dim.max(1) as f64).floor() as usize;
        let mut r = self.resolution.min(cap);
        if r % 2 == 0 {
            r -= 1;
        }
        if r < 3 {
            return Err(Error::GridTooLarge { points: 3u128.pow(dim as u32), cap: self.max_points as u128 });
        }
        Ok(r)
    }
}

/// Result of a grid maximization or minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct GridExtremum<T> {
    pub value: Extended<T>,
    pub point: Option<Vec<T>>,
    /// Bound on the distance between the grid answer and the true extremum over the box.
    pub gap_bound: T,
    /// The extremum kept growing as the box expanded.
    pub unbounded_suspect: bool,
    /// Incumbent after each sweep and refinement round.
    pub history: Vec<T>,
    pub evals: usize,
}

pub type ConjugateEstimate<T> = GridExtremum<T>;

struct Sweep<T> {
    best: Option<(T, Vec<T>)>,
    slope: T,
    evals: usize,
}

/// Evaluates `phi` on a full grid; returns the best point (largest value) and the
/// largest finite-difference slope between axis neighbours.
fn sweep<T: Real>(bounds: &[[f64; 2]], res: usize, phi: &(dyn Fn(&[T]) -> Option<T> + Sync)) -> Sweep<T> {
    let d = bounds.len();
    let total = res.pow(d as u32);
    let steps: Vec<f64> = bounds.iter().map(|[lo, hi]| (hi - lo) / (res - 1) as f64).collect();
    let point = |mut idx: usize| -> Vec<T> {
        let mut x = vec![T::zero(); d];
        for j in (0..d).rev() {
            let i = idx % res;
            idx /= res;
            x[j] = T::lit(bounds[j][0] + steps[j] * i as f64);
        }
        x
    };
    let vals: Vec<Option<T>> = (0..total).into_par_iter().map(|i| phi(&point(i)).filter(|v| !v.is_nan())).collect();
    let mut best: Option<(T, usize)> = None;
    for (i, v) in vals.iter().enumerate() {
        if let Some(v) = *v {
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, i));
            }
        }
    }
    let mut slope = T::zero();
    let mut stride = 1;
    for j in (0..d).rev() {
        let h = T::lit(steps[j]);
        for i in 0..total {
            if (i / stride) % res + 1 < res {
                if let (Some(a), Some(b)) = (vals[i], vals[i + stride]) {
                    slope = slope.max((a - b).abs() / h);
                }
            }
        }
        stride *= res;
    }
    Sweep { best: best.map(|(v, i)| (v, point(i))), slope, evals: total }
}

/// Maximizes `phi` (None off its domain) over the grid with local refinement and box expansion.
pub fn grid_maximize<T: Real>(
    dim: usize,
    grid: &GridSpec,
    phi: &(dyn Fn(&[T]) -> Option<T> + Sync),
    lipschitz: Option<T>,
) -> Result<GridExtremum<T>> {
    let res = grid.effective_resolution(dim)?;
    let mut bounds = grid.bounds_for(dim)?;
    let mut evals = 0;
    let mut history = Vec::new();
    let mut growths = 0;
    let mut prev: Option<T> = None;
    let mut last: Option<GridExtremum<T>> = None;
    let threshold = T::lit(UNBOUNDED_THRESHOLD);
    loop {
        let s = sweep(&bounds, res, phi);
        evals += s.evals;
        let Some((mut val, mut x)) = s.best else {
            // A coarser expanded grid can miss a thin domain; keep the previous answer.
            return last.ok_or(Error::EmptyDomain);
        };
        history.push(val);
        let mut h: Vec<f64> = bounds.iter().map(|[lo, hi]| (hi - lo) / (res - 1) as f64).collect();
        for _ in 0..grid.refine {
            let local: Vec<[f64; 2]> = x.iter().zip(&h).map(|(&c, &hj)| [c.as_f64() - hj, c.as_f64() + hj]).collect();
            let s = sweep(&local, 9, phi);
            evals += s.evals;
            if let Some((v, p)) = s.best {
                if v > val {
                    val = v;
                    x = p;
                }
            }
            history.push(val);
            h.iter_mut().for_each(|hj| *hj /= 4.0);
        }
        if val > threshold {
            return Ok(GridExtremum { value: Extended::PosInf, point: Some(x), gap_bound: T::zero(), unbounded_suspect: true, history, evals });
        }
        let on_boundary = x.iter().zip(&bounds).zip(&h).any(|((&xi, [lo, hi]), &hj)| {
            let xi = xi.as_f64();
            xi - lo <= 4.0 * hj || hi - xi <= 4.0 * hj
        });
        let grew = prev.map_or(false, |p| val > p + T::lit(1e-12) * (T::one() + p.abs()));
        growths = if grew { growths + 1 } else { 0 };
        if growths >= GROWTH_LIMIT {
            return Ok(GridExtremum { value: Extended::PosInf, point: Some(x), gap_bound: T::zero(), unbounded_suspect: true, history, evals });
        }
        let l = lipschitz.unwrap_or(s.slope);
        let hmax = h.iter().cloned().fold(0.0, f64::max) * 4.0;
        let gap = l * T::lit(hmax * (dim as f64).sqrt() / 2.0);
        let result = GridExtremum { value: Extended::Finite(val), point: Some(x), gap_bound: gap, unbounded_suspect: false, history: history.clone(), evals };
        if !(on_boundary && (prev.is_none() || grew)) {
            return Ok(result);
        }
        last = Some(result);
        prev = Some(val);
        bounds = bounds.iter().map(|[lo, hi]| {
            let (c, w) = ((lo + hi) / 2.0, hi - lo);
            [c - w, c + w]
        }).collect();
    }
}

/// `f*(y) ≈ max over the grid of ⟨y, x⟩ − f(x)`.
pub fn conjugate_bruteforce<T: Real>(f: &Oracle<T>, y: &[T], grid: &GridSpec) -> Result<ConjugateEstimate<T>> {
    check_dim(f.dim(), y.len())?;
    let phi = |x: &[T]| f.eval(x).finite().map(|fx| dot(y, x) - fx);
    let l = grid.lipschitz.map(T::lit).or(f.lipschitz).map(|l| l + norm(y));
    grid_maximize(f.dim(), grid, &phi, l)
}

/// `(f □ g)(x) ≈ min over the grid of f(u) + g(x − u)`.
pub fn inf_convolution<T: Real>(f: &Oracle<T>, g: &Oracle<T>, x: &[T], grid: &GridSpec) -> Result<GridExtremum<T>> {
    check_dim(f.dim(), x.len())?;
    check_dim(g.dim(), x.len())?;
    let phi = |u: &[T]| (f.eval(u) + g.eval(&sub(x, u))).finite().map(|v| -v);
    let l = match (f.lipschitz, g.lipschitz) {
        (Some(a), Some(b)) => Some(a + b),
        _ => grid.lipschitz.map(T::lit),
    };
    let mut out = grid_maximize(f.dim(), grid, &phi, l)?;
    out.value = match out.value {
        Extended::Finite(v) => Extended::Finite(-v),
        // An unbounded maximum of the negation means the infimum looks like −∞.
        Extended::PosInf => Extended::Finite(T::min_value()),
    };
    out.history.iter_mut().for_each(|v| *v = -*v);
    Ok(out)
}

/// Conjugate through the closed form when present, else by brute force.
pub fn conjugate_value<T: Real>(f: &Oracle<T>, y: &[T], grid: &GridSpec) -> Result<(Extended<T>, T)> {
    match f.conjugate(y) {
        Some(v) => Ok((v, T::zero())),
        None => {
            let e = conjugate_bruteforce(f, y, grid)?;
            Ok((e.value, e.gap_bound))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumConjugate<T> {
    pub value: Extended<T>,
    pub attained_u: Option<Vec<T>>,
    /// `ri(dom f) ∩ ri(dom g) ≠ ∅`; `None` when a domain is not cataloged.
    pub cq_held: Option<bool>,
    pub certified: bool,
}

/// Decides whether the relative interiors of two cataloged sets meet.
pub fn ri_domains_meet<T: Real>(a: Option<&ConvexSet<T>>, b: Option<&ConvexSet<T>>, seed: u64) -> Option<bool> {
    let (a, b) = (a?, b?);
    if a.is_full() {
        return Some(b.interior_point().is_some() || b.dim() == 0);
    }
    if b.is_full() {
        return Some(a.interior_point().is_some());
    }
    if let (Some(pa), Some(pb)) = (a.to_polyhedron(), b.to_polyhedron()) {
        return ri_intersection_witness(&pa, &pb).ok().map(|w| w.is_some());
    }
    for (p, q) in [(a, b), (b, a)] {
        for x in p.sample_ri(200, T::lit(4.0), seed) {
            if q.ri_contains(&x).unwrap_or(false) {
                return Some(true);
            }
        }
    }
    None
}

/// `min_u f*(u) + g*(y − u)`; equals `(f + g)*(y)` when the relative interiors of the domains meet.
pub fn sum_conjugate<T: Real>(f: &Oracle<T>, g: &Oracle<T>, y: &[T], grid: &GridSpec, search: &SearchSpec) -> Result<SumConjugate<T>> {
    check_dim(f.dim(), y.len())?;
    check_dim(g.dim(), y.len())?;
    let n = y.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (a, r) in f.conjugate_equalities() {
        rows.push(a);
        rhs.push(r);
    }
    for (a, r) in g.conjugate_equalities() {
        // ⟨a, y − u⟩ = r
        rhs.push(dot(&a, y) - r);
        rows.push(a);
    }
    let obj = |u: &[T]| -> Extended<T> {
        let fv = conjugate_value(f, u, grid).map(|v| v.0).unwrap_or(Extended::PosInf);
        if fv.is_inf() {
            return fv;
        }
        fv + conjugate_value(g, &sub(y, u), grid).map(|v| v.0).unwrap_or(Extended::PosInf)
    };
    let hints = vec![y.to_vec(), vec![T::zero(); n], y.iter().map(|&v| v * T::lit(0.5)).collect()];
    let out = minimize_affine(n, &rows, &rhs, &obj, &hints, search);
    Ok(SumConjugate {
        value: out.value,
        attained_u: out.argmin,
        cq_held: ri_domains_meet(f.domain.as_ref(), g.domain.as_ref(), search.seed),
        certified: out.certified,
    })
}

/// `f(x) + f*(v) − ⟨x, v⟩`, which is `≥ 0` and vanishes exactly when `v ∈ ∂f(x)`.
pub fn fenchel_young_gap<T: Real>(f: &Oracle<T>, x: &[T], v: &[T], grid: Option<&GridSpec>) -> Result<Extended<T>> {
    check_dim(f.dim(), x.len())?;
    check_dim(f.dim(), v.len())?;
    let conj = match (f.conjugate(v), grid) {
        (Some(c), _) => c,
        (None, Some(g)) => conjugate_bruteforce(f, v, g)?.value,
        (None, None) => return Err(Error::Unsupported(format!("{} has no closed-form conjugate and no grid was given", f.name))),
    };
    Ok((f.eval(x) + conj).map_finite(|s| s - dot(x, v)))
}
