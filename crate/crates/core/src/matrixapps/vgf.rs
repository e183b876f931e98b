use crate::conjugate::GridSpec;
use crate::error::{check_dim, Error, Result};
use crate::extended::Extended;
use crate::linalg::{is_psd, pinv_form, Mat};
use crate::oracle::Oracle;
use crate::polyhedral::box_generators;
use crate::scalar::{from_f64_vec, to_f64_vec, Real};
use crate::sets::ConvexSet;
use crate::space::{sym_from_coords, sym_to_coords, SpaceDescriptor};
use crate::subdiff::SubdifferentialSet;
use rayon::prelude::*;

/// A compact convex set `M ⊂ Sⁿ₊` given by finitely many PSD generators.
#[derive(Debug, Clone, PartialEq)]
pub struct VgfSet<T> {
    pub n: usize,
    pub generators: Vec<Mat<T>>,
}

impl<T: Real> VgfSet<T> {
    pub fn from_generators(n: usize, generators: Vec<Mat<T>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("M needs at least one generator".into()));
        }
        for g in &generators {
            if (g.rows, g.cols) != (n, n) || g.asymmetry() > T::lit(1e-12) {
                return Err(Error::InvalidInput(format!("generators must be symmetric {n}×{n} matrices")));
            }
            if !is_psd(g) {
                return Err(Error::InvalidInput("generators of M must be positive semidefinite".into()));
            }
        }
        Ok(VgfSet { n, generators })
    }

    /// Accepts hulls, polytopes and bounded boxes in symmetric coordinates.
    pub fn from_set(set: &ConvexSet<T>) -> Result<Self> {
        let n = sym_order(set.dim())?;
        let coords: Vec<Vec<T>> = match set {
            ConvexSet::SpectrahedronHull { generators, .. } | ConvexSet::Polytope { vertices: generators } => generators.clone(),
            ConvexSet::Box { lo, hi } => {
                if lo.iter().chain(hi).any(|t| !t.is_finite()) {
                    return Err(Error::NonCompact);
                }
                box_generators(&to_f64_vec(lo), &to_f64_vec(hi)).0.iter().map(|p| from_f64_vec(p)).collect()
            }
            ConvexSet::Full { .. } | ConvexSet::Halfspace { .. } | ConvexSet::Cone(_) | ConvexSet::NegCone(_) => {
                return Err(Error::NonCompact)
            }
            ConvexSet::LevelSet(_) => return Err(Error::Unsupported("M must be given by generators".into())),
        };
        Self::from_generators(n, coords.iter().map(|c| sym_from_coords(n, c)).collect())
    }

    pub fn as_set(&self) -> ConvexSet<T> {
        ConvexSet::SpectrahedronHull { n: self.n, generators: self.generators.iter().map(sym_to_coords).collect() }
    }
}

fn sym_order(dim: usize) -> Result<usize> {
    (1..=64).find(|n| n * (n + 1) / 2 == dim).ok_or_else(|| Error::InvalidInput(format!("{dim} is not a symmetric-matrix dimension")))
}

fn check_x<T: Real>(m: &VgfSet<T>, x: &Mat<T>) -> Result<()> {
    check_dim(m.n, x.rows)
}

fn gram<T: Real>(x: &Mat<T>) -> Mat<T> {
    x.matmul(&x.transpose())
}

/// `Ω_M(X) = ½ σ_M(XXᵀ) = ½ max_i ⟨V_i, XXᵀ⟩`.
pub fn vgf_eval<T: Real>(m: &VgfSet<T>, x: &Mat<T>) -> Result<T> {
    check_x(m, x)?;
    let g = gram(x);
    Ok(T::lit(0.5) * m.generators.iter().map(|v| v.frob_dot(&g)).fold(T::neg_infinity(), T::max))
}

/// `{VX : V ∈ argmax_M ⟨XXᵀ, ·⟩}`, the hull of `V_i X` over maximizing generators.
pub fn vgf_subdifferential<T: Real>(m: &VgfSet<T>, x: &Mat<T>) -> Result<SubdifferentialSet<T>> {
    check_x(m, x)?;
    let g = gram(x);
    let vals: Vec<T> = m.generators.iter().map(|v| v.frob_dot(&g)).collect();
    let top = vals.iter().copied().fold(T::neg_infinity(), T::max);
    let tol = T::lit(1e-9) * (T::one() + top.abs());
    let mut points: Vec<Vec<T>> = Vec::new();
    for (v, &val) in m.generators.iter().zip(&vals) {
        if val >= top - tol {
            let p = v.matmul(x).data;
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }
    Ok(SubdifferentialSet::polytope(points, vec![]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VgfConjugate<T> {
    pub value: Extended<T>,
    pub v: Option<Mat<T>>,
    /// Barycentric weights of the minimizing `V` over the generators.
    pub weights: Option<Vec<T>>,
    /// The barycentric grid was exhaustive and refinement converged.
    pub certified: bool,
}

fn hull_point<T: Real>(m: &VgfSet<T>, w: &[T]) -> Mat<T> {
    let mut v = Mat::zeros(m.n, m.n);
    for (g, &wi) in m.generators.iter().zip(w) {
        if wi != T::zero() {
            v = v.add(&g.scale(wi));
        }
    }
    v
}

fn half_trace_form<T: Real>(m: &VgfSet<T>, x: &Mat<T>, w: &[T]) -> T {
    match pinv_form(x, &hull_point(m, w)) {
        Some(f) => T::lit(0.5) * f.trace(),
        None => T::infinity(),
    }
}

/// Points of the simplex with denominators `res − 1`.
fn barycentric_grid(k: usize, res: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for i in 0..=left {
            cur.push(i);
            rec(k - 1, left - i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, res - 1, &mut Vec::new(), &mut out);
    out
}

/// `Ω_M*(X) = ½ min_{V ∈ M} {tr(XᵀV†X) : rge X ⊂ rge V}`.
///
/// Searches barycentric weights over the generators: an exhaustive grid of
/// resolution `grid.resolution` (capped at 33) for at most three generators,
/// a sampled one otherwise, then pairwise mass transfers with halving steps.
pub fn vgf_conjugate<T: Real>(m: &VgfSet<T>, x: &Mat<T>, grid: &GridSpec) -> Result<VgfConjugate<T>> {
    check_x(m, x)?;
    let k = m.generators.len();
    if x.frobenius() == T::zero() {
        let mut w = vec![T::zero(); k];
        w[0] = T::one();
        return Ok(VgfConjugate { value: Extended::Finite(T::zero()), v: Some(m.generators[0].clone()), weights: Some(w), certified: true });
    }
    let exhaustive = k <= 3;
    let starts: Vec<Vec<T>> = if exhaustive {
        let res = grid.resolution.clamp(2, 33);
        let den = T::lit((res - 1) as f64);
        barycentric_grid(k, res).into_iter().map(|c| c.into_iter().map(|i| T::lit(i as f64) / den).collect()).collect()
    } else {
        let mut r = crate::sampling::rng(0);
        let mut s: Vec<Vec<T>> = (0..k)
            .map(|i| {
                let mut e = vec![T::zero(); k];
                e[i] = T::one();
                e
            })
            .collect();
        s.push(vec![T::one() / T::lit(k as f64); k]);
        s.extend((0..grid.resolution.max(64) * k).map(|_| crate::sampling::simplex_point(&mut r, k)));
        s
    };
    let vals: Vec<T> = starts.par_iter().map(|w| half_trace_form(m, x, w)).collect();
    let best = vals.iter().enumerate().filter(|(_, v)| v.is_finite()).min_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(a.0.cmp(&b.0)));
    let Some((i0, &v0)) = best else {
        return Ok(VgfConjugate { value: Extended::PosInf, v: None, weights: None, certified: exhaustive });
    };
    let mut w = starts[i0].clone();
    let mut val = v0;
    let mut h = T::lit(0.5);
    let floor = T::lit(1e-13);
    let mut rounds = 0;
    while h > floor && rounds < 10_000 {
        rounds += 1;
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j || w[i] <= T::zero() {
                    continue;
                }
                let step = h.min(w[i]);
                let mut cand = w.clone();
                cand[i] = cand[i] - step;
                cand[j] = cand[j] + step;
                let cv = half_trace_form(m, x, &cand);
                if cv < val {
                    w = cand;
                    val = cv;
                    improved = true;
                }
            }
        }
        if !improved {
            h = h / T::lit(2.0);
        }
    }
    Ok(VgfConjugate { value: Extended::Finite(val), v: Some(hull_point(m, &w)), weights: Some(w), certified: exhaustive && h <= floor })
}

/// `Ω_M` as an oracle on `n × m` matrices (row-major coordinates).
pub fn vgf_oracle<T: Real>(set: &VgfSet<T>, cols: usize) -> Oracle<T> {
    let n = set.n;
    let space = SpaceDescriptor::RealMatrix { rows: n, cols };
    let (a, b, c) = (set.clone(), set.clone(), set.clone());
    Oracle::custom("vgf", space, move |x: &[T]| Extended::Finite(vgf_eval(&a, &Mat::from_vec(n, cols, x.to_vec())).expect("shape checked")))
        .with_domain(ConvexSet::Full { dim: n * cols })
        .with_subgradient(move |x: &[T]| vgf_subdifferential(&b, &Mat::from_vec(n, cols, x.to_vec())))
        .with_conjugate(move |y: &[T]| {
            vgf_conjugate(&c, &Mat::from_vec(n, cols, y.to_vec()), &GridSpec::default()).map_or(Extended::PosInf, |r| r.value)
        })
}
