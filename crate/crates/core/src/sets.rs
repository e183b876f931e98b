//! Convex sets with support functions, relative interiors and normal cones.

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::polyhedral::Polyhedron;
use crate::sampling::{rng, simplex_point, uniform};
use crate::scalar::{dot, norm, norm_inf, to_f64_vec, Real};
use std::fmt;
use std::sync::Arc;

/// Membership predicate of a sublevel set `{x : f(x) ≤ α}` or any other convex set
/// given only through a test.
#[derive(Clone)]
pub struct LevelSet<T> {
    pub label: String,
    pub dim: usize,
    pub member: Arc<dyn Fn(&[T]) -> bool + Send + Sync>,
    pub interior_point: Option<Vec<T>>,
}

impl<T> fmt::Debug for LevelSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LevelSet({}, dim {})", self.label, self.dim)
    }
}

#[derive(Debug, Clone)]
pub enum ConvexSet<T> {
    Full { dim: usize },
    /// Coordinate box; infinite bounds are allowed.
    Box { lo: Vec<T>, hi: Vec<T> },
    Polytope { vertices: Vec<Vec<T>> },
    /// `{x : ⟨a, x⟩ ≤ b}`.
    Halfspace { a: Vec<T>, b: T },
    Cone(Cone<T>),
    /// `-K`.
    NegCone(Cone<T>),
    /// Convex hull of finitely many PSD matrices, in symmetric coordinates.
    SpectrahedronHull { n: usize, generators: Vec<Vec<T>> },
    LevelSet(LevelSet<T>),
}

fn tol_for<T: Real>(x: &[T]) -> T {
    T::base_tol() * T::one().max(norm_inf(x))
}

impl<T: Real> ConvexSet<T> {
    pub fn interval(lo: T, hi: T) -> Self {
        ConvexSet::Box { lo: vec![lo], hi: vec![hi] }
    }

    pub fn point(p: Vec<T>) -> Self {
        ConvexSet::Polytope { vertices: vec![p] }
    }

    /// Probability simplex in `R^n`.
    pub fn simplex(n: usize) -> Self {
        ConvexSet::Polytope {
            vertices: (0..n)
                .map(|i| {
                    let mut e = vec![T::zero(); n];
                    e[i] = T::one();
                    e
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Full { dim } => *dim,
            ConvexSet::Box { lo, .. } => lo.len(),
            ConvexSet::Polytope { vertices } => vertices.first().map_or(0, |v| v.len()),
            ConvexSet::Halfspace { a, .. } => a.len(),
            ConvexSet::Cone(k) | ConvexSet::NegCone(k) => k.dim(),
            ConvexSet::SpectrahedronHull { n, .. } => n * (n + 1) / 2,
            ConvexSet::LevelSet(l) => l.dim,
        }
    }

    pub fn is_full(&self) -> bool {
        match self {
            ConvexSet::Full { .. } => true,
            ConvexSet::Box { lo, hi } => lo.iter().chain(hi).all(|v| v.is_infinite()),
            ConvexSet::Cone(Cone::Polyhedral { rows, .. }) | ConvexSet::NegCone(Cone::Polyhedral { rows, .. }) => {
                rows.is_empty()
            }
            _ => false,
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        let tol = tol_for(x);
        match self {
            ConvexSet::Full { .. } => true,
            ConvexSet::Box { lo, hi } => {
                x.iter().zip(lo.iter().zip(hi)).all(|(&v, (&l, &h))| v >= l - tol && v <= h + tol)
            }
            ConvexSet::Halfspace { a, b } => dot(a, x) <= *b + tol * T::one().max(norm(a)),
            ConvexSet::Cone(k) => k.contains(x),
            ConvexSet::NegCone(k) => k.contains(&x.iter().map(|&v| -v).collect::<Vec<_>>()),
            ConvexSet::Polytope { .. } | ConvexSet::SpectrahedronHull { .. } => self
                .to_polyhedron()
                .and_then(|p| p.contains(&to_f64_vec(x), tol.as_f64()).ok())
                .unwrap_or(false),
            ConvexSet::LevelSet(l) => (l.member)(x),
        }
    }

    pub fn ri_contains(&self, x: &[T]) -> Result<bool> {
        let tol = tol_for(x);
        match self {
            ConvexSet::Full { .. } => Ok(true),
            ConvexSet::Box { lo, hi } => Ok(x.iter().zip(lo.iter().zip(hi)).all(|(&v, (&l, &h))| {
                if (h - l).abs() <= tol {
                    (v - l).abs() <= tol
                } else {
                    v > l + tol && v < h - tol
                }
            })),
            ConvexSet::Halfspace { a, b } => {
                Ok(norm(a) == T::zero() && *b >= T::zero() || dot(a, x) < *b - tol * T::one().max(norm(a)))
            }
            ConvexSet::Cone(k) => Ok(k.ri_contains(x)),
            ConvexSet::NegCone(k) => Ok(k.ri_contains(&x.iter().map(|&v| -v).collect::<Vec<_>>())),
            ConvexSet::Polytope { .. } | ConvexSet::SpectrahedronHull { .. } => {
                self.to_polyhedron().expect("polytope").ri_contains(&to_f64_vec(x))
            }
            ConvexSet::LevelSet(_) => Err(Error::Unsupported("relative interior of a level set".into())),
        }
    }

    /// Exact polyhedral description when the set is polyhedral.
    pub fn to_polyhedron(&self) -> Option<Polyhedron> {
        let dim = self.dim();
        match self {
            ConvexSet::Full { .. } => Some(Polyhedron::full(dim)),
            ConvexSet::Box { lo, hi } => {
                let mut ineq = Vec::new();
                let mut eq = Vec::new();
                for i in 0..dim {
                    let mut e = vec![0.0; dim];
                    e[i] = 1.0;
                    if lo[i].is_finite() && hi[i].is_finite() && lo[i] == hi[i] {
                        eq.push((e, lo[i].as_f64()));
                        continue;
                    }
                    if lo[i].is_finite() {
                        ineq.push((e.clone(), lo[i].as_f64()));
                    }
                    if hi[i].is_finite() {
                        ineq.push((e.iter().map(|v| -v).collect(), -hi[i].as_f64()));
                    }
                }
                Some(Polyhedron::H { dim, ineq, eq })
            }
            ConvexSet::Polytope { vertices } => {
                Some(Polyhedron::V { dim, points: vertices.iter().map(|v| to_f64_vec(v)).collect(), rays: vec![] })
            }
            ConvexSet::SpectrahedronHull { generators, .. } => Some(Polyhedron::V {
                dim,
                points: generators.iter().map(|v| to_f64_vec(v)).collect(),
                rays: vec![],
            }),
            ConvexSet::Halfspace { a, b } => Some(Polyhedron::H {
                dim,
                ineq: vec![(a.iter().map(|v| -v.as_f64()).collect(), -b.as_f64())],
                eq: vec![],
            }),
            ConvexSet::Cone(k) => k.to_polyhedron(),
            ConvexSet::NegCone(k) => k.to_polyhedron().map(|p| p.negated()),
            ConvexSet::LevelSet(_) => None,
        }
    }

    /// `σ_C(y) = sup_{x ∈ C} ⟨x, y⟩`.
    pub fn support(&self, y: &[T]) -> Result<Extended<T>> {
        crate::error::check_dim(self.dim(), y.len())?;
        let tol = tol_for(y);
        Ok(match self {
            ConvexSet::Full { .. } => Extended::indicator(y.iter().all(|v| v.abs() <= tol)),
            ConvexSet::Box { lo, hi } => {
                let mut s = T::zero();
                for ((&yi, &l), &h) in y.iter().zip(lo).zip(hi) {
                    if yi > T::zero() {
                        if h.is_infinite() {
                            return Ok(Extended::PosInf);
                        }
                        s = s + yi * h;
                    } else if yi < T::zero() {
                        if l.is_infinite() {
                            return Ok(Extended::PosInf);
                        }
                        s = s + yi * l;
                    }
                }
                Extended::Finite(s)
            }
            ConvexSet::Polytope { vertices } | ConvexSet::SpectrahedronHull { generators: vertices, .. } => {
                Extended::Finite(vertices.iter().map(|v| dot(v, y)).fold(T::neg_infinity(), T::max))
            }
            ConvexSet::Halfspace { a, b } => {
                // Finite only along y = t a, t ≥ 0, where it equals t b.
                let na2 = dot(a, a);
                if na2 == T::zero() {
                    return Ok(Extended::indicator(y.iter().all(|v| v.abs() <= tol)));
                }
                let t = dot(a, y) / na2;
                let resid = y.iter().zip(a).map(|(&yi, &ai)| (yi - t * ai).abs()).fold(T::zero(), T::max);
                if t >= -tol && resid <= tol {
                    Extended::Finite(t.max(T::zero()) * *b)
                } else {
                    Extended::PosInf
                }
            }
            ConvexSet::Cone(k) => Extended::indicator(k.polar_contains(y)),
            ConvexSet::NegCone(k) => Extended::indicator(k.polar_contains(&y.iter().map(|&v| -v).collect::<Vec<_>>())),
            ConvexSet::LevelSet(_) => return Err(Error::Unsupported("support function of a level set".into())),
        })
    }

    /// Points of the set attaining `σ_C(y)`: all tying vertices for polytopes and
    /// hulls, the tying corners for bounded boxes.
    pub fn argmax_support(&self, y: &[T]) -> Result<Vec<Vec<T>>> {
        match self {
            ConvexSet::Polytope { vertices } | ConvexSet::SpectrahedronHull { generators: vertices, .. } => {
                let vals: Vec<T> = vertices.iter().map(|v| dot(v, y)).collect();
                let best = vals.iter().cloned().fold(T::neg_infinity(), T::max);
                let tol = T::base_tol() * (T::one() + best.abs());
                Ok(vertices.iter().zip(&vals).filter(|(_, &v)| v >= best - tol).map(|(p, _)| p.clone()).collect())
            }
            ConvexSet::Box { lo, hi } => {
                let mut pts: Vec<Vec<T>> = vec![vec![]];
                for ((&yi, &l), &h) in y.iter().zip(lo).zip(hi) {
                    let choices: Vec<T> = if yi > T::zero() {
                        vec![h]
                    } else if yi < T::zero() {
                        vec![l]
                    } else if l == h {
                        vec![l]
                    } else {
                        vec![l, h]
                    };
                    if choices.iter().any(|c| c.is_infinite()) {
                        return Err(Error::Unsupported("support not attained on an unbounded box".into()));
                    }
                    pts = pts
                        .into_iter()
                        .flat_map(|p| {
                            choices.iter().map(move |&c| {
                                let mut q = p.clone();
                                q.push(c);
                                q
                            })
                        })
                        .collect();
                }
                Ok(pts)
            }
            _ => Err(Error::Unsupported("argmax of the support function for this set".into())),
        }
    }

    /// A point in the relative interior.
    pub fn interior_point(&self) -> Option<Vec<T>> {
        let dim = self.dim();
        match self {
            ConvexSet::Full { .. } => Some(vec![T::zero(); dim]),
            ConvexSet::Box { lo, hi } => Some(
                lo.iter()
                    .zip(hi)
                    .map(|(&l, &h)| match (l.is_finite(), h.is_finite()) {
                        (true, true) => (l + h) * T::lit(0.5),
                        (true, false) => l + T::one(),
                        (false, true) => h - T::one(),
                        (false, false) => T::zero(),
                    })
                    .collect(),
            ),
            ConvexSet::Polytope { vertices } | ConvexSet::SpectrahedronHull { generators: vertices, .. } => {
                let k = T::lit(vertices.len() as f64);
                let mut c = vec![T::zero(); dim];
                for v in vertices {
                    for (ci, &vi) in c.iter_mut().zip(v) {
                        *ci = *ci + vi / k;
                    }
                }
                Some(c)
            }
            ConvexSet::Halfspace { a, b } => {
                let na2 = dot(a, a);
                if na2 == T::zero() {
                    return Some(vec![T::zero(); dim]);
                }
                Some(a.iter().map(|&ai| ai * (*b - T::one()) / na2).collect())
            }
            ConvexSet::Cone(k) => Some(cone_interior(k)),
            ConvexSet::NegCone(k) => Some(cone_interior(k).into_iter().map(|v| -v).collect()),
            ConvexSet::LevelSet(l) => l.interior_point.clone(),
        }
    }

    /// Random points of the relative interior within roughly the given radius;
    /// the first entry is [`ConvexSet::interior_point`].
    pub fn sample_ri(&self, count: usize, radius: T, seed: u64) -> Vec<Vec<T>> {
        let dim = self.dim();
        let mut r = rng(seed);
        let mut out = Vec::with_capacity(count);
        if let Some(c) = self.interior_point() {
            out.push(c);
        }
        let rad = radius.as_f64();
        let mut tries = 0;
        while out.len() < count && tries < 100 * count.max(1) {
            tries += 1;
            let cand: Vec<T> = match self {
                ConvexSet::Full { .. } => (0..dim).map(|_| uniform(&mut r, -rad, rad)).collect(),
                ConvexSet::Box { lo, hi } => lo
                    .iter()
                    .zip(hi)
                    .map(|(&l, &h)| {
                        let a = if l.is_finite() { l.as_f64() } else { h.as_f64().min(0.0) - rad };
                        let b = if h.is_finite() { h.as_f64() } else { l.as_f64().max(0.0) + rad };
                        if a == b {
                            T::lit(a)
                        } else {
                            let w = (b - a) * 1e-3;
                            uniform(&mut r, a + w, b - w)
                        }
                    })
                    .collect(),
                ConvexSet::Polytope { vertices } | ConvexSet::SpectrahedronHull { generators: vertices, .. } => {
                    let w: Vec<T> = simplex_point(&mut r, vertices.len());
                    let mut c = vec![T::zero(); dim];
                    for (v, &wi) in vertices.iter().zip(&w) {
                        for (ci, &vi) in c.iter_mut().zip(v) {
                            *ci = *ci + wi * vi;
                        }
                    }
                    c
                }
                ConvexSet::Cone(k) | ConvexSet::NegCone(k) => {
                    let s = k.sample(2, radius, crate::sampling::sub_seed(seed, &format!("ri{tries}")));
                    let c = cone_interior(k);
                    let eps = T::lit(uniform::<f64>(&mut r, 0.05, 1.0));
                    let mut x: Vec<T> = s[1.min(s.len() - 1)].iter().zip(&c).map(|(&a, &b)| a + eps * b).collect();
                    if matches!(self, ConvexSet::NegCone(_)) {
                        x.iter_mut().for_each(|v| *v = -*v);
                    }
                    x
                }
                ConvexSet::Halfspace { .. } | ConvexSet::LevelSet(_) => {
                    (0..dim).map(|_| uniform(&mut r, -rad, rad)).collect()
                }
            };
            let ok = match self.ri_contains(&cand) {
                Ok(b) => b,
                Err(_) => self.contains(&cand),
            };
            if ok {
                out.push(cand);
            }
        }
        out
    }

    /// Generators of the normal cone `N_C(x)` at `x ∈ C` with an exactness flag.
    pub fn normal_cone_generators(&self, x: &[T]) -> Result<(Vec<Vec<T>>, bool)> {
        let dim = self.dim();
        let tol = tol_for(x) * T::lit(10.0);
        let unit = |i: usize, s: T| {
            let mut e = vec![T::zero(); dim];
            e[i] = s;
            e
        };
        match self {
            ConvexSet::Full { .. } => Ok((vec![], true)),
            ConvexSet::Box { lo, hi } => {
                let mut g = Vec::new();
                for i in 0..dim {
                    if lo[i].is_finite() && (x[i] - lo[i]).abs() <= tol {
                        g.push(unit(i, -T::one()));
                    }
                    if hi[i].is_finite() && (x[i] - hi[i]).abs() <= tol {
                        g.push(unit(i, T::one()));
                    }
                }
                Ok((g, true))
            }
            ConvexSet::Halfspace { a, b } => {
                if (dot(a, x) - *b).abs() <= tol * T::one().max(norm(a)) {
                    Ok((vec![a.clone()], true))
                } else {
                    Ok((vec![], true))
                }
            }
            ConvexSet::NegCone(k) => Ok(k.neg_normal_generators(x)),
            ConvexSet::Cone(k) => {
                let neg: Vec<T> = x.iter().map(|&v| -v).collect();
                let (g, exact) = k.neg_normal_generators(&neg);
                Ok((g.into_iter().map(|v| v.into_iter().map(|c| -c).collect()).collect(), exact))
            }
            ConvexSet::Polytope { vertices } if dim == 1 => {
                let lo = vertices.iter().map(|v| v[0]).fold(T::infinity(), T::min);
                let hi = vertices.iter().map(|v| v[0]).fold(T::neg_infinity(), T::max);
                ConvexSet::interval(lo, hi).normal_cone_generators(x)
            }
            _ => Err(Error::Unsupported("normal cone of this set".into())),
        }
    }
}

fn cone_interior<T: Real>(k: &Cone<T>) -> Vec<T> {
    match k {
        Cone::Psd { n, hermitian } => {
            let id = crate::linalg::Mat::<T>::identity(*n);
            if *hermitian {
                crate::space::herm_to_coords(&id, &crate::linalg::Mat::zeros(*n, *n))
            } else {
                crate::space::sym_to_coords(&id)
            }
        }
        Cone::Product { parts } => parts.iter().flat_map(cone_interior).collect(),
        Cone::Polyhedral { .. } => {
            // Maximize the common slack over the unit box to land in the relative interior.
            let dim = k.dim();
            k.to_polyhedron()
                .and_then(|p| {
                    let mut prog = crate::polyhedral::RiProgram::new();
                    let xs = prog.point(&p).ok()?;
                    let (_, vals) = prog.solve().ok()??;
                    if vals.is_empty() {
                        return None;
                    }
                    let x: Vec<f64> = xs.iter().map(|&i| vals[i]).collect();
                    let s = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    Some(x.iter().map(|&v| T::lit(if s > 0.0 { v / s } else { v })).collect())
                })
                .unwrap_or_else(|| vec![T::zero(); dim])
        }
        other => other.generators().map_or_else(
            || vec![T::zero(); other.dim()],
            |g| {
                let mut c = vec![T::zero(); other.dim()];
                for gi in g {
                    for (ci, &v) in c.iter_mut().zip(&gi) {
                        *ci = *ci + v;
                    }
                }
                c
            },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_and_segment_relative_interiors() {
        let b = ConvexSet::Box { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] };
        assert!(b.ri_contains(&[0.5, 0.5]).unwrap());
        assert!(!b.ri_contains(&[0.0, 0.5]).unwrap());
        let seg = ConvexSet::Polytope { vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0]] };
        assert!(seg.ri_contains(&[0.5, 0.0]).unwrap());
    }

    #[test]
    fn support_functions() {
        let b = ConvexSet::interval(0.0, 1.0);
        assert_eq!(b.support(&[3.0]).unwrap(), Extended::Finite(3.0));
        assert_eq!(b.argmax_support(&[3.0]).unwrap(), vec![vec![1.0]]);
        let half = ConvexSet::Box { lo: vec![0.0], hi: vec![f64::INFINITY] };
        assert!(half.support(&[1.0]).unwrap().is_inf());
        assert_eq!(half.support(&[-1.0]).unwrap(), Extended::Finite(0.0));
        let simplex = ConvexSet::<f64>::simplex(2);
        assert_eq!(simplex.support(&[0.3, 0.7]).unwrap(), Extended::Finite(0.7));
        let hs = ConvexSet::Halfspace { a: vec![1.0, 1.0], b: 2.0 };
        assert_eq!(hs.support(&[2.0, 2.0]).unwrap(), Extended::Finite(4.0));
        assert!(hs.support(&[1.0, 0.0]).unwrap().is_inf());
    }

    #[test]
    fn ri_samples_are_relative_interior_points() {
        let sets: Vec<ConvexSet<f64>> = vec![
            ConvexSet::Box { lo: vec![0.0, f64::NEG_INFINITY], hi: vec![1.0, 2.0] },
            ConvexSet::simplex(3),
            ConvexSet::Cone(Cone::Orthant { n: 2 }),
            ConvexSet::NegCone(Cone::psd(2)),
            ConvexSet::Halfspace { a: vec![1.0, -1.0], b: 0.5 },
        ];
        for s in &sets {
            let pts = s.sample_ri(10, 3.0, 4);
            assert!(pts.len() >= 5, "{s:?}");
            for p in pts {
                assert!(s.ri_contains(&p).unwrap(), "{s:?} {p:?}");
            }
        }
    }

    #[test]
    fn normal_cones() {
        let b = ConvexSet::interval(0.0, 1.0);
        assert_eq!(b.normal_cone_generators(&[0.0]).unwrap().0, vec![vec![-1.0]]);
        let k = ConvexSet::Cone(Cone::<f64>::Orthant { n: 2 });
        assert_eq!(k.normal_cone_generators(&[0.0, 1.0]).unwrap().0, vec![vec![-1.0, 0.0]]);
    }
}
