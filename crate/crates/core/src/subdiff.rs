//! Finitely represented subdifferentials and their support functions.

use crate::extended::Extended;
use crate::scalar::{dot, Real};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    /// The represented set is contained in the true subdifferential.
    InnerApproximation,
    /// Generators of part of the set; the full set is not finitely representable.
    GeneratorSubset,
}

impl Exactness {
    /// The weaker of two labels.
    pub fn meet(self, other: Exactness) -> Exactness {
        use Exactness::*;
        match (self, other) {
            (Exact, x) | (x, Exact) => x,
            (GeneratorSubset, _) | (_, GeneratorSubset) => GeneratorSubset,
            _ => InnerApproximation,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubdiffRepr<T> {
    IntervalBox { lo: Vec<T>, hi: Vec<T> },
    /// `conv(points) + cone(rays)`.
    Polytope { points: Vec<Vec<T>>, rays: Vec<Vec<T>> },
    /// `conv {A* v : v ∈ generators} + cone(rays)` where `images[i] = A* generators[i]`.
    UnionOfImages { generators: Vec<Vec<T>>, images: Vec<Vec<T>>, rays: Vec<Vec<T>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubdifferentialSet<T> {
    pub dim: usize,
    pub repr: SubdiffRepr<T>,
    pub exactness: Exactness,
}

impl<T: Real> SubdifferentialSet<T> {
    pub fn singleton(p: Vec<T>) -> Self {
        SubdifferentialSet { dim: p.len(), repr: SubdiffRepr::Polytope { points: vec![p], rays: vec![] }, exactness: Exactness::Exact }
    }

    pub fn interval_box(lo: Vec<T>, hi: Vec<T>) -> Self {
        SubdifferentialSet { dim: lo.len(), repr: SubdiffRepr::IntervalBox { lo, hi }, exactness: Exactness::Exact }
    }

    pub fn polytope(points: Vec<Vec<T>>, rays: Vec<Vec<T>>) -> Self {
        let dim = points.first().or(rays.first()).map_or(0, |p| p.len());
        SubdifferentialSet { dim, repr: SubdiffRepr::Polytope { points, rays }, exactness: Exactness::Exact }
    }

    pub fn with_exactness(mut self, e: Exactness) -> Self {
        self.exactness = self.exactness.meet(e);
        self
    }

    /// Generating points (box corners for interval boxes with finite bounds).
    pub fn points(&self) -> Vec<Vec<T>> {
        match &self.repr {
            SubdiffRepr::Polytope { points, .. } => points.clone(),
            SubdiffRepr::UnionOfImages { images, .. } => images.clone(),
            SubdiffRepr::IntervalBox { lo, hi } => {
                let mut pts: Vec<Vec<T>> = vec![vec![]];
                for (&l, &h) in lo.iter().zip(hi) {
                    let mut choices = Vec::new();
                    if l.is_finite() {
                        choices.push(l);
                    }
                    if h.is_finite() && h != l {
                        choices.push(h);
                    }
                    if choices.is_empty() {
                        choices.push(T::zero());
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
                pts
            }
        }
    }

    /// Recession directions (infinite box sides become coordinate rays).
    pub fn rays(&self) -> Vec<Vec<T>> {
        match &self.repr {
            SubdiffRepr::Polytope { rays, .. } | SubdiffRepr::UnionOfImages { rays, .. } => rays.clone(),
            SubdiffRepr::IntervalBox { lo, hi } => {
                let n = lo.len();
                let mut out = Vec::new();
                for i in 0..n {
                    let mut e = vec![T::zero(); n];
                    if hi[i].is_infinite() {
                        e[i] = T::one();
                        out.push(e.clone());
                    }
                    if lo[i].is_infinite() {
                        e[i] = -T::one();
                        out.push(e);
                    }
                }
                out
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            SubdiffRepr::IntervalBox { lo, hi } => lo.iter().zip(hi).any(|(l, h)| l > h),
            SubdiffRepr::Polytope { points, .. } => points.is_empty(),
            SubdiffRepr::UnionOfImages { images, .. } => images.is_empty(),
        }
    }

    /// Support function `σ_S(d)`; `+∞` when a ray has positive slope along `d`.
    pub fn support(&self, d: &[T]) -> Extended<T> {
        if self.is_empty() {
            return Extended::Finite(T::neg_infinity());
        }
        if let SubdiffRepr::IntervalBox { lo, hi } = &self.repr {
            let mut s = T::zero();
            for ((&di, &l), &h) in d.iter().zip(lo).zip(hi) {
                let pick = if di > T::zero() { h } else if di < T::zero() { l } else { continue };
                if pick.is_infinite() {
                    return Extended::PosInf;
                }
                s = s + di * pick;
            }
            return Extended::Finite(s);
        }
        let tol = T::base_tol();
        if self.rays().iter().any(|r| dot(r, d) > tol) {
            return Extended::PosInf;
        }
        Extended::Finite(self.points().iter().map(|p| dot(p, d)).fold(T::neg_infinity(), T::max))
    }

    pub fn translate(&self, shift: &[T]) -> Self {
        let add = |p: &Vec<T>| p.iter().zip(shift).map(|(&a, &b)| a + b).collect::<Vec<_>>();
        let repr = match &self.repr {
            SubdiffRepr::IntervalBox { lo, hi } => SubdiffRepr::IntervalBox { lo: add(lo), hi: add(hi) },
            SubdiffRepr::Polytope { points, rays } => {
                SubdiffRepr::Polytope { points: points.iter().map(add).collect(), rays: rays.clone() }
            }
            SubdiffRepr::UnionOfImages { generators, images, rays } => SubdiffRepr::UnionOfImages {
                generators: generators.clone(),
                images: images.iter().map(add).collect(),
                rays: rays.clone(),
            },
        };
        SubdifferentialSet { dim: self.dim, repr, exactness: self.exactness }
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &Self) -> Self {
        let exactness = self.exactness.meet(other.exactness);
        if let (SubdiffRepr::IntervalBox { lo: a, hi: b }, SubdiffRepr::IntervalBox { lo: c, hi: d }) =
            (&self.repr, &other.repr)
        {
            let lo = a.iter().zip(c).map(|(&x, &y)| x + y).collect();
            let hi = b.iter().zip(d).map(|(&x, &y)| x + y).collect();
            return SubdifferentialSet { dim: self.dim, repr: SubdiffRepr::IntervalBox { lo, hi }, exactness };
        }
        let mut points = Vec::new();
        for p in self.points() {
            for q in other.points() {
                points.push(p.iter().zip(&q).map(|(&a, &b)| a + b).collect());
            }
        }
        let mut rays = self.rays();
        rays.extend(other.rays());
        SubdifferentialSet { dim: self.dim, repr: SubdiffRepr::Polytope { points, rays }, exactness }
    }

    /// Image under a linear map given pointwise (used for adjoint Jacobians).
    pub fn map_linear(&self, out_dim: usize, f: impl Fn(&[T]) -> Vec<T>) -> Self {
        let generators = self.points();
        let images = generators.iter().map(|g| f(g)).collect();
        let rays = self.rays().iter().map(|r| f(r)).collect();
        SubdifferentialSet {
            dim: out_dim,
            repr: SubdiffRepr::UnionOfImages { generators, images, rays },
            exactness: self.exactness,
        }
    }

    /// Collapses a one-dimensional set to its interval `[lo, hi]`.
    pub fn as_interval(&self) -> Option<(T, T)> {
        if self.dim != 1 {
            return None;
        }
        let hi = self.support(&[T::one()]);
        let lo = self.support(&[-T::one()]);
        Some((-lo.to_raw(), hi.to_raw()))
    }
}
