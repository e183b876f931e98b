//! `∂(g∘F)(x̄) = ∪_{v ∈ ∂g(F(x̄))} ∂⟨v, F⟩(x̄)` and its relatives.

use super::cq::{check_cq, CqCondition};
use super::CompositeProblem;
use crate::cones::Cone;
use crate::error::{check_dim, Error, Result};
use crate::extended::ExtPoint;
use crate::linalg::Mat;
use crate::map::ConeMap;
use crate::oracle::Oracle;
use crate::scalar::Real;
use crate::subdiff::{Exactness, SubdiffRepr, SubdifferentialSet};

/// Relative tolerance deciding which functions are active in a maximum.
pub const ACTIVITY_TOL: f64 = 1e-9;

fn outer_part<T: Real>(p: &CompositeProblem<T>, x: &[T]) -> Result<SubdifferentialSet<T>> {
    check_dim(p.dim_in(), x.len())?;
    let ExtPoint::Point(y) = p.map.eval(x) else {
        return Err(Error::InvalidInput("the point is outside the domain of F".into()));
    };
    if !p.g.eval(&y).is_finite() {
        return Err(Error::InvalidInput("F(x) is outside the domain of g".into()));
    }
    let dg = p.g.subgradient(&y)?;
    let (gens, rays) = (dg.points(), dg.rays());
    let n = p.dim_in();
    if p.map.smooth {
        let adj = |v: &Vec<T>| {
            p.map
                .jacobian_adjoint(x, v)
                .ok_or_else(|| Error::Unsupported(format!("no derivative of {} at this point", p.map.name)))
        };
        let images = gens.iter().map(adj).collect::<Result<Vec<_>>>()?;
        let ray_images = rays.iter().map(adj).collect::<Result<Vec<_>>>()?;
        return Ok(SubdifferentialSet {
            dim: n,
            repr: SubdiffRepr::UnionOfImages { generators: gens, images, rays: ray_images },
            exactness: dg.exactness,
        });
    }
    // Σ_j λ_j ∂⟨v_j, F⟩ sweeps conv ∪_j ∂⟨v_j, F⟩ since the scalarization is linear in v on −K°.
    let mut points = Vec::new();
    let mut out_rays = Vec::new();
    let mut exact = dg.exactness;
    for v in &gens {
        let s = p.map.scalarize(v)?.subgradient(x)?;
        exact = exact.meet(s.exactness);
        points.extend(s.points());
        out_rays.extend(s.rays());
    }
    for r in &rays {
        let s = p.map.scalarize(r)?.subgradient(x)?;
        exact = exact.meet(s.exactness);
        out_rays.extend(s.points().into_iter().filter(|d| d.iter().any(|&c| c != T::zero())));
        out_rays.extend(s.rays());
    }
    let mut set = SubdifferentialSet::polytope(points, out_rays).with_exactness(exact);
    set.dim = n;
    Ok(set)
}

/// `∂(g∘F)(x̄)`; labeled an inner approximation unless the first qualification condition is verified.
pub fn composite_subdifferential<T: Real>(p: &CompositeProblem<T>, x: &[T]) -> Result<SubdifferentialSet<T>> {
    let outer = p.outer_only();
    let s = outer_part(&outer, x)?;
    let held = check_cq(&outer, CqCondition::Cq1).map_or(false, |r| r.is_held());
    Ok(if held { s } else { s.with_exactness(Exactness::InnerApproximation) })
}

/// `∂f(x̄) + ∂(g∘F)(x̄)`; labeled an inner approximation unless the second qualification condition is verified.
pub fn additive_composite_subdifferential<T: Real>(p: &CompositeProblem<T>, x: &[T]) -> Result<SubdifferentialSet<T>> {
    let Some(f) = &p.f else { return composite_subdifferential(p, x) };
    let s = outer_part(&p.outer_only(), x)?;
    let df = f.subgradient(x)?;
    let sum = df.sum(&s);
    let held = check_cq(p, CqCondition::Cq2).map_or(false, |r| r.is_held());
    Ok(if held { sum } else { sum.with_exactness(Exactness::InnerApproximation) })
}

/// `A*(∂g(Ax̄))`.
pub fn linear_composite_subdifferential<T: Real>(g: &Oracle<T>, a: &Mat<T>, x: &[T]) -> Result<SubdifferentialSet<T>> {
    let map = ConeMap::linear(a.clone(), Cone::Zero { dim: a.rows });
    composite_subdifferential(&CompositeProblem::new(g.clone(), map)?, x)
}

/// `conv ∪_{i active} ∂f_i(x̄)`.
pub fn max_of_convex_subdifferential<T: Real>(fs: &[Oracle<T>], x: &[T]) -> Result<SubdifferentialSet<T>> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("at least one function is required".into()));
    }
    let vals: Vec<T> = fs
        .iter()
        .map(|f| f.eval_checked(x)?.finite().ok_or_else(|| Error::InvalidInput(format!("{} is infinite at the point", f.name))))
        .collect::<Result<_>>()?;
    let max = vals.iter().cloned().fold(T::neg_infinity(), T::max);
    let tol = T::lit(ACTIVITY_TOL) * (T::one() + max.abs());
    let mut points = Vec::new();
    let mut rays = Vec::new();
    let mut exact = Exactness::Exact;
    for (f, &v) in fs.iter().zip(&vals) {
        if max - v <= tol {
            let s = f.subgradient(x)?;
            exact = exact.meet(s.exactness);
            points.extend(s.points());
            rays.extend(s.rays());
        }
    }
    let mut set = SubdifferentialSet::polytope(points, rays).with_exactness(exact);
    set.dim = x.len();
    Ok(set)
}
