//! Convex functions as oracles: evaluation, domain, optional closed-form
//! conjugate and subgradients, plus the closed-form catalog.

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::linalg::solve_affine;
use crate::polyhedral::Polyhedron;
use crate::scalar::{dot, norm, Real};
use crate::sets::ConvexSet;
use crate::space::SpaceDescriptor;
use crate::subdiff::{Exactness, SubdifferentialSet};
use std::fmt;
use std::sync::Arc;

pub type EvalFn<T> = Arc<dyn Fn(&[T]) -> Extended<T> + Send + Sync>;
pub type SubgradFn<T> = Arc<dyn Fn(&[T]) -> Result<SubdifferentialSet<T>> + Send + Sync>;

/// Closed-form catalog entries.
#[derive(Debug, Clone)]
pub enum Catalog<T> {
    /// `½ a ‖x‖² + ⟨c, x⟩ + b` with `a ≥ 0`.
    Quadratic { a: T, c: Vec<T>, b: T },
    AbsSum { n: usize },
    Norm2 { n: usize },
    MaxCoord { n: usize },
    /// `Σ exp(x_i)`.
    ExpSum { n: usize },
    Indicator(ConvexSet<T>),
}

/// Conjugate of the form `⟨lin, y⟩ + constant + δ_P(y)` with `P` polyhedral.
#[derive(Debug, Clone)]
pub struct PolyhedralConjugate {
    pub domain: Polyhedron,
    pub lin: Vec<f64>,
    pub constant: f64,
}

fn unit<T: Real>(n: usize, i: usize) -> Vec<T> {
    let mut e = vec![T::zero(); n];
    e[i] = T::one();
    e
}

fn kink_tol<T: Real>(x: T) -> T {
    T::base_tol() * (T::one() + x.abs())
}

impl<T: Real> Catalog<T> {
    pub fn dim(&self) -> usize {
        match self {
            Catalog::Quadratic { c, .. } => c.len(),
            Catalog::AbsSum { n } | Catalog::Norm2 { n } | Catalog::MaxCoord { n } | Catalog::ExpSum { n } => *n,
            Catalog::Indicator(s) => s.dim(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Catalog::Quadratic { a, c, b } => {
                if c.iter().all(|v| *v == T::zero()) && *b == T::zero() {
                    format!("{a}/2*|x|^2")
                } else {
                    format!("quadratic(a={a})")
                }
            }
            Catalog::AbsSum { .. } => "l1-norm".into(),
            Catalog::Norm2 { .. } => "l2-norm".into(),
            Catalog::MaxCoord { .. } => "max".into(),
            Catalog::ExpSum { .. } => "exp-sum".into(),
            Catalog::Indicator(_) => "indicator".into(),
        }
    }

    pub fn eval(&self, x: &[T]) -> Extended<T> {
        match self {
            Catalog::Quadratic { a, c, b } => Extended::from_value(*a * T::lit(0.5) * dot(x, x) + dot(c, x) + *b),
            Catalog::AbsSum { .. } => Extended::Finite(x.iter().map(|v| v.abs()).sum()),
            Catalog::Norm2 { .. } => Extended::Finite(norm(x)),
            Catalog::MaxCoord { .. } => Extended::Finite(x.iter().cloned().fold(T::neg_infinity(), T::max)),
            Catalog::ExpSum { .. } => Extended::from_value(x.iter().map(|v| v.exp()).sum()),
            Catalog::Indicator(s) => Extended::indicator(s.contains(x)),
        }
    }

    pub fn conjugate(&self, y: &[T]) -> Result<Extended<T>> {
        let tol = T::base_tol() * T::one().max(crate::scalar::norm_inf(y));
        Ok(match self {
            Catalog::Quadratic { a, c, b } => {
                let d: Vec<T> = y.iter().zip(c).map(|(&p, &q)| p - q).collect();
                if *a > T::zero() {
                    Extended::from_value(dot(&d, &d) / (T::lit(2.0) * *a) - *b)
                } else if d.iter().all(|v| v.abs() <= tol) {
                    Extended::Finite(-*b)
                } else {
                    Extended::PosInf
                }
            }
            Catalog::AbsSum { .. } => Extended::indicator(y.iter().all(|v| v.abs() <= T::one() + tol)),
            Catalog::Norm2 { .. } => Extended::indicator(norm(y) <= T::one() + tol),
            Catalog::MaxCoord { .. } => {
                let s: T = y.iter().cloned().sum();
                Extended::indicator(y.iter().all(|&v| v >= -tol) && (s - T::one()).abs() <= tol)
            }
            Catalog::ExpSum { .. } => {
                if y.iter().any(|&v| v < -tol) {
                    Extended::PosInf
                } else {
                    Extended::from_value(
                        y.iter().map(|&v| if v <= T::zero() { T::zero() } else { v * v.ln() - v }).sum(),
                    )
                }
            }
            Catalog::Indicator(s) => s.support(y)?,
        })
    }

    pub fn subgradient(&self, x: &[T]) -> Result<SubdifferentialSet<T>> {
        let n = x.len();
        match self {
            Catalog::Quadratic { a, c, .. } => {
                Ok(SubdifferentialSet::singleton(x.iter().zip(c).map(|(&xi, &ci)| *a * xi + ci).collect()))
            }
            Catalog::AbsSum { .. } => {
                let (mut lo, mut hi) = (Vec::with_capacity(n), Vec::with_capacity(n));
                for &xi in x {
                    if xi.abs() <= T::base_tol() {
                        lo.push(-T::one());
                        hi.push(T::one());
                    } else {
                        lo.push(xi.signum());
                        hi.push(xi.signum());
                    }
                }
                Ok(SubdifferentialSet::interval_box(lo, hi))
            }
            Catalog::Norm2 { .. } => {
                let nx = norm(x);
                if nx > T::base_tol() {
                    Ok(SubdifferentialSet::singleton(x.iter().map(|&v| v / nx).collect()))
                } else {
                    // The unit ball is not finitely generated; return its coordinate vertices.
                    let pts = (0..n).flat_map(|i| [unit::<T>(n, i), unit::<T>(n, i).iter().map(|&v| -v).collect()]).collect();
                    Ok(SubdifferentialSet::polytope(pts, vec![]).with_exactness(Exactness::GeneratorSubset))
                }
            }
            Catalog::MaxCoord { .. } => {
                let m = x.iter().cloned().fold(T::neg_infinity(), T::max);
                let tol = kink_tol(m);
                let pts = (0..n).filter(|&i| x[i] >= m - tol).map(|i| unit(n, i)).collect();
                Ok(SubdifferentialSet::polytope(pts, vec![]))
            }
            Catalog::ExpSum { .. } => Ok(SubdifferentialSet::singleton(x.iter().map(|v| v.exp()).collect())),
            Catalog::Indicator(s) => {
                if !s.contains(x) {
                    return Err(Error::InvalidInput("subgradient requested outside the domain".into()));
                }
                let (rays, exact) = s.normal_cone_generators(x)?;
                let set = SubdifferentialSet::polytope(vec![vec![T::zero(); n]], rays);
                Ok(if exact { set } else { set.with_exactness(Exactness::GeneratorSubset) })
            }
        }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, Catalog::Quadratic { .. } | Catalog::ExpSum { .. })
    }

    pub fn domain(&self) -> ConvexSet<T> {
        match self {
            Catalog::Indicator(s) => s.clone(),
            other => ConvexSet::Full { dim: other.dim() },
        }
    }

    /// Exact horizon cone `hzn g`.
    pub fn horizon(&self) -> Cone<T> {
        let n = self.dim();
        match self {
            Catalog::Quadratic { a, c, .. } => {
                if *a > T::zero() {
                    Cone::Zero { dim: n }
                } else if c.iter().all(|v| *v == T::zero()) {
                    Cone::full(n)
                } else {
                    Cone::Polyhedral { dim: n, rows: vec![c.iter().map(|&v| -v).collect()] }
                }
            }
            Catalog::AbsSum { .. } | Catalog::Norm2 { .. } => Cone::Zero { dim: n },
            Catalog::MaxCoord { .. } | Catalog::ExpSum { .. } => Cone::nonpositive(n),
            Catalog::Indicator(s) => recession_cone(s),
        }
    }

    /// Linear equalities `⟨a, y⟩ = r` satisfied on the whole domain of the conjugate.
    pub fn conjugate_equalities(&self) -> Vec<(Vec<T>, T)> {
        let n = self.dim();
        match self {
            Catalog::Quadratic { a, c, .. } if *a == T::zero() => (0..n).map(|i| (unit(n, i), c[i])).collect(),
            Catalog::MaxCoord { .. } => vec![(vec![T::one(); n], T::one())],
            Catalog::Indicator(s) => match s {
                ConvexSet::Full { .. } => (0..n).map(|i| (unit(n, i), T::zero())).collect(),
                ConvexSet::Box { lo, hi } => (0..n)
                    .filter(|&i| lo[i].is_infinite() && hi[i].is_infinite())
                    .map(|i| (unit(n, i), T::zero()))
                    .collect(),
                ConvexSet::Halfspace { a, .. } => {
                    let sol = solve_affine(n, &[a.clone()], &[T::zero()]);
                    sol.null_basis.into_iter().map(|r| (r, T::zero())).collect()
                }
                ConvexSet::Cone(k) | ConvexSet::NegCone(k) => {
                    k.polar_equalities().into_iter().map(|r| (r, T::zero())).collect()
                }
                _ => vec![],
            },
            _ => vec![],
        }
    }

    /// Polyhedral form of the conjugate when it is an affine function on a polyhedron.
    pub fn polyhedral_conjugate(&self) -> Option<PolyhedralConjugate> {
        let n = self.dim();
        let f = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<f64>>();
        let zero = vec![0.0; n];
        match self {
            Catalog::Quadratic { a, c, b } if *a == T::zero() => Some(PolyhedralConjugate {
                domain: Polyhedron::point(f(c)),
                lin: zero,
                constant: -b.as_f64(),
            }),
            Catalog::AbsSum { .. } => Some(PolyhedralConjugate {
                domain: Polyhedron::H {
                    dim: n,
                    ineq: (0..n)
                        .flat_map(|i| {
                            let e: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
                            let ne: Vec<f64> = e.iter().map(|v| -v).collect();
                            [(e, -1.0), (ne, -1.0)]
                        })
                        .collect(),
                    eq: vec![],
                },
                lin: zero,
                constant: 0.0,
            }),
            Catalog::MaxCoord { .. } => Some(PolyhedralConjugate {
                domain: Polyhedron::V {
                    dim: n,
                    points: (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
                    rays: vec![],
                },
                lin: zero,
                constant: 0.0,
            }),
            Catalog::Indicator(s) => {
                let polar_of = |k: &Cone<T>, sign: f64| {
                    k.polar_generators().map(|g| Polyhedron::V {
                        dim: n,
                        points: vec![vec![0.0; n]],
                        rays: g.iter().map(|r| r.iter().map(|v| sign * v.as_f64()).collect()).collect(),
                    })
                };
                let domain = match s {
                    ConvexSet::Full { .. } => Some(Polyhedron::point(vec![0.0; n])),
                    ConvexSet::Cone(k) => polar_of(k, -1.0),
                    ConvexSet::NegCone(k) => polar_of(k, 1.0),
                    ConvexSet::Box { lo, hi } => {
                        let conic = lo.iter().chain(hi).all(|v| v.is_infinite() || *v == T::zero());
                        if !conic {
                            None
                        } else {
                            let mut ineq = Vec::new();
                            let mut eq = Vec::new();
                            for i in 0..n {
                                let e: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
                                match (lo[i].is_finite(), hi[i].is_finite()) {
                                    (true, false) => ineq.push((e.iter().map(|v| -v).collect(), 0.0)),
                                    (false, true) => ineq.push((e, 0.0)),
                                    (false, false) => eq.push((e, 0.0)),
                                    (true, true) => {}
                                }
                            }
                            Some(Polyhedron::H { dim: n, ineq, eq })
                        }
                    }
                    _ => None,
                }?;
                Some(PolyhedralConjugate { domain, lin: zero, constant: 0.0 })
            }
            _ => None,
        }
    }

    /// Global Lipschitz constant when one exists.
    pub fn lipschitz(&self) -> Option<T> {
        match self {
            Catalog::Quadratic { a, c, .. } if *a == T::zero() => Some(norm(c)),
            Catalog::AbsSum { n } => Some(T::lit(*n as f64).sqrt()),
            Catalog::Norm2 { .. } | Catalog::MaxCoord { .. } => Some(T::one()),
            _ => None,
        }
    }

    pub fn is_permutation_invariant(&self) -> bool {
        match self {
            Catalog::Quadratic { c, .. } => c.windows(2).all(|w| w[0] == w[1]),
            Catalog::Indicator(_) => false,
            _ => true,
        }
    }
}

/// Recession cone of a cataloged set.
pub fn recession_cone<T: Real>(s: &ConvexSet<T>) -> Cone<T> {
    let n = s.dim();
    match s {
        ConvexSet::Full { .. } => Cone::full(n),
        ConvexSet::Box { lo, hi } => {
            let mut rows = Vec::new();
            for i in 0..n {
                let e = unit::<T>(n, i);
                let ne: Vec<T> = e.iter().map(|&v| -v).collect();
                match (lo[i].is_finite(), hi[i].is_finite()) {
                    (true, true) => {
                        rows.push(e);
                        rows.push(ne);
                    }
                    (true, false) => rows.push(e),
                    (false, true) => rows.push(ne),
                    (false, false) => {}
                }
            }
            Cone::Polyhedral { dim: n, rows }
        }
        ConvexSet::Polytope { .. } | ConvexSet::SpectrahedronHull { .. } => Cone::Zero { dim: n },
        ConvexSet::Halfspace { a, .. } => Cone::Polyhedral { dim: n, rows: vec![a.iter().map(|&v| -v).collect()] },
        ConvexSet::Cone(k) => k.clone(),
        ConvexSet::NegCone(k) => k.negated().unwrap_or_else(|| k.clone()),
        ConvexSet::LevelSet(_) => Cone::Zero { dim: n },
    }
}

/// A convex function given by oracles.
#[derive(Clone)]
pub struct Oracle<T> {
    pub name: String,
    pub space: SpaceDescriptor,
    eval: EvalFn<T>,
    /// Cataloged domain; `None` when only the evaluation is known.
    pub domain: Option<ConvexSet<T>>,
    conjugate: Option<EvalFn<T>>,
    subgradient: Option<SubgradFn<T>>,
    /// Cones `K` for which the function is declared `K`-increasing.
    pub monotone_cones: Vec<Cone<T>>,
    pub permutation_invariant: bool,
    pub catalog: Option<Catalog<T>>,
    pub lipschitz: Option<T>,
    pub smooth: bool,
}

impl<T> fmt::Debug for Oracle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({}, {:?})", self.name, self.space)
    }
}

impl<T: Real> Oracle<T> {
    pub fn custom(name: impl Into<String>, space: SpaceDescriptor, eval: impl Fn(&[T]) -> Extended<T> + Send + Sync + 'static) -> Self {
        Oracle {
            name: name.into(),
            space,
            eval: Arc::new(eval),
            domain: None,
            conjugate: None,
            subgradient: None,
            monotone_cones: vec![],
            permutation_invariant: false,
            catalog: None,
            lipschitz: None,
            smooth: false,
        }
    }

    pub fn from_catalog(cat: Catalog<T>) -> Self {
        let n = cat.dim();
        let (c1, c2, c3) = (cat.clone(), cat.clone(), cat.clone());
        let mut monotone = vec![];
        if let Some(k) = cat.horizon().negated() {
            monotone.push(k);
        }
        Oracle {
            name: cat.name(),
            space: SpaceDescriptor::real(n),
            eval: Arc::new(move |x| c1.eval(x)),
            domain: Some(cat.domain()),
            conjugate: Some(Arc::new(move |y| c2.conjugate(y).unwrap_or(Extended::PosInf))),
            subgradient: Some(Arc::new(move |x| c3.subgradient(x))),
            monotone_cones: monotone,
            permutation_invariant: cat.is_permutation_invariant(),
            lipschitz: cat.lipschitz(),
            smooth: cat.is_smooth(),
            catalog: Some(cat),
        }
    }

    pub fn quadratic(a: T, c: Vec<T>, b: T) -> Self {
        Self::from_catalog(Catalog::Quadratic { a, c, b })
    }

    pub fn half_sq_norm(n: usize) -> Self {
        Self::quadratic(T::one(), vec![T::zero(); n], T::zero())
    }

    pub fn linear(c: Vec<T>) -> Self {
        Self::quadratic(T::zero(), c, T::zero())
    }

    pub fn affine(c: Vec<T>, b: T) -> Self {
        Self::quadratic(T::zero(), c, b)
    }

    pub fn zero(n: usize) -> Self {
        Self::linear(vec![T::zero(); n])
    }

    pub fn abs_sum(n: usize) -> Self {
        Self::from_catalog(Catalog::AbsSum { n })
    }

    pub fn norm2(n: usize) -> Self {
        Self::from_catalog(Catalog::Norm2 { n })
    }

    pub fn max_coord(n: usize) -> Self {
        Self::from_catalog(Catalog::MaxCoord { n })
    }

    pub fn exp_sum(n: usize) -> Self {
        Self::from_catalog(Catalog::ExpSum { n })
    }

    pub fn indicator(set: ConvexSet<T>) -> Self {
        Self::from_catalog(Catalog::Indicator(set))
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_space(mut self, space: SpaceDescriptor) -> Self {
        assert_eq!(space.dim(), self.space.dim(), "space dimension must agree");
        self.space = space;
        self
    }

    pub fn with_domain(mut self, domain: ConvexSet<T>) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn with_conjugate(mut self, conj: impl Fn(&[T]) -> Extended<T> + Send + Sync + 'static) -> Self {
        self.conjugate = Some(Arc::new(conj));
        self
    }

    pub fn with_subgradient(
        mut self,
        sub: impl Fn(&[T]) -> Result<SubdifferentialSet<T>> + Send + Sync + 'static,
    ) -> Self {
        self.subgradient = Some(Arc::new(sub));
        self
    }

    pub fn with_monotone(mut self, k: Cone<T>) -> Self {
        self.monotone_cones.push(k);
        self
    }

    pub fn with_lipschitz(mut self, l: T) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_permutation_invariance(mut self, flag: bool) -> Self {
        self.permutation_invariant = flag;
        self
    }

    pub fn smooth(mut self, flag: bool) -> Self {
        self.smooth = flag;
        self
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn eval(&self, x: &[T]) -> Extended<T> {
        debug_assert_eq!(x.len(), self.dim(), "{}", self.name);
        (self.eval)(x)
    }

    pub fn eval_checked(&self, x: &[T]) -> Result<Extended<T>> {
        self.space.check(x)?;
        Ok(self.eval(x))
    }

    /// Domain test; agrees with `eval(x) < +∞`.
    pub fn in_domain(&self, x: &[T]) -> bool {
        self.eval(x).is_finite()
    }

    pub fn has_conjugate(&self) -> bool {
        self.conjugate.is_some()
    }

    pub fn conjugate(&self, y: &[T]) -> Option<Extended<T>> {
        self.conjugate.as_ref().map(|c| c(y))
    }

    pub fn has_subgradient(&self) -> bool {
        self.subgradient.is_some()
    }

    pub fn subgradient(&self, x: &[T]) -> Result<SubdifferentialSet<T>> {
        match &self.subgradient {
            Some(s) => s(x),
            None => Err(Error::Unsupported(format!("no subgradient oracle for {}", self.name))),
        }
    }

    /// Gradient of a smooth oracle.
    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>> {
        if !self.smooth {
            return Err(Error::Unsupported(format!("{} is not declared smooth", self.name)));
        }
        let s = self.subgradient(x)?;
        let pts = s.points();
        match pts.as_slice() {
            [g] if s.rays().is_empty() => Ok(g.clone()),
            _ => Err(Error::Unsupported(format!("{} has no unique gradient here", self.name))),
        }
    }

    pub fn conjugate_equalities(&self) -> Vec<(Vec<T>, T)> {
        self.catalog.as_ref().map_or_else(Vec::new, |c| c.conjugate_equalities())
    }

    pub fn polyhedral_conjugate(&self) -> Option<PolyhedralConjugate> {
        self.catalog.as_ref().and_then(|c| c.polyhedral_conjugate())
    }

    /// `f + g` on a common space. Subgradients add (exact when both are finite-valued).
    pub fn sum(f: &Oracle<T>, g: &Oracle<T>) -> Oracle<T> {
        assert_eq!(f.dim(), g.dim(), "summands must share a space");
        let (fe, ge) = (f.clone(), g.clone());
        let mut out = Oracle::custom(format!("{} + {}", f.name, g.name), f.space.clone(), move |x| fe.eval(x) + ge.eval(x));
        let full = |o: &Oracle<T>| o.domain.as_ref().map_or(false, |d| d.is_full());
        out.domain = match (&f.domain, &g.domain) {
            (Some(d), _) if full(g) => Some(d.clone()),
            (_, Some(d)) if full(f) => Some(d.clone()),
            _ => None,
        };
        if f.has_subgradient() && g.has_subgradient() {
            let exact = full(f) && full(g);
            let (fs, gs) = (f.clone(), g.clone());
            out = out.with_subgradient(move |x| {
                let s = fs.subgradient(x)?.sum(&gs.subgradient(x)?);
                Ok(if exact { s } else { s.with_exactness(Exactness::InnerApproximation) })
            });
        }
        out.smooth = f.smooth && g.smooth;
        out.lipschitz = match (f.lipschitz, g.lipschitz) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        if let (Some(Catalog::Quadratic { a: a1, c: c1, b: b1 }), Some(Catalog::Quadratic { a: a2, c: c2, b: b2 })) =
            (&f.catalog, &g.catalog)
        {
            let c: Vec<T> = c1.iter().zip(c2).map(|(&p, &q)| p + q).collect();
            return Oracle::quadratic(*a1 + *a2, c, *b1 + *b2).named(out.name).with_space(f.space.clone());
        }
        out
    }

    /// `Σ w_i f_i` with nonnegative weights; closed form when every term is quadratic.
    pub fn weighted_sum(fs: &[Oracle<T>], w: &[T]) -> Oracle<T> {
        assert_eq!(fs.len(), w.len());
        let n = fs[0].dim();
        let quad: Option<Vec<(T, Vec<T>, T)>> = fs
            .iter()
            .map(|f| match &f.catalog {
                Some(Catalog::Quadratic { a, c, b }) => Some((*a, c.clone(), *b)),
                _ => None,
            })
            .collect();
        if let Some(q) = quad {
            let mut a = T::zero();
            let mut c = vec![T::zero(); n];
            let mut b = T::zero();
            for ((ai, ci, bi), &wi) in q.iter().zip(w) {
                a = a + wi * *ai;
                for (cj, &cij) in c.iter_mut().zip(ci) {
                    *cj = *cj + wi * cij;
                }
                b = b + wi * *bi;
            }
            return Oracle::quadratic(a, c, b).with_space(fs[0].space.clone());
        }
        let terms: Vec<(Oracle<T>, T)> = fs.iter().cloned().zip(w.iter().cloned()).collect();
        let mut out = Oracle::custom("weighted-sum", fs[0].space.clone(), move |x| {
            let mut s = Extended::zero();
            for (f, wi) in &terms {
                if *wi == T::zero() {
                    if !f.in_domain(x) {
                        return Extended::PosInf;
                    }
                    continue;
                }
                s = s + f.eval(x).map_finite(|v| v * *wi);
            }
            s
        });
        if fs.iter().all(|f| f.domain.as_ref().map_or(false, |d| d.is_full())) {
            out.domain = Some(ConvexSet::Full { dim: n });
        }
        out
    }
}

/// Horizon cone of a cataloged function; `-hzn g` is a cone for which `g` is increasing.
pub fn horizon_cone<T: Real>(g: &Oracle<T>) -> Result<Cone<T>> {
    g.catalog
        .as_ref()
        .map(|c| c.horizon())
        .ok_or_else(|| Error::Unsupported(format!("{} is not in the closed-form catalog", g.name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_conjugates() {
        let q = Oracle::<f64>::half_sq_norm(1);
        assert_eq!(q.conjugate(&[1.0]), Some(Extended::Finite(0.5)));
        let a = Oracle::<f64>::abs_sum(1);
        assert_eq!(a.conjugate(&[0.5]), Some(Extended::Finite(0.0)));
        assert!(a.conjugate(&[2.0]).unwrap().is_inf());
        let m = Oracle::<f64>::max_coord(2);
        assert_eq!(m.conjugate(&[0.25, 0.75]), Some(Extended::Finite(0.0)));
        assert!(m.conjugate(&[1.0, 1.0]).unwrap().is_inf());
        let e = Oracle::<f64>::exp_sum(1);
        assert!((e.conjugate(&[1.0]).unwrap().to_raw() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn horizon_cones_from_the_catalog() {
        let h = horizon_cone(&Oracle::<f64>::half_sq_norm(2)).unwrap();
        assert_eq!(h, Cone::Zero { dim: 2 });
        let set = ConvexSet::Box { lo: vec![0.0, f64::NEG_INFINITY], hi: vec![f64::INFINITY, f64::INFINITY] };
        let h = horizon_cone(&Oracle::indicator(set)).unwrap();
        assert!(h.contains(&[1.0, -3.0]) && !h.contains(&[-1.0, 0.0]));
        let h = horizon_cone(&Oracle::<f64>::max_coord(3)).unwrap();
        assert!(h.contains(&[-1.0, -2.0, 0.0]) && !h.contains(&[1.0, -2.0, 0.0]));
        let custom = Oracle::<f64>::custom("c", SpaceDescriptor::real(1), |x| Extended::Finite(x[0]));
        assert!(matches!(horizon_cone(&custom), Err(Error::Unsupported(_))));
    }

    #[test]
    fn subgradients() {
        let a = Oracle::<f64>::abs_sum(1);
        assert_eq!(a.subgradient(&[0.0]).unwrap().as_interval(), Some((-1.0, 1.0)));
        let m = Oracle::<f64>::max_coord(2);
        assert_eq!(m.subgradient(&[1.0, 1.0]).unwrap().points().len(), 2);
        let box01 = Oracle::indicator(ConvexSet::interval(0.0, 1.0));
        let s = box01.subgradient(&[0.0]).unwrap();
        assert!(s.support(&[-1.0]).is_inf());
        assert_eq!(s.support(&[1.0]), Extended::Finite(0.0));
    }

    #[test]
    fn sums_of_quadratics_stay_closed_form() {
        let s = Oracle::sum(&Oracle::<f64>::half_sq_norm(1), &Oracle::half_sq_norm(1));
        assert_eq!(s.conjugate(&[2.0]), Some(Extended::Finite(1.0)));
        let w = Oracle::weighted_sum(&[Oracle::<f64>::linear(vec![1.0]), Oracle::linear(vec![-1.0])], &[0.75, 0.25]);
        assert_eq!(w.conjugate(&[0.5]), Some(Extended::Finite(0.0)));
    }

    #[test]
    fn domain_test_matches_evaluation() {
        let box01 = Oracle::indicator(ConvexSet::interval(0.0, 1.0));
        for x in [-0.5, 0.0, 0.5, 1.0, 1.5] {
            assert_eq!(box01.in_domain(&[x]), box01.domain.as_ref().unwrap().contains(&[x]));
        }
    }
}
