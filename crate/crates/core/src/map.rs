//! Cone-convex maps `F : E1 → E2 ∪ {+∞•}` and their scalarizations `⟨v, F⟩`.

use crate::cones::Cone;
use crate::error::{check_dim, Error, Result};
use crate::extended::{ExtPoint, Extended};
use crate::linalg::{pinv_form, sym_eigen, Mat};
use crate::oracle::{Catalog, Oracle};
use crate::scalar::{dot, Real};
use crate::sets::{ConvexSet, LevelSet};
use crate::space::{sym_from_coords, sym_to_coords, SpaceDescriptor};
use crate::subdiff::{Exactness, SubdifferentialSet};
use std::fmt;
use std::sync::Arc;

pub type MapEvalFn<T> = Arc<dyn Fn(&[T]) -> ExtPoint<T> + Send + Sync>;
pub type AdjointFn<T> = Arc<dyn Fn(&[T], &[T]) -> Vec<T> + Send + Sync>;

#[derive(Clone)]
pub enum MapKind<T> {
    /// `x ↦ A x + b`.
    Affine { a: Mat<T>, b: Vec<T> },
    /// Components `½ a_i ‖x‖² + ⟨c_i, x⟩ + d_i`.
    Quadratic { comps: Vec<(T, Vec<T>, T)> },
    /// `X ↦ ½ X Xᵀ` for `X ∈ R^{n×m}`, valued in symmetric coordinates.
    HalfGram { n: usize, m: usize },
    /// `X ↦ λ(X)` on symmetric `n × n` matrices, sorted nonincreasingly.
    Eigenvalues { n: usize },
    /// `(X, V) ↦ XᵀV†X` on `{V ⪰ 0, rge X ⊂ rge V}`.
    Mff { n: usize, m: usize },
    /// `x ↦ (f_1(x), …, f_m(x))`.
    ComponentWise { oracles: Vec<Oracle<T>> },
    Custom { eval: MapEvalFn<T>, adjoint: Option<AdjointFn<T>> },
}

impl<T> fmt::Debug for MapKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapKind::Affine { .. } => "affine",
            MapKind::Quadratic { .. } => "quadratic",
            MapKind::HalfGram { .. } => "half-gram",
            MapKind::Eigenvalues { .. } => "eigenvalues",
            MapKind::Mff { .. } => "mff",
            MapKind::ComponentWise { .. } => "component-wise",
            MapKind::Custom { .. } => "custom",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct ConeMap<T> {
    pub name: String,
    pub domain_space: SpaceDescriptor,
    pub codomain_space: SpaceDescriptor,
    /// The declared convexity cone `K`.
    pub cone: Cone<T>,
    pub kind: MapKind<T>,
    pub domain: ConvexSet<T>,
    pub smooth: bool,
}

fn quad_value<T: Real>(a: T, c: &[T], d: T, x: &[T]) -> T {
    a * T::lit(0.5) * dot(x, x) + dot(c, x) + d
}

/// Symmetric eigen-decomposition data in coordinates: `Σ v_k u_k u_kᵀ`.
fn eigen_adjoint<T: Real>(n: usize, x: &[T], v: &[T]) -> (Vec<T>, bool) {
    let eig = sym_eigen(&sym_from_coords(n, x));
    let gap = eig.values.windows(2).map(|w| w[0] - w[1]).fold(T::infinity(), T::min);
    let scale = eig.values.iter().fold(T::one(), |m, &l| m.max(l.abs()));
    let distinct = n <= 1 || gap > T::lit(1e-8) * scale;
    (sym_to_coords(&eig.reconstruct(v)), distinct)
}

impl<T: Real> ConeMap<T> {
    fn new(name: &str, ds: SpaceDescriptor, cs: SpaceDescriptor, cone: Cone<T>, kind: MapKind<T>, domain: ConvexSet<T>, smooth: bool) -> Self {
        assert_eq!(cone.dim(), cs.dim(), "cone must live in the codomain");
        ConeMap { name: name.into(), domain_space: ds, codomain_space: cs, cone, kind, domain, smooth }
    }

    pub fn affine(a: Mat<T>, b: Vec<T>, cone: Cone<T>) -> Self {
        assert_eq!(a.rows, b.len());
        let (n, m) = (a.cols, a.rows);
        Self::new("affine", SpaceDescriptor::real(n), SpaceDescriptor::real(m), cone, MapKind::Affine { a, b }, ConvexSet::Full { dim: n }, true)
    }

    pub fn linear(a: Mat<T>, cone: Cone<T>) -> Self {
        let m = a.rows;
        Self::affine(a, vec![T::zero(); m], cone).named("linear")
    }

    pub fn identity(n: usize, cone: Cone<T>) -> Self {
        Self::linear(Mat::identity(n), cone).named("identity")
    }

    /// Quadratic components; convex with respect to `R^m_+` when every `a_i ≥ 0`.
    pub fn quadratic(comps: Vec<(T, Vec<T>, T)>) -> Self {
        let n = comps[0].1.len();
        let m = comps.len();
        Self::new("quadratic", SpaceDescriptor::real(n), SpaceDescriptor::real(m), Cone::Orthant { n: m }, MapKind::Quadratic { comps }, ConvexSet::Full { dim: n }, true)
    }

    pub fn half_gram(n: usize, m: usize) -> Self {
        Self::new(
            "half-gram",
            SpaceDescriptor::RealMatrix { rows: n, cols: m },
            SpaceDescriptor::Symmetric { n },
            Cone::psd(n),
            MapKind::HalfGram { n, m },
            ConvexSet::Full { dim: n * m },
            true,
        )
    }

    pub fn eigenvalues(n: usize) -> Self {
        Self::new(
            "eigenvalues",
            SpaceDescriptor::Symmetric { n },
            SpaceDescriptor::real(n),
            Cone::SpectralK { n },
            MapKind::Eigenvalues { n },
            ConvexSet::Full { dim: n * (n + 1) / 2 },
            false,
        )
    }

    pub fn mff(n: usize, m: usize) -> Self {
        let nx = n * m;
        let dim = nx + n * (n + 1) / 2;
        let member = move |z: &[T]| {
            let v = sym_from_coords(n, &z[nx..]);
            crate::linalg::is_psd(&v) && pinv_form(&Mat::from_vec(n, m, z[..nx].to_vec()), &v).is_some()
        };
        let mut interior = vec![T::zero(); dim];
        for k in 0..n {
            interior[nx + k] = T::one();
        }
        let domain = ConvexSet::LevelSet(LevelSet { label: "V psd, rge X in rge V".into(), dim, member: Arc::new(member), interior_point: Some(interior) });
        Self::new(
            "mff",
            SpaceDescriptor::Product { parts: vec![SpaceDescriptor::RealMatrix { rows: n, cols: m }, SpaceDescriptor::Symmetric { n }] },
            SpaceDescriptor::Symmetric { n: m },
            Cone::psd(m),
            MapKind::Mff { n, m },
            domain,
            false,
        )
    }

    /// `(f_1, …, f_m)`, convex with respect to `R^m_+`.
    pub fn component_wise(oracles: Vec<Oracle<T>>) -> Self {
        let n = oracles[0].dim();
        assert!(oracles.iter().all(|f| f.dim() == n), "components must share a domain space");
        let m = oracles.len();
        let doms: Vec<&ConvexSet<T>> = oracles.iter().filter_map(|f| f.domain.as_ref()).filter(|d| !d.is_full()).collect();
        let all_known = oracles.iter().all(|f| f.domain.is_some());
        let domain = match (all_known, doms.as_slice()) {
            (true, []) => ConvexSet::Full { dim: n },
            (true, [d]) => (*d).clone(),
            _ => {
                let fs = oracles.clone();
                ConvexSet::LevelSet(LevelSet {
                    label: "intersection of component domains".into(),
                    dim: n,
                    member: Arc::new(move |x: &[T]| fs.iter().all(|f| f.in_domain(x))),
                    interior_point: None,
                })
            }
        };
        let smooth = oracles.iter().all(|f| f.smooth);
        Self::new("component-wise", SpaceDescriptor::real(n), SpaceDescriptor::real(m), Cone::Orthant { n: m }, MapKind::ComponentWise { oracles }, domain, smooth)
    }

    pub fn custom(
        name: &str,
        domain_space: SpaceDescriptor,
        codomain_space: SpaceDescriptor,
        cone: Cone<T>,
        domain: ConvexSet<T>,
        eval: impl Fn(&[T]) -> ExtPoint<T> + Send + Sync + 'static,
        adjoint: Option<AdjointFn<T>>,
    ) -> Self {
        let smooth = adjoint.is_some();
        Self::new(name, domain_space, codomain_space, cone, MapKind::Custom { eval: Arc::new(eval), adjoint }, domain, smooth)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_cone(mut self, cone: Cone<T>) -> Self {
        assert_eq!(cone.dim(), self.codomain_space.dim());
        self.cone = cone;
        self
    }

    pub fn with_domain(mut self, domain: ConvexSet<T>) -> Self {
        assert_eq!(domain.dim(), self.domain_space.dim());
        self.domain = domain;
        self
    }

    pub fn dim_in(&self) -> usize {
        self.domain_space.dim()
    }

    pub fn dim_out(&self) -> usize {
        self.codomain_space.dim()
    }

    pub fn in_domain(&self, x: &[T]) -> bool {
        self.domain.contains(x)
    }

    pub fn eval(&self, x: &[T]) -> ExtPoint<T> {
        debug_assert_eq!(x.len(), self.dim_in());
        if !self.domain.contains(x) {
            return ExtPoint::Top;
        }
        match &self.kind {
            MapKind::Affine { a, b } => ExtPoint::Point(crate::scalar::add(&a.matvec(x), b)),
            MapKind::Quadratic { comps } => ExtPoint::Point(comps.iter().map(|(a, c, d)| quad_value(*a, c, *d, x)).collect()),
            MapKind::HalfGram { n, m } => {
                let xm = Mat::from_vec(*n, *m, x.to_vec());
                ExtPoint::Point(sym_to_coords(&xm.matmul(&xm.transpose()).scale(T::lit(0.5))))
            }
            MapKind::Eigenvalues { n } => ExtPoint::Point(crate::linalg::sym_eigenvalues(&sym_from_coords(*n, x))),
            MapKind::Mff { n, m } => {
                let nx = n * m;
                let v = sym_from_coords(*n, &x[nx..]);
                match pinv_form(&Mat::from_vec(*n, *m, x[..nx].to_vec()), &v) {
                    Some(f) => ExtPoint::Point(sym_to_coords(&f)),
                    None => ExtPoint::Top,
                }
            }
            MapKind::ComponentWise { oracles } => {
                let mut out = Vec::with_capacity(oracles.len());
                for f in oracles {
                    match f.eval(x).finite() {
                        Some(v) => out.push(v),
                        None => return ExtPoint::Top,
                    }
                }
                ExtPoint::Point(out)
            }
            MapKind::Custom { eval, .. } => eval(x),
        }
    }

    pub fn eval_checked(&self, x: &[T]) -> Result<ExtPoint<T>> {
        check_dim(self.dim_in(), x.len())?;
        Ok(self.eval(x))
    }

    /// `F'(x)* v` when available at `x`.
    pub fn jacobian_adjoint(&self, x: &[T], v: &[T]) -> Option<Vec<T>> {
        if !self.domain.contains(x) {
            return None;
        }
        match &self.kind {
            MapKind::Affine { a, .. } => Some(a.tr_matvec(v)),
            MapKind::Quadratic { comps } => {
                let mut g = vec![T::zero(); x.len()];
                for ((a, c, _), &vi) in comps.iter().zip(v) {
                    for j in 0..g.len() {
                        g[j] = g[j] + vi * (*a * x[j] + c[j]);
                    }
                }
                Some(g)
            }
            MapKind::HalfGram { n, m } => {
                let vm = sym_from_coords(*n, v);
                Some(vm.matmul(&Mat::from_vec(*n, *m, x.to_vec())).data)
            }
            MapKind::Eigenvalues { n } => {
                let (g, distinct) = eigen_adjoint(*n, x, v);
                distinct.then_some(g)
            }
            MapKind::Mff { .. } => None,
            MapKind::ComponentWise { oracles } => {
                let mut g = vec![T::zero(); x.len()];
                for (f, &vi) in oracles.iter().zip(v) {
                    let gi = f.gradient(x).ok()?;
                    for j in 0..g.len() {
                        g[j] = g[j] + vi * gi[j];
                    }
                }
                Some(g)
            }
            MapKind::Custom { adjoint, .. } => adjoint.as_ref().map(|f| f(x, v)),
        }
    }

    /// `F(x) = A x + b` on the whole space, when `F` is affine.
    pub fn affine_form(&self) -> Option<(Mat<T>, Vec<T>)> {
        if !self.domain.is_full() {
            return None;
        }
        match &self.kind {
            MapKind::Affine { a, b } => Some((a.clone(), b.clone())),
            MapKind::Quadratic { comps } if comps.iter().all(|(a, _, _)| *a == T::zero()) => Some((
                Mat::from_rows(&comps.iter().map(|(_, c, _)| c.clone()).collect::<Vec<_>>()),
                comps.iter().map(|(_, _, d)| *d).collect(),
            )),
            MapKind::ComponentWise { oracles } => {
                let mut rows = Vec::new();
                let mut b = Vec::new();
                for f in oracles {
                    match &f.catalog {
                        Some(Catalog::Quadratic { a, c, b: bi }) if *a == T::zero() => {
                            rows.push(c.clone());
                            b.push(*bi);
                        }
                        _ => return None,
                    }
                }
                Some((Mat::from_rows(&rows), b))
            }
            _ => None,
        }
    }

    /// Components as `(a_i, c_i, d_i)` when every component is a cataloged quadratic.
    pub fn quadratic_form(&self) -> Option<Vec<(T, Vec<T>, T)>> {
        if !self.domain.is_full() {
            return None;
        }
        match &self.kind {
            MapKind::Quadratic { comps } => Some(comps.clone()),
            MapKind::ComponentWise { oracles } => oracles
                .iter()
                .map(|f| match &f.catalog {
                    Some(Catalog::Quadratic { a, c, b }) => Some((*a, c.clone(), *b)),
                    _ => None,
                })
                .collect(),
            _ => self.affine_form().map(|(a, b)| (0..a.rows).map(|i| (T::zero(), a.row(i).to_vec(), b[i])).collect()),
        }
    }

    /// `⟨v, F(x)⟩`, `+∞` off `dom F`.
    pub fn scalar_eval(&self, v: &[T], x: &[T]) -> Extended<T> {
        match self.eval(x) {
            ExtPoint::Point(y) => Extended::from_value(dot(v, &y)),
            ExtPoint::Top => Extended::PosInf,
        }
    }

    /// Closed-form `⟨v, F⟩*(p)` when one is known.
    pub fn scalar_conjugate(&self, v: &[T], p: &[T]) -> Option<Extended<T>> {
        let tol = T::base_tol() * T::lit(10.0) * T::one().max(crate::scalar::norm_inf(p)).max(crate::scalar::norm_inf(v));
        if let Some(q) = self.quadratic_form() {
            let n = self.dim_in();
            let mut alpha = T::zero();
            let mut beta = vec![T::zero(); n];
            let mut gamma = T::zero();
            for ((a, c, d), &vi) in q.iter().zip(v) {
                alpha = alpha + vi * *a;
                for j in 0..n {
                    beta[j] = beta[j] + vi * c[j];
                }
                gamma = gamma + vi * *d;
            }
            let r: Vec<T> = p.iter().zip(&beta).map(|(&a, &b)| a - b).collect();
            let zero_alpha = alpha.abs() <= tol;
            return Some(if !zero_alpha && alpha > T::zero() {
                Extended::from_value(dot(&r, &r) / (T::lit(2.0) * alpha) - gamma)
            } else if zero_alpha && crate::scalar::norm_inf(&r) <= tol {
                Extended::Finite(-gamma)
            } else {
                Extended::PosInf
            });
        }
        match &self.kind {
            MapKind::HalfGram { n, m } => {
                let vm = sym_from_coords(*n, v);
                if !crate::linalg::is_psd(&vm) {
                    return Some(Extended::PosInf);
                }
                Some(match pinv_form(&Mat::from_vec(*n, *m, p.to_vec()), &vm) {
                    Some(f) => Extended::Finite(T::lit(0.5) * f.trace()),
                    None => Extended::PosInf,
                })
            }
            MapKind::Eigenvalues { n } => {
                if !v.windows(2).all(|w| w[0] >= w[1] - tol) {
                    return None;
                }
                let lp = crate::linalg::sym_eigenvalues(&sym_from_coords(*n, p));
                let d: Vec<T> = v.iter().zip(&lp).map(|(&a, &b)| a - b).collect();
                Some(Extended::indicator(Cone::SpectralK { n: *n }.contains(&d)))
            }
            _ => None,
        }
    }

    /// Rows `(C_v, C_p)` with `C_v·v + C_p·p = 0` on `dom ⟨v, F⟩*`.
    pub fn dual_rows(&self) -> Vec<(Vec<T>, Vec<T>)> {
        let (n, m) = (self.dim_in(), self.dim_out());
        if let Some((a, _)) = self.affine_form() {
            return (0..n)
                .map(|j| {
                    let mut cp = vec![T::zero(); n];
                    cp[j] = -T::one();
                    (a.col(j), cp)
                })
                .collect();
        }
        match &self.kind {
            MapKind::Eigenvalues { n: k } => {
                let mut cp = vec![T::zero(); n];
                for c in cp.iter_mut().take(*k) {
                    *c = -T::one();
                }
                vec![(vec![T::one(); m], cp)]
            }
            _ => vec![],
        }
    }

    /// The function `⟨v, F⟩` as an oracle.
    pub fn scalarize(&self, v: &[T]) -> Result<Oracle<T>> {
        check_dim(self.dim_out(), v.len())?;
        let name = format!("<v,{}>", self.name);
        if let Some(q) = self.quadratic_form() {
            let n = self.dim_in();
            let mut alpha = T::zero();
            let mut beta = vec![T::zero(); n];
            let mut gamma = T::zero();
            for ((a, c, d), &vi) in q.iter().zip(v) {
                alpha = alpha + vi * *a;
                for j in 0..n {
                    beta[j] = beta[j] + vi * c[j];
                }
                gamma = gamma + vi * *d;
            }
            if alpha >= T::zero() {
                return Ok(Oracle::quadratic(alpha, beta, gamma).named(name).with_space(self.domain_space.clone()));
            }
        }
        let (map, vv) = (self.clone(), v.to_vec());
        let mut out = Oracle::custom(name, self.domain_space.clone(), move |x| map.scalar_eval(&vv, x)).with_domain(self.domain.clone());
        let (map, vv) = (self.clone(), v.to_vec());
        let probe = vec![T::zero(); self.dim_in()];
        if self.scalar_conjugate(v, &probe).is_some() {
            out = out.with_conjugate(move |p| map.scalar_conjugate(&vv, p).unwrap_or(Extended::PosInf));
        }
        let (map, vv) = (self.clone(), v.to_vec());
        match &self.kind {
            MapKind::Eigenvalues { n } => {
                let n = *n;
                out = out.with_subgradient(move |x| {
                    let (g, distinct) = eigen_adjoint(n, x, &vv);
                    let s = SubdifferentialSet::singleton(g);
                    Ok(if distinct { s } else { s.with_exactness(Exactness::GeneratorSubset) })
                });
            }
            MapKind::ComponentWise { oracles } if v.iter().all(|&vi| vi >= T::zero()) => {
                let fs = oracles.clone();
                out = out.with_subgradient(move |x| {
                    let n = x.len();
                    let mut acc = SubdifferentialSet::singleton(vec![T::zero(); n]);
                    for (f, &vi) in fs.iter().zip(&vv) {
                        if vi == T::zero() {
                            continue;
                        }
                        let s = f.subgradient(x)?;
                        let scaled = s.map_linear(n, |y| y.iter().map(|&t| t * vi).collect());
                        acc = acc.sum(&scaled);
                    }
                    Ok(acc)
                });
                out.smooth = self.smooth;
            }
            _ if self.smooth => {
                out = out.with_subgradient(move |x| {
                    map.jacobian_adjoint(x, &vv)
                        .map(SubdifferentialSet::singleton)
                        .ok_or_else(|| Error::Unsupported("no derivative at this point".into()))
                });
                out.smooth = true;
            }
            _ => {}
        }
        Ok(out)
    }
}
