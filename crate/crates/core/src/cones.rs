//! Closed convex cones: membership, polar membership, relative interiors,
//! sampling of `K` and of `-K°`, and normal cones of `-K`.

use crate::linalg::{sym_eigen, sym_eigenvalues, Mat};
use crate::polyhedral::Polyhedron;
use crate::sampling::{normal_vec, rng, SeededRng};
use crate::scalar::{dot, norm, norm_inf, to_f64_vec, Real};
use crate::space::{herm_from_coords, herm_to_coords, sym_from_coords, sym_to_coords, SpaceDescriptor};
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum Cone<T> {
    /// `{0}` in a space of the given dimension.
    Zero { dim: usize },
    /// `R^n_+`.
    Orthant { n: usize },
    /// Positive semidefinite matrices in orthonormal symmetric (or hermitian) coordinates.
    Psd { n: usize, hermitian: bool },
    /// `{v : v_1 + … + v_k ≥ 0 (k < n), v_1 + … + v_n = 0}`.
    SpectralK { n: usize },
    /// `{x : A x ≥ 0}` with the rows of `A`; no rows means the whole space.
    Polyhedral { dim: usize, rows: Vec<Vec<T>> },
    Product { parts: Vec<Cone<T>> },
}

/// Absolute membership tolerance for polyhedral variants, scaled by `‖x‖∞`.
fn lin_tol<T: Real>(x: &[T]) -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(10.0)) * T::one().max(norm_inf(x))
}

fn unit<T: Real>(n: usize, i: usize, s: T) -> Vec<T> {
    let mut e = vec![T::zero(); n];
    e[i] = s;
    e
}

impl<T: Real> Cone<T> {
    pub fn full(dim: usize) -> Self {
        Cone::Polyhedral { dim, rows: vec![] }
    }

    pub fn nonpositive(n: usize) -> Self {
        Cone::Polyhedral { dim: n, rows: (0..n).map(|i| unit(n, i, -T::one())).collect() }
    }

    pub fn psd(n: usize) -> Self {
        Cone::Psd { n, hermitian: false }
    }

    pub fn dim(&self) -> usize {
        match self {
            Cone::Zero { dim } => *dim,
            Cone::Orthant { n } | Cone::SpectralK { n } => *n,
            Cone::Psd { n, hermitian } => {
                if *hermitian {
                    n * n
                } else {
                    n * (n + 1) / 2
                }
            }
            Cone::Polyhedral { dim, .. } => *dim,
            Cone::Product { parts } => parts.iter().map(|p| p.dim()).sum(),
        }
    }

    pub fn space(&self) -> SpaceDescriptor {
        match self {
            Cone::Psd { n, hermitian: false } => SpaceDescriptor::Symmetric { n: *n },
            Cone::Psd { n, hermitian: true } => SpaceDescriptor::Hermitian { n: *n },
            Cone::Product { parts } => SpaceDescriptor::Product { parts: parts.iter().map(|p| p.space()).collect() },
            other => SpaceDescriptor::real(other.dim()),
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        match self {
            Cone::Psd { n, .. } => *n == 1 && !matches!(self, Cone::Psd { hermitian: true, .. }),
            Cone::Product { parts } => parts.iter().all(|p| p.is_polyhedral()),
            _ => true,
        }
    }

    fn psd_spectrum(n: usize, hermitian: bool, x: &[T]) -> Vec<T> {
        if hermitian {
            let (re, im) = herm_from_coords(n, x);
            sym_eigenvalues(&crate::linalg::realify(&re, &im))
        } else {
            sym_eigenvalues(&sym_from_coords(n, x))
        }
    }

    fn psd_tol(ev: &[T]) -> T {
        let scale = ev.iter().fold(T::one(), |m, &v| m.max(v.abs()));
        crate::linalg::psd_tol::<T>() * scale
    }

    fn split<'a>(parts: &'a [Cone<T>], x: &'a [T]) -> impl Iterator<Item = (&'a Cone<T>, &'a [T])> {
        let mut off = 0;
        parts.iter().map(move |p| {
            let d = p.dim();
            let s = &x[off..off + d];
            off += d;
            (p, s)
        })
    }

    pub fn contains(&self, x: &[T]) -> bool {
        debug_assert_eq!(x.len(), self.dim());
        let tol = lin_tol(x);
        match self {
            Cone::Zero { .. } => x.iter().all(|v| v.abs() <= tol),
            Cone::Orthant { .. } => x.iter().all(|&v| v >= -tol),
            Cone::Psd { n, hermitian } => {
                let ev = Self::psd_spectrum(*n, *hermitian, x);
                ev.last().map_or(true, |&l| l >= -Self::psd_tol(&ev))
            }
            Cone::SpectralK { .. } => {
                let mut s = T::zero();
                for (k, &v) in x.iter().enumerate() {
                    s = s + v;
                    if k + 1 < x.len() && s < -tol {
                        return false;
                    }
                }
                s.abs() <= tol
            }
            Cone::Polyhedral { rows, .. } => rows.iter().all(|a| dot(a, x) >= -tol * T::one().max(norm(a))),
            Cone::Product { parts } => Self::split(parts, x).all(|(p, s)| p.contains(s)),
        }
    }

    /// Membership in `K° = {y : ⟨y, x⟩ ≤ 0 for all x ∈ K}`.
    pub fn polar_contains(&self, y: &[T]) -> bool {
        debug_assert_eq!(y.len(), self.dim());
        let tol = lin_tol(y);
        match self {
            Cone::Zero { .. } => true,
            Cone::Orthant { .. } => y.iter().all(|&v| v <= tol),
            Cone::Psd { n, hermitian } => {
                let ev = Self::psd_spectrum(*n, *hermitian, y);
                ev.first().map_or(true, |&l| l <= Self::psd_tol(&ev))
            }
            Cone::SpectralK { .. } => y.windows(2).all(|w| w[0] <= w[1] + tol),
            Cone::Polyhedral { rows, .. } => {
                // K° = -cone(rows): solve the conic combination feasibility LP.
                let neg: Vec<T> = y.iter().map(|&v| -v).collect();
                cone_hull_contains(rows, &neg, tol)
            }
            Cone::Product { parts } => Self::split(parts, y).all(|(p, s)| p.polar_contains(s)),
        }
    }

    pub fn ri_contains(&self, x: &[T]) -> bool {
        let tol = lin_tol(x);
        match self {
            Cone::Zero { .. } => self.contains(x),
            Cone::Orthant { .. } => x.iter().all(|&v| v > tol),
            Cone::Psd { n, hermitian } => {
                let ev = Self::psd_spectrum(*n, *hermitian, x);
                ev.last().map_or(true, |&l| l > Self::psd_tol(&ev))
            }
            Cone::SpectralK { .. } => {
                let mut s = T::zero();
                for (k, &v) in x.iter().enumerate() {
                    s = s + v;
                    if k + 1 < x.len() && s <= tol {
                        return false;
                    }
                }
                s.abs() <= tol
            }
            Cone::Polyhedral { .. } => self
                .to_polyhedron()
                .map(|p| p.ri_contains(&to_f64_vec(x)).unwrap_or(false))
                .unwrap_or(false),
            Cone::Product { parts } => Self::split(parts, x).all(|(p, s)| p.ri_contains(s)),
        }
    }

    /// `-K` as a polyhedral cone, when `K` is polyhedral.
    pub fn negated(&self) -> Option<Cone<T>> {
        match self {
            Cone::Zero { dim } => Some(Cone::Zero { dim: *dim }),
            _ => {
                let Polyhedron::H { dim, ineq, eq } = self.to_polyhedron()? else { return None };
                let mut rows: Vec<Vec<T>> = ineq.iter().map(|(a, _)| a.iter().map(|&v| T::lit(-v)).collect()).collect();
                for (a, _) in &eq {
                    rows.push(a.iter().map(|&v| T::lit(v)).collect());
                    rows.push(a.iter().map(|&v| T::lit(-v)).collect());
                }
                Some(Cone::Polyhedral { dim, rows })
            }
        }
    }

    /// Linear equalities `⟨a, y⟩ = 0` holding on all of `K°` (its lineality-free part
    /// for the whole-space polyhedral cone, whose polar is `{0}`).
    pub fn polar_equalities(&self) -> Vec<Vec<T>> {
        let dim = self.dim();
        match self {
            Cone::Polyhedral { rows, .. } if rows.is_empty() => (0..dim).map(|i| unit(dim, i, T::one())).collect(),
            Cone::Product { parts } => {
                let mut out = Vec::new();
                let mut off = 0;
                for p in parts {
                    for r in p.polar_equalities() {
                        let mut v = vec![T::zero(); dim];
                        v[off..off + p.dim()].copy_from_slice(&r);
                        out.push(v);
                    }
                    off += p.dim();
                }
                out
            }
            _ => vec![],
        }
    }

    /// H-representation for polyhedral variants.
    pub fn to_polyhedron(&self) -> Option<Polyhedron> {
        let dim = self.dim();
        let rowf = |a: &[T]| to_f64_vec(a);
        match self {
            Cone::Zero { .. } => Some(Polyhedron::H {
                dim,
                ineq: vec![],
                eq: (0..dim).map(|i| (unit(dim, i, 1.0), 0.0)).collect(),
            }),
            Cone::Orthant { .. } => Some(Polyhedron::H {
                dim,
                ineq: (0..dim).map(|i| (unit(dim, i, 1.0), 0.0)).collect(),
                eq: vec![],
            }),
            Cone::Psd { n: 1, hermitian: false } => {
                Some(Polyhedron::H { dim: 1, ineq: vec![(vec![1.0], 0.0)], eq: vec![] })
            }
            Cone::Psd { .. } => None,
            Cone::SpectralK { n } => {
                let ineq = (1..*n).map(|k| ((0..*n).map(|i| if i < k { 1.0 } else { 0.0 }).collect(), 0.0)).collect();
                Some(Polyhedron::H { dim, ineq, eq: vec![(vec![1.0; *n], 0.0)] })
            }
            Cone::Polyhedral { rows, .. } => {
                Some(Polyhedron::H { dim, ineq: rows.iter().map(|a| (rowf(a), 0.0)).collect(), eq: vec![] })
            }
            Cone::Product { parts } => {
                let ps: Option<Vec<Polyhedron>> = parts.iter().map(|p| p.to_polyhedron()).collect();
                ps.map(|ps| Polyhedron::product(&ps))
            }
        }
    }

    /// Finite generators of `-K°` (extreme rays, lines as `±` pairs) for
    /// polyhedral variants.
    pub fn polar_generators(&self) -> Option<Vec<Vec<T>>> {
        let dim = self.dim();
        match self {
            Cone::Zero { .. } => {
                Some((0..dim).flat_map(|i| [unit(dim, i, T::one()), unit(dim, i, -T::one())]).collect())
            }
            Cone::Orthant { .. } | Cone::Psd { n: 1, hermitian: false } => {
                Some((0..dim).map(|i| unit(dim, i, T::one())).collect())
            }
            Cone::Psd { .. } => None,
            Cone::SpectralK { n } => {
                let mut g: Vec<Vec<T>> =
                    (1..*n).map(|k| (0..*n).map(|i| if i < k { T::one() } else { T::zero() }).collect()).collect();
                g.push(vec![T::one(); *n]);
                g.push(vec![-T::one(); *n]);
                Some(g)
            }
            Cone::Polyhedral { rows, .. } => Some(rows.clone()),
            Cone::Product { parts } => {
                let mut out = Vec::new();
                let mut off = 0;
                for p in parts {
                    for g in p.polar_generators()? {
                        let mut v = vec![T::zero(); dim];
                        v[off..off + p.dim()].copy_from_slice(&g);
                        out.push(v);
                    }
                    off += p.dim();
                }
                Some(out)
            }
        }
    }

    /// Finite generators of `K` itself when they are immediate.
    pub fn generators(&self) -> Option<Vec<Vec<T>>> {
        let dim = self.dim();
        match self {
            Cone::Zero { .. } => Some(vec![]),
            Cone::Orthant { .. } | Cone::Psd { n: 1, hermitian: false } => {
                Some((0..dim).map(|i| unit(dim, i, T::one())).collect())
            }
            Cone::SpectralK { n } => Some(
                (0..n.saturating_sub(1))
                    .map(|i| {
                        let mut e = unit(*n, i, T::one());
                        e[i + 1] = -T::one();
                        e
                    })
                    .collect(),
            ),
            Cone::Polyhedral { rows, .. } if rows.is_empty() => {
                Some((0..dim).flat_map(|i| [unit(dim, i, T::one()), unit(dim, i, -T::one())]).collect())
            }
            Cone::Polyhedral { .. } | Cone::Psd { .. } => None,
            Cone::Product { parts } => {
                let mut out = Vec::new();
                let mut off = 0;
                for p in parts {
                    for g in p.generators()? {
                        let mut v = vec![T::zero(); dim];
                        v[off..off + p.dim()].copy_from_slice(&g);
                        out.push(v);
                    }
                    off += p.dim();
                }
                Some(out)
            }
        }
    }

    fn random_psd(n: usize, hermitian: bool, r: &mut SeededRng) -> Vec<T> {
        let rank = r.gen_range(1..=n);
        if hermitian {
            let mut re = Mat::<T>::zeros(n, n);
            let mut im = Mat::<T>::zeros(n, n);
            for _ in 0..rank {
                let a: Vec<T> = normal_vec(r, n);
                let b: Vec<T> = normal_vec(r, n);
                // (a + ib)(a + ib)* = (aaᵀ + bbᵀ) + i(baᵀ - abᵀ)
                re = re.add(&Mat::outer(&a, &a)).add(&Mat::outer(&b, &b));
                im = im.add(&Mat::outer(&b, &a)).sub(&Mat::outer(&a, &b));
            }
            herm_to_coords(&re, &im)
        } else {
            let mut m = Mat::<T>::zeros(n, n);
            for _ in 0..rank {
                let a: Vec<T> = normal_vec(r, n);
                m = m.add(&Mat::outer(&a, &a));
            }
            sym_to_coords(&m)
        }
    }

    fn psd_extremes(n: usize, hermitian: bool) -> Vec<Vec<T>> {
        let scale = T::one() / T::lit(n as f64).sqrt();
        let id = Mat::<T>::identity(n).scale(scale);
        let zero = Mat::<T>::zeros(n, n);
        let coords = |m: &Mat<T>| if hermitian { herm_to_coords(m, &zero) } else { sym_to_coords(m) };
        let mut out = vec![coords(&id)];
        for i in 0..n {
            let e = unit(n, i, T::one());
            out.push(coords(&Mat::outer(&e, &e)));
        }
        out
    }

    fn random_from_generators(gens: &[Vec<T>], dim: usize, r: &mut SeededRng) -> Vec<T> {
        let mut v = vec![T::zero(); dim];
        for g in gens {
            if r.gen_bool(0.6) {
                let w = T::lit(-r.gen_range(f64::EPSILON..1.0f64).ln());
                for (vi, &gi) in v.iter_mut().zip(g) {
                    *vi = *vi + w * gi;
                }
            }
        }
        v
    }

    fn rescale(mut v: Vec<T>, radius: T, r: &mut SeededRng) -> Vec<T> {
        let nv = norm(&v);
        if nv > T::zero() {
            let s = radius * T::lit(r.gen_range(0.05..=1.0)) / nv;
            v.iter_mut().for_each(|x| *x = *x * s);
        }
        v
    }

    /// Points of `-K°` in the ball of the given radius: the extreme rays scaled
    /// to the radius, then quasi-uniform random conic combinations.
    pub fn sample_polar(&self, count: usize, radius: T, seed: u64) -> Vec<Vec<T>> {
        let dim = self.dim();
        let mut r = rng(seed);
        let mut out: Vec<Vec<T>> = Vec::new();
        match (self.polar_generators(), self) {
            (Some(gens), _) => {
                for g in &gens {
                    let ng = norm(g);
                    if ng > T::zero() {
                        out.push(g.iter().map(|&x| x * radius / ng).collect());
                    }
                }
                let target = count.max(out.len());
                while out.len() < target {
                    let v = Self::random_from_generators(&gens, dim, &mut r);
                    out.push(Self::rescale(v, radius, &mut r));
                }
                if gens.is_empty() {
                    out.push(vec![T::zero(); dim]);
                }
            }
            (None, Cone::Psd { n, hermitian }) => {
                for g in Self::psd_extremes(*n, *hermitian) {
                    out.push(g.iter().map(|&x| x * radius).collect());
                }
                let target = count.max(out.len());
                while out.len() < target {
                    let v = Self::random_psd(*n, *hermitian, &mut r);
                    out.push(Self::rescale(v, radius, &mut r));
                }
            }
            (None, Cone::Product { parts }) => {
                let per: Vec<Vec<Vec<T>>> = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.sample_polar(count, radius, seed.wrapping_add(i as u64 + 1)))
                    .collect();
                // Block extremes padded with zeros, then mixed samples.
                let mut off = 0;
                for (p, samples) in parts.iter().zip(&per) {
                    for s in samples.iter().take(p.dim() + 1) {
                        let mut v = vec![T::zero(); dim];
                        v[off..off + p.dim()].copy_from_slice(s);
                        out.push(v);
                    }
                    off += p.dim();
                }
                let target = count.max(out.len());
                let mut k = 0;
                while out.len() < target {
                    let mut v = Vec::with_capacity(dim);
                    for samples in &per {
                        v.extend_from_slice(&samples[(k + r.gen_range(0..samples.len())) % samples.len()]);
                    }
                    out.push(Self::rescale(v, radius, &mut r));
                    k += 1;
                }
            }
            (None, _) => unreachable!("only psd and products lack polar generators"),
        }
        out
    }

    /// Random elements of `K` with norm at most `radius`, starting with `0`.
    pub fn sample(&self, count: usize, radius: T, seed: u64) -> Vec<Vec<T>> {
        let dim = self.dim();
        let mut r = rng(seed);
        let mut out = vec![vec![T::zero(); dim]];
        match (self.generators(), self) {
            (Some(gens), _) => {
                if gens.is_empty() {
                    return out;
                }
                while out.len() < count {
                    let v = Self::random_from_generators(&gens, dim, &mut r);
                    out.push(Self::rescale(v, radius, &mut r));
                }
            }
            (None, Cone::Psd { n, hermitian }) => {
                while out.len() < count {
                    let v = Self::random_psd(*n, *hermitian, &mut r);
                    out.push(Self::rescale(v, radius, &mut r));
                }
            }
            (None, Cone::Product { parts }) => {
                let per: Vec<Vec<Vec<T>>> = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.sample(count, radius, seed.wrapping_add(i as u64 + 1)))
                    .collect();
                while out.len() < count {
                    let mut v = Vec::with_capacity(dim);
                    for samples in &per {
                        v.extend_from_slice(&samples[r.gen_range(0..samples.len())]);
                    }
                    out.push(v);
                }
            }
            (None, _) => {
                // Rejection sampling for general polyhedral cones.
                let mut tries = 0;
                while out.len() < count && tries < 50 * count {
                    let v: Vec<T> = normal_vec(&mut r, dim);
                    if self.contains(&v) {
                        out.push(Self::rescale(v, radius, &mut r));
                    }
                    tries += 1;
                }
            }
        }
        out
    }

    /// Generators of the normal cone `N_{-K}(y)` for `y ∈ -K`, with a flag telling
    /// whether they generate the whole normal cone (`false`: a generating subset).
    pub fn neg_normal_generators(&self, y: &[T]) -> (Vec<Vec<T>>, bool) {
        let dim = self.dim();
        let tol = lin_tol(y) * T::lit(1e3);
        match self {
            Cone::Zero { .. } => {
                ((0..dim).flat_map(|i| [unit(dim, i, T::one()), unit(dim, i, -T::one())]).collect(), true)
            }
            Cone::Orthant { .. } => {
                ((0..dim).filter(|&i| y[i].abs() <= tol).map(|i| unit(dim, i, T::one())).collect(), true)
            }
            Cone::Psd { n, hermitian } => {
                // -K = NSD; N at Y is {W ⪰ 0 supported on ker Y}.
                let mat = if *hermitian {
                    let (re, im) = herm_from_coords(*n, y);
                    crate::linalg::realify(&re, &im)
                } else {
                    sym_from_coords(*n, y)
                };
                let eig = sym_eigen(&mat);
                let scale = eig.values.iter().fold(T::one(), |m, &v| m.max(v.abs()));
                let kernel: Vec<Vec<T>> = (0..mat.rows)
                    .filter(|&k| eig.values[k].abs() <= T::lit(1e-8) * scale)
                    .map(|k| eig.vector(k))
                    .collect();
                let mut gens = Vec::new();
                let to_coords = |m: &Mat<T>| -> Vec<T> {
                    if *hermitian {
                        // Project a realified symmetric matrix back to hermitian coordinates.
                        let nn = *n;
                        let mut re = Mat::zeros(nn, nn);
                        let mut im = Mat::zeros(nn, nn);
                        for i in 0..nn {
                            for j in 0..nn {
                                re[(i, j)] = (m[(i, j)] + m[(i + nn, j + nn)]) * T::lit(0.5);
                                im[(i, j)] = (m[(i + nn, j)] - m[(i, j + nn)]) * T::lit(0.5);
                            }
                        }
                        herm_to_coords(&re, &im)
                    } else {
                        sym_to_coords(m)
                    }
                };
                for a in 0..kernel.len() {
                    gens.push(to_coords(&Mat::outer(&kernel[a], &kernel[a])));
                    for b in (a + 1)..kernel.len() {
                        let s: Vec<T> = kernel[a].iter().zip(&kernel[b]).map(|(&p, &q)| p + q).collect();
                        let d: Vec<T> = kernel[a].iter().zip(&kernel[b]).map(|(&p, &q)| p - q).collect();
                        gens.push(to_coords(&Mat::outer(&s, &s)));
                        gens.push(to_coords(&Mat::outer(&d, &d)));
                    }
                }
                let exact = kernel.len() <= 1 && !*hermitian;
                (gens, exact)
            }
            Cone::SpectralK { n } => {
                // -K = {partial sums ≤ 0, total = 0}; active partial sums contribute
                // their row, the total contributes a line.
                let mut gens = vec![vec![T::one(); *n], vec![-T::one(); *n]];
                let mut s = T::zero();
                for k in 0..n.saturating_sub(1) {
                    s = s + y[k];
                    if s.abs() <= tol {
                        gens.push((0..*n).map(|i| if i <= k { T::one() } else { T::zero() }).collect());
                    }
                }
                (gens, true)
            }
            Cone::Polyhedral { rows, .. } => {
                // -K = {y : A y ≤ 0}; active rows generate the normal cone.
                (rows.iter().filter(|a| dot(a, y).abs() <= tol * T::one().max(norm(a))).cloned().collect(), true)
            }
            Cone::Product { parts } => {
                let mut gens = Vec::new();
                let mut exact = true;
                let mut off = 0;
                for p in parts {
                    let (g, e) = p.neg_normal_generators(&y[off..off + p.dim()]);
                    exact &= e;
                    for gi in g {
                        let mut v = vec![T::zero(); dim];
                        v[off..off + p.dim()].copy_from_slice(&gi);
                        gens.push(v);
                    }
                    off += p.dim();
                }
                (gens, exact)
            }
        }
    }
}

/// `x ∈ cone(gens)` by LP feasibility (with an `ℓ1` slack bounded by `tol`).
pub fn cone_hull_contains<T: Real>(gens: &[Vec<T>], x: &[T], tol: T) -> bool {
    use crate::lp::{Cmp, Lp, LpOutcome};
    let dim = x.len();
    if gens.is_empty() {
        return x.iter().all(|v| v.abs() <= tol);
    }
    let mut lp = Lp::minimize();
    let mus: Vec<usize> = gens.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
    let mut slacks = Vec::with_capacity(dim);
    for k in 0..dim {
        let sp = lp.var(1.0, 0.0, f64::INFINITY);
        let sn = lp.var(1.0, 0.0, f64::INFINITY);
        slacks.push((sp, sn));
        let mut row: Vec<(usize, f64)> = mus.iter().zip(gens).map(|(&m, g)| (m, g[k].as_f64())).collect();
        row.push((sp, 1.0));
        row.push((sn, -1.0));
        lp.constraint(&row, Cmp::Eq, x[k].as_f64());
    }
    match lp.solve() {
        Ok(LpOutcome::Optimal { objective, .. }) => objective <= tol.as_f64() * (1.0 + dim as f64),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_cone_membership() {
        let k = Cone::<f64>::SpectralK { n: 3 };
        assert!(k.contains(&[2.0, -1.0, -1.0]));
        assert!(!k.contains(&[-1.0, 2.0, -1.0]));
        assert!(k.polar_contains(&[1.0, 2.0, 3.0]));
        assert!(!k.polar_contains(&[3.0, 2.0, 1.0]));
        let k2 = Cone::<f64>::SpectralK { n: 2 };
        assert!(k2.ri_contains(&[1.0, -1.0]));
        assert!(!k2.ri_contains(&[0.0, 0.0]));
    }

    #[test]
    fn orthant_psd_and_zero() {
        let o = Cone::<f64>::Orthant { n: 2 };
        assert!(!o.contains(&[1.0, -0.1]));
        let p = Cone::<f64>::psd(2);
        assert!(p.contains(&sym_to_coords(&Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]))));
        assert!(p.polar_contains(&sym_to_coords(&Mat::from_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]))));
        assert!(Cone::<f64>::Zero { dim: 3 }.polar_contains(&[5.0, -1.0, 2.0]));
    }

    #[test]
    fn polar_samples_lie_in_negative_polar() {
        let o = Cone::<f64>::Orthant { n: 2 };
        let s = o.sample_polar(4, 1.0, 3);
        assert!(s.contains(&vec![1.0, 0.0]) && s.contains(&vec![0.0, 1.0]));
        for cone in [Cone::psd(2), Cone::SpectralK { n: 3 }, Cone::Orthant { n: 3 }] {
            for v in cone.sample_polar(30, 2.0, 11) {
                let neg: Vec<f64> = v.iter().map(|x| -x).collect();
                assert!(cone.polar_contains(&neg), "{cone:?} {v:?}");
                assert!(norm(&v) <= 2.0 + 1e-12);
            }
        }
        let psd = Cone::<f64>::psd(2);
        let s = psd.sample_polar(3, 1.0, 0);
        let rank_one = s.iter().any(|v| {
            let ev = sym_eigenvalues(&sym_from_coords(2, v));
            ev[1].abs() < 1e-12 && ev[0] > 0.5
        });
        assert!(rank_one);
    }

    #[test]
    fn zero_cone_polar_samples_span_the_space() {
        let z = Cone::<f64>::Zero { dim: 2 };
        let s = z.sample_polar(20, 1.0, 5);
        assert!(s.iter().any(|v| v[0] < 0.0) && s.iter().any(|v| v[0] > 0.0));
        assert!(s.iter().any(|v| v[1] < 0.0) && s.iter().any(|v| v[1] > 0.0));
    }

    #[test]
    fn polyhedral_polar_by_lp() {
        // K = {x : x1 ≥ 0, x2 ≥ 0} written as a polyhedral cone: K° = R²₋.
        let k = Cone::<f64>::Polyhedral { dim: 2, rows: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        assert!(k.polar_contains(&[-1.0, -2.0]));
        assert!(!k.polar_contains(&[1.0, -2.0]));
        assert!(k.ri_contains(&[1.0, 1.0]));
        assert!(!k.ri_contains(&[1.0, 0.0]));
    }

    #[test]
    fn cone_samples_are_members() {
        for cone in [Cone::psd(2), Cone::SpectralK { n: 3 }, Cone::Orthant { n: 2 }, Cone::Zero { dim: 2 }] {
            for x in cone.sample(20, 1.0, 9) {
                assert!(cone.contains(&x));
            }
        }
    }

    #[test]
    fn normal_cone_of_negative_orthant() {
        let o = Cone::<f64>::Orthant { n: 2 };
        let (g, exact) = o.neg_normal_generators(&[0.0, -1.0]);
        assert!(exact);
        assert_eq!(g, vec![vec![1.0, 0.0]]);
    }
}
