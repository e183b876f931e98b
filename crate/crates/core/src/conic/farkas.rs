use crate::composite::{inner_conjugate, joint_ri_point, Budget, CqCondition, CqMethod, CqReport, CqStatus, Start};
use crate::cones::Cone;
use crate::conjugate::{conjugate_value, grid_maximize, GridSpec};
use crate::error::{check_dim, Error, Result};
use crate::extended::{ExtPoint, Extended};
use crate::map::ConeMap;
use crate::oracle::Oracle;
use crate::polyhedral::{ri_difference_contains, Polyhedron, RiProgram, RI_SLACK_TOL};
use crate::scalar::{from_f64_vec, to_f64_vec, Real};
use crate::sets::ConvexSet;
use serde::Serialize;

/// A certificate is accepted when its left-hand side is at most this.
pub const CERTIFICATE_TOL: f64 = 1e-6;

/// Statement A: `x ∈ X, G(x) ∈ −L ⟹ f(x) + g(F(x)) ≥ 0`.
#[derive(Clone, Debug)]
pub struct FarkasInstance<T> {
    pub x_set: ConvexSet<T>,
    pub f: Oracle<T>,
    pub g: Oracle<T>,
    /// `F` with its cone `K`.
    pub map_f: ConeMap<T>,
    /// `G` with its cone `L`.
    pub map_g: ConeMap<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FarkasVerdict {
    /// No feasible grid point gives a negative value, and no certificate was found.
    AHoldsSampled,
    /// A certificate with left side `≤ 1e−6`; statement A follows.
    BHolds,
    /// A feasible point with a negative value; no certificate can exist.
    AFails,
    /// Both a negative-A witness and a certificate: tolerances conflict.
    InconsistentData,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarkasCertificate<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub y: Vec<T>,
    pub z: Vec<T>,
    pub s: Vec<T>,
    pub lhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FarkasReport<T> {
    pub verdict: FarkasVerdict,
    /// Best point of the certificate search, accepted or not.
    pub certificate: Option<FarkasCertificate<T>>,
    /// Smallest left side found; `+∞` when every candidate left `−K°`, `−L°` or a domain.
    pub b_margin: Extended<T>,
    /// Grid minimum of `f + g∘F` over the feasible set; `None` when no grid point is feasible.
    pub a_min: Option<T>,
    pub a_witness: Option<Vec<T>>,
    pub cq: CqReport<T>,
}

impl<T: Real> FarkasInstance<T> {
    pub fn new(x_set: ConvexSet<T>, f: Oracle<T>, g: Oracle<T>, map_f: ConeMap<T>, map_g: ConeMap<T>) -> Result<Self> {
        let n = x_set.dim();
        check_dim(n, f.dim())?;
        check_dim(n, map_f.dim_in())?;
        check_dim(n, map_g.dim_in())?;
        check_dim(map_f.dim_out(), g.dim())?;
        Ok(FarkasInstance { x_set, f, g, map_f, map_g })
    }

    pub fn dim(&self) -> usize {
        self.x_set.dim()
    }

    pub fn is_feasible(&self, x: &[T]) -> bool {
        self.x_set.contains(x)
            && match self.map_g.eval(x) {
                ExtPoint::Point(y) => self.map_g.cone.contains(&y.iter().map(|&t| -t).collect::<Vec<_>>()),
                ExtPoint::Top => false,
            }
    }

    /// `f(x) + g(F(x))`.
    pub fn value(&self, x: &[T]) -> Extended<T> {
        match self.map_f.eval(x) {
            ExtPoint::Point(y) => self.f.eval(x) + self.g.eval(&y),
            ExtPoint::Top => Extended::PosInf,
        }
    }
}

fn neg<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().map(|&x| -x).collect()
}

struct Layout {
    m1: usize,
    m2: usize,
    n: usize,
}

impl Layout {
    fn dim(&self) -> usize {
        self.m1 + self.m2 + 3 * self.n
    }

    fn split<'a, T>(&self, w: &'a [T]) -> [&'a [T]; 5] {
        let (u, rest) = w.split_at(self.m1);
        let (v, rest) = rest.split_at(self.m2);
        let (y, rest) = rest.split_at(self.n);
        let (z, s) = rest.split_at(self.n);
        [u, v, y, z, s]
    }

    fn offsets(&self) -> [usize; 5] {
        let u = 0;
        let v = self.m1;
        let y = v + self.m2;
        let z = y + self.n;
        [u, v, y, z, z + self.n]
    }
}

/// `g*(u) + ⟨u,F⟩*(y) + ⟨v,G⟩*(z) + σ_X(s) + f*(−y−z−s)`, `+∞` unless `u ∈ −K°` and `v ∈ −L°`.
pub fn farkas_lhs<T: Real>(inst: &FarkasInstance<T>, u: &[T], v: &[T], y: &[T], z: &[T], s: &[T], grid: &GridSpec) -> Extended<T> {
    if !inst.map_f.cone.polar_contains(&neg(u)) || !inst.map_g.cone.polar_contains(&neg(v)) {
        return Extended::PosInf;
    }
    let w: Vec<T> = (0..y.len()).map(|i| -y[i] - z[i] - s[i]).collect();
    let terms = [
        conjugate_value(&inst.g, u, grid).map_or(Extended::PosInf, |r| r.0),
        inner_conjugate(&inst.map_f, u, y, grid),
        inner_conjugate(&inst.map_g, v, z, grid),
        inst.x_set.support(s).unwrap_or(Extended::PosInf),
        conjugate_value(&inst.f, &w, grid).map_or(Extended::PosInf, |r| r.0),
    ];
    let mut total = Extended::zero();
    for t in terms {
        if t.is_inf() {
            return Extended::PosInf;
        }
        total = total + t;
    }
    total
}

/// Equality rows on `(u, v, y, z, s)` valid on the domain of the left side.
fn certificate_rows<T: Real>(inst: &FarkasInstance<T>, lay: &Layout) -> (Vec<Vec<T>>, Vec<T>) {
    let dim = lay.dim();
    let [ou, ov, oy, oz, os] = lay.offsets();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut put = |parts: &[(usize, &[T])], r: T| {
        let mut row = vec![T::zero(); dim];
        for (off, c) in parts {
            for (i, &ci) in c.iter().enumerate() {
                row[off + i] = row[off + i] + ci;
            }
        }
        rows.push(row);
        rhs.push(r);
    };
    for (c, r) in inst.g.conjugate_equalities() {
        put(&[(ou, &c)], r);
    }
    for (cv, cp) in inst.map_f.dual_rows() {
        put(&[(ou, &cv), (oy, &cp)], T::zero());
    }
    for (cv, cp) in inst.map_g.dual_rows() {
        put(&[(ov, &cv), (oz, &cp)], T::zero());
    }
    for c in inst.map_f.cone.polar_equalities() {
        put(&[(ou, &c)], T::zero());
    }
    for c in inst.map_g.cone.polar_equalities() {
        put(&[(ov, &c)], T::zero());
    }
    if inst.x_set.is_full() {
        for i in 0..lay.n {
            let mut e = vec![T::zero(); lay.n];
            e[i] = T::one();
            put(&[(os, &e)], T::zero());
        }
    }
    for (a, r) in inst.f.conjugate_equalities() {
        let na = neg(&a);
        put(&[(oy, &na), (oz, &na), (os, &na)], r);
    }
    (rows, rhs)
}

/// Checks `∃ x̄ ∈ ri X ∩ ri dom f ∩ ri dom F ∩ ri dom G` with
/// `F(x̄) ∈ ri(dom g − K)` and `G(x̄) ∈ ri(−L)`.
pub fn check_farkas_cq<T: Real>(inst: &FarkasInstance<T>, samples: usize, seed: u64) -> Result<CqReport<T>> {
    let dom = |o: &Oracle<T>| o.domain.clone().ok_or_else(|| Error::Unsupported(format!("domain of {} is not cataloged", o.name)));
    let dom_g = dom(&inst.g)?;
    let sets = vec![inst.x_set.clone(), dom(&inst.f)?, inst.map_f.domain.clone(), inst.map_g.domain.clone()];
    let report = |held, witness, method| CqReport { condition: CqCondition::CqFarkas, held, witness, method };
    let k = &inst.map_f.cone;
    let l = &inst.map_g.cone;
    if let (Some((a, b)), Some((c, d)), Some(pd), Some(pk), Some(pl)) =
        (inst.map_f.affine_form(), inst.map_g.affine_form(), dom_g.to_polyhedron(), k.to_polyhedron(), l.to_polyhedron())
    {
        let polys: Option<Vec<Polyhedron>> = sets.iter().filter(|s| !s.is_full()).map(|s| s.to_polyhedron()).collect();
        if let Some(polys) = polys {
            let n = inst.dim();
            let mut prog = RiProgram::new();
            let x = prog.free_point(n);
            for q in &polys {
                let xi = prog.point(q)?;
                prog.link(&[(&x, 1.0), (&xi, -1.0)], &vec![0.0; n]);
            }
            let rows = |m: &crate::linalg::Mat<T>| (0..m.rows).map(|i| to_f64_vec(m.row(i))).collect::<Vec<_>>();
            let fy = prog.free_point(a.rows);
            prog.link_affine(&x, &rows(&a), &to_f64_vec(&b), &fy);
            let dg = prog.point(&pd)?;
            let kk = prog.point(&pk)?;
            prog.link(&[(&fy, 1.0), (&dg, -1.0), (&kk, 1.0)], &vec![0.0; a.rows]);
            let gy = prog.free_point(c.rows);
            prog.link_affine(&x, &rows(&c), &to_f64_vec(&d), &gy);
            let ll = prog.point(&pl)?;
            prog.link(&[(&gy, 1.0), (&ll, 1.0)], &vec![0.0; c.rows]);
            return Ok(match prog.solve()? {
                Some((t, vals)) if t > RI_SLACK_TOL && !vals.is_empty() => {
                    let w: Vec<f64> = x.iter().map(|&i| vals[i]).collect();
                    report(CqStatus::Held, Some(from_f64_vec(&w)), CqMethod::LinearProgram)
                }
                Some((t, _)) if t > RI_SLACK_TOL => report(CqStatus::Held, None, CqMethod::LinearProgram),
                _ => report(CqStatus::Violated, None, CqMethod::LinearProgram),
            });
        }
    }
    let candidates = match joint_ri_point(&sets, samples, seed) {
        Start::Empty => return Ok(report(CqStatus::Violated, None, CqMethod::LinearProgram)),
        Start::Found(x) => {
            let mut c = vec![x];
            c.extend(inst.x_set.sample_ri(samples, T::lit(2.0), seed));
            c
        }
        Start::Unknown => inst.x_set.sample_ri(samples, T::lit(2.0), seed),
    };
    let polys = (dom_g.to_polyhedron(), k.to_polyhedron());
    let f_ok = |y: &[T]| -> bool {
        if matches!(k, Cone::Zero { .. }) || inst.g.monotone_cones.contains(k) {
            return dom_g.ri_contains(y).unwrap_or(false);
        }
        match &polys {
            (Some(pd), Some(pk)) => ri_difference_contains(pd, pk, &to_f64_vec(y)).unwrap_or(false),
            _ => dom_g.ri_contains(y).unwrap_or(false),
        }
    };
    for x in candidates {
        let inside = sets.iter().all(|s| s.ri_contains(&x).unwrap_or(false));
        if !inside {
            continue;
        }
        let (ExtPoint::Point(fy), ExtPoint::Point(gy)) = (inst.map_f.eval(&x), inst.map_g.eval(&x)) else { continue };
        if f_ok(&fy) && l.ri_contains(&neg(&gy)) {
            return Ok(report(CqStatus::Held, Some(x), CqMethod::Sampling));
        }
    }
    Ok(report(CqStatus::Unknown, None, CqMethod::Sampling))
}

/// Grid minimum of `f + g∘F` over the feasible set, with its minimizer.
fn statement_a<T: Real>(inst: &FarkasInstance<T>, grid: &GridSpec) -> Result<Option<(T, Option<Vec<T>>)>> {
    let phi = |x: &[T]| if inst.is_feasible(x) { inst.value(x).finite().map(|v| -v) } else { None };
    match grid_maximize(inst.dim(), grid, &phi, None) {
        Ok(e) => Ok(Some((
            match e.value {
                Extended::Finite(v) => -v,
                Extended::PosInf => T::neg_infinity(),
            },
            e.point,
        ))),
        Err(Error::EmptyDomain) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Decides which side of the alternative holds: a grid search for a feasible
/// `x` with `f(x) + g(F(x)) < 0`, and a search for a certificate
/// `(u, v, y, z, s)` with `u ∈ −K°`, `v ∈ −L°` and left side `≤ 1e−6`.
pub fn farkas_alternative<T: Real>(inst: &FarkasInstance<T>, budget: &Budget, a_grid: &GridSpec) -> Result<FarkasReport<T>> {
    let cq = check_farkas_cq(inst, 400, budget.seed)?;
    let lay = Layout { m1: inst.map_f.dim_out(), m2: inst.map_g.dim_out(), n: inst.dim() };
    let (rows, rhs) = certificate_rows(inst, &lay);
    let objective = |w: &[T]| {
        let [u, v, y, z, s] = lay.split(w);
        farkas_lhs(inst, u, v, y, z, s, &budget.grid)
    };
    let mut hints = vec![vec![T::zero(); lay.dim()]];
    let pu = inst.map_f.cone.sample_polar(budget.polar_hints, T::one(), budget.seed);
    let pv = inst.map_g.cone.sample_polar(budget.polar_hints, T::one(), budget.seed.wrapping_add(1));
    for (i, u) in pu.iter().enumerate() {
        for v in pv.iter().skip(i % 2).step_by(2) {
            let mut w = vec![T::zero(); lay.dim()];
            w[..lay.m1].copy_from_slice(u);
            w[lay.m1..lay.m1 + lay.m2].copy_from_slice(v);
            hints.push(w);
        }
    }
    let (a, b) = rayon::join(
        || statement_a(inst, a_grid),
        || crate::search::minimize_affine(lay.dim(), &rows, &rhs, &objective, &hints, &budget.search),
    );
    let certificate = b.argmin.as_ref().and_then(|w| {
        b.value.finite().map(|lhs| {
            let [u, v, y, z, s] = lay.split(w);
            FarkasCertificate { u: u.to_vec(), v: v.to_vec(), y: y.to_vec(), z: z.to_vec(), s: s.to_vec(), lhs }
        })
    });
    let tol = T::lit(CERTIFICATE_TOL);
    let b_found = certificate.as_ref().map_or(false, |c| c.lhs <= tol);
    let (a_min, a_witness, a_known) = match a {
        Ok(Some((v, x))) => (Some(v), x, true),
        Ok(None) => (None, None, true),
        Err(Error::DimensionGuard { .. }) | Err(Error::GridTooLarge { .. }) => (None, None, false),
        Err(e) => return Err(e),
    };
    let a_negative = a_min.map_or(false, |v| v < -tol);
    let verdict = match (a_negative, b_found) {
        (true, true) => FarkasVerdict::InconsistentData,
        (false, true) => FarkasVerdict::BHolds,
        (true, false) => FarkasVerdict::AFails,
        (false, false) if a_known => FarkasVerdict::AHoldsSampled,
        _ => FarkasVerdict::Unknown,
    };
    Ok(FarkasReport { verdict, certificate, b_margin: b.value, a_min, a_witness, cq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use approx::assert_abs_diff_eq;

    fn affine1(a: f64, b: f64, cone: Cone<f64>) -> ConeMap<f64> {
        ConeMap::affine(Mat::from_rows(&[vec![a]]), vec![b], cone)
    }

    fn run(inst: &FarkasInstance<f64>) -> FarkasReport<f64> {
        farkas_alternative(inst, &Budget::default(), &GridSpec::default()).unwrap()
    }

    #[test]
    fn sign_on_the_negative_half_of_an_interval() {
        // x ∈ [−1, 1], x ≤ 0 ⟹ −x ≥ 0.
        let inst = FarkasInstance::new(
            ConvexSet::interval(-1.0, 1.0),
            Oracle::linear(vec![-1.0]),
            Oracle::zero(1),
            affine1(1.0, 0.0, Cone::Zero { dim: 1 }),
            affine1(1.0, 0.0, Cone::Orthant { n: 1 }),
        )
        .unwrap();
        let r = run(&inst);
        assert_eq!(r.verdict, FarkasVerdict::BHolds);
        let c = r.certificate.unwrap();
        assert!(c.lhs.abs() < 1e-9);
        assert_abs_diff_eq!(c.v[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.a_min.unwrap(), 0.0, epsilon = 1e-12);
        assert!(r.cq.is_held());
    }

    #[test]
    fn failing_statement_has_no_certificate() {
        let inst = FarkasInstance::new(
            ConvexSet::interval(-1.0, 1.0),
            Oracle::linear(vec![1.0]),
            Oracle::zero(1),
            affine1(1.0, 0.0, Cone::Zero { dim: 1 }),
            affine1(1.0, 0.0, Cone::Orthant { n: 1 }),
        )
        .unwrap();
        let r = run(&inst);
        assert_eq!(r.verdict, FarkasVerdict::AFails);
        assert_abs_diff_eq!(r.a_min.unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.a_witness.unwrap()[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.b_margin.finite().unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn quadratic_objective_with_shift() {
        // min ½x² − x + c over x ≤ 2 is c − ½.
        let make = |c: f64| {
            FarkasInstance::new(
                ConvexSet::Full { dim: 1 },
                Oracle::quadratic(1.0, vec![-1.0], c),
                Oracle::zero(1),
                affine1(1.0, 0.0, Cone::Zero { dim: 1 }),
                affine1(1.0, -2.0, Cone::Orthant { n: 1 }),
            )
            .unwrap()
        };
        let r = run(&make(0.0));
        assert_eq!(r.verdict, FarkasVerdict::AFails);
        assert_abs_diff_eq!(r.a_min.unwrap(), -0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(r.b_margin.finite().unwrap(), 0.5, epsilon = 1e-6);
        let r = run(&make(0.75));
        assert_eq!(r.verdict, FarkasVerdict::BHolds);
        assert_abs_diff_eq!(r.certificate.unwrap().lhs, -0.25, epsilon = 1e-6);
    }

    #[test]
    fn nonlinear_inner_map() {
        // X = [−2, 2], x ≥ 0, value x² − x: minimum −¼.
        let inst = FarkasInstance::new(
            ConvexSet::interval(-2.0, 2.0),
            Oracle::zero(1),
            Oracle::linear(vec![1.0]),
            ConeMap::quadratic(vec![(2.0, vec![-1.0], 0.0)]),
            affine1(-1.0, 0.0, Cone::Orthant { n: 1 }),
        )
        .unwrap();
        let r = run(&inst);
        assert_eq!(r.verdict, FarkasVerdict::AFails);
        assert_abs_diff_eq!(r.a_min.unwrap(), -0.25, epsilon = 1e-9);
        assert_abs_diff_eq!(r.b_margin.finite().unwrap(), 0.25, epsilon = 1e-6);
    }

    #[test]
    fn quadratic_outer_function() {
        // X = [0, 1], x ≤ 1, value x + ½(x − 1)²: minimum ½.
        let inst = FarkasInstance::new(
            ConvexSet::interval(0.0, 1.0),
            Oracle::linear(vec![1.0]),
            Oracle::half_sq_norm(1),
            affine1(1.0, -1.0, Cone::Zero { dim: 1 }),
            affine1(1.0, -1.0, Cone::Orthant { n: 1 }),
        )
        .unwrap();
        let r = run(&inst);
        assert_eq!(r.verdict, FarkasVerdict::BHolds);
        assert_abs_diff_eq!(r.certificate.unwrap().lhs, -0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(r.a_min.unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn zero_data_has_the_zero_certificate() {
        let inst = FarkasInstance::new(
            ConvexSet::interval(-1.0, 1.0),
            Oracle::zero(1),
            Oracle::zero(1),
            affine1(1.0, 0.0, Cone::Orthant { n: 1 }),
            affine1(1.0, 0.0, Cone::Orthant { n: 1 }),
        )
        .unwrap();
        let r = run(&inst);
        assert_eq!(r.verdict, FarkasVerdict::BHolds);
        assert!(r.certificate.unwrap().lhs.abs() < 1e-12);
    }

    #[test]
    fn qualification_fails_without_a_strictly_feasible_point() {
        // x + 2 ≤ 0 has no solution in [−1, 1].
        let inst = FarkasInstance::new(
            ConvexSet::interval(-1.0, 1.0),
            Oracle::zero(1),
            Oracle::zero(1),
            affine1(1.0, 0.0, Cone::Zero { dim: 1 }),
            affine1(1.0, 2.0, Cone::Orthant { n: 1 }),
        )
        .unwrap();
        assert_eq!(check_farkas_cq(&inst, 100, 0).unwrap().held, CqStatus::Violated);
    }
}
