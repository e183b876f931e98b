//! `(g∘F)*(p) = min_{v ∈ −K°} g*(v) + ⟨v, F⟩*(p)` and its relatives.

use super::cq::{check_cq_with, CqCondition, CqMethod, CqReport, CqStatus};
use super::CompositeProblem;
use crate::conjugate::{conjugate_value, GridSpec};
use crate::error::{check_dim, Error, Result};
use crate::extended::{ExtPoint, Extended};
use crate::linalg::{solve_affine, Mat};
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::map::ConeMap;
use crate::oracle::Oracle;
use crate::polyhedral::constrain_member;
use crate::scalar::{dot, from_f64_vec, sub, to_f64_vec, Real};
use crate::search::{minimize_affine, SearchSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    pub search: SearchSpec,
    /// Grid for inner conjugates that have no closed form.
    pub grid: GridSpec,
    /// Points of `−K°` evaluated before the search grid.
    pub polar_hints: usize,
    /// Run when the qualification condition is not verified; the value is then only an upper bound.
    pub waive_cq: bool,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { search: SearchSpec::default(), grid: GridSpec::cube(-8.0, 8.0, 129), polar_hints: 16, waive_cq: false, seed: 0 }
    }
}

impl Budget {
    pub fn waived(mut self) -> Self {
        self.waive_cq = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact linear program over the polyhedral data.
    Enumeration,
    /// Search over the affine set of admissible multipliers.
    Grid,
    /// The multiplier is pinned by linear equalities.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeConjugateResult<T> {
    pub value: Extended<T>,
    /// Minimizing `v ∈ −K°`.
    pub argmin_v: Option<Vec<T>>,
    /// Minimizing `y` of the additive formula.
    pub attained_y: Option<Vec<T>>,
    /// `⟨v, F⟩*(p − y)` at the minimizer.
    pub inner_value: Option<Extended<T>>,
    pub method: Method,
    pub certified: bool,
    /// The qualification condition was not verified: the value bounds the conjugate from above.
    pub upper_bound_only: bool,
    pub cq: CqReport<T>,
}

fn gate<T: Real>(p: &CompositeProblem<T>, cond: CqCondition, budget: &Budget) -> Result<CqReport<T>> {
    let r = match check_cq_with(p, cond, 400, budget.seed) {
        Ok(r) => r,
        Err(_) if budget.waive_cq => CqReport { condition: cond, held: CqStatus::Unknown, witness: None, method: CqMethod::Sampling },
        Err(e) => return Err(e),
    };
    if !r.is_held() && !budget.waive_cq {
        return Err(Error::QualificationNotVerified(format!("{cond:?}")));
    }
    Ok(r)
}

/// `⟨v, F⟩*(q)`, in closed form when available.
pub(crate) fn inner_conjugate<T: Real>(map: &ConeMap<T>, v: &[T], q: &[T], grid: &GridSpec) -> Extended<T> {
    if let Some(c) = map.scalar_conjugate(v, q) {
        return c;
    }
    match map.scalarize(v) {
        Ok(s) => conjugate_value(&s, q, grid).map_or(Extended::PosInf, |r| r.0),
        Err(_) => Extended::PosInf,
    }
}

fn neg<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().map(|&x| -x).collect()
}

struct LpAnswer<T> {
    value: Extended<T>,
    v: Option<Vec<T>>,
    y: Option<Vec<T>>,
    inner: Option<Extended<T>>,
}

/// Exact answer when `g*` (and `f*`) are polyhedral, `F` is affine and `K` polyhedral.
fn lp_conjugate<T: Real>(p: &CompositeProblem<T>, q: &[T], with_f: bool) -> Result<Option<LpAnswer<T>>> {
    let Some(gc) = p.g.polyhedral_conjugate() else { return Ok(None) };
    let fc = match (with_f, &p.f) {
        (true, Some(f)) => match f.polyhedral_conjugate() {
            Some(c) => Some(c),
            None => return Ok(None),
        },
        _ => None,
    };
    let Some((a, b)) = p.map.affine_form() else { return Ok(None) };
    let Some(gens) = p.cone.polar_generators() else { return Ok(None) };
    let (n, m) = (p.dim_in(), p.dim_out());
    let bf = to_f64_vec(&b);
    let mut lp = Lp::minimize();
    let v: Vec<usize> = (0..m).map(|i| lp.free_var(gc.lin[i] - bf[i])).collect();
    let mus: Vec<usize> = gens.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
    for i in 0..m {
        let mut row = vec![(v[i], 1.0)];
        row.extend(mus.iter().zip(&gens).map(|(&mu, g)| (mu, -g[i].as_f64())));
        lp.constraint(&row, Cmp::Eq, 0.0);
    }
    constrain_member(&mut lp, &v, &gc.domain);
    let y: Vec<usize> = match &fc {
        Some(fc) => {
            let y: Vec<usize> = (0..n).map(|j| lp.free_var(fc.lin[j])).collect();
            constrain_member(&mut lp, &y, &fc.domain);
            y
        }
        None => vec![],
    };
    for j in 0..n {
        let mut row: Vec<(usize, f64)> = (0..m).map(|i| (v[i], a[(i, j)].as_f64())).collect();
        if let Some(&yj) = y.get(j) {
            row.push((yj, 1.0));
        }
        lp.constraint(&row, Cmp::Eq, q[j].as_f64());
    }
    let constant = gc.constant + fc.as_ref().map_or(0.0, |c| c.constant);
    Ok(Some(match lp.solve()? {
        LpOutcome::Optimal { x, objective } => {
            let vv: Vec<f64> = v.iter().map(|&i| x[i]).collect();
            let yv: Option<Vec<T>> = (!y.is_empty()).then(|| from_f64_vec(&y.iter().map(|&i| x[i]).collect::<Vec<_>>()));
            let inner = -vv.iter().zip(&bf).map(|(s, t)| s * t).sum::<f64>();
            LpAnswer {
                value: Extended::Finite(T::lit(objective + constant)),
                v: Some(from_f64_vec(&vv)),
                y: yv,
                inner: Some(Extended::Finite(T::lit(inner))),
            }
        }
        LpOutcome::Infeasible => LpAnswer { value: Extended::PosInf, v: None, y: None, inner: None },
        LpOutcome::Unbounded => return Err(Error::InvalidInput("the composite function is not proper".into())),
    }))
}

/// Equalities `rows·(v, y) = rhs` on the domain of the objective; `n_y = 0` without `f`.
fn multiplier_rows<T: Real>(p: &CompositeProblem<T>, q: &[T], n_y: usize) -> (Vec<Vec<T>>, Vec<T>) {
    let m = p.dim_out();
    let width = m + n_y;
    let lift = |a: &[T], off: usize| {
        let mut r = vec![T::zero(); width];
        r[off..off + a.len()].copy_from_slice(a);
        r
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (cv, cp) in p.map.dual_rows() {
        // C_v v + C_p (q − y) = 0
        let mut r = lift(&cv, 0);
        if n_y > 0 {
            for (j, &c) in cp.iter().enumerate() {
                r[m + j] = -c;
            }
        }
        rows.push(r);
        rhs.push(-dot(&cp, q));
    }
    for (a, r) in p.g.conjugate_equalities() {
        rows.push(lift(&a, 0));
        rhs.push(r);
    }
    if n_y > 0 {
        if let Some(f) = &p.f {
            for (a, r) in f.conjugate_equalities() {
                rows.push(lift(&a, m));
                rhs.push(r);
            }
        }
    }
    for a in p.cone.polar_equalities() {
        rows.push(lift(&a, 0));
        rhs.push(T::zero());
    }
    (rows, rhs)
}

/// Polar samples, the origin and subgradients of `g` along the range of `F`.
fn multiplier_hints<T: Real>(p: &CompositeProblem<T>, budget: &Budget) -> Vec<Vec<T>> {
    let m = p.dim_out();
    let mut hints = vec![vec![T::zero(); m]];
    hints.extend(p.cone.sample_polar(budget.polar_hints, T::one(), budget.seed));
    if p.g.has_subgradient() {
        for x in p.map.domain.sample_ri(4, T::one(), budget.seed) {
            if let ExtPoint::Point(y) = p.map.eval(&x) {
                if let Ok(s) = p.g.subgradient(&y) {
                    hints.extend(s.points().into_iter().take(8));
                }
            }
        }
    }
    hints
}

fn finish<T: Real>(
    p: &CompositeProblem<T>,
    q: &[T],
    n_y: usize,
    cq: CqReport<T>,
    budget: &Budget,
    objective: &(dyn Fn(&[T]) -> Extended<T> + Sync),
    hints: Vec<Vec<T>>,
) -> CompositeConjugateResult<T> {
    let m = p.dim_out();
    let (rows, rhs) = multiplier_rows(p, q, n_y);
    let free = solve_affine(m + n_y, &rows, &rhs).null_basis.len();
    let out = minimize_affine(m + n_y, &rows, &rhs, objective, &hints, &budget.search);
    let (v, y) = match &out.argmin {
        Some(w) => (Some(w[..m].to_vec()), (n_y > 0).then(|| w[m..].to_vec())),
        None => (None, None),
    };
    let inner = v.as_ref().map(|v| {
        let shifted = y.as_ref().map_or_else(|| q.to_vec(), |y| sub(q, y));
        inner_conjugate(&p.map, v, &shifted, &budget.grid)
    });
    let upper_bound_only = !cq.is_held();
    CompositeConjugateResult {
        value: out.value,
        argmin_v: v,
        attained_y: y,
        inner_value: inner,
        method: if free == 0 { Method::ClosedForm } else { Method::Grid },
        certified: out.certified && !upper_bound_only,
        upper_bound_only,
        cq,
    }
}

/// `(g∘F)*(p)` through the minimization over `v ∈ −K°`.
///
/// Requires the first qualification condition unless `budget.waive_cq` is set.
pub fn composite_conjugate<T: Real>(p: &CompositeProblem<T>, q: &[T], budget: &Budget) -> Result<CompositeConjugateResult<T>> {
    check_dim(p.dim_in(), q.len())?;
    let outer = p.outer_only();
    let cq = gate(&outer, CqCondition::Cq1, budget)?;
    if let Some(ans) = lp_conjugate(&outer, q, false)? {
        let upper_bound_only = !cq.is_held();
        return Ok(CompositeConjugateResult {
            value: ans.value,
            argmin_v: ans.v,
            attained_y: None,
            inner_value: ans.inner,
            method: Method::Enumeration,
            certified: !upper_bound_only,
            upper_bound_only,
            cq,
        });
    }
    let objective = |v: &[T]| -> Extended<T> {
        if !outer.cone.polar_contains(&neg(v)) {
            return Extended::PosInf;
        }
        let gs = conjugate_value(&outer.g, v, &budget.grid).map_or(Extended::PosInf, |r| r.0);
        if gs.is_inf() {
            return gs;
        }
        gs + inner_conjugate(&outer.map, v, q, &budget.grid)
    };
    let hints = multiplier_hints(&outer, budget);
    Ok(finish(&outer, q, 0, cq, budget, &objective, hints))
}

/// `(f + g∘F)*(p) = min g*(v) + f*(y) + ⟨v, F⟩*(p − y)` over `v ∈ −K°` and `y`.
///
/// Requires the second qualification condition unless waived; without `f` this is
/// [`composite_conjugate`].
pub fn additive_composite_conjugate<T: Real>(p: &CompositeProblem<T>, q: &[T], budget: &Budget) -> Result<CompositeConjugateResult<T>> {
    let Some(f) = &p.f else { return composite_conjugate(p, q, budget) };
    check_dim(p.dim_in(), q.len())?;
    let cq = gate(p, CqCondition::Cq2, budget)?;
    let upper_bound_only = !cq.is_held();
    if let Some(ans) = lp_conjugate(p, q, true)? {
        return Ok(CompositeConjugateResult {
            value: ans.value,
            argmin_v: ans.v,
            attained_y: ans.y,
            inner_value: ans.inner,
            method: Method::Enumeration,
            certified: !upper_bound_only,
            upper_bound_only,
            cq,
        });
    }
    let (n, m) = (p.dim_in(), p.dim_out());
    let objective = |w: &[T]| -> Extended<T> {
        let (v, y) = w.split_at(m);
        if !p.cone.polar_contains(&neg(v)) {
            return Extended::PosInf;
        }
        let fs = conjugate_value(f, y, &budget.grid).map_or(Extended::PosInf, |r| r.0);
        if fs.is_inf() {
            return fs;
        }
        let gs = conjugate_value(&p.g, v, &budget.grid).map_or(Extended::PosInf, |r| r.0);
        if gs.is_inf() {
            return gs;
        }
        fs + gs + inner_conjugate(&p.map, v, &sub(q, y), &budget.grid)
    };
    let mut hints = Vec::new();
    for v in multiplier_hints(p, budget) {
        for y in [vec![T::zero(); n], q.to_vec()] {
            let mut w = v.clone();
            w.extend(y);
            hints.push(w);
        }
    }
    Ok(finish(p, q, n, cq, budget, &objective, hints))
}

/// `(g∘A)*(p) = min {g*(v) : A*v = p}`.
pub fn linear_composite_conjugate<T: Real>(g: &Oracle<T>, a: &Mat<T>, q: &[T], budget: &Budget) -> Result<CompositeConjugateResult<T>> {
    let map = ConeMap::linear(a.clone(), crate::cones::Cone::Zero { dim: a.rows });
    composite_conjugate(&CompositeProblem::new(g.clone(), map)?, q, budget)
}

/// `(max_i f_i)*(x) = min_{v ∈ Δ_m} (Σ v_i f_i)*(x)`; `argmin_v` holds the weights.
pub fn max_of_convex_conjugate<T: Real>(fs: &[Oracle<T>], x: &[T], budget: &Budget) -> Result<CompositeConjugateResult<T>> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("at least one function is required".into()));
    }
    let map = ConeMap::component_wise(fs.to_vec());
    composite_conjugate(&CompositeProblem::new(Oracle::max_coord(fs.len()), map)?, x, budget)
}
