//! Qualification conditions `F(ri dom F) ∩ ri(dom g − K) ≠ ∅` and relatives.

use super::CompositeProblem;
use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::extended::ExtPoint;
use crate::linalg::Mat;
use crate::map::MapKind;
use crate::polyhedral::{ri_difference_contains, Polyhedron, RiProgram, RI_SLACK_TOL};
use crate::scalar::{from_f64_vec, to_f64_vec, Real};
use crate::sets::ConvexSet;
use crate::space::sym_to_coords;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CqCondition {
    /// `F(ri dom F) ∩ ri(dom g − K) ≠ ∅`.
    #[serde(rename = "CQ1")]
    Cq1,
    /// `F(ri dom F) ∩ ri(dom g) ≠ ∅`.
    #[serde(rename = "CQ1-simple")]
    Cq1Simple,
    /// `F(ri dom f ∩ ri dom F) ∩ ri(dom g − K) ≠ ∅`.
    #[serde(rename = "CQ2")]
    Cq2,
    /// `F(ri dom f ∩ ri dom F) ∩ ri(−K) ≠ ∅` (without `f`: `rge F ∩ ri(−K) ≠ ∅`).
    #[serde(rename = "slater-conic")]
    SlaterConic,
    /// The second condition applied to a stacked problem assembled by the caller.
    #[serde(rename = "cq-farkas")]
    CqFarkas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CqStatus {
    Held,
    Violated,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CqMethod {
    FullDomain,
    LinearProgram,
    RangeInterval,
    SpectralRange,
    Sampling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CqReport<T> {
    pub condition: CqCondition,
    pub held: CqStatus,
    /// A point `x̄` with `F(x̄)` in the required relative interior.
    pub witness: Option<Vec<T>>,
    pub method: CqMethod,
}

impl<T> CqReport<T> {
    pub fn is_held(&self) -> bool {
        self.held == CqStatus::Held
    }
}

struct Target<T> {
    d: ConvexSet<T>,
    k: Cone<T>,
    uses_f: bool,
}

fn target<T: Real>(p: &CompositeProblem<T>, cond: CqCondition) -> Result<Target<T>> {
    let m = p.dim_out();
    let dom_g = || p.g.domain.clone().ok_or_else(|| Error::Unsupported(format!("domain of {} is not cataloged", p.g.name)));
    Ok(match cond {
        CqCondition::Cq1 => Target { d: dom_g()?, k: p.cone.clone(), uses_f: false },
        CqCondition::Cq1Simple => Target { d: dom_g()?, k: Cone::Zero { dim: m }, uses_f: false },
        CqCondition::Cq2 | CqCondition::CqFarkas => Target { d: dom_g()?, k: p.cone.clone(), uses_f: true },
        CqCondition::SlaterConic => Target { d: ConvexSet::NegCone(p.cone.clone()), k: Cone::Zero { dim: m }, uses_f: true },
    })
}

fn is_full_cone<T>(k: &Cone<T>) -> bool {
    matches!(k, Cone::Polyhedral { rows, .. } if rows.is_empty())
}

pub(crate) enum Start<T> {
    Found(Vec<T>),
    Empty,
    Unknown,
}

/// A point of `ri S₁ ∩ … ∩ ri S_k`.
pub(crate) fn joint_ri_point<T: Real>(sets: &[ConvexSet<T>], samples: usize, seed: u64) -> Start<T> {
    let dim = sets[0].dim();
    let active: Vec<&ConvexSet<T>> = sets.iter().filter(|s| !s.is_full()).collect();
    match active.len() {
        0 => return Start::Found(vec![T::zero(); dim]),
        1 => return active[0].interior_point().map_or(Start::Unknown, Start::Found),
        _ => {}
    }
    let polys: Option<Vec<Polyhedron>> = active.iter().map(|s| s.to_polyhedron()).collect();
    if let Some(polys) = polys {
        let mut prog = RiProgram::new();
        let Ok(first) = prog.point(&polys[0]) else { return Start::Unknown };
        for q in &polys[1..] {
            let Ok(xi) = prog.point(q) else { return Start::Unknown };
            prog.link(&[(&first, 1.0), (&xi, -1.0)], &vec![0.0; dim]);
        }
        return match prog.solve() {
            Ok(Some((t, vals))) if t > RI_SLACK_TOL && !vals.is_empty() => {
                Start::Found(from_f64_vec(&first.iter().map(|&i| vals[i]).collect::<Vec<_>>()))
            }
            Ok(_) => Start::Empty,
            Err(_) => Start::Unknown,
        };
    }
    let base = active.iter().position(|s| !matches!(s, ConvexSet::LevelSet(_))).unwrap_or(0);
    for x in active[base].sample_ri(samples, T::lit(2.0), seed) {
        let ok = active.iter().enumerate().all(|(i, s)| i == base || s.ri_contains(&x).unwrap_or_else(|_| s.contains(&x)));
        if ok {
            return Start::Found(x);
        }
    }
    Start::Unknown
}

/// Checks a qualification condition with 400 samples and seed 0 for the sampling fallback.
pub fn check_cq<T: Real>(p: &CompositeProblem<T>, cond: CqCondition) -> Result<CqReport<T>> {
    check_cq_with(p, cond, 400, 0)
}

/// Rules, in order: full target, exact LP for affine `F` with polyhedral data,
/// range interval for scalar quadratics, the sorted-vector range of `λ`, then
/// sampling of `ri dom F` (undecided when nothing is found).
pub fn check_cq_with<T: Real>(p: &CompositeProblem<T>, cond: CqCondition, samples: usize, seed: u64) -> Result<CqReport<T>> {
    let t = target(p, cond)?;
    let mut sets = vec![p.map.domain.clone()];
    if t.uses_f {
        if let Some(f) = &p.f {
            sets.push(f.domain.clone().ok_or_else(|| Error::Unsupported(format!("domain of {} is not cataloged", f.name)))?);
        }
    }
    let report = |held, witness, method| CqReport { condition: cond, held, witness, method };
    let start = joint_ri_point(&sets, samples, seed);
    if let Start::Empty = start {
        return Ok(report(CqStatus::Violated, None, CqMethod::LinearProgram));
    }
    if t.d.is_full() || (is_full_cone(&t.k) && t.d.interior_point().is_some()) {
        return Ok(match start {
            Start::Found(x) if !p.map.eval(&x).is_top() => report(CqStatus::Held, Some(x), CqMethod::FullDomain),
            _ => report(CqStatus::Unknown, None, CqMethod::FullDomain),
        });
    }
    let extra_full = sets[1..].iter().all(|s| s.is_full());
    if let Some(r) = affine_rule(p, &t, &sets)? {
        return Ok(report(r.0, r.1, CqMethod::LinearProgram));
    }
    if extra_full && p.map.domain.is_full() {
        if let Some(r) = interval_rule(p, &t) {
            return Ok(report(r.0, r.1, CqMethod::RangeInterval));
        }
        if let Some(r) = spectral_rule(p, &t, samples, seed)? {
            return Ok(report(r.0, r.1, CqMethod::SpectralRange));
        }
    }
    Ok(match sampling_rule(p, &t, &sets, samples, seed) {
        Some(x) => report(CqStatus::Held, Some(x), CqMethod::Sampling),
        None => report(CqStatus::Unknown, None, CqMethod::Sampling),
    })
}

type RuleOutcome<T> = (CqStatus, Option<Vec<T>>);

fn affine_rule<T: Real>(p: &CompositeProblem<T>, t: &Target<T>, sets: &[ConvexSet<T>]) -> Result<Option<RuleOutcome<T>>> {
    let Some((a, b)) = p.map.affine_form() else { return Ok(None) };
    let (Some(pd), Some(pk)) = (t.d.to_polyhedron(), t.k.to_polyhedron()) else { return Ok(None) };
    let mut polys = Vec::new();
    for s in &sets[1..] {
        if s.is_full() {
            continue;
        }
        match s.to_polyhedron() {
            Some(q) => polys.push(q),
            None => return Ok(None),
        }
    }
    let (n, m) = (p.dim_in(), p.dim_out());
    let mut prog = RiProgram::new();
    let x = prog.free_point(n);
    for q in &polys {
        let xi = prog.point(q)?;
        prog.link(&[(&x, 1.0), (&xi, -1.0)], &vec![0.0; n]);
    }
    let y = prog.free_point(m);
    let rows: Vec<Vec<f64>> = (0..m).map(|i| to_f64_vec(a.row(i))).collect();
    prog.link_affine(&x, &rows, &to_f64_vec(&b), &y);
    let d = prog.point(&pd)?;
    let k = prog.point(&pk)?;
    prog.link(&[(&y, 1.0), (&d, -1.0), (&k, 1.0)], &vec![0.0; m]);
    Ok(Some(match prog.solve()? {
        Some((s, vals)) if s > RI_SLACK_TOL && !vals.is_empty() => {
            (CqStatus::Held, Some(from_f64_vec(&x.iter().map(|&i| vals[i]).collect::<Vec<_>>())))
        }
        _ => (CqStatus::Violated, None),
    }))
}

fn cone_interval<T: Real>(k: &Cone<T>) -> (f64, f64) {
    let lo = if k.contains(&[-T::one()]) { f64::NEG_INFINITY } else { 0.0 };
    let hi = if k.contains(&[T::one()]) { f64::INFINITY } else { 0.0 };
    (lo, hi)
}

/// `[lo, hi]` of a one-dimensional set (`lo > hi` when empty).
fn interval_of<T: Real>(s: &ConvexSet<T>) -> Option<(f64, f64)> {
    if s.dim() != 1 {
        return None;
    }
    Some(match s {
        ConvexSet::Full { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        ConvexSet::Box { lo, hi } => (lo[0].as_f64(), hi[0].as_f64()),
        ConvexSet::Polytope { vertices } | ConvexSet::SpectrahedronHull { generators: vertices, .. } => {
            let v: Vec<f64> = vertices.iter().map(|p| p[0].as_f64()).collect();
            (v.iter().cloned().fold(f64::INFINITY, f64::min), v.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        }
        ConvexSet::Halfspace { a, b } => {
            let (a, b) = (a[0].as_f64(), b.as_f64());
            if a > 0.0 {
                (f64::NEG_INFINITY, b / a)
            } else if a < 0.0 {
                (b / a, f64::INFINITY)
            } else if b >= 0.0 {
                (f64::NEG_INFINITY, f64::INFINITY)
            } else {
                (1.0, 0.0)
            }
        }
        ConvexSet::Cone(k) => cone_interval(k),
        ConvexSet::NegCone(k) => {
            let (lo, hi) = cone_interval(k);
            (-hi, -lo)
        }
        ConvexSet::LevelSet(_) => return None,
    })
}

/// `F(x) = ½a‖x‖² + ⟨c, x⟩ + d` with `a ≠ 0` has range `[ext, ∞)` or `(−∞, ext]`.
fn interval_rule<T: Real>(p: &CompositeProblem<T>, t: &Target<T>) -> Option<RuleOutcome<T>> {
    let q = p.map.quadratic_form()?;
    if q.len() != 1 || q[0].0 == T::zero() {
        return None;
    }
    let (a, c, d0) = (q[0].0.as_f64(), to_f64_vec(&q[0].1), q[0].2.as_f64());
    let (dlo, dhi) = interval_of(&t.d)?;
    let (klo, khi) = cone_interval(&t.k);
    if dlo > dhi {
        return Some((CqStatus::Violated, None));
    }
    let (tlo, thi) = (dlo - khi, dhi - klo);
    let ext = d0 - c.iter().map(|v| v * v).sum::<f64>() / (2.0 * a);
    let tau = if tlo == thi {
        let ok = if a > 0.0 { tlo >= ext } else { tlo <= ext };
        ok.then_some(tlo)
    } else if a > 0.0 {
        let lo = tlo.max(ext);
        (thi > ext).then(|| if thi.is_finite() { 0.5 * (lo + thi) } else { lo + 1.0 })
    } else {
        let hi = thi.min(ext);
        (tlo < ext).then(|| if tlo.is_finite() { 0.5 * (tlo + hi) } else { hi - 1.0 })
    };
    let Some(tau) = tau else { return Some((CqStatus::Violated, None)) };
    let mut x: Vec<f64> = c.iter().map(|v| -v / a).collect();
    x[0] += (2.0 * (tau - ext) / a).max(0.0).sqrt();
    Some((CqStatus::Held, Some(from_f64_vec(&x))))
}

/// `λ(Sⁿ)` is the cone of nonincreasing vectors.
fn sorted_cone(n: usize) -> Polyhedron {
    let ineq = (0..n.saturating_sub(1))
        .map(|i| {
            let mut a = vec![0.0; n];
            a[i] = 1.0;
            a[i + 1] = -1.0;
            (a, 0.0)
        })
        .collect();
    Polyhedron::H { dim: n, ineq, eq: vec![] }
}

fn diag_coords<T: Real>(y: &[T]) -> Vec<T> {
    sym_to_coords(&Mat::diag(y))
}

fn spectral_rule<T: Real>(p: &CompositeProblem<T>, t: &Target<T>, samples: usize, seed: u64) -> Result<Option<RuleOutcome<T>>> {
    let MapKind::Eigenvalues { n } = p.map.kind else { return Ok(None) };
    if let (Some(pd), Some(pk)) = (t.d.to_polyhedron(), t.k.to_polyhedron()) {
        let mut prog = RiProgram::new();
        let y = prog.free_point(n);
        prog.member(&y, &sorted_cone(n));
        let d = prog.point(&pd)?;
        let k = prog.point(&pk)?;
        prog.link(&[(&y, 1.0), (&d, -1.0), (&k, 1.0)], &vec![0.0; n]);
        return Ok(Some(match prog.solve()? {
            Some((s, vals)) if s > RI_SLACK_TOL && !vals.is_empty() => {
                let yv: Vec<T> = from_f64_vec(&y.iter().map(|&i| vals[i]).collect::<Vec<_>>());
                (CqStatus::Held, Some(diag_coords(&yv)))
            }
            _ => (CqStatus::Violated, None),
        }));
    }
    if !(p.g.permutation_invariant && t.k == (Cone::SpectralK { n })) {
        return Ok(None);
    }
    // Shift a sorted point v ∈ ri dom g off the diagonal by some b ∈ ri K, keeping v − b sorted.
    for mut v in t.d.sample_ri(samples, T::lit(2.0), seed) {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        if !t.d.ri_contains(&v).unwrap_or(false) {
            continue;
        }
        if n == 1 {
            return Ok(Some((CqStatus::Held, Some(diag_coords(&v)))));
        }
        let Some(k) = (0..n - 1).find(|&k| v[k] > v[k + 1]) else { continue };
        let kk = k + 1;
        let alpha = T::lit(0.5 * (1.0 - kk as f64 / n as f64)) * (v[k] - v[k + 1]);
        let low = -alpha * T::lit(kk as f64 / (n - kk) as f64);
        let y: Vec<T> = v.iter().enumerate().map(|(i, &vi)| vi - if i < kk { alpha } else { low }).collect();
        return Ok(Some((CqStatus::Held, Some(diag_coords(&y)))));
    }
    Ok(None)
}

fn sampling_rule<T: Real>(p: &CompositeProblem<T>, t: &Target<T>, sets: &[ConvexSet<T>], samples: usize, seed: u64) -> Option<Vec<T>> {
    let polys = (t.d.to_polyhedron(), t.k.to_polyhedron());
    let zero = matches!(t.k, Cone::Zero { .. });
    let increasing = p.g.monotone_cones.contains(&t.k);
    let member = |y: &[T]| -> bool {
        if zero || increasing {
            return t.d.ri_contains(y).unwrap_or(false);
        }
        match &polys {
            (Some(pd), Some(pk)) => ri_difference_contains(pd, pk, &to_f64_vec(y)).unwrap_or(false),
            _ => false,
        }
    };
    if !(zero || increasing || (polys.0.is_some() && polys.1.is_some())) {
        return None;
    }
    let base = sets.len() - 1;
    let candidates = sets[base].sample_ri(samples, T::lit(2.0), seed);
    candidates.into_iter().find(|x| {
        let inside = sets[..base].iter().all(|s| s.ri_contains(x).unwrap_or_else(|_| s.contains(x)));
        inside && matches!(p.map.eval(x), ExtPoint::Point(ref y) if member(y))
    })
}
