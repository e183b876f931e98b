use super::{
    check_closedness_sampling, check_midpoint_convexity, check_subgradient_fd, witness, CheckResult, PointSequence,
    VerificationReport,
};
use crate::composite::{
    additive_composite_subdifferential, check_cone_increasing, check_cq, check_monotone_condition, check_scalarization_convexity,
    composite_conjugate, composite_subdifferential, Budget, CompositeProblem, CqCondition, CqStatus,
};
use crate::cones::Cone;
use crate::conic::{
    check_optimality, farkas_alternative, fenchel_dual, solve_lagrangian_dual, solve_primal_grid, FarkasVerdict,
    OptimalityVerdict,
};
use crate::conjugate::{conjugate_bruteforce, fenchel_young_gap, GridExtremum, GridSpec};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::library::{example, Example, CONIC_PROGRAMS, FARKAS_INSTANCES, QUALIFIED_COMPOSITES, UNQUALIFIED_COMPOSITES};
use crate::linalg::Mat;
use crate::map::ConeMap;
use crate::matrixapps::{
    mff_gamma, spectral_conjugate, spectral_eval, spectral_subdifferential, vgf_conjugate, vgf_eval, vgf_oracle,
    vgf_subdifferential, von_neumann_gap, CMat, MatrixPair, SpectralSpec, VgfSet,
};
use crate::oracle::Oracle;
use crate::sampling::{normal_vec, rng, sub_seed, uniform, uniform_vec};
use crate::sets::ConvexSet;
use crate::space::{sym_from_coords, sym_to_coords, SpaceDescriptor};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const SUITES: &[&str] = &["core-convexity", "conjugate-oracle", "composite-calculus", "conic-duality", "farkas", "mff", "vgf", "spectral"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random samples per sampled property.
    pub samples: usize,
    /// Conjugate queries per instance.
    pub queries: usize,
    pub record_wall_time: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, samples: 200, queries: 5, record_wall_time: false }
    }
}

/// Conjugate cross-check tolerance against brute force.
const CONJ_TOL: f64 = 1e-3;
const GAP_TOL: f64 = 1e-4;

/// Runs a registered suite, or every suite for `"all"`; checks are sorted by id.
pub fn run_suite(suite_id: &str, config: &SuiteConfig) -> Result<VerificationReport> {
    let ids: Vec<&str> = match suite_id {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let start = Instant::now();
    let parts: Vec<Result<Vec<CheckResult>>> = ids.par_iter().map(|id| run_one(id, config)).collect();
    let mut checks = Vec::new();
    for (id, part) in ids.iter().zip(parts) {
        checks.extend(part?.into_iter().map(|c| {
            let cid = format!("{id}/{}", c.check_id);
            c.with_id(cid)
        }));
    }
    checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let wall_time = config.record_wall_time.then(|| start.elapsed().as_secs_f64());
    Ok(VerificationReport { suite_id: suite_id.to_string(), seed: config.seed, checks, wall_time })
}

fn run_one(id: &str, c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    match id {
        "core-convexity" => core_convexity(c),
        "conjugate-oracle" => conjugate_oracle(c),
        "composite-calculus" => composite_calculus(c),
        "conic-duality" => conic_duality(c),
        "farkas" => farkas(c),
        "mff" => mff(c),
        "vgf" => vgf(c),
        "spectral" => spectral(c),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn composite_example(name: &str) -> Result<CompositeProblem<f64>> {
    match example(name)? {
        Example::Composite(p) => Ok(p),
        _ => Err(Error::InvalidInput(format!("{name} is not a composite example"))),
    }
}

/// `|closed − brute|`, zero when both are `+∞`, infinite when only one is.
fn conj_gap(closed: Extended<f64>, brute: &GridExtremum<f64>) -> f64 {
    match (closed, brute.value) {
        (Extended::Finite(a), Extended::Finite(b)) => (a - b).abs(),
        (Extended::PosInf, Extended::PosInf) => 0.0,
        _ => f64::INFINITY,
    }
}

/// [`conj_gap`] relative to `1 + |closed|`, for slowly converging grids.
fn conj_rel_gap(closed: Extended<f64>, brute: &GridExtremum<f64>) -> f64 {
    conj_gap(closed, brute) / (1.0 + closed.finite().map_or(0.0, f64::abs))
}

fn brute_grid(dim: usize) -> GridSpec {
    if dim <= 2 {
        GridSpec::default()
    } else {
        GridSpec::cube(-4.0, 4.0, 49)
    }
}

fn catalog() -> Vec<Oracle<f64>> {
    vec![
        Oracle::half_sq_norm(2),
        Oracle::abs_sum(2),
        Oracle::norm2(2),
        Oracle::max_coord(2),
        Oracle::exp_sum(2),
        Oracle::quadratic(2.0, vec![1.0, -0.5], 0.25),
    ]
}

fn core_convexity(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let seed = |l: &str| sub_seed(c.seed, l);
    let bx = [[-3.0, 3.0]];
    let mut out = Vec::new();
    for f in catalog() {
        out.push(check_midpoint_convexity(&f, c.samples, &bx, seed(&f.name))?);
    }
    let concave = Oracle::quadratic(-1.0, vec![0.0], 0.0).named("negated-square");
    let r = check_midpoint_convexity(&concave, c.samples, &bx, seed("concave"))?;
    let replayed = r.witness.as_ref().map_or(false, |w| {
        let (x, y) = (w["x"][0], w["y"][0]);
        -0.5 * ((x + y) / 2.0f64).powi(2) + 0.25 * (x * x + y * y) > super::CONVEXITY_TOL
    });
    out.push(CheckResult::holds("concave-refuted-with-replayable-witness", !r.passed() && replayed, r.witness.clone()));
    for name in QUALIFIED_COMPOSITES {
        let p = composite_example(name)?;
        let r = check_midpoint_convexity(&p.as_oracle(), c.samples, &bx, seed(name))?;
        out.push(r.with_id(format!("composite-midpoint-convexity/{name}")));
    }
    let gram = ConeMap::<f64>::half_gram(2, 2);
    let v = check_scalarization_convexity(&gram, &Cone::psd(2), c.samples, seed("gram"));
    out.push(CheckResult::holds("half-gram-psd-scalarizations-convex", v.is_consistent(), None));
    let v = check_scalarization_convexity(&gram, &Cone::Zero { dim: 3 }, c.samples, seed("gram-zero"));
    out.push(CheckResult::holds("half-gram-zero-cone-refuted", !v.is_consistent(), None));
    let geo = composite_example("orthant-zero-geometry")?;
    let v = check_monotone_condition(&geo.g, &geo.map, &geo.cone, c.samples, seed("geometry"));
    out.push(CheckResult::holds("orthant-zero-geometry-monotone-condition", v.is_consistent(), None));
    let v = check_cone_increasing(&Oracle::<f64>::max_coord(2), &Cone::Orthant { n: 2 }, c.samples, 2.0, seed("max"));
    out.push(CheckResult::holds("max-orthant-increasing", v.is_consistent(), None));
    let mut r = rng(seed("fenchel-young"));
    for f in catalog() {
        let mut worst = 0.0f64;
        let mut w = None;
        for _ in 0..c.samples {
            let x: Vec<f64> = uniform_vec(&mut r, 2, 2.0);
            let y: Vec<f64> = uniform_vec(&mut r, 2, 2.0);
            if let Extended::Finite(gap) = fenchel_young_gap(&f, &x, &y, None)? {
                if -gap > worst {
                    worst = -gap;
                    w = Some(witness(&[("x", &x[..]), ("y", &y[..])]));
                }
            }
        }
        out.push(CheckResult::judge(format!("fenchel-young-nonnegative/{}", f.name), worst, 1e-9, w));
    }
    Ok(out)
}

fn conjugate_oracle(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut fs = catalog();
    fs.push(Oracle::exp_sum(1));
    fs.push(Oracle::abs_sum(1));
    for f in fs {
        let mut r = rng(sub_seed(c.seed, &f.name));
        let mut worst = 0.0f64;
        let mut w = None;
        for _ in 0..c.queries {
            let y: Vec<f64> = uniform_vec(&mut r, f.dim(), 1.5);
            let closed = f.conjugate(&y).expect("cataloged");
            let gap = conj_gap(closed, &conjugate_bruteforce(&f, &y, &GridSpec::default())?);
            if gap > worst {
                worst = gap;
                w = Some(witness(&[("y", &y[..])]));
            }
        }
        out.push(CheckResult::judge(format!("closed-form-vs-grid/{}-{}", f.name, f.dim()), worst, CONJ_TOL, w));
    }
    Ok(out)
}

fn composite_calculus(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let budget = Budget { seed: c.seed, ..Budget::default() };
    for name in QUALIFIED_COMPOSITES {
        let p = composite_example(name)?;
        out.push(CheckResult::holds(format!("cq1-held/{name}"), check_cq(&p, CqCondition::Cq1)?.is_held(), None));
        let mut r = rng(sub_seed(c.seed, name));
        let mut worst = 0.0f64;
        let mut w = None;
        for _ in 0..c.queries {
            let q: Vec<f64> = uniform_vec(&mut r, p.dim_in(), 1.2);
            let closed = composite_conjugate(&p, &q, &budget)?.value;
            let gap = conj_gap(closed, &conjugate_bruteforce(&p.as_oracle(), &q, &brute_grid(p.dim_in()))?);
            if gap > worst {
                worst = gap;
                w = Some(witness(&[("p", &q[..])]));
            }
        }
        out.push(CheckResult::judge(format!("conjugate-vs-grid/{name}"), worst, CONJ_TOL, w));
    }
    for name in UNQUALIFIED_COMPOSITES {
        let p = composite_example(name)?;
        out.push(CheckResult::holds(format!("cq1-violated/{name}"), check_cq(&p, CqCondition::Cq1)?.held == CqStatus::Violated, None));
        let mut r = rng(sub_seed(c.seed, name));
        let mut worst = 0.0f64;
        let mut labeled = true;
        for _ in 0..c.queries {
            let q: Vec<f64> = uniform_vec(&mut r, p.dim_in(), 1.2);
            let res = composite_conjugate(&p, &q, &budget.clone().waived())?;
            labeled &= res.upper_bound_only && !res.certified;
            let brute = conjugate_bruteforce(&p.as_oracle(), &q, &brute_grid(p.dim_in()))?;
            let below = match (res.value, brute.value) {
                (Extended::Finite(a), Extended::Finite(b)) => b - a,
                (Extended::Finite(_), Extended::PosInf) => f64::INFINITY,
                _ => 0.0,
            };
            worst = worst.max(below);
        }
        out.push(CheckResult::judge(format!("upper-bound-without-cq/{name}"), worst, CONJ_TOL, None));
        out.push(CheckResult::holds(format!("upper-bound-labeled/{name}"), labeled, None));
    }
    let kinks: Vec<(&str, Vec<f64>)> = vec![
        ("abs-as-max", vec![0.0]),
        ("abs-as-max", vec![1.5]),
        ("max-half-square-linear", vec![0.0]),
        ("max-half-square-linear", vec![2.0]),
        ("unit-interval-level-set", vec![0.5]),
        ("cosh-sum", vec![0.3]),
        ("duplicated-half-norm", vec![1.0]),
    ];
    for (name, x) in kinks {
        let p = composite_example(name)?;
        let s = composite_subdifferential(&p, &x)?;
        let r = check_subgradient_fd(&p.as_oracle(), &x, &s, &[vec![1.0], vec![-1.0]]);
        out.push(r.with_id(format!("subgradient-fd/{name}-at-{}", x[0])));
    }
    let p = composite_example("abs-as-max")?.with_f(Oracle::half_sq_norm(1))?;
    let s = additive_composite_subdifferential(&p, &[0.0])?;
    let r = check_subgradient_fd(&p.as_oracle(), &[0.0], &s, &[vec![1.0], vec![-1.0]]);
    out.push(r.with_id("subgradient-fd/additive-abs-plus-half-square-at-0"));
    Ok(out)
}

fn conic_grid(name: &str) -> GridSpec {
    match name {
        "conic-sdp" => GridSpec::cube(-1.0, 3.0, 41),
        _ => GridSpec::default(),
    }
}

fn conic_duality(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let budget = Budget { seed: c.seed, ..Budget::default() };
    for name in CONIC_PROGRAMS {
        let Example::Conic(p) = example(name)? else { unreachable!("listed as conic") };
        let slater = p.slater() == CqStatus::Held;
        out.push(CheckResult::holds(format!("slater-status/{name}"), slater == (*name != "conic-non-slater"), None));
        let primal = solve_primal_grid(&p, &conic_grid(name))?;
        let dual = solve_lagrangian_dual(&p, &budget, None)?;
        let pv = primal.value.unwrap_or(f64::INFINITY);
        out.push(CheckResult::judge(format!("weak-duality/{name}"), (dual.dual_value - pv).max(0.0), 1e-6, None));
        if slater {
            out.push(CheckResult::judge(format!("strong-duality/{name}"), (pv - dual.dual_value).abs(), GAP_TOL, None));
            let fd = fenchel_dual(&p, &budget)?;
            out.push(CheckResult::judge(format!("fenchel-equals-lagrangian/{name}"), (fd.value - dual.dual_value).abs(), 1e-6, None));
        }
    }
    let optimal: Vec<(&str, Vec<f64>, bool)> = vec![
        ("conic-linear", vec![1.0], true),
        ("conic-linear", vec![2.0], false),
        ("conic-ball", vec![0.5, 0.5], true),
        ("conic-inactive", vec![0.0], true),
        ("conic-sdp", sym_to_coords(&Mat::identity(2)), true),
    ];
    for (name, x, expect) in optimal {
        let Example::Conic(p) = example(name)? else { unreachable!("listed as conic") };
        let v = check_optimality(&p, &x)?.verdict;
        let ok = match v {
            OptimalityVerdict::Certified { .. } => expect,
            OptimalityVerdict::Refuted => !expect,
            OptimalityVerdict::Unknown => false,
        };
        out.push(CheckResult::holds(format!("optimality/{name}-at-{:?}", x), ok, Some(witness(&[("x", &x[..])]))));
    }
    Ok(out)
}

fn farkas(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let budget = Budget { seed: c.seed, ..Budget::default() };
    let mut out = Vec::new();
    for name in FARKAS_INSTANCES {
        let Example::Farkas { instance, a_holds } = example(name)? else { unreachable!("listed as farkas") };
        let r = farkas_alternative(&instance, &budget, &GridSpec::default())?;
        let ok = match r.verdict {
            FarkasVerdict::BHolds | FarkasVerdict::AHoldsSampled => a_holds,
            FarkasVerdict::AFails => !a_holds,
            _ => false,
        };
        out.push(CheckResult::holds(format!("verdict/{name}"), ok, None).with_note(format!("{:?}", r.verdict)));
        let both = r.a_min.map_or(false, |a| a < -crate::conic::CERTIFICATE_TOL)
            && r.b_margin.finite().map_or(false, |b| b <= crate::conic::CERTIFICATE_TOL);
        out.push(CheckResult::holds(format!("exclusive/{name}"), !both, None));
    }
    Ok(out)
}

fn random_psd(r: &mut crate::sampling::SeededRng, n: usize) -> Mat<f64> {
    let a = Mat::from_vec(n, n, normal_vec(r, n * n));
    a.matmul(&a.transpose()).add(&Mat::identity(n).scale(0.1))
}

/// `γ` on `(X, V)` coordinates: `X` row-major, then `V` in symmetric coordinates.
pub(crate) fn mff_oracle(n: usize, m: usize) -> Oracle<f64> {
    let space = SpaceDescriptor::Product { parts: vec![SpaceDescriptor::RealMatrix { rows: n, cols: m }, SpaceDescriptor::Symmetric { n }] };
    Oracle::custom("mff-gamma", space, move |z: &[f64]| {
        let x = Mat::from_vec(n, m, z[..n * m].to_vec());
        let v = sym_from_coords(n, &z[n * m..]);
        MatrixPair::real(x, v).map_or(Extended::PosInf, |p| mff_gamma(&p))
    })
}

fn mff(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut r = rng(sub_seed(c.seed, "mff"));
    let (n, m) = (2, 2);
    let mut homog = 0.0f64;
    let mut complex_homog = 0.0f64;
    let mut agree = 0.0f64;
    for _ in 0..100 {
        let x = Mat::from_vec(n, m, normal_vec(&mut r, n * m));
        let v = random_psd(&mut r, n);
        let t: f64 = uniform(&mut r, 0.0, 3.0);
        let g = mff_gamma(&MatrixPair::real(x.clone(), v.clone())?).to_raw();
        let gt = mff_gamma(&MatrixPair::real(x.scale(t), v.scale(t))?).to_raw();
        homog = homog.max((gt - t * g).abs() / (1.0 + (t * g).abs()));
        let as_complex = MatrixPair::new(CMat::complex(x.clone(), Mat::zeros(n, m)), CMat::complex(v.clone(), Mat::zeros(n, n)))?;
        agree = agree.max((mff_gamma(&as_complex).to_raw() - g).abs());
        let xi = Mat::from_vec(n, m, normal_vec(&mut r, n * m));
        let b = Mat::from_vec(n, n, normal_vec(&mut r, n * n));
        let vi = b.sub(&b.transpose()).scale(0.1);
        let cp = |s: f64| MatrixPair::new(CMat::complex(x.scale(s), xi.scale(s)), CMat::complex(v.scale(s), vi.scale(s)));
        let (c1, ct) = (mff_gamma(&cp(1.0)?).to_raw(), mff_gamma(&cp(t)?).to_raw());
        complex_homog = complex_homog.max((ct - t * c1).abs() / (1.0 + (t * c1).abs()));
    }
    out.push(CheckResult::judge("positive-homogeneity", homog, 1e-10, None));
    out.push(CheckResult::judge("complex-positive-homogeneity", complex_homog, 1e-10, None));
    out.push(CheckResult::judge("complex-path-matches-real-path", agree, 1e-12, None));
    let x = Mat::from_vec(n, m, normal_vec(&mut r, n * m));
    let v = random_psd(&mut r, n);
    let g = mff_gamma(&MatrixPair::real(x.clone(), v.clone())?).to_raw();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let y = Mat::from_vec(n, m, normal_vec(&mut r, n * m));
        let lower = x.frob_dot(&y) - 0.5 * v.frob_dot(&y.matmul(&y.transpose()));
        worst = worst.max(lower - g);
    }
    out.push(CheckResult::judge("support-function-lower-bounds", worst.max(0.0), 1e-9, None));
    let f = mff_oracle(2, 1);
    let seq = |scale_x: bool| {
        let points = (1..=64)
            .map(|k| {
                let k = k as f64;
                let x0 = if scale_x { 1.0 / k } else { 1.0 };
                let mut z = vec![x0, 0.0];
                z.extend(sym_to_coords(&Mat::diag(&[1.0 / k, 1.0])));
                z
            })
            .collect();
        let mut limit = vec![if scale_x { 0.0 } else { 1.0 }, 0.0];
        limit.extend(sym_to_coords(&Mat::diag(&[0.0, 1.0])));
        PointSequence { points, limit }
    };
    out.push(check_closedness_sampling(&f, &[seq(false)]).with_id("closedness/divergent-off-range"));
    out.push(check_closedness_sampling(&f, &[seq(true)]).with_id("closedness/vanishing"));
    Ok(out)
}

fn vgf_set(name: &str) -> Result<(VgfSet<f64>, usize)> {
    match example(name)? {
        Example::Vgf { set, cols } => Ok((set, cols)),
        _ => Err(Error::InvalidInput(format!("{name} is not a VGF example"))),
    }
}

fn close(id: &str, got: f64, want: f64, tol: f64) -> CheckResult {
    CheckResult::judge(id, (got - want).abs(), tol, None)
}

fn vgf(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let s = |x: f64| Mat::from_rows(&[vec![x]]);
    let grid = GridSpec::default();
    let (interval, _) = vgf_set("vgf-interval")?;
    let (ident, _) = vgf_set("vgf-identity")?;
    let (two, _) = vgf_set("vgf-two-generators")?;
    out.push(close("eval/interval-at-3", vgf_eval(&interval, &s(3.0))?, 9.0, 1e-12));
    out.push(close("eval/interval-at-0", vgf_eval(&interval, &s(0.0))?, 0.0, 1e-12));
    let x: Mat<f64> = Mat::from_rows(&[vec![1.0, -2.0], vec![0.5, 3.0]]);
    let half = 0.5 * x.frobenius().powi(2);
    out.push(close("eval/identity-is-half-frobenius", vgf_eval(&ident, &x)?, half, 1e-12));
    let c1 = vgf_conjugate(&interval, &s(1.0), &grid)?;
    out.push(close("conjugate/interval-at-1", c1.value.to_raw(), 0.25, 1e-12));
    out.push(close("conjugate/interval-argmin-is-upper-end", c1.v.map_or(f64::NAN, |v| v[(0, 0)]), 2.0, 1e-12));
    out.push(close("conjugate/zero", vgf_conjugate(&interval, &s(0.0), &grid)?.value.to_raw(), 0.0, 1e-12));
    out.push(close("conjugate/identity-self-pairing", vgf_conjugate(&ident, &x, &grid)?.value.to_raw(), half, 1e-12));
    let mut worst = 0.0f64;
    for xv in [-3.0, -1.0, 0.5, 2.0, 4.0] {
        worst = worst.max((vgf_conjugate(&interval, &s(xv), &grid)?.value.to_raw() - xv * xv / 4.0).abs());
    }
    out.push(CheckResult::judge("conjugate/interval-scalar-formula", worst, 1e-6, None));
    let pts = |m: &VgfSet<f64>, x: &Mat<f64>| vgf_subdifferential(m, x).map(|d| d.points());
    out.push(CheckResult::holds("subdifferential/interval-at-1", pts(&interval, &s(1.0))? == vec![vec![2.0]], None));
    out.push(CheckResult::holds("subdifferential/interval-at-0", pts(&interval, &s(0.0))? == vec![vec![0.0]], None));
    out.push(CheckResult::holds("subdifferential/identity", pts(&ident, &x)? == vec![x.data.clone()], None));
    let f1 = vgf_oracle(&interval, 1);
    let d = vgf_subdifferential(&interval, &s(1.0))?;
    out.push(check_subgradient_fd(&f1, &[1.0], &d, &[vec![1.0], vec![-1.0]]).with_id("subgradient-fd/interval-at-1"));
    let f2 = vgf_oracle(&two, 1);
    let mut r = rng(sub_seed(c.seed, "vgf"));
    let mut fy = 0.0f64;
    let mut fdw = 0.0f64;
    for _ in 0..c.queries {
        let xs: Vec<f64> = uniform_vec(&mut r, 2, 2.0);
        let xm = Mat::from_vec(2, 1, xs.clone());
        let d = vgf_subdifferential(&two, &xm)?;
        for g in d.points() {
            fy = fy.max(fenchel_young_gap(&f2, &xs, &g, None)?.to_raw().abs());
        }
        let dirs = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0], vec![0.6, -0.8]];
        fdw = fdw.max(check_subgradient_fd(&f2, &xs, &d, &dirs).measured);
    }
    out.push(CheckResult::judge("fenchel-young-equality-at-subgradients/two-generators", fy, 1e-6, None));
    out.push(CheckResult::judge("subgradient-fd/two-generators", fdw, super::SUBGRADIENT_TOL, None));
    for (name, set, cols) in [("interval", &interval, 1usize), ("two-generators", &two, 1)] {
        let f = vgf_oracle(set, cols);
        let mut worst = 0.0f64;
        for _ in 0..c.queries {
            let y: Vec<f64> = uniform_vec(&mut r, set.n * cols, 1.5);
            let closed = vgf_conjugate(set, &Mat::from_vec(set.n, cols, y.clone()), &grid)?.value;
            worst = worst.max(conj_rel_gap(closed, &conjugate_bruteforce(&f, &y, &grid)?));
        }
        out.push(CheckResult::judge(format!("conjugate-vs-grid/{name}"), worst, 1e-2, None));
    }
    let unbounded = VgfSet::<f64>::from_set(&ConvexSet::Box { lo: vec![0.0], hi: vec![f64::INFINITY] });
    out.push(CheckResult::holds("rejects-unbounded-set", matches!(unbounded, Err(Error::NonCompact)), None));
    Ok(out)
}

fn spectral_spec(name: &str) -> Result<SpectralSpec<f64>> {
    match example(name)? {
        Example::Spectral(s) => Ok(s),
        _ => Err(Error::InvalidInput(format!("{name} is not a spectral example"))),
    }
}

fn spectral_oracle(s: &SpectralSpec<f64>) -> Oracle<f64> {
    let n = s.n();
    let spec = s.clone();
    Oracle::custom(format!("spectral-{}", s.g.name), SpaceDescriptor::Symmetric { n }, move |x: &[f64]| {
        spectral_eval(&spec, &sym_from_coords(n, x)).unwrap_or(Extended::PosInf)
    })
}

fn spectral(c: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let half = spectral_spec("spectral-half-norm")?;
    let max = spectral_spec("spectral-max")?;
    let sum = spectral_spec("spectral-sum")?;
    let x = Mat::from_rows(&[vec![1.5, -0.7], vec![-0.7, 0.2]]);
    out.push(close("eval/sum-is-trace", spectral_eval(&sum, &x)?.to_raw(), x.trace(), 1e-12));
    let lmax = 0.85 + (0.65f64.powi(2) + 0.49).sqrt();
    out.push(close("eval/max-is-top-eigenvalue", spectral_eval(&max, &x)?.to_raw(), lmax, 1e-12));
    out.push(close("eval/half-norm-is-half-frobenius", spectral_eval(&half, &x)?.to_raw(), 0.5 * x.frobenius().powi(2), 1e-12));
    out.push(CheckResult::holds("conjugate/max-at-identity-infinite", spectral_conjugate(&max, &Mat::identity(2))?.is_inf(), None));
    out.push(close("conjugate/max-at-half-identity", spectral_conjugate(&max, &Mat::identity(2).scale(0.5))?.to_raw(), 0.0, 1e-12));
    let grid = GridSpec::cube(-4.0, 4.0, 41);
    let mut r = rng(sub_seed(c.seed, "spectral"));
    let inside = sym_to_coords(&Mat::from_rows(&[vec![0.6, 0.1], vec![0.1, 0.4]]));
    for (name, s) in [("half-norm", &half), ("max", &max), ("sum", &sum)] {
        let f = spectral_oracle(s);
        let mut queries: Vec<Vec<f64>> = vec![inside.clone(), sym_to_coords(&Mat::identity(2))];
        queries.extend((0..c.queries).map(|_| uniform_vec(&mut r, 3, 1.5)));
        let mut worst = 0.0f64;
        for y in queries {
            let closed = spectral_conjugate(s, &sym_from_coords(2, &y))?;
            worst = worst.max(conj_rel_gap(closed, &conjugate_bruteforce(&f, &y, &grid)?));
        }
        out.push(CheckResult::judge(format!("conjugate-vs-grid/{name}"), worst, 1e-2, None));
    }
    let dirs: Vec<Vec<f64>> = vec![vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.3, -0.5, 0.8]];
    let d = Mat::diag(&[2.0, 1.0]);
    let sd = spectral_subdifferential(&max, &d, None)?;
    out.push(check_subgradient_fd(&spectral_oracle(&max), &sym_to_coords(&d), &sd, &dirs).with_id("subgradient-fd/max-at-diag-2-1"));
    let sd = spectral_subdifferential(&half, &x, None)?;
    out.push(check_subgradient_fd(&spectral_oracle(&half), &sym_to_coords(&x), &sd, &dirs).with_id("subgradient-fd/half-norm"));
    let sd = spectral_subdifferential(&max, &Mat::identity(2), None)?;
    out.push(CheckResult::holds("degenerate-subdifferential-labeled", sd.exactness == crate::subdiff::Exactness::GeneratorSubset, None));
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let a = sym_from_coords(3, &normal_vec(&mut r, 6));
        let b = sym_from_coords(3, &normal_vec(&mut r, 6));
        worst = worst.max(-von_neumann_gap(&a, &b));
    }
    out.push(CheckResult::judge("von-neumann-inequality", worst.max(0.0), 1e-10, None));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("bogus", &SuiteConfig::default()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn every_suite_passes() {
        for id in SUITES {
            let r = run_suite(id, &SuiteConfig::default()).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn vgf_suite_passes_with_enough_checks() {
        let r = run_suite("vgf", &SuiteConfig::default()).unwrap();
        assert!(r.checks.len() >= 12);
        for c in &r.checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
