//! Built-in named problems, usable from tests, suites and the command line.

use crate::composite::CompositeProblem;
use crate::cones::Cone;
use crate::conic::{ConicProgram, FarkasInstance};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::map::ConeMap;
use crate::matrixapps::{MatrixPair, SpectralSpec, VgfSet};
use crate::oracle::Oracle;
use crate::sets::ConvexSet;
use crate::space::sym_to_coords;

#[derive(Debug, Clone)]
pub enum Example {
    Composite(CompositeProblem<f64>),
    Conic(ConicProgram<f64>),
    /// With the hand-derived truth of statement A.
    Farkas { instance: FarkasInstance<f64>, a_holds: bool },
    Vgf { set: VgfSet<f64>, cols: usize },
    Spectral(SpectralSpec<f64>),
    Mff(MatrixPair<f64>),
}

/// Composite instances whose qualification condition holds.
pub const QUALIFIED_COMPOSITES: &[&str] = &[
    "abs-as-max",
    "orthant-zero-geometry",
    "unit-interval-level-set",
    "max-half-square-linear",
    "duplicated-half-norm",
    "gram-trace",
    "max-eigenvalue",
    "cosh-sum",
];

/// Composite instances whose qualification condition fails.
pub const UNQUALIFIED_COMPOSITES: &[&str] = &["square-level-set", "pinned-pair", "origin-eigenvalues"];

/// Conic programs; the Slater condition fails only for `conic-non-slater`.
pub const CONIC_PROGRAMS: &[&str] =
    &["conic-linear", "conic-inactive", "conic-ball", "conic-interval", "conic-equality", "conic-disk", "conic-sdp", "conic-non-slater"];

pub const FARKAS_INSTANCES: &[&str] = &[
    "farkas-sign-holds",
    "farkas-sign-fails",
    "farkas-quadratic-fails",
    "farkas-quadratic-holds",
    "farkas-nonlinear-fails",
    "farkas-outer-quadratic-holds",
    "farkas-zero-holds",
];

pub const MATRIX_EXAMPLES: &[&str] = &[
    "vgf-interval",
    "vgf-identity",
    "vgf-two-generators",
    "spectral-half-norm",
    "spectral-max",
    "spectral-sum",
    "mff-identity",
    "mff-off-range",
];

pub fn example_names() -> Vec<&'static str> {
    [QUALIFIED_COMPOSITES, UNQUALIFIED_COMPOSITES, CONIC_PROGRAMS, FARKAS_INSTANCES, MATRIX_EXAMPLES].concat()
}

const INF: f64 = f64::INFINITY;

fn col(a: &[f64]) -> Mat<f64> {
    Mat::from_rows(&a.iter().map(|&t| vec![t]).collect::<Vec<_>>())
}

fn nonpositive(n: usize) -> Oracle<f64> {
    Oracle::indicator(ConvexSet::Box { lo: vec![-INF; n], hi: vec![0.0; n] })
}

fn affine1(a: f64, b: f64, cone: Cone<f64>) -> ConeMap<f64> {
    ConeMap::affine(col(&[a]), vec![b], cone)
}

fn composite(name: &str) -> Result<Option<CompositeProblem<f64>>> {
    let p = match name {
        "abs-as-max" => CompositeProblem::new(Oracle::max_coord(2), ConeMap::linear(col(&[1.0, -1.0]), Cone::Orthant { n: 2 }))?,
        "orthant-zero-geometry" => {
            let cone = Cone::Product { parts: vec![Cone::Orthant { n: 1 }, Cone::Zero { dim: 1 }] };
            let f = ConeMap::linear(Mat::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]), cone);
            CompositeProblem::new(Oracle::indicator(ConvexSet::Box { lo: vec![0.0, -INF], hi: vec![INF, INF] }), f)?
        }
        "unit-interval-level-set" => CompositeProblem::new(nonpositive(1), ConeMap::quadratic(vec![(2.0, vec![0.0], -1.0)]))?,
        "max-half-square-linear" => {
            let f = ConeMap::component_wise(vec![Oracle::half_sq_norm(1), Oracle::linear(vec![1.0])]);
            CompositeProblem::new(Oracle::max_coord(2), f)?
        }
        "duplicated-half-norm" => CompositeProblem::new(Oracle::half_sq_norm(2), ConeMap::linear(col(&[1.0, 1.0]), Cone::Zero { dim: 2 }))?,
        "gram-trace" => {
            let c = sym_to_coords(&Mat::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]));
            CompositeProblem::new(Oracle::linear(c), ConeMap::half_gram(2, 1))?
        }
        "max-eigenvalue" => CompositeProblem::new(Oracle::max_coord(2), ConeMap::eigenvalues(2))?,
        "cosh-sum" => CompositeProblem::new(Oracle::exp_sum(2), ConeMap::linear(col(&[1.0, -1.0]), Cone::Zero { dim: 2 }))?,
        "square-level-set" => CompositeProblem::new(nonpositive(1), ConeMap::quadratic(vec![(2.0, vec![0.0], 0.0)]))?,
        "pinned-pair" => CompositeProblem::new(nonpositive(2), ConeMap::linear(col(&[1.0, -1.0]), Cone::Orthant { n: 2 }))?,
        "origin-eigenvalues" => CompositeProblem::new(Oracle::indicator(ConvexSet::point(vec![0.0, 0.0])), ConeMap::eigenvalues(2))?,
        _ => return Ok(None),
    };
    Ok(Some(p))
}

fn conic(name: &str) -> Result<Option<ConicProgram<f64>>> {
    let orth = |n| Cone::Orthant { n };
    let p = match name {
        "conic-linear" => ConicProgram::new(Oracle::linear(vec![1.0]), affine1(-1.0, 1.0, orth(1)))?,
        "conic-inactive" => ConicProgram::new(Oracle::half_sq_norm(1), affine1(-1.0, -1.0, orth(1)))?,
        "conic-ball" => ConicProgram::new(Oracle::half_sq_norm(2), ConeMap::affine(Mat::from_rows(&[vec![-1.0, -1.0]]), vec![1.0], orth(1)))?,
        "conic-interval" => ConicProgram::new(Oracle::half_sq_norm(1), ConeMap::affine(col(&[-1.0, 1.0]), vec![1.0, -3.0], orth(2)))?,
        "conic-equality" => {
            ConicProgram::new(Oracle::half_sq_norm(2), ConeMap::affine(Mat::from_rows(&[vec![1.0, 1.0]]), vec![-1.0], Cone::Zero { dim: 1 }))?
        }
        "conic-disk" => ConicProgram::new(Oracle::linear(vec![1.0]), ConeMap::quadratic(vec![(2.0, vec![0.0], -1.0)]))?,
        "conic-sdp" => {
            let c = sym_to_coords(&Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]));
            let a = Mat::identity(3).scale(-1.0);
            ConicProgram::new(Oracle::linear(c), ConeMap::affine(a, sym_to_coords(&Mat::identity(2)), Cone::psd(2)))?
        }
        "conic-non-slater" => ConicProgram::new(Oracle::linear(vec![1.0]), ConeMap::quadratic(vec![(2.0, vec![0.0], 0.0)]))?,
        _ => return Ok(None),
    };
    Ok(Some(p))
}

fn farkas(name: &str) -> Result<Option<(FarkasInstance<f64>, bool)>> {
    let zero1 = || Cone::Zero { dim: 1 };
    let orth1 = || Cone::Orthant { n: 1 };
    let sign = |slope: f64| {
        FarkasInstance::new(
            ConvexSet::interval(-1.0, 1.0),
            Oracle::linear(vec![slope]),
            Oracle::zero(1),
            affine1(1.0, 0.0, zero1()),
            affine1(1.0, 0.0, orth1()),
        )
    };
    let quad = |shift: f64| {
        FarkasInstance::new(
            ConvexSet::Full { dim: 1 },
            Oracle::quadratic(1.0, vec![-1.0], shift),
            Oracle::zero(1),
            affine1(1.0, 0.0, zero1()),
            affine1(1.0, -2.0, orth1()),
        )
    };
    let out = match name {
        "farkas-sign-holds" => (sign(-1.0)?, true),
        "farkas-sign-fails" => (sign(1.0)?, false),
        "farkas-quadratic-fails" => (quad(0.0)?, false),
        "farkas-quadratic-holds" => (quad(0.75)?, true),
        "farkas-nonlinear-fails" => (
            FarkasInstance::new(
                ConvexSet::interval(-2.0, 2.0),
                Oracle::zero(1),
                Oracle::linear(vec![1.0]),
                ConeMap::quadratic(vec![(2.0, vec![-1.0], 0.0)]),
                affine1(-1.0, 0.0, orth1()),
            )?,
            false,
        ),
        "farkas-outer-quadratic-holds" => (
            FarkasInstance::new(
                ConvexSet::interval(0.0, 1.0),
                Oracle::linear(vec![1.0]),
                Oracle::half_sq_norm(1),
                affine1(1.0, -1.0, zero1()),
                affine1(1.0, -1.0, orth1()),
            )?,
            true,
        ),
        "farkas-zero-holds" => (
            FarkasInstance::new(ConvexSet::interval(-1.0, 1.0), Oracle::zero(1), Oracle::zero(1), affine1(1.0, 0.0, orth1()), affine1(1.0, 0.0, orth1()))?,
            true,
        ),
        _ => return Ok(None),
    };
    Ok(Some(out))
}

fn matrix(name: &str) -> Result<Option<Example>> {
    let e = match name {
        "vgf-interval" => Example::Vgf { set: VgfSet::from_set(&ConvexSet::interval(0.0, 2.0))?, cols: 1 },
        "vgf-identity" => Example::Vgf { set: VgfSet::from_generators(2, vec![Mat::identity(2)])?, cols: 2 },
        "vgf-two-generators" => {
            let gens = vec![Mat::diag(&[1.0, 0.0]), Mat::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]])];
            Example::Vgf { set: VgfSet::from_generators(2, gens)?, cols: 1 }
        }
        "spectral-half-norm" => Example::Spectral(SpectralSpec::new(Oracle::half_sq_norm(2))?),
        "spectral-max" => Example::Spectral(SpectralSpec::new(Oracle::max_coord(2))?),
        "spectral-sum" => Example::Spectral(SpectralSpec::new(Oracle::linear(vec![1.0, 1.0]))?),
        "mff-identity" => Example::Mff(MatrixPair::real(col(&[1.0, 0.0]), Mat::identity(2))?),
        "mff-off-range" => Example::Mff(MatrixPair::real(col(&[1.0, 0.0]), Mat::diag(&[0.0, 1.0]))?),
        _ => return Ok(None),
    };
    Ok(Some(e))
}

/// Looks up a built-in problem by its stable name.
pub fn example(name: &str) -> Result<Example> {
    if let Some(p) = composite(name)? {
        return Ok(Example::Composite(p));
    }
    if let Some(p) = conic(name)? {
        return Ok(Example::Conic(p));
    }
    if let Some((instance, a_holds)) = farkas(name)? {
        return Ok(Example::Farkas { instance, a_holds });
    }
    matrix(name)?.ok_or_else(|| Error::InvalidInput(format!("unknown example {name:?}; known: {}", example_names().join(", "))))
}
