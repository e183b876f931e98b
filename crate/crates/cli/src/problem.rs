use cvxcomp::composite::{Budget, CompositeProblem};
use cvxcomp::cones::Cone;
use cvxcomp::conic::ConicProgram;
use cvxcomp::conjugate::GridSpec;
use cvxcomp::linalg::Mat;
use cvxcomp::map::ConeMap;
use cvxcomp::matrixapps::SpectralSpec;
use cvxcomp::oracle::Oracle;
use cvxcomp::sets::ConvexSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A problem document. Unknown keys anywhere are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QuerySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    Real { dim: usize },
    Matrix { rows: usize, cols: usize },
    Symmetric { n: usize },
}

impl SpaceSpec {
    fn dim(&self) -> usize {
        match self {
            SpaceSpec::Real { dim } => *dim,
            SpaceSpec::Matrix { rows, cols } => rows * cols,
            SpaceSpec::Symmetric { n } => n * (n + 1) / 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `½a‖x‖² + ⟨c, x⟩ + b`.
    Quadratic { a: f64, c: Vec<f64>, #[serde(default)] b: f64 },
    HalfSqNorm { dim: usize },
    Linear { c: Vec<f64> },
    Affine { c: Vec<f64>, b: f64 },
    Zero { dim: usize },
    AbsSum { dim: usize },
    Norm2 { dim: usize },
    Max { dim: usize },
    ExpSum { dim: usize },
    Indicator { set: SetSpec },
}

/// `null` bounds in a box stand for `±∞`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Full { dim: usize },
    Box { lo: Vec<Option<f64>>, hi: Vec<Option<f64>> },
    Interval { lo: f64, hi: f64 },
    Point { x: Vec<f64> },
    Simplex { dim: usize },
    Polytope { vertices: Vec<Vec<f64>> },
    Halfspace { a: Vec<f64>, b: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticComponent {
    /// `½a‖x‖² + ⟨c, x⟩ + d`.
    pub a: f64,
    pub c: Vec<f64>,
    #[serde(default)]
    pub d: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapSpec {
    /// `x ↦ Ax + b`, `A` given by rows.
    Linear { matrix: Vec<Vec<f64>>, #[serde(default)] offset: Option<Vec<f64>> },
    Quadratic { components: Vec<QuadraticComponent> },
    QuadraticGram { n: usize, m: usize },
    ComponentWise { components: Vec<FunctionSpec> },
    Mff { n: usize, m: usize },
    SpectralLambda { n: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ConeSpec {
    #[serde(rename = "zero")]
    Zero { dim: usize },
    #[serde(rename = "orthant")]
    Orthant { n: usize },
    #[serde(rename = "psd")]
    Psd { n: usize },
    #[serde(rename = "spectralK")]
    SpectralK { n: usize },
    /// `{x : ⟨a_i, x⟩ ≤ 0}`.
    #[serde(rename = "polyhedral")]
    Polyhedral { dim: usize, rows: Vec<Vec<f64>> },
    #[serde(rename = "product")]
    Product { parts: Vec<ConeSpec> },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    #[serde(default)]
    pub op: Option<String>,
    /// A vector argument.
    #[serde(default)]
    pub point: Option<Vec<f64>>,
    /// Matrix arguments, by rows.
    #[serde(default)]
    pub x: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub v: Option<Vec<Vec<f64>>>,
}

/// A semantic problem error located by a JSON pointer.
#[derive(Debug)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.pointer, self.message)
    }
}

fn err(pointer: impl Into<String>, message: impl fmt::Display) -> SchemaError {
    SchemaError { pointer: pointer.into(), message: message.to_string() }
}

type Res<T> = Result<T, SchemaError>;

pub fn matrix(rows: &[Vec<f64>], at: &str) -> Res<Mat<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(err(at, "expected a non-empty rectangular matrix"));
    }
    Ok(Mat::from_rows(rows))
}

impl SetSpec {
    pub fn build(&self, at: &str) -> Res<ConvexSet<f64>> {
        Ok(match self {
            SetSpec::Full { dim } => ConvexSet::Full { dim: *dim },
            SetSpec::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(err(at, "lo and hi differ in length"));
                }
                let lo: Vec<f64> = lo.iter().map(|v| v.unwrap_or(f64::NEG_INFINITY)).collect();
                let hi: Vec<f64> = hi.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect();
                if lo.iter().zip(&hi).any(|(l, h)| l > h) {
                    return Err(err(at, "empty box"));
                }
                ConvexSet::Box { lo, hi }
            }
            SetSpec::Interval { lo, hi } => {
                if lo > hi {
                    return Err(err(at, "empty interval"));
                }
                ConvexSet::interval(*lo, *hi)
            }
            SetSpec::Point { x } => ConvexSet::point(x.clone()),
            SetSpec::Simplex { dim } => ConvexSet::simplex(*dim),
            SetSpec::Polytope { vertices } => {
                let d = vertices.first().map_or(0, Vec::len);
                if vertices.is_empty() || vertices.iter().any(|v| v.len() != d) {
                    return Err(err(at, "vertices must be non-empty and share a dimension"));
                }
                ConvexSet::Polytope { vertices: vertices.clone() }
            }
            SetSpec::Halfspace { a, b } => ConvexSet::Halfspace { a: a.clone(), b: *b },
        })
    }
}

impl FunctionSpec {
    pub fn build(&self, at: &str) -> Res<Oracle<f64>> {
        Ok(match self {
            FunctionSpec::Quadratic { a, c, b } => Oracle::quadratic(*a, c.clone(), *b),
            FunctionSpec::HalfSqNorm { dim } => Oracle::half_sq_norm(*dim),
            FunctionSpec::Linear { c } => Oracle::linear(c.clone()),
            FunctionSpec::Affine { c, b } => Oracle::affine(c.clone(), *b),
            FunctionSpec::Zero { dim } => Oracle::zero(*dim),
            FunctionSpec::AbsSum { dim } => Oracle::abs_sum(*dim),
            FunctionSpec::Norm2 { dim } => Oracle::norm2(*dim),
            FunctionSpec::Max { dim } => Oracle::max_coord(*dim),
            FunctionSpec::ExpSum { dim } => Oracle::exp_sum(*dim),
            FunctionSpec::Indicator { set } => Oracle::indicator(set.build(&format!("{at}/set"))?),
        })
    }
}

impl ConeSpec {
    pub fn build(&self, at: &str) -> Res<Cone<f64>> {
        Ok(match self {
            ConeSpec::Zero { dim } => Cone::Zero { dim: *dim },
            ConeSpec::Orthant { n } => Cone::Orthant { n: *n },
            ConeSpec::Psd { n } => Cone::psd(*n),
            ConeSpec::SpectralK { n } => Cone::SpectralK { n: *n },
            ConeSpec::Polyhedral { dim, rows } => {
                if rows.iter().any(|r| r.len() != *dim) {
                    return Err(err(at, "row length differs from dim"));
                }
                Cone::Polyhedral { dim: *dim, rows: rows.clone() }
            }
            ConeSpec::Product { parts } => Cone::Product {
                parts: parts.iter().enumerate().map(|(i, p)| p.build(&format!("{at}/parts/{i}"))).collect::<Res<_>>()?,
            },
        })
    }
}

impl MapSpec {
    pub fn build(&self, at: &str) -> Res<ConeMap<f64>> {
        Ok(match self {
            MapSpec::Linear { matrix: rows, offset } => {
                let a = matrix(rows, &format!("{at}/matrix"))?;
                match offset {
                    Some(b) if b.len() != a.rows => return Err(err(format!("{at}/offset"), "length differs from the row count")),
                    Some(b) => ConeMap::affine(a.clone(), b.clone(), Cone::Zero { dim: a.rows }),
                    None => ConeMap::linear(a.clone(), Cone::Zero { dim: a.rows }),
                }
            }
            MapSpec::Quadratic { components } => {
                let n = components.first().map_or(0, |c| c.c.len());
                if n == 0 || components.iter().any(|c| c.c.len() != n) {
                    return Err(err(format!("{at}/components"), "components must be non-empty and share a dimension"));
                }
                ConeMap::quadratic(components.iter().map(|c| (c.a, c.c.clone(), c.d)).collect())
            }
            MapSpec::QuadraticGram { n, m } => ConeMap::half_gram(*n, *m),
            MapSpec::ComponentWise { components } => {
                let fs: Vec<Oracle<f64>> =
                    components.iter().enumerate().map(|(i, c)| c.build(&format!("{at}/components/{i}"))).collect::<Res<_>>()?;
                if fs.is_empty() || fs.iter().any(|f| f.dim() != fs[0].dim()) {
                    return Err(err(format!("{at}/components"), "components must be non-empty and share a dimension"));
                }
                ConeMap::component_wise(fs)
            }
            MapSpec::Mff { n, m } => ConeMap::mff(*n, *m),
            MapSpec::SpectralLambda { n } => ConeMap::eigenvalues(*n),
        })
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn function(&self, name: &str) -> Res<Oracle<f64>> {
        let spec = self.functions.get(name).ok_or_else(|| err("/functions", format!("missing function {name:?}")))?;
        let f = spec.build(&format!("/functions/{name}"))?;
        // The space is the domain of x; the outer function lives on the codomain of the map.
        if self.map.is_none() || name != "g" {
            self.check_space(f.dim(), &format!("/functions/{name}"))?;
        }
        Ok(f.named(name))
    }

    /// The only function, or the one named `preferred`.
    pub fn single_function(&self, preferred: &str) -> Res<Oracle<f64>> {
        if self.functions.contains_key(preferred) || self.functions.len() != 1 {
            return self.function(preferred);
        }
        let name = self.functions.keys().next().cloned().unwrap_or_default();
        self.function(&name)
    }

    fn check_space(&self, dim: usize, at: &str) -> Res<()> {
        match &self.space {
            Some(s) if s.dim() != dim => Err(err(at, format!("dimension {dim} differs from the declared space ({})", s.dim()))),
            _ => Ok(()),
        }
    }

    pub fn cone_map(&self) -> Res<ConeMap<f64>> {
        let map = self.map.as_ref().ok_or_else(|| err("", "missing \"map\""))?.build("/map")?;
        self.check_space(map.dim_in(), "/map")?;
        match &self.cone {
            Some(c) => {
                let cone = c.build("/cone")?;
                if cone.dim() != map.dim_out() {
                    return Err(err("/cone", format!("cone dimension {} differs from the map codomain {}", cone.dim(), map.dim_out())));
                }
                Ok(map.with_cone(cone))
            }
            None => Ok(map),
        }
    }

    pub fn composite(&self) -> Res<CompositeProblem<f64>> {
        let p = CompositeProblem::new(self.function("g")?, self.cone_map()?).map_err(|e| err("/functions/g", e))?;
        if self.functions.contains_key("f") {
            return p.with_f(self.function("f")?).map_err(|e| err("/functions/f", e));
        }
        Ok(p)
    }

    pub fn conic(&self) -> Res<ConicProgram<f64>> {
        ConicProgram::new(self.function("f")?, self.cone_map()?).map_err(|e| err("/functions/f", e))
    }

    pub fn spectral(&self) -> Res<SpectralSpec<f64>> {
        SpectralSpec::new(self.single_function("g")?).map_err(|e| err("/functions", e))
    }

    pub fn budget(&self) -> Budget {
        self.budget.clone().unwrap_or_default()
    }
}
