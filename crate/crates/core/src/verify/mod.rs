//! Pass/fail audits of the calculus: sampled convexity, finite-difference
//! subgradient checks, closedness along sequences, and named suites.

mod suites;

pub use suites::{run_suite, SuiteConfig, SUITES};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::oracle::Oracle;
use crate::sampling::{rng, uniform};
use crate::scalar::{to_f64_vec, Real};
use crate::subdiff::{Exactness, SubdifferentialSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    NonCertified,
}

/// JSON has no infinities: they are written as `"+inf"`, `"-inf"` and `"nan"`.
mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            v if v.is_finite() => s.serialize_f64(v),
            v if v.is_nan() => s.serialize_str("nan"),
            v if v > 0.0 => s.serialize_str("+inf"),
            _ => s.serialize_str("-inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) => match s.as_str() {
                "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("bad number `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: CheckStatus,
    /// The audited quantity; a pass requires `measured ≤ tolerance`.
    #[serde(with = "nonfinite")]
    pub measured: f64,
    pub tolerance: f64,
    /// A pass with `measured` within 10% of the tolerance.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub marginal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    /// `measured ≤ tolerance` decides the status; failures keep the witness.
    pub fn judge(id: impl Into<String>, measured: f64, tolerance: f64, witness: Option<BTreeMap<String, Vec<f64>>>) -> Self {
        let pass = measured <= tolerance;
        CheckResult {
            check_id: id.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            measured,
            tolerance,
            marginal: pass && measured >= 0.9 * tolerance,
            witness: if pass { None } else { Some(witness.unwrap_or_default()) },
            note: None,
        }
    }

    /// A boolean check: measured is 0 when it holds and 1 otherwise.
    pub fn holds(id: impl Into<String>, ok: bool, witness: Option<BTreeMap<String, Vec<f64>>>) -> Self {
        Self::judge(id, if ok { 0.0 } else { 1.0 }, 0.5, witness)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.check_id = id.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite_id: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    /// Seconds; recorded only on request so reports stay byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {} (seed {}): {} checks, {} failed\n", self.suite_id, self.seed, self.checks.len(), self.failures());
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skipped",
                CheckStatus::NonCertified => "non-certified",
            };
            let flag = if c.marginal { " (marginal)" } else { "" };
            s.push_str(&format!("  {:<14} {}  measured {:e} tol {:e}{}\n", status, c.check_id, c.measured, c.tolerance, flag));
        }
        s
    }
}

pub(crate) fn witness<T: Real>(pairs: &[(&str, &[T])]) -> BTreeMap<String, Vec<f64>> {
    pairs.iter().map(|(k, v)| (k.to_string(), to_f64_vec(v))).collect()
}

/// Absolute slack for midpoint convexity.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Tests `f((x+y)/2) ≤ ½f(x) + ½f(y) + 1e−9` on random pairs of the box
/// (one `[lo, hi]` entry is broadcast to every axis) that lie in `dom f`.
pub fn check_midpoint_convexity<T: Real>(f: &Oracle<T>, samples: usize, bounds: &[[f64; 2]], seed: u64) -> Result<CheckResult> {
    let n = f.dim();
    let b = |i: usize| if bounds.len() == 1 { bounds[0] } else { bounds[i] };
    let mut r = rng(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_pair = None;
    let mut used = 0;
    let mut tries = 0;
    while used < samples && tries < 50 * samples.max(1) {
        tries += 1;
        let x: Vec<T> = (0..n).map(|i| uniform(&mut r, b(i)[0], b(i)[1])).collect();
        let y: Vec<T> = (0..n).map(|i| uniform(&mut r, b(i)[0], b(i)[1])).collect();
        let (Some(fx), Some(fy)) = (f.eval(&x).finite(), f.eval(&y).finite()) else { continue };
        used += 1;
        let mid: Vec<T> = x.iter().zip(&y).map(|(&a, &c)| (a + c) * T::lit(0.5)).collect();
        let gap = match f.eval(&mid) {
            Extended::Finite(fm) => (fm - (fx + fy) * T::lit(0.5)).as_f64(),
            Extended::PosInf => f64::INFINITY,
        };
        if gap > worst {
            worst = gap;
            worst_pair = Some((x, y));
        }
    }
    if used == 0 {
        return Err(Error::EmptyDomain);
    }
    let w = worst_pair.map(|(x, y)| witness(&[("x", &x[..]), ("y", &y[..])]));
    Ok(CheckResult::judge(format!("midpoint-convexity/{}", f.name), worst.max(0.0), CONVEXITY_TOL, w))
}

/// Relative tolerance of the finite-difference subgradient check.
pub const SUBGRADIENT_TOL: f64 = 1e-4;

/// One-sided directional derivative from forward differences at
/// `t ∈ {1e−3, 1e−4, 1e−5}`, Richardson-extrapolated twice.
pub fn directional_derivative<T: Real>(f: &Oracle<T>, x: &[T], d: &[T]) -> Option<f64> {
    let fx = f.eval(x).finite()?.as_f64();
    let q = |t: f64| -> Option<f64> {
        let p: Vec<T> = x.iter().zip(d).map(|(&a, &b)| a + T::lit(t) * b).collect();
        Some((f.eval(&p).finite()?.as_f64() - fx) / t)
    };
    let (a, b, c) = (q(1e-3)?, q(1e-4)?, q(1e-5)?);
    let r1 = (10.0 * b - a) / 9.0;
    let r2 = (10.0 * c - b) / 9.0;
    Some((100.0 * r2 - r1) / 99.0)
}

/// Compares `σ_S(d)` with the directional derivative `f′(x̄; d)`. Sets labeled
/// as approximations are only checked for inclusion (`σ_S(d) ≤ f′(x̄; d)`).
pub fn check_subgradient_fd<T: Real>(f: &Oracle<T>, x: &[T], s: &SubdifferentialSet<T>, directions: &[Vec<T>]) -> CheckResult {
    let inclusion = s.exactness != Exactness::Exact;
    let mut worst = 0.0f64;
    let mut worst_d: Option<&Vec<T>> = None;
    for d in directions {
        let sup = s.support(d);
        let est = directional_derivative(f, x, d);
        let err = match (sup.finite(), est) {
            (Some(sv), Some(e)) => {
                let sv = sv.as_f64();
                let diff = if inclusion { (sv - e).max(0.0) } else { (sv - e).abs() };
                diff / (1.0 + sv.abs())
            }
            _ => f64::INFINITY,
        };
        if worst_d.is_none() || err > worst {
            worst = err;
            worst_d = Some(d);
        }
    }
    let w = worst_d.map(|d| witness(&[("x", x), ("d", &d[..])]));
    let r = CheckResult::judge(format!("subgradient-fd/{}", f.name), worst, SUBGRADIENT_TOL, w);
    if inclusion {
        r.with_note("inclusion only")
    } else {
        r
    }
}

/// A convergent sequence with its limit.
#[derive(Debug, Clone)]
pub struct PointSequence<T> {
    pub points: Vec<Vec<T>>,
    pub limit: Vec<T>,
}

pub const CLOSEDNESS_TOL: f64 = 1e-6;

/// Lower semicontinuity along sequences: the minimum over the second half of
/// each sequence is at least `f(lim) − 1e−6`; when `f(lim) = +∞` the tail must
/// be nondecreasing and growing (or already infinite).
pub fn check_closedness_sampling<T: Real>(f: &Oracle<T>, sequences: &[PointSequence<T>]) -> CheckResult {
    let mut worst = 0.0f64;
    let mut w = None;
    for seq in sequences {
        let tail = &seq.points[seq.points.len() / 2..];
        let vals: Vec<f64> = tail.iter().map(|p| f.eval(p).finite().map_or(f64::INFINITY, |v| v.as_f64())).collect();
        let violation = match f.eval(&seq.limit).finite() {
            Some(fl) => {
                let liminf = vals.iter().copied().fold(f64::INFINITY, f64::min);
                fl.as_f64() - liminf
            }
            None => {
                let all_inf = vals.iter().all(|v| v.is_infinite());
                let growing = vals.windows(2).all(|p| p[1] >= p[0]) && vals.last() > vals.first();
                if all_inf || growing {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        };
        if violation > worst {
            worst = violation;
            w = Some(witness(&[("limit", &seq.limit[..])]));
        }
    }
    CheckResult::judge(format!("closedness/{}", f.name), worst, CLOSEDNESS_TOL, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::ConvexSet;

    #[test]
    fn midpoint_examples() {
        let bx = [[-3.0, 3.0]];
        assert!(check_midpoint_convexity(&Oracle::<f64>::half_sq_norm(1), 200, &bx, 1).unwrap().passed());
        assert!(check_midpoint_convexity(&Oracle::<f64>::abs_sum(1), 200, &bx, 1).unwrap().passed());
        let concave = Oracle::quadratic(-1.0, vec![0.0], 0.0).named("neg-square");
        let r = check_midpoint_convexity(&concave, 200, &bx, 1).unwrap();
        assert_eq!(r.status, CheckStatus::Fail);
        let w = r.witness.unwrap();
        let (x, y) = (w["x"][0], w["y"][0]);
        let replay = -0.5 * ((x + y) / 2.0f64).powi(2) + 0.25 * (x * x + y * y);
        assert!((replay - r.measured).abs() < 1e-12 && replay > 0.0);
        let outside = Oracle::<f64>::indicator(ConvexSet::interval(10.0, 11.0));
        assert!(matches!(check_midpoint_convexity(&outside, 10, &bx, 1), Err(Error::EmptyDomain)));
    }

    #[test]
    fn finite_difference_examples() {
        let abs = Oracle::abs_sum(1);
        let dirs = vec![vec![1.0], vec![-1.0]];
        let good = SubdifferentialSet::interval_box(vec![-1.0], vec![1.0]);
        assert!(check_subgradient_fd(&abs, &[0.0], &good, &dirs).passed());
        let wide = SubdifferentialSet::interval_box(vec![-2.0], vec![2.0]);
        let r = check_subgradient_fd(&abs, &[0.0], &wide, &dirs);
        assert_eq!(r.status, CheckStatus::Fail);
        assert!(r.witness.is_some());
        let inner = SubdifferentialSet::singleton(vec![0.5]).with_exactness(Exactness::InnerApproximation);
        assert!(check_subgradient_fd(&abs, &[0.0], &inner, &dirs).passed());
    }

    #[test]
    fn constant_sequence_is_closed() {
        let f = Oracle::half_sq_norm(1);
        let seq = PointSequence { points: vec![vec![1.0]; 10], limit: vec![1.0] };
        assert!(check_closedness_sampling(&f, &[seq]).passed());
    }

    #[test]
    fn marginal_flag() {
        assert!(CheckResult::judge("m", 0.95, 1.0, None).marginal);
        assert!(!CheckResult::judge("m", 0.5, 1.0, None).marginal);
    }
}
