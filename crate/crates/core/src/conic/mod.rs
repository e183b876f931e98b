//! Conic programs `min f(x) s.t. F(x) ∈ −K`: duals, optimality, and a theorem of the alternative.

mod farkas;

pub use farkas::{
    check_farkas_cq, farkas_alternative, farkas_lhs, FarkasCertificate, FarkasInstance, FarkasReport, FarkasVerdict,
    CERTIFICATE_TOL,
};

use crate::composite::{additive_composite_conjugate, check_cq, Budget, CompositeProblem, CqCondition, CqStatus};
use crate::cones::Cone;
use crate::conjugate::{conjugate_value, grid_maximize, GridSpec};
use crate::error::{check_dim, Error, Result};
use crate::extended::{ExtPoint, Extended};
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::map::ConeMap;
use crate::oracle::Oracle;
use crate::scalar::{dot, norm, Real};
use crate::search::minimize_affine;
use crate::sets::ConvexSet;

#[derive(Clone, Debug)]
pub struct ConicProgram<T> {
    pub f: Oracle<T>,
    pub map: ConeMap<T>,
    /// Feasibility is `F(x) ∈ −K`.
    pub cone: Cone<T>,
}

fn neg<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().map(|&x| -x).collect()
}

impl<T: Real> ConicProgram<T> {
    pub fn new(f: Oracle<T>, map: ConeMap<T>) -> Result<Self> {
        check_dim(map.dim_in(), f.dim())?;
        let cone = map.cone.clone();
        Ok(ConicProgram { f, map, cone })
    }

    pub fn with_cone(mut self, cone: Cone<T>) -> Result<Self> {
        check_dim(self.map.dim_out(), cone.dim())?;
        self.cone = cone;
        Ok(self)
    }

    pub fn is_feasible(&self, x: &[T]) -> bool {
        match self.map.eval(x) {
            ExtPoint::Point(y) => self.cone.contains(&neg(&y)),
            ExtPoint::Top => false,
        }
    }

    /// `f(x)` on the feasible set, `+∞` elsewhere.
    pub fn objective(&self, x: &[T]) -> Extended<T> {
        if self.is_feasible(x) {
            self.f.eval(x)
        } else {
            Extended::PosInf
        }
    }

    /// `f + δ_{−K}∘F`.
    pub fn as_composite(&self) -> Result<CompositeProblem<T>> {
        let g = Oracle::indicator(ConvexSet::NegCone(self.cone.clone())).named("indicator(-K)");
        CompositeProblem::new(g, self.map.clone())?.with_cone(self.cone.clone())?.with_f(self.f.clone())
    }

    /// `rge F ∩ ri(−K) ≠ ∅` (or with `ri dom f` when `f` has a cataloged domain).
    pub fn slater(&self) -> CqStatus {
        self.as_composite().and_then(|p| check_cq(&p, CqCondition::SlaterConic)).map_or(CqStatus::Unknown, |r| r.held)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalSolution<T> {
    /// `−∞` when the grid values kept decreasing as the box grew.
    pub value: Option<T>,
    pub x: Option<Vec<T>>,
    pub infeasible_on_grid: bool,
    pub gap_bound: T,
}

/// Minimum of `f` over the feasible grid points, refined locally.
pub fn solve_primal_grid<T: Real>(p: &ConicProgram<T>, grid: &GridSpec) -> Result<PrimalSolution<T>> {
    let phi = |x: &[T]| if p.is_feasible(x) { p.f.eval(x).finite().map(|v| -v) } else { None };
    match grid_maximize(p.map.dim_in(), grid, &phi, None) {
        Ok(e) => Ok(PrimalSolution {
            value: Some(match e.value {
                Extended::Finite(v) => -v,
                Extended::PosInf => T::neg_infinity(),
            }),
            x: e.point,
            infeasible_on_grid: false,
            gap_bound: e.gap_bound,
        }),
        Err(Error::EmptyDomain) => Ok(PrimalSolution { value: None, x: None, infeasible_on_grid: true, gap_bound: T::zero() }),
        Err(e) => Err(e),
    }
}

/// `θ(v) = inf_x f(x) + ⟨v, F(x)⟩`, possibly `−∞`.
pub fn dual_function<T: Real>(p: &ConicProgram<T>, v: &[T], grid: &GridSpec) -> T {
    let value = if let Some((a, b)) = p.map.affine_form() {
        let w = neg(&a.tr_matvec(v));
        conjugate_value(&p.f, &w, grid).ok().and_then(|(c, _)| c.finite()).map(|c| dot(v, &b) - c)
    } else {
        p.map.scalarize(v).ok().and_then(|s| {
            let sum = Oracle::sum(&p.f, &s);
            conjugate_value(&sum, &vec![T::zero(); p.map.dim_in()], grid).ok().and_then(|(c, _)| c.finite()).map(|c| -c)
        })
    };
    value.unwrap_or(T::neg_infinity())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate<T> {
    /// `−∞` when no multiplier gives a finite dual function.
    pub dual_value: T,
    pub multiplier_v: Option<Vec<T>>,
    pub primal_value: Option<T>,
    /// `primal − dual`, when a primal grid was supplied.
    pub gap: Option<T>,
    pub attained: bool,
    pub certified: bool,
}

/// `max_{v ∈ −K°} θ(v)`; compared with the grid primal when `primal_grid` is given.
pub fn solve_lagrangian_dual<T: Real>(p: &ConicProgram<T>, budget: &Budget, primal_grid: Option<&GridSpec>) -> Result<DualCertificate<T>> {
    let m = p.map.dim_out();
    let mut rows: Vec<Vec<T>> = p.cone.polar_equalities();
    let mut rhs = vec![T::zero(); rows.len()];
    if let Some((a, _)) = p.map.affine_form() {
        // −A*v must stay in dom f*.
        for (c, r) in p.f.conjugate_equalities() {
            rows.push(neg(&a.matvec(&c)));
            rhs.push(r);
        }
    }
    let objective = |v: &[T]| -> Extended<T> {
        if !p.cone.polar_contains(&neg(v)) {
            return Extended::PosInf;
        }
        Extended::from_value(-dual_function(p, v, &budget.grid))
    };
    let mut hints = vec![vec![T::zero(); m]];
    hints.extend(p.cone.sample_polar(budget.polar_hints, T::one(), budget.seed));
    let out = minimize_affine(m, &rows, &rhs, &objective, &hints, &budget.search);
    let dual_value = match out.value {
        Extended::Finite(v) => -v,
        Extended::PosInf => T::neg_infinity(),
    };
    let primal_value = match primal_grid {
        Some(g) => solve_primal_grid(p, g)?.value,
        None => None,
    };
    Ok(DualCertificate {
        dual_value,
        attained: out.argmin.is_some() && dual_value.is_finite(),
        multiplier_v: out.argmin,
        gap: primal_value.map(|pv| pv - dual_value),
        primal_value,
        certified: out.certified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FenchelDual<T> {
    pub value: T,
    pub v: Option<Vec<T>>,
    pub y: Option<Vec<T>>,
}

/// `−min_{v ∈ −K°, y} f*(y) + ⟨v, F⟩*(−y)`.
pub fn fenchel_dual<T: Real>(p: &ConicProgram<T>, budget: &Budget) -> Result<FenchelDual<T>> {
    let c = p.as_composite()?;
    let r = additive_composite_conjugate(&c, &vec![T::zero(); p.map.dim_in()], &budget.clone().waived())?;
    Ok(FenchelDual {
        value: match r.value {
            Extended::Finite(v) => -v,
            Extended::PosInf => T::neg_infinity(),
        },
        v: r.argmin_v,
        y: r.attained_y,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum OptimalityVerdict<T> {
    /// `−∇f(x̄) = F′(x̄)* v` with `v ∈ N_{−K}(F(x̄))`: `x̄` is a global minimizer.
    Certified { multiplier: Vec<T> },
    /// No such `v` exists and the Slater condition holds, so `x̄` is not optimal.
    Refuted,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport<T> {
    pub verdict: OptimalityVerdict<T>,
    /// `ℓ1` distance from `−∇f(x̄)` to the image of the normal-cone generators.
    pub residual: T,
    pub slater: CqStatus,
}

/// Tests `−∇f(x̄) ∈ F′(x̄)* N_{−K}(F(x̄))` for smooth data at a feasible `x̄`.
pub fn check_optimality<T: Real>(p: &ConicProgram<T>, x: &[T]) -> Result<OptimalityReport<T>> {
    check_dim(p.map.dim_in(), x.len())?;
    if !(p.f.smooth && p.map.smooth) {
        return Err(Error::Unsupported("optimality conditions need smooth f and F; use the composite subdifferential".into()));
    }
    let ExtPoint::Point(y) = p.map.eval(x) else {
        return Err(Error::InvalidInput("the point is outside the domain of F".into()));
    };
    if !p.cone.contains(&neg(&y)) {
        return Err(Error::InvalidInput("the point is infeasible".into()));
    }
    let grad = p.f.gradient(x)?;
    let (gens, exact) = p.cone.neg_normal_generators(&y);
    let images: Vec<Vec<T>> = gens
        .iter()
        .map(|g| p.map.jacobian_adjoint(x, g).ok_or_else(|| Error::Unsupported("no derivative of F here".into())))
        .collect::<Result<_>>()?;
    let n = x.len();
    let mut lp = Lp::minimize();
    let mus: Vec<usize> = images.iter().map(|_| lp.var(0.0, 0.0, f64::INFINITY)).collect();
    let plus: Vec<usize> = (0..n).map(|_| lp.var(1.0, 0.0, f64::INFINITY)).collect();
    let minus: Vec<usize> = (0..n).map(|_| lp.var(1.0, 0.0, f64::INFINITY)).collect();
    for j in 0..n {
        let mut row: Vec<(usize, f64)> = mus.iter().zip(&images).map(|(&mu, im)| (mu, im[j].as_f64())).collect();
        row.push((plus[j], 1.0));
        row.push((minus[j], -1.0));
        lp.constraint(&row, Cmp::Eq, -grad[j].as_f64());
    }
    let LpOutcome::Optimal { x: sol, objective } = lp.solve()? else {
        return Err(Error::Lp("normal-cone projection did not solve".into()));
    };
    let residual = T::lit(objective);
    let tol = T::lit(1e-8) * (T::one() + norm(&grad));
    let slater = ConicProgram { f: Oracle::zero(n), ..p.clone() }.slater();
    let verdict = if residual <= tol {
        let mut v = vec![T::zero(); y.len()];
        for (&mu, g) in mus.iter().zip(&gens) {
            for (vi, &gi) in v.iter_mut().zip(g) {
                *vi = *vi + T::lit(sol[mu]) * gi;
            }
        }
        OptimalityVerdict::Certified { multiplier: v }
    } else if exact && slater == CqStatus::Held {
        OptimalityVerdict::Refuted
    } else {
        OptimalityVerdict::Unknown
    };
    Ok(OptimalityReport { verdict, residual, slater })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::space::sym_to_coords;
    use approx::assert_abs_diff_eq;

    fn simple() -> ConicProgram<f64> {
        // min x s.t. 1 − x ≤ 0
        ConicProgram::new(Oracle::linear(vec![1.0]), ConeMap::affine(Mat::from_rows(&[vec![-1.0]]), vec![1.0], Cone::Orthant { n: 1 }))
            .unwrap()
    }

    #[test]
    fn linear_program_duality() {
        let p = simple();
        let primal = solve_primal_grid(&p, &GridSpec::default()).unwrap();
        assert_abs_diff_eq!(primal.value.unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(primal.x.unwrap()[0], 1.0, epsilon = 1e-9);
        let d = solve_lagrangian_dual(&p, &Budget::default(), Some(&GridSpec::default())).unwrap();
        assert_abs_diff_eq!(d.dual_value, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.multiplier_v.unwrap()[0], 1.0, epsilon = 1e-9);
        assert!(d.gap.unwrap().abs() < 1e-9);
        assert_abs_diff_eq!(fenchel_dual(&p, &Budget::default()).unwrap().value, 1.0, epsilon = 1e-9);
        assert_eq!(p.slater(), CqStatus::Held);
    }

    #[test]
    fn inactive_constraint_has_zero_multiplier() {
        let f = ConeMap::affine(Mat::from_rows(&[vec![-1.0]]), vec![-1.0], Cone::Orthant { n: 1 });
        let p = ConicProgram::new(Oracle::half_sq_norm(1), f).unwrap();
        let d = solve_lagrangian_dual(&p, &Budget::default(), None).unwrap();
        assert_abs_diff_eq!(d.dual_value, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.multiplier_v.unwrap()[0], 0.0, epsilon = 1e-6);
    }

    #[test]
    fn infeasible_on_grid() {
        let f = ConeMap::quadratic(vec![(2.0, vec![0.0], 1.0)]);
        let p = ConicProgram::new(Oracle::linear(vec![1.0]), f).unwrap();
        assert!(solve_primal_grid(&p, &GridSpec::default()).unwrap().infeasible_on_grid);
    }

    #[test]
    fn equality_constraint_matches_the_linear_lagrangian() {
        // min ½‖x‖² s.t. x₁ + x₂ − 1 = 0: value ¼, multiplier −½.
        let f = ConeMap::affine(Mat::from_rows(&[vec![1.0, 1.0]]), vec![-1.0], Cone::Zero { dim: 1 });
        let p = ConicProgram::new(Oracle::half_sq_norm(2), f).unwrap();
        let d = solve_lagrangian_dual(&p, &Budget::default(), None).unwrap();
        assert_abs_diff_eq!(d.dual_value, 0.25, epsilon = 1e-9);
        assert_abs_diff_eq!(d.multiplier_v.unwrap()[0], -0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(fenchel_dual(&p, &Budget::default()).unwrap().value, 0.25, epsilon = 1e-9);
    }

    #[test]
    fn semidefinite_program() {
        // min ⟨C, X⟩ s.t. I − X ⪯ 0.
        let c = sym_to_coords(&Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]));
        let a = Mat::from_rows(&[vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, -1.0]]);
        let f = ConeMap::affine(a, sym_to_coords(&Mat::identity(2)), Cone::psd(2));
        let p = ConicProgram::new(Oracle::linear(c), f).unwrap();
        let d = solve_lagrangian_dual(&p, &Budget::default(), None).unwrap();
        assert_abs_diff_eq!(d.dual_value, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fenchel_dual(&p, &Budget::default()).unwrap().value, 4.0, epsilon = 1e-9);
        assert_eq!(p.slater(), CqStatus::Held);
    }

    #[test]
    fn nonlinear_constraint_duals_agree() {
        // min x s.t. x² − 1 ≤ 0: value −1 at multiplier ½.
        let f = ConeMap::quadratic(vec![(2.0, vec![0.0], -1.0)]);
        let p = ConicProgram::new(Oracle::linear(vec![1.0]), f).unwrap();
        let d = solve_lagrangian_dual(&p, &Budget::default(), None).unwrap();
        assert_abs_diff_eq!(d.dual_value, -1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d.multiplier_v.unwrap()[0], 0.5, epsilon = 1e-4);
        assert_abs_diff_eq!(fenchel_dual(&p, &Budget::default()).unwrap().value, -1.0, epsilon = 1e-8);
    }

    #[test]
    fn optimality_examples() {
        let p = simple();
        let r = check_optimality(&p, &[1.0]).unwrap();
        assert_eq!(r.verdict, OptimalityVerdict::Certified { multiplier: vec![1.0] });
        let r = check_optimality(&p, &[2.0]).unwrap();
        assert_eq!(r.verdict, OptimalityVerdict::Refuted);
        assert!(matches!(check_optimality(&p, &[0.0]), Err(Error::InvalidInput(_))));
        let free = ConicProgram::new(Oracle::half_sq_norm(1), ConeMap::affine(Mat::from_rows(&[vec![1.0]]), vec![-5.0], Cone::Orthant { n: 1 })).unwrap();
        assert!(matches!(check_optimality(&free, &[0.0]).unwrap().verdict, OptimalityVerdict::Certified { .. }));
        assert_eq!(check_optimality(&free, &[1.0]).unwrap().verdict, OptimalityVerdict::Refuted);
    }
}
