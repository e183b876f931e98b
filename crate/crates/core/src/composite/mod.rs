//! Conjugates and subdifferentials of `g∘F` and `f + g∘F` for `K`-convex maps `F`.

mod checks;
mod conj;
mod cq;
mod subgrad;

pub use checks::{check_cone_increasing, check_monotone_condition, check_scalarization_convexity, Verdict};
pub use conj::{
    additive_composite_conjugate, composite_conjugate, linear_composite_conjugate, max_of_convex_conjugate, Budget,
    CompositeConjugateResult, Method,
};
pub use cq::{check_cq, check_cq_with, CqCondition, CqMethod, CqReport, CqStatus};
pub(crate) use conj::inner_conjugate;
pub(crate) use cq::{joint_ri_point, Start};
pub use subgrad::{
    additive_composite_subdifferential, composite_subdifferential, linear_composite_subdifferential,
    max_of_convex_subdifferential, ACTIVITY_TOL,
};

use crate::cones::Cone;
use crate::error::{check_dim, Result};
use crate::extended::{ExtPoint, Extended};
use crate::map::ConeMap;
use crate::oracle::Oracle;
use crate::scalar::Real;

/// `f + g∘F` with the constraint cone `K` of `F` (by default the cone declared on the map).
#[derive(Clone, Debug)]
pub struct CompositeProblem<T> {
    pub f: Option<Oracle<T>>,
    pub g: Oracle<T>,
    pub map: ConeMap<T>,
    pub cone: Cone<T>,
}

impl<T: Real> CompositeProblem<T> {
    pub fn new(g: Oracle<T>, map: ConeMap<T>) -> Result<Self> {
        check_dim(map.dim_out(), g.dim())?;
        let cone = map.cone.clone();
        Ok(CompositeProblem { f: None, g, map, cone })
    }

    pub fn with_f(mut self, f: Oracle<T>) -> Result<Self> {
        check_dim(self.map.dim_in(), f.dim())?;
        self.f = Some(f);
        Ok(self)
    }

    pub fn with_cone(mut self, cone: Cone<T>) -> Result<Self> {
        check_dim(self.map.dim_out(), cone.dim())?;
        self.cone = cone;
        Ok(self)
    }

    pub fn dim_in(&self) -> usize {
        self.map.dim_in()
    }

    pub fn dim_out(&self) -> usize {
        self.map.dim_out()
    }

    /// `g(F(x))`, with `g(+∞•) = +∞`.
    pub fn eval_outer(&self, x: &[T]) -> Extended<T> {
        match self.map.eval(x) {
            ExtPoint::Point(y) => self.g.eval(&y),
            ExtPoint::Top => Extended::PosInf,
        }
    }

    /// `f(x) + g(F(x))`.
    pub fn eval_composite(&self, x: &[T]) -> Extended<T> {
        let outer = self.eval_outer(x);
        match &self.f {
            Some(f) if outer.is_finite() => f.eval(x) + outer,
            _ => outer,
        }
    }

    /// The composite as a plain oracle (evaluation only), e.g. for brute-force conjugation.
    pub fn as_oracle(&self) -> Oracle<T> {
        let p = self.clone();
        let name = match &self.f {
            Some(f) => format!("{} + {}∘{}", f.name, self.g.name, self.map.name),
            None => format!("{}∘{}", self.g.name, self.map.name),
        };
        Oracle::custom(name, self.map.domain_space.clone(), move |x| p.eval_composite(x))
    }

    /// The same problem without `f`.
    pub(crate) fn outer_only(&self) -> Self {
        CompositeProblem { f: None, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::{conjugate_bruteforce, GridSpec};
    use crate::linalg::Mat;
    use crate::sets::ConvexSet;
    use crate::space::sym_to_coords;
    use approx::assert_abs_diff_eq;

    const INF: f64 = f64::INFINITY;

    fn abs_as_max() -> CompositeProblem<f64> {
        let f = ConeMap::linear(Mat::from_rows(&[vec![1.0], vec![-1.0]]), Cone::Orthant { n: 2 });
        CompositeProblem::new(Oracle::max_coord(2), f).unwrap()
    }

    fn nonpositive_line() -> Oracle<f64> {
        Oracle::indicator(ConvexSet::Box { lo: vec![-INF], hi: vec![0.0] })
    }

    #[test]
    fn abs_as_max_conjugate_is_the_interval_indicator() {
        let p = abs_as_max();
        let r = composite_conjugate(&p, &[0.5], &Budget::default()).unwrap();
        assert_eq!(r.method, Method::Enumeration);
        assert_abs_diff_eq!(r.value.to_raw(), 0.0, epsilon = 1e-9);
        let v = r.argmin_v.unwrap();
        assert_abs_diff_eq!(v[0], 0.75, epsilon = 1e-9);
        assert_abs_diff_eq!(v[1], 0.25, epsilon = 1e-9);
        assert!(r.cq.is_held());
        assert!(composite_conjugate(&p, &[2.0], &Budget::default()).unwrap().value.is_inf());
    }

    #[test]
    fn identity_map_gives_the_plain_conjugate() {
        let p = CompositeProblem::new(Oracle::exp_sum(2), ConeMap::identity(2, Cone::Zero { dim: 2 })).unwrap();
        let q = [0.7, 2.0];
        let r = composite_conjugate(&p, &q, &Budget::default()).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert_abs_diff_eq!(r.value.to_raw(), Oracle::exp_sum(2).conjugate(&q).unwrap().to_raw(), epsilon = 1e-12);
    }

    #[test]
    fn level_set_composite_matches_brute_force() {
        // δ_{R−}(x² − 1) = δ_{[−1,1]}, whose conjugate is |p|.
        let f = ConeMap::quadratic(vec![(2.0, vec![0.0], -1.0)]);
        let p = CompositeProblem::new(nonpositive_line(), f).unwrap();
        assert!(check_cq(&p, CqCondition::Cq1).unwrap().is_held());
        for q in [-1.5, -0.3, 0.0, 0.8, 2.0] {
            let r = composite_conjugate(&p, &[q], &Budget::default()).unwrap();
            assert_abs_diff_eq!(r.value.to_raw(), q.abs(), epsilon = 1e-6);
        }
    }

    #[test]
    fn violated_condition_requires_a_waiver_and_gives_an_upper_bound() {
        let f = ConeMap::quadratic(vec![(2.0, vec![0.0], 0.0)]);
        let p = CompositeProblem::new(nonpositive_line(), f).unwrap();
        let cq = check_cq(&p, CqCondition::Cq1).unwrap();
        assert_eq!(cq.held, CqStatus::Violated);
        assert!(matches!(composite_conjugate(&p, &[1.0], &Budget::default()), Err(crate::Error::QualificationNotVerified(_))));
        let r = composite_conjugate(&p, &[1.0], &Budget::default().waived()).unwrap();
        assert!(r.upper_bound_only && !r.certified);
        assert!(r.value.to_raw() >= -1e-9);
    }

    #[test]
    fn orthant_times_zero_geometry() {
        let cone = Cone::Product { parts: vec![Cone::Orthant { n: 1 }, Cone::Zero { dim: 1 }] };
        let f = ConeMap::linear(Mat::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]), cone.clone());
        let g = Oracle::indicator(ConvexSet::Box { lo: vec![0.0, -INF], hi: vec![INF, INF] });
        let p = CompositeProblem::new(g.clone(), f.clone()).unwrap();
        let cq = check_cq(&p, CqCondition::Cq1).unwrap();
        assert!(cq.is_held());
        assert!(cq.witness.is_some());
        assert!(check_monotone_condition(&g, &f, &cone, 200, 1).is_consistent());
        let v = check_cone_increasing(&g, &cone, 200, 2.0, 1);
        assert!(v.witness("u").unwrap()[0] < 0.0);
        let r0 = composite_conjugate(&p, &[0.0, 0.0], &Budget::default()).unwrap();
        assert_abs_diff_eq!(r0.value.to_raw(), 0.0, epsilon = 1e-12);
        assert!(composite_conjugate(&p, &[0.0, 1.0], &Budget::default()).unwrap().value.is_inf());
    }

    #[test]
    fn finite_outer_function_satisfies_the_simple_condition() {
        let f = ConeMap::<f64>::half_gram(2, 1);
        let p = CompositeProblem::new(Oracle::half_sq_norm(3), f).unwrap();
        let r = check_cq(&p, CqCondition::Cq1Simple).unwrap();
        assert!(r.is_held());
        assert_eq!(r.method, CqMethod::FullDomain);
    }

    #[test]
    fn spectral_condition_fails_exactly_on_the_diagonal_line() {
        let diag = ConvexSet::Cone(Cone::Polyhedral { dim: 2, rows: vec![vec![1.0, -1.0], vec![-1.0, 1.0]] });
        let p = CompositeProblem::new(Oracle::indicator(diag).with_permutation_invariance(true), ConeMap::eigenvalues(2)).unwrap();
        assert_eq!(check_cq(&p, CqCondition::Cq1).unwrap().held, CqStatus::Violated);
        let origin = ConvexSet::point(vec![0.0, 0.0]);
        let p = CompositeProblem::new(Oracle::indicator(origin), ConeMap::eigenvalues(2)).unwrap();
        assert_eq!(check_cq(&p, CqCondition::Cq1).unwrap().held, CqStatus::Violated);
        let p = CompositeProblem::<f64>::new(Oracle::max_coord(2), ConeMap::eigenvalues(2)).unwrap();
        assert!(check_cq(&p, CqCondition::Cq1).unwrap().is_held());
        let simplex = ConvexSet::<f64>::simplex(2);
        let p = CompositeProblem::new(Oracle::indicator(simplex), ConeMap::eigenvalues(2)).unwrap();
        let r = check_cq(&p, CqCondition::Cq1).unwrap();
        assert!(r.is_held());
        assert_eq!(r.witness.unwrap().len(), 3);
    }

    #[test]
    fn max_of_eigenvalues_conjugate_is_the_spectraplex_indicator() {
        let p = CompositeProblem::<f64>::new(Oracle::max_coord(2), ConeMap::eigenvalues(2)).unwrap();
        let inside = sym_to_coords(&Mat::from_rows(&[vec![0.6, 0.1], vec![0.1, 0.4]]));
        let r = composite_conjugate(&p, &inside, &Budget::default()).unwrap();
        assert_abs_diff_eq!(r.value.to_raw(), 0.0, epsilon = 1e-9);
        let off_trace = sym_to_coords(&Mat::identity(2));
        assert!(composite_conjugate(&p, &off_trace, &Budget::default()).unwrap().value.is_inf());
        let indefinite = sym_to_coords(&Mat::from_rows(&[vec![1.2, 0.0], vec![0.0, -0.2]]));
        assert!(composite_conjugate(&p, &indefinite, &Budget::default()).unwrap().value.is_inf());
    }

    #[test]
    fn search_path_matches_brute_force_for_a_smooth_instance() {
        // ½‖(x, x)‖² = x², conjugate p²/4.
        let f = ConeMap::linear(Mat::from_rows(&[vec![1.0], vec![1.0]]), Cone::Zero { dim: 2 });
        let p = CompositeProblem::new(Oracle::half_sq_norm(2), f).unwrap();
        for q in [-2.0, 0.3, 1.0] {
            let r = composite_conjugate(&p, &[q], &Budget::default()).unwrap();
            let b = conjugate_bruteforce(&p.as_oracle(), &[q], &GridSpec::cube(-4.0, 4.0, 513)).unwrap();
            assert_abs_diff_eq!(r.value.to_raw(), q * q / 4.0, epsilon = 1e-9);
            assert_abs_diff_eq!(b.value.to_raw(), q * q / 4.0, epsilon = 1e-4);
        }
    }

    #[test]
    fn abs_as_max_subdifferential_at_the_kink() {
        let s = composite_subdifferential(&abs_as_max(), &[0.0]).unwrap();
        assert_abs_diff_eq!(s.support(&[1.0]).to_raw(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.support(&[-1.0]).to_raw(), 1.0, epsilon = 1e-12);
        let s = composite_subdifferential(&abs_as_max(), &[2.0]).unwrap();
        assert_eq!(s.as_interval(), Some((1.0, 1.0)));
    }

    #[test]
    fn smooth_chain_rule() {
        let f = ConeMap::quadratic(vec![(2.0, vec![1.0], 0.0), (0.0, vec![-1.0], 1.0)]).with_cone(Cone::Orthant { n: 2 });
        let p = CompositeProblem::new(Oracle::half_sq_norm(2), f.clone()).unwrap();
        let x = [0.7];
        let y = f.eval(&x).into_point().unwrap();
        let s = composite_subdifferential(&p, &x).unwrap();
        let expected = f.jacobian_adjoint(&x, &y).unwrap();
        assert_eq!(s.points().len(), 1);
        assert_abs_diff_eq!(s.points()[0][0], expected[0], epsilon = 1e-12);
    }

    #[test]
    fn additive_conjugates() {
        let p = abs_as_max().with_f(Oracle::half_sq_norm(1)).unwrap();
        let r = additive_composite_conjugate(&p, &[0.0], &Budget::default()).unwrap();
        assert_abs_diff_eq!(r.value.to_raw(), 0.0, epsilon = 1e-8);
        // (½x² + |x|)*(p) = ½(|p| − 1)₊²
        let r = additive_composite_conjugate(&p, &[2.5], &Budget::default()).unwrap();
        assert_abs_diff_eq!(r.value.to_raw(), 0.5 * 1.5 * 1.5, epsilon = 1e-6);
        let pinned = abs_as_max().with_f(Oracle::indicator(ConvexSet::point(vec![0.0]))).unwrap();
        for q in [-1.0, 0.0, 3.0] {
            let r = additive_composite_conjugate(&pinned, &[q], &Budget::default()).unwrap();
            assert_abs_diff_eq!(r.value.to_raw(), -pinned.eval_outer(&[0.0]).to_raw(), epsilon = 1e-9);
        }
        let zero = abs_as_max().with_f(Oracle::zero(1)).unwrap();
        let a = additive_composite_conjugate(&zero, &[0.5], &Budget::default()).unwrap();
        let b = composite_conjugate(&abs_as_max(), &[0.5], &Budget::default()).unwrap();
        assert_abs_diff_eq!(a.value.to_raw(), b.value.to_raw(), epsilon = 1e-12);
    }

    #[test]
    fn additive_subdifferential_sums_intervals() {
        let p = abs_as_max().with_f(Oracle::abs_sum(1)).unwrap();
        let s = additive_composite_subdifferential(&p, &[0.0]).unwrap();
        assert_abs_diff_eq!(s.support(&[1.0]).to_raw(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.support(&[-1.0]).to_raw(), 2.0, epsilon = 1e-12);
        let p = abs_as_max().with_f(Oracle::indicator(ConvexSet::interval(0.0, 1.0))).unwrap();
        let s = additive_composite_subdifferential(&p, &[0.0]).unwrap();
        assert!(s.support(&[-1.0]).is_inf());
        assert_abs_diff_eq!(s.support(&[1.0]).to_raw(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn linear_case_pins_the_multiplier() {
        let a = Mat::from_rows(&[vec![1.0, 1.0]]);
        let g = Oracle::half_sq_norm(1);
        let r = linear_composite_conjugate(&g, &a, &[1.0, 1.0], &Budget::default()).unwrap();
        assert_abs_diff_eq!(r.value.to_raw(), 0.5, epsilon = 1e-12);
        assert!(linear_composite_conjugate(&g, &a, &[1.0, 0.0], &Budget::default()).unwrap().value.is_inf());
        let s = linear_composite_subdifferential(&g, &a, &[0.5, 1.0]).unwrap();
        assert_eq!(s.points(), vec![vec![1.5, 1.5]]);
    }

    #[test]
    fn max_of_convex_examples() {
        let fs = vec![Oracle::linear(vec![1.0]), Oracle::linear(vec![-1.0])];
        let r = max_of_convex_conjugate(&fs, &[0.5], &Budget::default()).unwrap();
        assert_abs_diff_eq!(r.value.to_raw(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.argmin_v.unwrap()[0], 0.75, epsilon = 1e-9);
        let same = vec![Oracle::half_sq_norm(1), Oracle::half_sq_norm(1)];
        let r = max_of_convex_conjugate(&same, &[1.4], &Budget::default()).unwrap();
        assert_abs_diff_eq!(r.value.to_raw(), 0.98, epsilon = 1e-9);
        let one = max_of_convex_conjugate(&[Oracle::exp_sum(1)], &[2.0], &Budget::default()).unwrap();
        assert_abs_diff_eq!(one.value.to_raw(), 2.0 * 2f64.ln() - 2.0, epsilon = 1e-6);

        let s = max_of_convex_subdifferential(&fs, &[0.0]).unwrap();
        assert_eq!(s.as_interval(), Some((-1.0, 1.0)));
        assert_eq!(max_of_convex_subdifferential(&fs, &[3.0]).unwrap().as_interval(), Some((1.0, 1.0)));
        let touch = vec![Oracle::half_sq_norm(1), Oracle::affine(vec![1.0], -0.5)];
        assert_eq!(max_of_convex_subdifferential(&touch, &[1.0]).unwrap().as_interval(), Some((1.0, 1.0)));
    }

    #[test]
    fn half_gram_scalarizations() {
        let f = ConeMap::<f64>::half_gram(2, 2);
        assert!(check_scalarization_convexity(&f, &Cone::psd(2), 200, 3).is_consistent());
        let v = check_scalarization_convexity(&f, &Cone::Zero { dim: 3 }, 200, 3);
        assert!(!v.is_consistent());
        let lin = ConeMap::linear(Mat::from_rows(&[vec![1.0, 2.0], vec![0.0, -1.0]]), Cone::Zero { dim: 2 });
        assert!(check_scalarization_convexity(&lin, &Cone::Zero { dim: 2 }, 200, 3).is_consistent());
    }
}
