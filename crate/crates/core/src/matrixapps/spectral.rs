use crate::error::{check_dim, Error, Result};
use crate::extended::Extended;
use crate::linalg::{sym_eigen, Mat};
use crate::oracle::Oracle;
use crate::sampling::{normal_vec, rng};
use crate::scalar::{dot, Real};
use crate::space::sym_to_coords;
use crate::subdiff::{Exactness, SubdifferentialSet};
use rand::seq::SliceRandom;

/// `g ∘ λ` for a permutation-invariant `g` on `Rⁿ`.
#[derive(Debug, Clone)]
pub struct SpectralSpec<T> {
    pub g: Oracle<T>,
}

impl<T: Real> SpectralSpec<T> {
    /// Checks `g(σ(v)) = g(v)` at 20 random points and permutations.
    pub fn new(g: Oracle<T>) -> Result<Self> {
        let n = g.dim();
        let mut r = rng(n as u64);
        for _ in 0..20 {
            let v: Vec<T> = normal_vec(&mut r, n);
            let mut p = v.clone();
            p.shuffle(&mut r);
            let (a, b) = (g.eval(&v), g.eval(&p));
            let same = match (a.finite(), b.finite()) {
                (Some(a), Some(b)) => (a - b).abs() <= T::lit(1e-9) * (T::one() + a.abs()),
                (None, None) => true,
                _ => false,
            };
            if !same {
                return Err(Error::InvalidInput(format!("{} is not permutation invariant", g.name)));
            }
        }
        Ok(SpectralSpec { g: g.with_permutation_invariance(true) })
    }

    pub fn n(&self) -> usize {
        self.g.dim()
    }

    fn eigen(&self, x: &Mat<T>) -> Result<crate::linalg::SymEigen<T>> {
        check_dim(self.n(), x.rows)?;
        check_dim(self.n(), x.cols)?;
        if x.asymmetry() > T::lit(1e-12) {
            return Err(Error::InvalidInput("matrix is not symmetric".into()));
        }
        Ok(sym_eigen(x))
    }
}

/// `g(λ(X))` with eigenvalues sorted nonincreasingly.
pub fn spectral_eval<T: Real>(s: &SpectralSpec<T>, x: &Mat<T>) -> Result<Extended<T>> {
    Ok(s.g.eval(&s.eigen(x)?.values))
}

/// `(g∘λ)*(Y) = g*(λ(Y))`.
pub fn spectral_conjugate<T: Real>(s: &SpectralSpec<T>, y: &Mat<T>) -> Result<Extended<T>> {
    let lam = s.eigen(y)?.values;
    s.g.conjugate(&lam).ok_or_else(|| Error::Unsupported(format!("{} has no closed-form conjugate", s.g.name)))
}

/// `{U diag(v) Uᵀ : v ∈ ∂g(λ(X))}` for one eigenbasis `U` of `X`, in symmetric
/// coordinates. With repeated eigenvalues other eigenbases add more elements,
/// so the result is labeled a generator subset.
pub fn spectral_subdifferential<T: Real>(s: &SpectralSpec<T>, x: &Mat<T>, generators: Option<&SubdifferentialSet<T>>) -> Result<SubdifferentialSet<T>> {
    let eig = s.eigen(x)?;
    let owned;
    let sub = match generators {
        Some(g) => g,
        None => {
            owned = s.g.subgradient(&eig.values)?;
            &owned
        }
    };
    let lift = |v: &Vec<T>| sym_to_coords(&eig.reconstruct(v));
    let points: Vec<Vec<T>> = sub.points().iter().map(lift).collect();
    let rays: Vec<Vec<T>> = sub.rays().iter().map(lift).collect();
    let scale = eig.values.iter().fold(T::one(), |m, &l| m.max(l.abs()));
    let degenerate = eig.values.windows(2).any(|w| w[0] - w[1] <= T::lit(1e-9) * scale);
    let mut out = SubdifferentialSet::polytope(points, rays).with_exactness(sub.exactness);
    out.dim = x.rows * (x.rows + 1) / 2;
    if degenerate {
        out = out.with_exactness(Exactness::GeneratorSubset);
    }
    Ok(out)
}

/// `⟨λ(X), λ(Y)⟩ − ⟨X, Y⟩`, nonnegative by von Neumann's trace inequality.
pub fn von_neumann_gap<T: Real>(x: &Mat<T>, y: &Mat<T>) -> T {
    dot(&sym_eigen(x).values, &sym_eigen(y).values) - x.frob_dot(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::Cone;
    use crate::sets::ConvexSet;
    use approx::assert_abs_diff_eq;

    fn sym() -> Mat<f64> {
        Mat::from_rows(&[vec![2.0, -1.0, 0.5], vec![-1.0, 0.0, 1.5], vec![0.5, 1.5, -3.0]])
    }

    #[test]
    fn evaluation_examples() {
        let x = sym();
        let sum = SpectralSpec::new(Oracle::linear(vec![1.0; 3])).unwrap();
        assert_abs_diff_eq!(spectral_eval(&sum, &x).unwrap().finite().unwrap(), x.trace(), epsilon = 1e-12);
        let half = SpectralSpec::new(Oracle::half_sq_norm(3)).unwrap();
        let hf = 0.5 * x.frobenius().powi(2);
        assert_abs_diff_eq!(spectral_eval(&half, &x).unwrap().finite().unwrap(), hf, epsilon = 1e-12);
        assert_abs_diff_eq!(spectral_conjugate(&half, &x).unwrap().finite().unwrap(), hf, epsilon = 1e-12);
        let max = SpectralSpec::new(Oracle::max_coord(2)).unwrap();
        let d = Mat::diag(&[2.0, 1.0]);
        assert_eq!(spectral_eval(&max, &d).unwrap(), Extended::Finite(2.0));
    }

    #[test]
    fn max_eigenvalue_conjugate_is_the_spectraplex_indicator() {
        let max = SpectralSpec::new(Oracle::max_coord(2)).unwrap();
        assert_eq!(spectral_conjugate(&max, &Mat::identity(2)).unwrap(), Extended::PosInf);
        assert_eq!(spectral_conjugate(&max, &Mat::identity(2).scale(0.5)).unwrap(), Extended::Finite(0.0));
    }

    #[test]
    fn diagonal_line_indicator_conjugate_is_trace_zero_indicator() {
        let line = Cone::Polyhedral { dim: 2, rows: vec![vec![1.0, -1.0], vec![-1.0, 1.0]] };
        let s = SpectralSpec::new(Oracle::indicator(ConvexSet::Cone(line))).unwrap();
        let y = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, -1.0]]);
        assert_eq!(spectral_conjugate(&s, &y).unwrap(), Extended::Finite(0.0));
        assert_eq!(spectral_conjugate(&s, &Mat::identity(2)).unwrap(), Extended::PosInf);
    }

    #[test]
    fn subdifferential_examples() {
        let half = SpectralSpec::new(Oracle::half_sq_norm(3)).unwrap();
        let d = spectral_subdifferential(&half, &sym(), None).unwrap();
        let pts = d.points();
        assert_eq!(pts.len(), 1);
        for (a, b) in pts[0].iter().zip(sym_to_coords(&sym())) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }
        assert_eq!(d.exactness, Exactness::Exact);

        let max = SpectralSpec::new(Oracle::max_coord(2)).unwrap();
        let d = spectral_subdifferential(&max, &Mat::diag(&[2.0, 1.0]), None).unwrap();
        assert_eq!(d.points().len(), 1);
        for (a, b) in d.points()[0].iter().zip([1.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let d = spectral_subdifferential(&max, &Mat::identity(2), None).unwrap();
        assert_eq!(d.exactness, Exactness::GeneratorSubset);
        let mut pts = d.points();
        pts.sort_by(|a, b| b[0].partial_cmp(&a[0]).unwrap());
        assert_eq!(pts, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn rejects_non_invariant_functions() {
        assert!(SpectralSpec::new(Oracle::linear(vec![1.0, 2.0])).is_err());
    }

    #[test]
    fn von_neumann_inequality_holds_on_an_example() {
        let y = Mat::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, -1.0, 0.0], vec![2.0, 0.0, 0.5]]);
        assert!(von_neumann_gap(&sym(), &y) >= -1e-12);
    }
}
