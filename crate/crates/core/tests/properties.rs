use cvxcomp::composite::{composite_conjugate, Budget};
use cvxcomp::cones::Cone;
use cvxcomp::library::{example, Example};
use cvxcomp::linalg::{sym_eigen, sym_pinv, Mat};
use cvxcomp::matrixapps::{mff_gamma, MatrixPair};
use cvxcomp::oracle::Oracle;
use cvxcomp::space::{sym_from_coords, sym_to_coords};
use cvxcomp::{Extended, FunctionOracle32};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn symmetric(n: usize) -> impl Strategy<Value = Mat<f64>> {
    prop::collection::vec(-5.0..5.0f64, n * n).prop_map(move |d| Mat::from_vec(n, n, d).symmetrized())
}

fn to_na(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

fn catalog() -> Vec<Oracle<f64>> {
    vec![
        Oracle::half_sq_norm(3),
        Oracle::abs_sum(3),
        Oracle::norm2(3),
        Oracle::max_coord(3),
        Oracle::exp_sum(3),
        Oracle::quadratic(0.5, vec![1.0, 0.0, -2.0], 1.0),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra(n in 1usize..6, seed in any::<u64>()) {
        let mut r = cvxcomp::sampling::rng(seed);
        let a = Mat::from_vec(n, n, cvxcomp::sampling::normal_vec::<f64>(&mut r, n * n)).symmetrized();
        let mine = sym_eigen(&a);
        let mut theirs: Vec<f64> = nalgebra::SymmetricEigen::new(to_na(&a)).eigenvalues.iter().copied().collect();
        theirs.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (x, y) in mine.values.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
        let back = mine.reconstruct(&mine.values);
        prop_assert!(back.sub(&a).frobenius() <= 1e-9 * (1.0 + a.frobenius()));
    }

    #[test]
    fn pseudoinverse_matches_nalgebra(a in symmetric(3), rank in 1usize..4) {
        // Truncate the spectrum so the rank is exact.
        let e = sym_eigen(&a);
        let d: Vec<f64> = e.values.iter().enumerate().map(|(i, &v)| if i < rank { v.signum() * (v.abs() + 1.0) } else { 0.0 }).collect();
        let low = e.reconstruct(&d);
        let mine = sym_pinv(&low, 1e-10);
        let theirs = to_na(&low).pseudo_inverse(1e-8).unwrap();
        prop_assert!((to_na(&mine) - theirs).norm() <= 1e-8 * (1.0 + to_na(&mine).norm()));
    }

    #[test]
    fn symmetric_coordinates_are_an_isometry(a in symmetric(3), b in symmetric(3)) {
        let (ca, cb) = (sym_to_coords(&a), sym_to_coords(&b));
        let inner: f64 = ca.iter().zip(&cb).map(|(x, y)| x * y).sum();
        prop_assert!((inner - a.frob_dot(&b)).abs() <= 1e-9 * (1.0 + inner.abs()));
        prop_assert!(sym_from_coords(3, &ca).sub(&a).frobenius() <= 1e-12);
    }

    #[test]
    fn fenchel_young_inequality(x in prop::collection::vec(-3.0..3.0f64, 3), y in prop::collection::vec(-3.0..3.0f64, 3)) {
        for f in catalog() {
            if let (Extended::Finite(fx), Some(Extended::Finite(fy))) = (f.eval(&x), f.conjugate(&y)) {
                let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                prop_assert!(fx + fy >= xy - 1e-9, "{}: {} + {} < {}", f.name, fx, fy, xy);
            }
        }
    }

    #[test]
    fn composite_conjugate_dominates_linear_minorants(p in -2.0..2.0f64, x in -3.0..3.0f64) {
        let Example::Composite(prob) = example("abs-as-max").unwrap() else { unreachable!() };
        let c = composite_conjugate(&prob, &[p], &Budget::default()).unwrap();
        let lower = p * x - x.abs();
        prop_assert!(c.value.to_raw() >= lower - 1e-9);
    }

    #[test]
    fn mff_is_positively_homogeneous(xs in prop::collection::vec(-2.0..2.0f64, 4), t in 0.0..4.0f64, seed in any::<u64>()) {
        let mut r = cvxcomp::sampling::rng(seed);
        let b = Mat::from_vec(2, 2, cvxcomp::sampling::normal_vec::<f64>(&mut r, 4));
        let v = b.matmul(&b.transpose());
        let x = Mat::from_vec(2, 2, xs);
        let g = mff_gamma(&MatrixPair::real(x.clone(), v.clone()).unwrap());
        let gt = mff_gamma(&MatrixPair::real(x.scale(t), v.scale(t)).unwrap());
        match (g, gt) {
            (Extended::Finite(a), Extended::Finite(b)) => prop_assert!((b - t * a).abs() <= 1e-8 * (1.0 + (t * a).abs())),
            (Extended::PosInf, Extended::PosInf) => {}
            // Scaling by zero lands on the origin, where γ is zero.
            (Extended::PosInf, Extended::Finite(b)) => prop_assert!(t == 0.0 && b == 0.0),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn polar_samples_are_nonpositive_on_the_cone(seed in any::<u64>()) {
        for k in [Cone::<f64>::Orthant { n: 3 }, Cone::psd(2), Cone::Zero { dim: 3 }] {
            let xs = k.sample_polar(8, 1.0, seed);
            for v in xs {
                // Samples lie in −K°, so ⟨v, x⟩ ≥ 0 on K.
                let probe: Vec<f64> = match &k {
                    Cone::Psd { .. } => sym_to_coords(&Mat::identity(2)),
                    Cone::Zero { .. } => vec![0.0; 3],
                    _ => vec![1.0, 2.0, 0.5],
                };
                let ip: f64 = v.iter().zip(&probe).map(|(a, b)| a * b).sum();
                prop_assert!(ip >= -1e-12);
            }
        }
    }
}

#[test]
fn single_precision_oracles_work() {
    let f: FunctionOracle32 = Oracle::half_sq_norm(2);
    assert!((f.eval(&[3.0, 4.0]).to_raw() - 12.5).abs() < 1e-6);
    assert!((f.conjugate(&[1.0, 1.0]).unwrap().to_raw() - 1.0).abs() < 1e-6);
    let e = sym_eigen(&Mat::<f32>::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]));
    assert!((e.values[0] - 3.0).abs() < 1e-5 && (e.values[1] - 1.0).abs() < 1e-5);
}
