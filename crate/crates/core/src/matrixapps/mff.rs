use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::linalg::{pinv_form, realify, Mat};
use crate::scalar::Real;

/// A real or complex matrix as real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    pub re: Mat<T>,
    pub im: Option<Mat<T>>,
}

impl<T: Real> CMat<T> {
    pub fn real(re: Mat<T>) -> Self {
        CMat { re, im: None }
    }

    pub fn complex(re: Mat<T>, im: Mat<T>) -> Self {
        assert_eq!((re.rows, re.cols), (im.rows, im.cols), "real and imaginary parts must agree in shape");
        CMat { re, im: Some(im) }
    }

    pub fn is_complex(&self) -> bool {
        self.im.is_some()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.re.rows, self.re.cols)
    }

    fn im_or_zero(&self) -> Mat<T> {
        self.im.clone().unwrap_or_else(|| Mat::zeros(self.re.rows, self.re.cols))
    }

    fn realified(&self) -> Mat<T> {
        realify(&self.re, &self.im_or_zero())
    }

    /// `max |a_ij − conj(a_ji)|` relative to `max(1, ‖A‖_F)`.
    pub fn hermitian_defect(&self) -> T {
        let im = self.im_or_zero();
        let mut worst = T::zero();
        for i in 0..self.re.rows {
            for j in i..self.re.cols {
                worst = worst.max((self.re[(i, j)] - self.re[(j, i)]).abs()).max((im[(i, j)] + im[(j, i)]).abs());
            }
        }
        let norm = (self.re.frobenius().powi(2) + im.frobenius().powi(2)).sqrt();
        worst / norm.max(T::one())
    }

    /// `Re tr A`.
    pub fn real_trace(&self) -> T {
        self.re.trace()
    }
}

/// `(X, V)` with `X` of size `n × m` and `V` hermitian `n × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPair<T> {
    pub x: CMat<T>,
    pub v: CMat<T>,
}

impl<T: Real> MatrixPair<T> {
    pub fn new(x: CMat<T>, v: CMat<T>) -> Result<Self> {
        let (n, _) = x.shape();
        if v.shape() != (n, n) {
            return Err(Error::InvalidInput(format!("V must be {n}×{n} to match X, got {:?}", v.shape())));
        }
        if v.hermitian_defect() > T::lit(1e-12) {
            return Err(Error::InvalidInput("V is not hermitian".into()));
        }
        Ok(MatrixPair { x, v })
    }

    pub fn real(x: Mat<T>, v: Mat<T>) -> Result<Self> {
        Self::new(CMat::real(x), CMat::real(v))
    }

    pub fn is_complex(&self) -> bool {
        self.x.is_complex() || self.v.is_complex()
    }
}

/// `X*V†X` when `rge X ⊂ rge V`; `None` stands for the top element.
///
/// Complex pairs go through the realification, which commutes with products,
/// adjoints and pseudoinverses.
pub fn mff_map<T: Real>(p: &MatrixPair<T>) -> Option<CMat<T>> {
    if !p.is_complex() {
        return pinv_form(&p.x.re, &p.v.re).map(CMat::real);
    }
    let r = pinv_form(&p.x.realified(), &p.v.realified())?;
    let m = p.x.re.cols;
    let mut re = Mat::zeros(m, m);
    let mut im = Mat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            re[(i, j)] = r[(i, j)];
            im[(i, j)] = r[(i + m, j)];
        }
    }
    Some(CMat::complex(re, im))
}

/// `½ Re tr(X*V†X)`, or `+∞` off the range condition.
pub fn mff_gamma<T: Real>(p: &MatrixPair<T>) -> Extended<T> {
    match mff_map(p) {
        Some(f) => Extended::Finite(T::lit(0.5) * f.real_trace()),
        None => Extended::PosInf,
    }
}
