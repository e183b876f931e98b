//! Euclidean spaces and their orthonormal realified coordinates.
//!
//! Every space is embedded in `R^d` through an orthonormal basis of its
//! realification, so the plain dot product of coordinate vectors reproduces
//! the space's own inner product (trace pairings for matrix spaces).

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceDescriptor {
    RealVector { n: usize },
    /// Real `rows × cols` matrices with the pairing `tr(Yᵀ X)`.
    RealMatrix { rows: usize, cols: usize },
    Symmetric { n: usize },
    Hermitian { n: usize },
    ComplexMatrix { rows: usize, cols: usize },
    Product { parts: Vec<SpaceDescriptor> },
}

impl SpaceDescriptor {
    pub fn real(n: usize) -> Self {
        SpaceDescriptor::RealVector { n }
    }

    /// Intrinsic real dimension.
    pub fn dim(&self) -> usize {
        match self {
            SpaceDescriptor::RealVector { n } => *n,
            SpaceDescriptor::RealMatrix { rows, cols } => rows * cols,
            SpaceDescriptor::Symmetric { n } => n * (n + 1) / 2,
            SpaceDescriptor::Hermitian { n } => n * n,
            SpaceDescriptor::ComplexMatrix { rows, cols } => 2 * rows * cols,
            SpaceDescriptor::Product { parts } => parts.iter().map(|p| p.dim()).sum(),
        }
    }

    pub fn check(&self, x: &[impl Copy]) -> Result<()> {
        crate::error::check_dim(self.dim(), x.len())
    }

    /// Offsets of each factor of a product space (a single block otherwise).
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        match self {
            SpaceDescriptor::Product { parts } => {
                let mut off = 0;
                parts
                    .iter()
                    .map(|p| {
                        let b = (off, p.dim());
                        off += p.dim();
                        b
                    })
                    .collect()
            }
            other => vec![(0, other.dim())],
        }
    }
}

/// Symmetric matrix from orthonormal coordinates: diagonal entries first, then
/// `√2 · a_ij` for `i < j` in row-major order.
pub fn sym_from_coords<T: Real>(n: usize, x: &[T]) -> Mat<T> {
    debug_assert_eq!(x.len(), n * (n + 1) / 2);
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = x[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = x[k] * r;
            m[(i, j)] = v;
            m[(j, i)] = v;
            k += 1;
        }
    }
    m
}

pub fn sym_to_coords<T: Real>(m: &Mat<T>) -> Vec<T> {
    let n = m.rows;
    let s = T::lit(std::f64::consts::SQRT_2);
    let mut x = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        x.push(m[(i, i)]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            x.push(s * (m[(i, j)] + m[(j, i)]) * T::lit(0.5));
        }
    }
    x
}

/// Hermitian matrix `(Re, Im)` from `n²` orthonormal coordinates: real diagonal,
/// then `√2 Re a_ij`, then `√2 Im a_ij` for `i < j`.
pub fn herm_from_coords<T: Real>(n: usize, x: &[T]) -> (Mat<T>, Mat<T>) {
    debug_assert_eq!(x.len(), n * n);
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut re = Mat::zeros(n, n);
    let mut im = Mat::zeros(n, n);
    for i in 0..n {
        re[(i, i)] = x[i];
    }
    let off = n * (n - 1) / 2;
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = x[n + k] * r;
            let b = x[n + off + k] * r;
            re[(i, j)] = a;
            re[(j, i)] = a;
            im[(i, j)] = b;
            im[(j, i)] = -b;
            k += 1;
        }
    }
    (re, im)
}

pub fn herm_to_coords<T: Real>(re: &Mat<T>, im: &Mat<T>) -> Vec<T> {
    let n = re.rows;
    let s = T::lit(std::f64::consts::SQRT_2);
    let half = T::lit(0.5);
    let mut diag = Vec::with_capacity(n);
    let mut real_part = Vec::new();
    let mut imag_part = Vec::new();
    for i in 0..n {
        diag.push(re[(i, i)]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            real_part.push(s * (re[(i, j)] + re[(j, i)]) * half);
            imag_part.push(s * (im[(i, j)] - im[(j, i)]) * half);
        }
    }
    diag.extend(real_part);
    diag.extend(imag_part);
    diag
}

/// Complex `rows × cols` matrix from coordinates `(Re row-major, Im row-major)`.
pub fn complex_from_coords<T: Real>(rows: usize, cols: usize, x: &[T]) -> (Mat<T>, Mat<T>) {
    let k = rows * cols;
    (Mat::from_vec(rows, cols, x[..k].to_vec()), Mat::from_vec(rows, cols, x[k..2 * k].to_vec()))
}

pub fn complex_to_coords<T: Real>(re: &Mat<T>, im: &Mat<T>) -> Vec<T> {
    let mut x = re.data.clone();
    x.extend_from_slice(&im.data);
    x
}

/// Matrix embedding of a point of a matrix-kind space. Errors on vector kinds.
pub fn as_real_matrix<T: Real>(space: &SpaceDescriptor, x: &[T]) -> Result<Mat<T>> {
    space.check(x)?;
    match space {
        SpaceDescriptor::RealMatrix { rows, cols } => Ok(Mat::from_vec(*rows, *cols, x.to_vec())),
        SpaceDescriptor::Symmetric { n } => Ok(sym_from_coords(*n, x)),
        other => Err(Error::InvalidInput(format!("{other:?} is not a real matrix space"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::dot;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_coordinates_are_orthonormal() {
        let a = Mat::from_rows(&[vec![1.0, 2.0, 0.5], vec![2.0, -1.0, 3.0], vec![0.5, 3.0, 4.0]]);
        let b = Mat::from_rows(&[vec![0.0, -1.0, 1.0], vec![-1.0, 2.0, 0.0], vec![1.0, 0.0, 1.0]]);
        let (xa, xb) = (sym_to_coords(&a), sym_to_coords(&b));
        assert_abs_diff_eq!(dot(&xa, &xb), a.matmul(&b).trace(), epsilon = 1e-12);
        let back = sym_from_coords(3, &xa);
        for (p, q) in back.data.iter().zip(&a.data) {
            assert_abs_diff_eq!(*p, *q, epsilon = 1e-14);
        }
    }

    #[test]
    fn hermitian_coordinates_reproduce_real_trace_pairing() {
        // X = [[1, 1+2i], [1-2i, 3]], Y = [[2, -i], [i, 0]]
        let (xr, xi) = (
            Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 3.0]]),
            Mat::from_rows(&[vec![0.0, 2.0], vec![-2.0, 0.0]]),
        );
        let (yr, yi) = (
            Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]),
            Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]),
        );
        // Re tr(Y* X) = Σ Re(conj(y_ij) x_ij) = Σ (yr xr + yi xi)
        let expected = yr.frob_dot(&xr) + yi.frob_dot(&xi);
        let got = dot(&herm_to_coords(&xr, &xi), &herm_to_coords(&yr, &yi));
        assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
        let (br, bi) = herm_from_coords(2, &herm_to_coords(&xr, &xi));
        for (p, q) in br.data.iter().zip(&xr.data).chain(bi.data.iter().zip(&xi.data)) {
            assert_abs_diff_eq!(*p, *q, epsilon = 1e-14);
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(SpaceDescriptor::Symmetric { n: 3 }.dim(), 6);
        assert_eq!(SpaceDescriptor::Hermitian { n: 3 }.dim(), 9);
        assert_eq!(SpaceDescriptor::ComplexMatrix { rows: 2, cols: 1 }.dim(), 4);
        let p = SpaceDescriptor::Product {
            parts: vec![SpaceDescriptor::real(2), SpaceDescriptor::Symmetric { n: 2 }],
        };
        assert_eq!(p.dim(), 5);
        assert_eq!(p.blocks(), vec![(0, 2), (2, 3)]);
    }
}
