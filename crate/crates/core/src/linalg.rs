//! Small dense linear algebra: row-major matrices, a cyclic Jacobi symmetric
//! eigensolver, symmetric pseudoinverses and affine-system parameterization.
//!
//! Everything here is generic over [`Real`] so the matrix applications work in
//! both precisions. Problem sizes are desk-scale (n ≤ 8 after realification).

use crate::scalar::{dot, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &[T], v: &[T]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for i in 0..u.len() {
            for j in 0..v.len() {
                m[(i, j)] = u[i] * v[j];
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "matvec shape");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Aᵀ y`
    pub fn tr_matvec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(self.rows, y.len(), "transposed matvec shape");
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j] = out[j] + self[(i, j)] * y[i];
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: T) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> T {
        dot(&self.data, &self.data).sqrt()
    }

    /// Trace pairing `tr(Aᵀ B)`.
    pub fn frob_dot(&self, other: &Self) -> T {
        dot(&self.data, &other.data)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Largest `|a_ij - a_ji|` relative to `max(1, ‖A‖_F)`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / self.frobenius().max(T::one())
    }

    pub fn symmetrized(&self) -> Self {
        self.add(&self.transpose()).scale(T::lit(0.5))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition `A = U diag(values) Uᵀ` with values sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    /// Eigenvectors stored as columns.
    pub vectors: Mat<T>,
}

impl<T: Real> SymEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<T> {
        self.vectors.col(k)
    }

    /// Rebuilds `U diag(d) Uᵀ` for an arbitrary spectrum `d`.
    pub fn reconstruct(&self, d: &[T]) -> Mat<T> {
        let n = self.vectors.rows;
        let mut out = Mat::zeros(n, n);
        for (k, &dk) in d.iter().enumerate() {
            if dk == T::zero() {
                continue;
            }
            for i in 0..n {
                let uik = self.vectors[(i, k)] * dk;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + uik * self.vectors[(j, k)];
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Only the upper triangle
/// is trusted; callers symmetrize first if needed.
pub fn sym_eigen<T: Real>(a: &Mat<T>) -> SymEigen<T> {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows;
    let mut m = a.symmetrized();
    let mut v = Mat::identity(n);
    let scale = m.frobenius();
    if n > 1 && scale > T::zero() {
        let stop = T::epsilon() * T::epsilon() * scale * scale;
        for _sweep in 0..100 {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off + m[(p, q)] * m[(p, q)];
                }
            }
            if off <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq.abs() <= T::min_positive_value() {
                        continue;
                    }
                    let theta = (m[(q, q)] - m[(p, p)]) / (T::lit(2.0) * apq);
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = c * mkp - s * mkq;
                        m[(k, q)] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let mpk = m[(p, k)];
                        let mqk = m[(q, k)];
                        m[(p, k)] = c * mpk - s * mqk;
                        m[(q, k)] = s * mpk + c * mqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    SymEigen { values, vectors }
}

/// Nonincreasing eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues<T: Real>(a: &Mat<T>) -> Vec<T> {
    sym_eigen(a).values
}

/// Spectral norm of a symmetric matrix (`max |λ|`).
pub fn sym_spectral_norm<T: Real>(a: &Mat<T>) -> T {
    sym_eigenvalues(a).iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// PSD test with tolerance `1e-10 · max(1, ‖A‖₂)`.
pub fn is_psd<T: Real>(a: &Mat<T>) -> bool {
    let ev = sym_eigenvalues(a);
    let scale = ev.iter().fold(T::one(), |m, &x| m.max(x.abs()));
    ev.last().map_or(true, |&lmin| lmin >= -psd_tol::<T>() * scale)
}

pub(crate) fn psd_tol<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e3))
}

/// Moore–Penrose pseudoinverse of a symmetric matrix, truncating eigenvalues
/// with `|λ| ≤ rel_tol · max|λ|`.
pub fn sym_pinv<T: Real>(a: &Mat<T>, rel_tol: T) -> Mat<T> {
    let eig = sym_eigen(a);
    let top = eig.values.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let cut = rel_tol * top;
    let inv: Vec<T> = eig
        .values
        .iter()
        .map(|&l| if l.abs() > cut && l != T::zero() { T::one() / l } else { T::zero() })
        .collect();
    eig.reconstruct(&inv)
}

/// `XᵀV†X` when `rge X ⊂ rge V`, otherwise `None`.
///
/// Eigenvalues of `V` below `1e-12 · max|λ|` are truncated; the range test is
/// `‖(I − VV†)X‖ ≤ 1e-9 · ‖X‖`.
pub fn pinv_form<T: Real>(x: &Mat<T>, v: &Mat<T>) -> Option<Mat<T>> {
    assert_eq!(x.rows, v.rows, "X and V must have the same number of rows");
    let rank_tol = T::lit(1e-12).max(T::epsilon() * T::lit(10.0));
    let range_tol = T::lit(1e-9).max(T::epsilon() * T::lit(1e3));
    let vp = sym_pinv(v, rank_tol);
    let proj = v.matmul(&vp);
    let resid = x.sub(&proj.matmul(x)).frobenius();
    if resid > range_tol * x.frobenius() {
        return None;
    }
    Some(x.transpose().matmul(&vp).matmul(x).symmetrized())
}

/// Realification `A + iB ↦ [[A, -B], [B, A]]`.
///
/// It is an injective `*`-algebra homomorphism: products, adjoints, pseudoinverses
/// and ranges all commute with it, and `tr R(M) = 2 Re tr M`.
pub fn realify<T: Real>(re: &Mat<T>, im: &Mat<T>) -> Mat<T> {
    assert_eq!((re.rows, re.cols), (im.rows, im.cols), "real/imag parts must agree in shape");
    let (r, c) = (re.rows, re.cols);
    let mut out = Mat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            out[(i, j)] = re[(i, j)];
            out[(i, j + c)] = -im[(i, j)];
            out[(i + r, j)] = im[(i, j)];
            out[(i + r, j + c)] = re[(i, j)];
        }
    }
    out
}

/// Parameterization `{x : E x = r} = {x0 + N z}` of an affine solution set.
#[derive(Debug, Clone)]
pub struct AffineSolution<T> {
    /// Minimum-norm least-squares solution.
    pub particular: Vec<T>,
    /// Orthonormal basis of `ker E`.
    pub null_basis: Vec<Vec<T>>,
    /// `‖E x0 - r‖₂`; positive beyond tolerance means the system is inconsistent.
    pub residual: T,
}

impl<T: Real> AffineSolution<T> {
    pub fn point(&self, z: &[T]) -> Vec<T> {
        let mut x = self.particular.clone();
        for (zk, basis) in z.iter().zip(&self.null_basis) {
            for (xi, &bi) in x.iter_mut().zip(basis) {
                *xi = *xi + *zk * bi;
            }
        }
        x
    }

    /// Coordinates of the orthogonal projection of `x` onto the affine set.
    pub fn project_coords(&self, x: &[T]) -> Vec<T> {
        let d: Vec<T> = x.iter().zip(&self.particular).map(|(&a, &b)| a - b).collect();
        self.null_basis.iter().map(|b| dot(b, &d)).collect()
    }

    pub fn is_consistent(&self, tol: T) -> bool {
        self.residual <= tol
    }
}

/// Solves `E x = r` for an `k × n` system given as rows (`k` may be zero).
pub fn solve_affine<T: Real>(n: usize, rows: &[Vec<T>], rhs: &[T]) -> AffineSolution<T> {
    assert_eq!(rows.len(), rhs.len(), "one rhs per equality row");
    if rows.is_empty() {
        let null_basis = (0..n)
            .map(|i| {
                let mut e = vec![T::zero(); n];
                e[i] = T::one();
                e
            })
            .collect();
        return AffineSolution { particular: vec![T::zero(); n], null_basis, residual: T::zero() };
    }
    let e = Mat::from_rows(rows);
    let ete = e.transpose().matmul(&e);
    let eig = sym_eigen(&ete);
    let top = eig.values.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let cut = T::lit(1e-12).max(T::epsilon() * T::lit(1e3)) * top.max(T::one());
    let etr = e.tr_matvec(rhs);
    let mut particular = vec![T::zero(); n];
    let mut null_basis = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        let u = eig.vector(k);
        if lambda > cut {
            let coef = dot(&u, &etr) / lambda;
            for (xi, &ui) in particular.iter_mut().zip(&u) {
                *xi = *xi + coef * ui;
            }
        } else {
            null_basis.push(u);
        }
    }
    let res: Vec<T> = e.matvec(&particular).iter().zip(rhs).map(|(&a, &b)| a - b).collect();
    let residual = dot(&res, &res).sqrt();
    AffineSolution { particular, null_basis, residual }
}
