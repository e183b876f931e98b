//! Scalar abstraction shared by every numeric routine in the crate.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar the calculus is generic over (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion used at LP and report boundaries.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Base absolute tolerance for equality and activity tests.
    ///
    /// `1e-9` in double precision, widened to a few hundred ulps for `f32`.
    #[inline]
    fn base_tol() -> Self {
        let floor = Self::lit(1e-9);
        let ulps = Self::epsilon() * Self::lit(100.0);
        if ulps > floor {
            ulps
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Euclidean inner product of two coordinate vectors.
#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `max_i |a_i|`
#[inline]
pub fn norm_inf<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

#[inline]
pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

#[inline]
pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

#[inline]
pub fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// `a + s * b`
#[inline]
pub fn axpy<T: Real>(a: &[T], s: T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + s * y).collect()
}

pub fn to_f64_vec<T: Real>(a: &[T]) -> Vec<f64> {
    a.iter().map(|x| x.as_f64()).collect()
}

pub fn from_f64_vec<T: Real>(a: &[f64]) -> Vec<T> {
    a.iter().map(|&x| T::lit(x)).collect()
}
