//! Extended reals `R ∪ {+∞}` and extended points `E ∪ {+∞•}`.

use crate::scalar::Real;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// A finite value or `+∞`. There is deliberately no `-∞`: proper functions never take it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    PosInf,
}

impl<T: Real> Extended<T> {
    pub const INF: Self = Extended::PosInf;

    /// Wraps a raw float, mapping `+inf` (and NaN, which only arises from `∞ - ∞`) to `+∞`.
    pub fn from_value(x: T) -> Self {
        if x.is_finite() {
            Extended::Finite(x)
        } else if x.is_nan() || x > T::zero() {
            Extended::PosInf
        } else {
            // -inf would make the function improper; clamp to the most negative finite.
            Extended::Finite(T::min_value())
        }
    }

    pub fn zero() -> Self {
        Extended::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Extended::PosInf)
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Extended::Finite(x) => Some(x),
            Extended::PosInf => None,
        }
    }

    /// Raw float view with `+∞` as `T::infinity()`.
    pub fn to_raw(&self) -> T {
        match *self {
            Extended::Finite(x) => x,
            Extended::PosInf => T::infinity(),
        }
    }

    pub fn map_finite(self, f: impl FnOnce(T) -> T) -> Self {
        match self {
            Extended::Finite(x) => Extended::from_value(f(x)),
            Extended::PosInf => Extended::PosInf,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Indicator-style value: `0` when `cond` holds, `+∞` otherwise.
    pub fn indicator(cond: bool) -> Self {
        if cond {
            Extended::zero()
        } else {
            Extended::PosInf
        }
    }
}

impl<T: Real> Add for Extended<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::from_value(a + b),
            _ => Extended::PosInf,
        }
    }
}

impl<T: Real> Add<T> for Extended<T> {
    type Output = Self;

    fn add(self, rhs: T) -> Self {
        self + Extended::Finite(rhs)
    }
}

impl<T: Real> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
            (Extended::Finite(_), Extended::PosInf) => Some(Ordering::Less),
            (Extended::PosInf, Extended::Finite(_)) => Some(Ordering::Greater),
            (Extended::PosInf, Extended::PosInf) => Some(Ordering::Equal),
        }
    }
}

impl<T: Real> From<T> for Extended<T> {
    fn from(x: T) -> Self {
        Extended::from_value(x)
    }
}

impl<T: Real> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::PosInf => f.write_str("+inf"),
        }
    }
}

impl<T: Real> Serialize for Extended<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) => s.serialize_f64(x.as_f64()),
            Extended::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for Extended<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Extended::from_value(T::lit(x))),
            Raw::Str(s) if s == "+inf" || s == "inf" => Ok(Extended::PosInf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad extended real `{s}`"))),
        }
    }
}

/// A point of a vector space or the adjoined top element `+∞•`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtPoint<T> {
    Point(Vec<T>),
    Top,
}

impl<T: Real> ExtPoint<T> {
    pub fn is_top(&self) -> bool {
        matches!(self, ExtPoint::Top)
    }

    pub fn point(&self) -> Option<&[T]> {
        match self {
            ExtPoint::Point(p) => Some(p),
            ExtPoint::Top => None,
        }
    }

    pub fn into_point(self) -> Option<Vec<T>> {
        match self {
            ExtPoint::Point(p) => Some(p),
            ExtPoint::Top => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = Extended<f64>;

    #[test]
    fn infinity_absorbs_sums() {
        assert_eq!(E::Finite(1.0) + E::Finite(2.0), E::Finite(3.0));
        assert_eq!(E::Finite(1.0) + E::PosInf, E::PosInf);
        assert_eq!(E::PosInf + E::PosInf, E::PosInf);
        assert_eq!(E::Finite(f64::MAX) + E::Finite(f64::MAX), E::PosInf);
    }

    #[test]
    fn total_order_with_infinity_on_top() {
        assert!(E::Finite(1e300) < E::PosInf);
        assert!(E::Finite(-1.0) < E::Finite(0.0));
        assert_eq!(E::PosInf.min(E::Finite(2.0)), E::Finite(2.0));
        assert_eq!(E::from_value(f64::NAN), E::PosInf);
    }

    #[test]
    fn serde_round_trip() {
        let xs = vec![E::Finite(0.1), E::PosInf];
        let s = serde_json::to_string(&xs).unwrap();
        assert_eq!(s, "[0.1,\"+inf\"]");
        let back: Vec<E> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, xs);
    }
}
