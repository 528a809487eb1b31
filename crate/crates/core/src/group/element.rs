use core::fmt::Debug;
use core::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Float, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::Mobius;

/// Exact entry types for [`Mat2`].
pub trait Scalar:
    Clone + Eq + Hash + Ord + Debug + Send + Sync + Signed + ToPrimitive + CheckedMul + CheckedAdd + CheckedSub + 'static
{
}

impl<T> Scalar for T where
    T: Clone + Eq + Hash + Ord + Debug + Send + Sync + Signed + ToPrimitive + CheckedMul + CheckedAdd + CheckedSub + 'static
{
}

/// An element of a group of isometries, hashable for exact deduplication.
pub trait GroupElement: Clone + Eq + Hash + Ord + Debug + Send + Sync {
    fn identity() -> Self;
    /// `self · other`. Panics if exact entries overflow.
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn to_mobius(&self) -> Mobius;
    fn is_parabolic(&self) -> bool;
}

/// A unimodular matrix with exact entries, identified with its negative.
///
/// The stored sign is canonical: the first nonzero of (a, b, c, d) is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Mat2<T> {
    /// Panics unless `ad − bc = 1`.
    pub fn new(a: T, b: T, c: T, d: T) -> Mat2<T> {
        Mat2::try_new(a, b, c, d).expect("determinant must be 1")
    }

    pub fn try_new(a: T, b: T, c: T, d: T) -> Result<Mat2<T>> {
        let det = a.checked_mul(&d).zip(b.checked_mul(&c)).and_then(|(x, y)| x.checked_sub(&y)).ok_or(Error::Overflow)?;
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Mat2 { a, b, c, d }.canonical())
    }

    fn canonical(self) -> Mat2<T> {
        let neg = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .map_or(false, |x| x.is_negative());
        if neg {
            Mat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn checked_compose(&self, o: &Mat2<T>) -> Option<Mat2<T>> {
        let dot = |x: &T, y: &T, z: &T, w: &T| x.checked_mul(y)?.checked_add(&z.checked_mul(w)?);
        Some(
            Mat2 {
                a: dot(&self.a, &o.a, &self.b, &o.c)?,
                b: dot(&self.a, &o.b, &self.b, &o.d)?,
                c: dot(&self.c, &o.a, &self.d, &o.c)?,
                d: dot(&self.c, &o.b, &self.d, &o.d)?,
            }
            .canonical(),
        )
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn entries_f64(&self) -> [f64; 4] {
        let f = |x: &T| x.to_f64().unwrap_or(f64::NAN);
        [f(&self.a), f(&self.b), f(&self.c), f(&self.d)]
    }
}

impl Mat2<i64> {
    pub fn to_big(&self) -> Mat2<BigInt> {
        Mat2 { a: self.a.into(), b: self.b.into(), c: self.c.into(), d: self.d.into() }
    }
}

impl Mat2<BigInt> {
    pub fn to_i64(&self) -> Option<Mat2<i64>> {
        Some(Mat2 { a: self.a.to_i64()?, b: self.b.to_i64()?, c: self.c.to_i64()?, d: self.d.to_i64()? })
    }
}

impl<T: Scalar> GroupElement for Mat2<T> {
    fn identity() -> Self {
        Mat2 { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    fn compose(&self, other: &Self) -> Self {
        self.checked_compose(other).expect("matrix entry overflow; use arbitrary-precision entries")
    }

    fn inverse(&self) -> Self {
        Mat2 { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }.canonical()
    }

    fn to_mobius(&self) -> Mobius {
        let [a, b, c, d] = self.entries_f64();
        Mobius::normalized(a, b, c, d).unwrap_or(Mobius { a, b, c, d })
    }

    fn is_parabolic(&self) -> bool {
        self.trace().abs() == T::one() + T::one()
    }
}

/// Spacing of the lattice used to key floating elements.
pub const QUANTUM: f64 = 1e-9;

/// A floating Möbius map keyed by its entries rounded to [`QUANTUM`].
///
/// Only meaningful for generators whose products stay well separated at
/// that scale, which holds for algebraic entries at small word length.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FloatElement {
    pub m: Mobius,
    key: [i64; 4],
}

impl FloatElement {
    pub fn new(m: Mobius) -> FloatElement {
        let q = |x: f64| (x / QUANTUM).round() as i64;
        let mut key = [q(m.a), q(m.b), q(m.c), q(m.d)];
        if key.iter().find(|x| **x != 0).map_or(false, |x| *x < 0) {
            key = key.map(|x| -x);
        }
        FloatElement { m, key }
    }

    pub fn key(&self) -> [i64; 4] {
        self.key
    }
}

impl PartialEq for FloatElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for FloatElement {}

impl Hash for FloatElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl PartialOrd for FloatElement {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FloatElement {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl GroupElement for FloatElement {
    fn identity() -> Self {
        FloatElement::new(Mobius::IDENTITY)
    }

    fn compose(&self, other: &Self) -> Self {
        FloatElement::new(self.m.compose(&other.m))
    }

    fn inverse(&self) -> Self {
        FloatElement::new(self.m.inverse())
    }

    fn to_mobius(&self) -> Mobius {
        self.m
    }

    fn is_parabolic(&self) -> bool {
        (self.m.trace().abs() - 2.0).abs() <= 1e-9
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn integer_examples() {
        let t = Mat2::new(1i64, 1, 0, 1);
        let s = Mat2::new(0i64, -1, 1, 0);
        assert_eq!(t.compose(&t), Mat2::new(1, 2, 0, 1));
        assert_eq!(s.inverse(), s);
        assert_eq!(t.compose(&t.inverse()), Mat2::identity());
        assert!(t.is_parabolic() && !s.is_parabolic());
        assert_eq!(Mat2::new(-1i64, 0, 0, -1), Mat2::identity());
        assert!(Mat2::try_new(2i64, 0, 0, 1).is_err());
    }

    #[test]
    fn overflow_is_detected() {
        let big = Mat2::new(1i64, i64::MAX / 2, 0, 1);
        assert!(big.checked_compose(&big.compose(&big)).is_none());
    }

    #[test]
    fn rational_entries() {
        let h = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        let m = Mat2::new(h(2, 1), h(1, 2), h(0, 1), h(1, 2));
        assert_eq!(m.compose(&m.inverse()), Mat2::identity());
    }

    #[test]
    fn float_keys_identify_close_matrices() {
        let a = FloatElement::new(Mobius { a: 1.0, b: 0.5, c: 0.0, d: 1.0 });
        let b = FloatElement::new(Mobius { a: 1.0 + 1e-13, b: 0.5, c: 0.0, d: 1.0 });
        assert_eq!(a, b);
        assert!(FloatElement::new(Mobius { a: 1.0, b: 1.0, c: 0.0, d: 1.0 }).is_parabolic());
    }
}
