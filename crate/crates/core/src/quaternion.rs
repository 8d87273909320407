//! Quaternions as pairs of complex scalars `a + b·j` with `j·z = conj(z)·j`.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::{ConjRing, Gq};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Quaternion<S> {
    pub a: S,
    pub b: S,
}

/// Exact quaternion over `Q(i) + Q(i)·j`.
pub type QuaternionValue = Quaternion<Gq>;

impl<S: ConjRing> Quaternion<S> {
    pub fn new(a: S, b: S) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn one() -> Self {
        Self::new(S::one(), S::zero())
    }

    pub fn j() -> Self {
        Self::new(S::zero(), S::one())
    }

    pub fn from_complex(a: S) -> Self {
        Self::new(a, S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `(a,b)(c,d) = (ac - b·conj(d), ad + b·conj(c))`.
    pub fn mul_ref(&self, rhs: &Self) -> Self {
        let a = self.a.clone() * rhs.a.clone() - self.b.clone() * rhs.b.conj();
        let b = self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.a.conj();
        Self::new(a, b)
    }

    /// Quaternionic conjugate `conj(a) - b·j`.
    pub fn conj(&self) -> Self {
        Self::new(self.a.conj(), -self.b.clone())
    }

    /// `|a|^2 + |b|^2`, returned as a scalar with zero imaginary part.
    pub fn norm(&self) -> S {
        self.a.clone() * self.a.conj() + self.b.clone() * self.b.conj()
    }
}

impl QuaternionValue {
    pub fn from_parts(re: i64, i: i64, j: i64, k: i64) -> Self {
        Self::new(Gq::from_ints(re, i), Gq::from_ints(j, k))
    }

    pub fn i() -> Self {
        Self::from_complex(Gq::i())
    }

    pub fn k() -> Self {
        Self::new(Gq::zero(), Gq::i())
    }

    /// Real (scalar) part.
    pub fn re(&self) -> BigRational {
        self.a.re.clone()
    }

    /// Pure part as `(i, j, k)` coefficients.
    pub fn im_h(&self) -> [BigRational; 3] {
        [self.a.im.clone(), self.b.re.clone(), self.b.im.clone()]
    }

    pub fn is_real(&self) -> bool {
        self.a.im == num_traits::Zero::zero() && self.b.is_zero()
    }

    pub fn norm_rational(&self) -> BigRational {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_rational();
        let c = self.conj();
        let r = BigRational::from_integer(1.into()) / n;
        Some(c.scale(&r))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(self.a.scale(r), self.b.scale(r))
    }
}

/// Quaternion product; see [`Quaternion::mul_ref`].
pub fn quat_mul(q1: &QuaternionValue, q2: &QuaternionValue) -> QuaternionValue {
    q1.mul_ref(q2)
}

impl<S: ConjRing> Add for Quaternion<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<S: ConjRing> Sub for Quaternion<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl<S: ConjRing> Neg for Quaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl<S: ConjRing> Mul for Quaternion<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq;

    type Q = QuaternionValue;

    #[test]
    fn unit_table() {
        let (i, j, k) = (Q::i(), Q::j(), Q::k());
        let minus_one = Q::from_parts(-1, 0, 0, 0);
        assert_eq!(i.clone() * j.clone(), k);
        assert_eq!(j.clone() * i.clone(), -k.clone());
        assert_eq!(i.clone() * i.clone(), minus_one);
        assert_eq!(j.clone() * j.clone(), minus_one);
        assert_eq!(k.clone() * k.clone(), minus_one);
        assert_eq!(i * j * k, minus_one);
    }

    #[test]
    fn norm_is_multiplicative_on_example() {
        let p = Q::new(gq(1, 0), gq(1, 0));
        let q = Q::new(gq(0, 0), gq(2, 0));
        assert_eq!(p.norm_rational() * q.norm_rational(), (p.clone() * q.clone()).norm_rational());
        assert_eq!((p * q).norm_rational(), BigRational::from_integer(8.into()));
    }

    #[test]
    fn inverse() {
        let q = Q::from_parts(1, -2, 3, 5);
        assert_eq!(q.clone() * q.inv().unwrap(), Q::one());
        assert_eq!(q.inv().unwrap() * q, Q::one());
        assert!(Q::zero().inv().is_none());
    }

    #[test]
    fn accessors() {
        let r = |n: i64| BigRational::from_integer(n.into());
        let q = Q::from_parts(1, 2, 3, 4);
        assert_eq!(q.re(), r(1));
        assert_eq!(q.im_h(), [r(2), r(3), r(4)]);
    }
}
