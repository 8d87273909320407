//! Sparse multivariate polynomials over `Q`, and complex pairs of them, for
//! exact symbolic identities in real coordinates.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::ExactMatrix;
use crate::scalar::{ConjRing, Gq};

/// Monomials are sorted lists of variable indices (with repetition).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RealPoly {
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl RealPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn var(i: u16) -> Self {
        let mut p = Self::zero();
        p.terms.insert(vec![i], BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u16>, BigRational> {
        &self.terms
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Vec<u16>, c: BigRational) {
        let e = self.terms.entry(m).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(c.clone(), |acc, &i| acc * &point[i as usize]))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `Some(λ)` when `self = λ·other` with `other` nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        let (m, c) = other.terms.iter().next()?;
        let lambda = self.terms.get(m).cloned().unwrap_or_else(BigRational::zero) / c;
        (other.scale(&lambda) == *self).then_some(lambda)
    }
}

impl Add for RealPoly {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for RealPoly {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RealPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for RealPoly {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                m.extend(m2);
                m.sort_unstable();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

/// Rank over `Q` of a family of polynomials, as coefficient vectors.
pub fn poly_rank(polys: &[RealPoly]) -> usize {
    let monomials: Vec<&Vec<u16>> = {
        let mut all: Vec<&Vec<u16>> = polys.iter().flat_map(|p| p.terms.keys()).collect();
        all.sort();
        all.dedup();
        all
    };
    if monomials.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Gq>> = polys
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|m| Gq::real(p.terms.get(*m).cloned().unwrap_or_else(BigRational::zero)))
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).expect("rectangular").rank()
}

/// Equal `Q`-spans.
pub fn same_poly_span(a: &[RealPoly], b: &[RealPoly]) -> bool {
    let ra = poly_rank(a);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    ra == poly_rank(b) && poly_rank(&all) == ra
}

/// `re + i·im` with real polynomial parts; conjugation negates `im`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CPoly {
    pub re: RealPoly,
    pub im: RealPoly,
}

impl CPoly {
    pub fn new(re: RealPoly, im: RealPoly) -> Self {
        Self { re, im }
    }

    /// The complex variable `v_re + i·v_im`.
    pub fn complex_var(re_index: u16, im_index: u16) -> Self {
        Self::new(RealPoly::var(re_index), RealPoly::var(im_index))
    }

    pub fn from_gq(c: &Gq) -> Self {
        Self::new(RealPoly::constant(c.re.clone()), RealPoly::constant(c.im.clone()))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let r = BigRational::from_integer(n.into());
        Self::new(self.re.scale(&r), self.im.scale(&r))
    }
}

impl Add for CPoly {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for CPoly {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for CPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for CPoly {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Self::new(re, im)
    }
}

impl ConjRing for CPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::new(RealPoly::int(1), RealPoly::zero())
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_rank() {
        let (x, y) = (RealPoly::var(0), RealPoly::var(1));
        let sq = (x.clone() + y.clone()) * (x.clone() - y.clone());
        assert_eq!(sq, x.clone() * x.clone() - y.clone() * y.clone());
        assert_eq!(poly_rank(&[x.clone(), y.clone(), x.clone() + y.clone()]), 2);
        assert_eq!(
            (x.clone() * RealPoly::int(3)).ratio_to(&x),
            Some(BigRational::from_integer(3.into()))
        );
        assert_eq!(y.ratio_to(&x), None);
    }

    #[test]
    fn complex_conjugation() {
        let z = CPoly::complex_var(0, 1);
        let n = z.clone() * z.conj();
        assert!(n.im.is_zero());
        assert_eq!(n.re, RealPoly::var(0) * RealPoly::var(0) + RealPoly::var(1) * RealPoly::var(1));
    }
}
