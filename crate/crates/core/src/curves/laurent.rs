//! Laurent polynomials of fixed total degree in `x0, x1`, used for Čech cochains
//! on the cover `{x0 != 0}, {x1 != 0}` of `P^1`.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::form::BinaryForm;
use crate::scalar::Gq;

/// Laurent monomials `x0^(D-k) x1^k` of a fixed total degree `D`, keyed by `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Laurent {
    pub(crate) degree: i64,
    pub(crate) terms: BTreeMap<i64, Gq>,
}

impl Laurent {
    pub(crate) fn zero(degree: i64) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `p / (x0^a x1^b)`.
    pub(crate) fn quotient(p: &BinaryForm, a: i64, b: i64) -> Self {
        let mut out = Self::zero(p.degree() - a - b);
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(k as i64 - b, c.clone());
            }
        }
        out
    }

    pub(crate) fn from_form(f: &BinaryForm) -> Self {
        Self::quotient(f, 0, 0)
    }

    pub(crate) fn mul_form(&self, f: &BinaryForm) -> Self {
        let mut out = Self::zero(self.degree + f.degree());
        for (k, a) in &self.terms {
            for (j, b) in f.coeffs().iter().enumerate() {
                if !b.is_zero() {
                    let e = out.terms.entry(k + j as i64).or_insert_with(Gq::zero);
                    *e += &(a * b);
                }
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let e = out.terms.entry(*k).or_insert_with(Gq::zero);
            *e += v;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub(crate) fn neg(&self) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    /// Terms with nonnegative `x1` exponent (regular where `x0 != 0`).
    pub(crate) fn nonneg_part(&self) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.range(0..).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub(crate) fn to_form(&self) -> Option<BinaryForm> {
        if self.terms.keys().any(|&k| k < 0 || k > self.degree) {
            return None;
        }
        let mut f = BinaryForm::zero(self.degree);
        for (k, v) in &self.terms {
            f = &f + &BinaryForm::monomial(self.degree, *k as usize, v.clone());
        }
        Some(f)
    }
}

impl Laurent {
    /// Terms with negative `x1` exponent (regular where `x1 != 0`).
    pub(crate) fn neg_part(&self) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.range(..0).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// `f ↦ conj(f)(ε·y1, y0)`: exponent `k` goes to `D - k` with factor `ε^(D-k)`.
    pub(crate) fn conjsub(&self, eps: i64) -> Self {
        let d = self.degree;
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| {
                let m = d - k;
                let sign = if eps < 0 && m.rem_euclid(2) == 1 { -1 } else { 1 };
                (m, v.conj().scale(&BigRational::from_integer(sign.into())))
            })
            .collect();
        Self { degree: d, terms }
    }

    pub(crate) fn scale(&self, s: i64) -> Self {
        let r = BigRational::from_integer(s.into());
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (*k, v.scale(&r))).collect(),
        }
    }

    /// Multiply by `x0^a x1^b`.
    pub(crate) fn shift(&self, a: i64, b: i64) -> Self {
        Self {
            degree: self.degree + a + b,
            terms: self.terms.iter().map(|(k, v)| (k + b, v.clone())).collect(),
        }
    }
}
