//! Binary forms: homogeneous polynomials in `x0, x1` over `Q(i)`.
//!
//! Coefficient `i` belongs to the monomial `x0^(d-i) x1^i`. On the chart
//! `x0 = 1` the coefficient list is exactly the ascending coefficient list of
//! the univariate polynomial in `u = x1/x0`, which the algorithms below lean on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Gq;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: i64,
    coeffs: Vec<Gq>,
}

/// Result of [`BinaryForm::divrem`]: `f = quotient·g + chart^(n-m)·remainder`
/// where `chart = x0 - shift·x1` is the linear form dehomogenized to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivRem {
    pub quotient: BinaryForm,
    pub remainder: BinaryForm,
    pub shift: i64,
    pub chart: BinaryForm,
}

impl BinaryForm {
    pub fn new(degree: i64, coeffs: Vec<Gq>) -> Result<Self> {
        if degree < 0 {
            if coeffs.iter().any(|c| !c.is_zero()) {
                return Err(Error::Degree(format!(
                    "nonzero coefficients for negative degree {degree}"
                )));
            }
            return Ok(Self::zero(degree));
        }
        if coeffs.len() as i64 != degree + 1 {
            return Err(Error::Degree(format!(
                "degree {degree} needs {} coefficients, got {}",
                degree + 1,
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        let degree = coeffs.len() as i64 - 1;
        Self::new(degree, coeffs.iter().map(|&c| Gq::from_int(c)).collect())
            .expect("length matches degree")
    }

    /// The zero form of the given degree (any integer).
    pub fn zero(degree: i64) -> Self {
        let len = if degree < 0 { 0 } else { degree as usize + 1 };
        Self {
            degree,
            coeffs: vec![Gq::zero(); len],
        }
    }

    pub fn constant(c: Gq) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn one() -> Self {
        Self::constant(Gq::one())
    }

    /// `c·x0^(d-k)·x1^k`.
    pub fn monomial(degree: i64, k: usize, c: Gq) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[k] = c;
        f
    }

    pub fn x0() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn x1() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `a·x0 + b·x1`.
    pub fn linear(a: Gq, b: Gq) -> Self {
        Self {
            degree: 1,
            coeffs: vec![a, b],
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.coeffs
    }

    /// Coefficient of `x0^(d-k) x1^k`; zero outside the valid range.
    pub fn coeff(&self, k: i64) -> Gq {
        if k < 0 || k > self.degree {
            Gq::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Gq::is_zero)
    }

    /// Nonzero form of degree 0.
    pub fn is_constant(&self) -> bool {
        self.degree == 0 && !self.is_zero()
    }

    /// Exponent of the largest power of `x0` dividing a nonzero form.
    pub fn x0_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Exponent of the largest power of `x1` dividing a nonzero form.
    pub fn x1_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn scale(&self, s: &Gq) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Entrywise conjugate of the coefficients.
    pub fn conj_coeffs(&self) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(Gq::conj).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() || degree < 0 {
            return Self::zero(degree);
        }
        let mut coeffs = vec![Gq::zero(); degree as usize + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Self { degree, coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.multiply(self);
        }
        acc
    }

    /// Partial derivative in `x0` (`var = 0`) or `x1` (`var = 1`).
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if var > 1 {
            return Err(Error::Invalid(format!("variable index {var} out of range")));
        }
        let d = self.degree;
        if d <= 0 {
            return Ok(Self::zero(d - 1));
        }
        let coeffs = (0..d as usize)
            .map(|k| {
                if var == 0 {
                    // x0^(d-k) x1^k -> (d-k) x0^(d-1-k) x1^k
                    self.coeffs[k].scale(&int_ratio(d - k as i64))
                } else {
                    // x0^(d-k-1) x1^(k+1) -> (k+1) x0^(d-1-k) x1^k
                    self.coeffs[k + 1].scale(&int_ratio(k as i64 + 1))
                }
            })
            .collect();
        Ok(Self {
            degree: d - 1,
            coeffs,
        })
    }

    pub fn evaluate(&self, x0: &Gq, x1: &Gq) -> Gq {
        if self.degree < 0 {
            return Gq::zero();
        }
        // Horner in x1, carrying the matching power of x0
        let d = self.degree as usize;
        let mut acc = Gq::zero();
        let mut x0_pow = Gq::one();
        for k in (0..=d).rev() {
            acc = &(&acc * x1) + &(&self.coeffs[k] * &x0_pow);
            x0_pow = &x0_pow * x0;
        }
        acc
    }

    /// Value on the chart `x0 = 1`.
    pub fn evaluate_affine(&self, u: &Gq) -> Gq {
        let mut acc = Gq::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * u) + c;
        }
        acc
    }

    /// `f(l0, l1)` for forms `l0, l1` of a common degree.
    pub fn substitute(&self, l0: &Self, l1: &Self) -> Result<Self> {
        if l0.degree != l1.degree {
            return Err(Error::Degree(format!(
                "substitution forms have degrees {} and {}",
                l0.degree, l1.degree
            )));
        }
        let e = l0.degree;
        let out_degree = self.degree * e;
        if self.degree < 0 {
            return Ok(Self::zero(out_degree));
        }
        let d = self.degree as usize;
        let mut p0 = vec![Self::one()];
        let mut p1 = vec![Self::one()];
        for _ in 0..d {
            p0.push(p0.last().expect("nonempty").multiply(l0));
            p1.push(p1.last().expect("nonempty").multiply(l1));
        }
        let mut acc = Self::zero(out_degree);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = p0[d - k].multiply(&p1[k]).scale(c);
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// `f(x0 + c·x1, x1)`.
    pub fn shift_x0(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let l0 = Self::linear(Gq::one(), c.clone());
        self.substitute(&l0, &Self::x1()).expect("linear substitution")
    }

    /// Scale so the first nonzero coefficient (highest power of `x0`) is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) if !lead.is_one() => self.scale(&lead.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Multiply by `x0^a x1^b`.
    pub fn shift_monomial(&self, a: usize, b: usize) -> Self {
        let degree = self.degree + (a + b) as i64;
        if self.degree < 0 {
            return Self::zero(degree);
        }
        let mut coeffs = vec![Gq::zero(); b];
        coeffs.extend(self.coeffs.iter().cloned());
        coeffs.extend(std::iter::repeat_n(Gq::zero(), a));
        Self { degree, coeffs }
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() {
            return None;
        }
        let qd = self.degree - g.degree;
        if self.is_zero() {
            return Some(Self::zero(qd));
        }
        if qd < 0 {
            return None;
        }
        // strip the x1 power of g, then long division from the x1-lowest end
        let s = g.x1_multiplicity();
        if self.x1_multiplicity() < s {
            return None;
        }
        let gt: Vec<Gq> = g.coeffs[s..].to_vec();
        let lead_inv = gt[0].inv().expect("nonzero");
        let mut rem: Vec<Gq> = self.coeffs[s..].to_vec();
        let qlen = qd as usize + 1;
        let mut q = vec![Gq::zero(); qlen];
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] * &lead_inv;
            for (j, gj) in gt.iter().enumerate() {
                if !gj.is_zero() {
                    rem[i + j] -= &(&c * gj);
                }
            }
            q[i] = c;
        }
        if rem.iter().all(Gq::is_zero) {
            Some(Self {
                degree: qd,
                coeffs: q,
            })
        } else {
            None
        }
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.div_exact(self).is_some()
    }

    /// Greatest common divisor, normalized so the coefficient of the highest
    /// power of `x0` is 1.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(Error::Invalid("gcd of two zero forms".into())),
            (true, false) => return Ok(other.normalized()),
            (false, true) => return Ok(self.normalized()),
            _ => {}
        }
        let m = self.x0_multiplicity().min(other.x0_multiplicity());
        let h = upoly_gcd(&trim(&self.coeffs), &trim(&other.coeffs));
        let degree = (h.len() - 1 + m) as i64;
        let mut coeffs = h;
        coeffs.resize(degree as usize + 1, Gq::zero());
        Ok(Self { degree, coeffs }.normalized())
    }

    /// Division with remainder on a chart where `g` has full degree.
    ///
    /// Uses `x0 = 1` when `g(0,1) != 0`, otherwise the substitution
    /// `x0 -> x0 + c·x1` for the smallest natural `c` with `g(c,1) != 0`.
    pub fn divrem(&self, g: &Self) -> Result<DivRem> {
        if g.is_zero() {
            return Err(Error::DivisionByZero("divisor form is zero".into()));
        }
        let mut c = 0i64;
        while g.evaluate(&Gq::from_int(c), &Gq::one()).is_zero() {
            c += 1;
        }
        self.divrem_with_shift(g, c)
    }

    /// [`divrem`](Self::divrem) on the chart `x0 - c·x1 = 1`; `g(c,1)` must be nonzero.
    pub fn divrem_with_shift(&self, g: &Self, c: i64) -> Result<DivRem> {
        if g.is_zero() {
            return Err(Error::DivisionByZero("divisor form is zero".into()));
        }
        if self.degree < g.degree {
            return Err(Error::Degree(format!(
                "dividend degree {} below divisor degree {}",
                self.degree, g.degree
            )));
        }
        let cq = Gq::from_int(c);
        if g.evaluate(&cq, &Gq::one()).is_zero() {
            return Err(Error::Invalid(format!(
                "divisor does not have full degree on the chart with shift {c}"
            )));
        }
        let (n, m) = (self.degree as usize, g.degree as usize);
        let fs = self.shift_x0(&cq);
        let gs = g.shift_x0(&cq);
        let (q, r) = upoly_divrem(&fs.coeffs, &gs.coeffs);
        let mut qc = q;
        qc.resize(n - m + 1, Gq::zero());
        let mut rc = r;
        rc.resize(m + 1, Gq::zero());
        let back = -cq.clone();
        let quotient = Self {
            degree: (n - m) as i64,
            coeffs: qc,
        }
        .shift_x0(&back);
        let remainder = Self {
            degree: m as i64,
            coeffs: rc,
        }
        .shift_x0(&back);
        Ok(DivRem {
            quotient,
            remainder,
            shift: c,
            chart: Self::linear(Gq::one(), -cq),
        })
    }

    /// Recover a form of the given degree from its values at `(1, c)`,
    /// `c = 0..=degree`.
    pub fn interpolate(degree: i64, values: &[Gq]) -> Result<Self> {
        if degree < 0 {
            return Ok(Self::zero(degree));
        }
        let n = degree as usize + 1;
        if values.len() != n {
            return Err(Error::Dimension(format!(
                "need {n} interpolation values, got {}",
                values.len()
            )));
        }
        // Newton divided differences at nodes 0,1,...,degree
        let mut dd = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let diff = &dd[i] - &dd[i - 1];
                dd[i] = diff.scale(&num_rational::BigRational::new(
                    1.into(),
                    (level as i64).into(),
                ));
            }
        }
        // expand sum_k dd[k] prod_{j<k} (u - j) into ascending coefficients
        let mut coeffs = vec![Gq::zero(); n];
        let mut basis = vec![Gq::one()];
        for (k, a) in dd.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                coeffs[i] += &(a * b);
            }
            if k + 1 < n {
                let node = Gq::from_int(k as i64);
                let mut next = vec![Gq::zero(); basis.len() + 1];
                for (i, b) in basis.iter().enumerate() {
                    next[i + 1] += b;
                    next[i] -= &(b * &node);
                }
                basis = next;
            }
        }
        Ok(Self { degree, coeffs })
    }
}

fn int_ratio(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}

/// Drop trailing zero coefficients of an ascending univariate polynomial.
fn trim(p: &[Gq]) -> Vec<Gq> {
    let len = p.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    p[..len].to_vec()
}

/// Ascending-coefficient division; `g` must be nonzero after trimming.
fn upoly_divrem(f: &[Gq], g: &[Gq]) -> (Vec<Gq>, Vec<Gq>) {
    let g = trim(g);
    let mut r = trim(f);
    let gd = g.len() - 1;
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let lead_inv = g[gd].inv().expect("nonzero leading coefficient");
    let mut q = vec![Gq::zero(); r.len() - gd];
    for i in (0..q.len()).rev() {
        let c = &r[i + gd] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            if !gj.is_zero() {
                r[i + j] -= &(&c * gj);
            }
        }
        q[i] = c;
    }
    r.truncate(gd);
    (q, trim(&r))
}

/// Monic univariate gcd; both arguments nonzero.
fn upoly_gcd(a: &[Gq], b: &[Gq]) -> Vec<Gq> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let (_, r) = upoly_divrem(&a, &b);
        a = b;
        b = r;
    }
    let lead_inv = a.last().expect("nonzero gcd").inv().expect("nonzero");
    a.iter().map(|c| c * &lead_inv).collect()
}

/// `f = q·g + chart^(deg f - deg g)·r` check used by tests and the selftest.
pub fn check_divrem_identity(f: &BinaryForm, g: &BinaryForm, dr: &DivRem) -> bool {
    let e = (f.degree - g.degree) as u32;
    let rhs = dr
        .quotient
        .multiply(g)
        .checked_add(&dr.chart.pow(e).multiply(&dr.remainder));
    matches!(rhs, Ok(r) if r == *f)
}

pub fn form_gcd(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    f.gcd(g)
}

pub fn form_divrem(f: &BinaryForm, g: &BinaryForm) -> Result<(BinaryForm, BinaryForm)> {
    f.divrem(g).map(|d| (d.quotient, d.remainder))
}

impl<'a> Add<&'a BinaryForm> for &'a BinaryForm {
    type Output = BinaryForm;
    fn add(self, rhs: &BinaryForm) -> BinaryForm {
        self.checked_add(rhs).expect("form degrees agree")
    }
}

impl<'a> Sub<&'a BinaryForm> for &'a BinaryForm {
    type Output = BinaryForm;
    fn sub(self, rhs: &BinaryForm) -> BinaryForm {
        self.checked_sub(rhs).expect("form degrees agree")
    }
}

impl<'a> Mul<&'a BinaryForm> for &'a BinaryForm {
    type Output = BinaryForm;
    fn mul(self, rhs: &BinaryForm) -> BinaryForm {
        self.multiply(rhs)
    }
}

impl Neg for &BinaryForm {
    type Output = BinaryForm;
    fn neg(self) -> BinaryForm {
        self.scale(&-Gq::one())
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.degree;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = monomial_text(d - k as i64, k as i64);
            let mut text = c.to_string();
            let complex = !c.re.is_zero() && !c.im.is_zero();
            if complex {
                text = format!("({text})");
            }
            let negative = !complex && text.starts_with('-');
            let body = if negative { &text[1..] } else { &text[..] };
            let coef = match (body, mono.is_empty()) {
                ("1", false) => String::new(),
                (b, false) => format!("{b}*"),
                (b, true) => b.to_string(),
            };
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            write!(f, "{sign}{coef}{mono}")?;
            first = false;
        }
        Ok(())
    }
}

fn monomial_text(a: i64, b: i64) -> String {
    let part = |v: &str, e: i64| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x0", a), part("x1", b)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {self}", self.degree)
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: i64,
    #[serde(default)]
    coeffs: Vec<Gq>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    zero: bool,
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            degree: self.degree,
            coeffs: self.coeffs.clone(),
            zero: self.is_zero(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FormRepr::deserialize(deserializer)?;
        if repr.zero && repr.coeffs.is_empty() {
            return Ok(BinaryForm::zero(repr.degree));
        }
        let f = BinaryForm::new(repr.degree, repr.coeffs).map_err(serde::de::Error::custom)?;
        if repr.zero && !f.is_zero() {
            return Err(serde::de::Error::custom("form flagged zero has nonzero coefficients"));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq;

    fn f(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        let p = BinaryForm::x0().multiply(&BinaryForm::x1());
        assert_eq!(p, f(&[0, 1, 0]));
        assert_eq!(f(&[1, 0, 0, 0]).derivative(0).unwrap(), f(&[3, 0, 0]));
        assert_eq!(f(&[0, 1, 0, 0]).derivative(1).unwrap(), f(&[1, 0, 0]));
        // x0^2 x1 at (1,2)
        assert_eq!(f(&[0, 1, 0, 0]).evaluate(&gq(1, 0), &gq(2, 0)), gq(2, 0));
        assert_eq!(f(&[0, 1, 0, 0]).evaluate(&gq(3, 0), &gq(2, 0)), gq(18, 0));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(f(&[1, 0, 0]).gcd(&f(&[0, 1, 0])).unwrap(), BinaryForm::x0());
        assert_eq!(f(&[1, 0, -1]).gcd(&f(&[1, -1])).unwrap(), f(&[1, -1]));
        assert_eq!(f(&[1, 0, 0, 0]).gcd(&f(&[0, 0, 0, 1])).unwrap(), BinaryForm::one());
        assert_eq!(f(&[0, 0, 2]).gcd(&f(&[0, 3, 0])).unwrap(), BinaryForm::x1());
        assert!(BinaryForm::zero(2).gcd(&BinaryForm::zero(1)).is_err());
        assert_eq!(BinaryForm::zero(2).gcd(&f(&[2, 4])).unwrap(), f(&[1, 2]));
    }

    #[test]
    fn divrem_examples() {
        let g = f(&[0, 0, 0, 1]);
        let dr = f(&[0, 0, 0, 1, 0]).divrem(&g).unwrap();
        assert!(dr.remainder.is_zero());
        let dr = f(&[0, 0, 1, 2, 0]).divrem(&g).unwrap();
        assert_eq!(dr.remainder, f(&[0, 0, 1, 0]));
        assert_eq!(dr.shift, 0);
        // x0^4 mod (x0^2 - x1^2): affine 1 mod (1 - u^2) is 1 -> x0^2
        let g = f(&[1, 0, -1]);
        let dr = f(&[1, 0, 0, 0, 0]).divrem(&g).unwrap();
        assert_eq!(dr.remainder, f(&[1, 0, 0]));
        assert!(check_divrem_identity(&f(&[1, 0, 0, 0, 0]), &g, &dr));
    }

    #[test]
    fn divrem_uses_shifted_chart_when_needed() {
        // g = x0^2 x1 vanishes at [0:1]; g(1,1) != 0 so the shift is 1
        let g = f(&[0, 1, 0, 0]);
        let fx = f(&[1, 2, 3, 4, 5]);
        let dr = fx.divrem(&g).unwrap();
        assert_eq!(dr.shift, 1);
        assert!(check_divrem_identity(&fx, &g, &dr));
        assert!(BinaryForm::x0().divrem(&f(&[1, 0, 0])).is_err());
        assert!(fx.divrem(&BinaryForm::zero(2)).is_err());
    }

    #[test]
    fn interpolation_inverts_evaluation() {
        let p = BinaryForm::new(3, vec![gq(1, 2), gq(0, 0), gq(-3, 1), "1/2".parse().unwrap()])
            .unwrap();
        let values: Vec<Gq> = (0..=3).map(|c| p.evaluate(&gq(1, 0), &gq(c, 0))).collect();
        assert_eq!(BinaryForm::interpolate(3, &values).unwrap(), p);
    }

    #[test]
    fn substitution_and_exact_division() {
        let p = f(&[1, 0, -1]);
        let s = p.shift_x0(&gq(2, 0));
        assert_eq!(s.shift_x0(&gq(-2, 0)), p);
        assert_eq!(p.div_exact(&f(&[1, 1])).unwrap(), f(&[1, -1]));
        assert!(p.div_exact(&BinaryForm::x0()).is_none());
        assert_eq!(f(&[0, 1, 0]).div_exact(&BinaryForm::x1()).unwrap(), BinaryForm::x0());
    }

    #[test]
    fn display_and_json() {
        let p = BinaryForm::new(2, vec![gq(1, 0), gq(-3, 0), gq(1, 1)]).unwrap();
        assert_eq!(p.to_string(), "x0^2 - 3*x0*x1 + (1+i)*x1^2");
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"degree":2,"coeffs":["1","-3","1+i"]}"#);
        assert_eq!(serde_json::from_str::<BinaryForm>(&text).unwrap(), p);
        let z: BinaryForm = serde_json::from_str(r#"{"degree":3,"coeffs":[],"zero":true}"#).unwrap();
        assert_eq!(z, BinaryForm::zero(3));
        assert!(serde_json::from_str::<BinaryForm>(r#"{"degree":1,"coeffs":[1]}"#).is_err());
    }
}
