//! Sections of the blow-up of `P^3` along the line `{z2 = z3 = 0}`, fibered
//! over `P^1`, and the rank-2 Kronecker module they carry.
//!
//! A section `[a0, a1, b0, b1, c] ∈ P^4` sends `[x0, x1]` to
//! `([a0 x0 + a1 x1, b0 x0 + b1 x1, -c x1, c x0], [x0, x1])`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kronecker::KroneckerModule;
use crate::matrix::{rank_of_vectors, ExactMatrix};
use crate::quadric::random_vector;
use crate::quaternion::QuaternionValue;
use crate::scalar::{ConjRing, Gq};
use crate::sym::CPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSection {
    pub coords: Vec<Gq>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionClass {
    /// Normal bundle `O(1) ⊕ O(1)`.
    OffDivisor,
    /// Normal bundle `O(2) ⊕ O`.
    OnDivisor,
}

fn det2(a0: &Gq, a1: &Gq, b0: &Gq, b1: &Gq) -> Gq {
    &(a0 * b1) - &(a1 * b0)
}

impl BlowupSection {
    pub fn new(coords: Vec<Gq>) -> Result<Self> {
        if coords.len() != 5 {
            return Err(Error::Dimension(format!("a section has 5 coordinates, got {}", coords.len())));
        }
        if coords.iter().all(Gq::is_zero) {
            return Err(Error::Invalid("all coordinates vanish".into()));
        }
        let s = Self { coords };
        if s.c().is_zero() && s.det().is_zero() {
            return Err(Error::Invalid("c = 0 requires a0 b1 - a1 b0 != 0".into()));
        }
        Ok(s)
    }

    pub fn from_ints(v: [i64; 5]) -> Result<Self> {
        Self::new(v.iter().map(|&x| Gq::from_int(x)).collect())
    }

    pub fn c(&self) -> &Gq {
        &self.coords[4]
    }

    /// `a0 b1 - a1 b0`.
    pub fn det(&self) -> Gq {
        let v = &self.coords;
        det2(&v[0], &v[1], &v[2], &v[3])
    }

    /// Image of `[x0, x1]` in `P^3 × P^1`.
    pub fn eval(&self, x: &[Gq]) -> Result<(Vec<Gq>, Vec<Gq>)> {
        if x.len() != 2 {
            return Err(Error::Dimension("a point of P^1 has 2 coordinates".into()));
        }
        if x.iter().all(Gq::is_zero) {
            return Err(Error::Invalid("zero point of P^1".into()));
        }
        let v = &self.coords;
        let z = vec![
            &(&v[0] * &x[0]) + &(&v[1] * &x[1]),
            &(&v[2] * &x[0]) + &(&v[3] * &x[1]),
            -(&v[4] * &x[1]),
            &v[4] * &x[0],
        ];
        Ok((z, x.to_vec()))
    }

    /// `b0 = -conj a1`, `b1 = conj a0`, `c` real.
    pub fn is_real(&self) -> bool {
        let v = &self.coords;
        v[2] == -v[1].conj() && v[3] == v[0].conj() && v[4].is_real()
    }

    pub fn classify(&self) -> SectionClass {
        if self.c().is_zero() {
            SectionClass::OnDivisor
        } else {
            SectionClass::OffDivisor
        }
    }

    pub fn same_as(&self, other: &Self) -> bool {
        rank_of_vectors(&[self.coords.clone(), other.coords.clone()]) == 1
    }

    /// The point `a0 + a1·j` of `H` after scaling a real section to `c = 1`.
    pub fn real_normal_form(&self) -> Option<QuaternionValue> {
        if !self.is_real() {
            return None;
        }
        let inv = self.c().inv()?;
        Some(QuaternionValue::new(&self.coords[0] * &inv, &self.coords[1] * &inv))
    }

    /// The real section `[a0, a1, -conj a1, conj a0, 1]` for `q = a0 + a1·j`.
    pub fn from_quaternion(q: &QuaternionValue) -> Self {
        Self {
            coords: vec![q.a.clone(), q.b.clone(), -q.b.conj(), q.a.conj(), Gq::one()],
        }
    }

    /// `e ⊗ z ∈ C^2 ⊗ C^2 ⊂ C^5` taken modulo the line through the section.
    pub fn module(&self) -> Result<KroneckerModule> {
        let pivot = self
            .coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero section");
        let inv = self.coords[pivot].inv().expect("nonzero pivot");
        let project = |w: &[Gq]| -> Vec<Gq> {
            let f = &w[pivot] * &inv;
            (0..5)
                .filter(|&k| k != pivot)
                .map(|k| &w[k] - &(&f * &self.coords[k]))
                .collect()
        };
        let maps = (0..2)
            .map(|j| {
                let cols: Vec<Vec<Gq>> = (0..2)
                    .map(|i| {
                        let mut w = vec![Gq::zero(); 5];
                        w[2 * i + j] = Gq::one();
                        project(&w)
                    })
                    .collect();
                ExactMatrix::from_cols(4, &cols)
            })
            .collect::<Result<_>>()?;
        KroneckerModule::new(maps)
    }
}

pub fn section_eval(s: &BlowupSection, x: &[Gq]) -> Result<(Vec<Gq>, Vec<Gq>)> {
    s.eval(x)
}

pub fn is_real_section(s: &BlowupSection) -> bool {
    s.is_real()
}

pub fn classify_section(s: &BlowupSection) -> SectionClass {
    s.classify()
}

pub fn blowup_module(s: &BlowupSection) -> Result<KroneckerModule> {
    s.module()
}

/// `z2·x0 + z3·x1 = 0` as a polynomial identity in all parameters.
pub fn incidence_identity_symbolic() -> bool {
    let c = CPoly::complex_var(0, 1);
    let x0 = CPoly::complex_var(2, 3);
    let x1 = CPoly::complex_var(4, 5);
    let z2 = -(c.clone() * x1.clone());
    let z3 = c * x0.clone();
    (z2 * x0 + z3 * x1).is_zero()
}

/// Random valid section in the chosen stratum.
pub fn random_section<R: Rng>(rng: &mut R, on_divisor: bool) -> BlowupSection {
    loop {
        let mut v = random_vector(rng, 5, 9);
        if on_divisor {
            v[4] = Gq::zero();
        } else if v[4].is_zero() {
            continue;
        }
        if let Ok(s) = BlowupSection::new(v) {
            return s;
        }
    }
}

pub fn random_real_section<R: Rng>(rng: &mut R) -> BlowupSection {
    let a = random_vector(rng, 2, 9);
    let c = loop {
        let c: i64 = rng.gen_range(-9..=9);
        if c != 0 {
            break c;
        }
    };
    BlowupSection {
        coords: vec![a[0].clone(), a[1].clone(), -a[1].conj(), a[0].conj(), Gq::from_int(c)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kronecker::Certificate;
    use crate::scalar::gq;

    fn ints(v: &[i64]) -> Vec<Gq> {
        v.iter().map(|&x| Gq::from_int(x)).collect()
    }

    #[test]
    fn evaluation_examples() {
        let s = BlowupSection::from_ints([1, 0, 0, 1, 0]).unwrap();
        assert_eq!(s.eval(&ints(&[1, 0])).unwrap(), (ints(&[1, 0, 0, 0]), ints(&[1, 0])));
        let s = BlowupSection::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(s.eval(&ints(&[0, 1])).unwrap(), (ints(&[0, 0, -1, 0]), ints(&[0, 1])));
        assert!(s.eval(&ints(&[0, 0])).is_err());
        assert!(incidence_identity_symbolic());
    }

    #[test]
    fn reality_examples() {
        let s = BlowupSection::new(vec![gq(1, 0), gq(0, 1), gq(0, 1), gq(1, 0), gq(2, 0)]).unwrap();
        assert!(s.is_real());
        assert!(BlowupSection::from_ints([1, 0, 0, 1, 0]).unwrap().is_real());
        assert!(!BlowupSection::from_ints([1, 0, 1, 0, 1]).unwrap().is_real());
    }

    #[test]
    fn classification_and_module() {
        let on = BlowupSection::from_ints([1, 0, 0, 1, 0]).unwrap();
        assert_eq!(on.classify(), SectionClass::OnDivisor);
        let off = BlowupSection::from_ints([1, 0, 0, 1, 5]).unwrap();
        assert_eq!(off.classify(), SectionClass::OffDivisor);
        for s in [on, off] {
            let km = s.module().unwrap();
            assert_eq!((km.r, km.k, km.n), (2, 2, 4));
            assert!(matches!(km.certificate(0, 0).unwrap(), Certificate::ExactPass { .. }));
        }
        assert!(BlowupSection::from_ints([1, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn quaternion_normal_form_round_trip() {
        let q = QuaternionValue::from_parts(1, 2, -3, 4);
        let s = BlowupSection::from_quaternion(&q);
        assert!(s.is_real());
        let scaled = BlowupSection {
            coords: s.coords.iter().map(|c| c * &Gq::from_int(-3)).collect(),
        };
        assert_eq!(scaled.real_normal_form(), Some(q));
        assert!(scaled.same_as(&s));
    }
}
