//! Real and quaternionic structures induced by an involution-equivariant curve.
//!
//! The involution on `P^1` is `a(x) = (ε·conj x1, conj x0)` with `ε = -1` for
//! the standard variant and `ε = +1` for the split one. On forms this is
//! `conjsub(f)(y) = conj(f)(ε·y1, y0)`, and a curve is equivariant when
//! `conjsub(φ_j) = s_j·φ_π(j)` with the signs and pairing of the target involution.

use serde::Serialize;

use super::laurent::Laurent;
use super::tangent::{EFiberElement, TangentSpace};
use super::RationalCurve;
use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::kronecker::{KroneckerModule, QuaternionicCheck, QuaternionicData, SigmaVariant};
use crate::matrix::ExactMatrix;
use crate::scalar::Gq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equivariance {
    pub standard: bool,
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuaternionicReport {
    pub equivariance: Equivariance,
    /// The variant used for the structure check, if any applies.
    pub variant: Option<SigmaVariant>,
    pub check: Option<QuaternionicCheck>,
    /// Replacing `T` by `-T` makes the equivariance identity fail.
    pub negative_control_rejected: Option<bool>,
    pub data: Option<QuaternionicData>,
}

impl QuaternionicReport {
    pub fn passed(&self) -> bool {
        self.check.as_ref().is_some_and(QuaternionicCheck::passed)
            && self.negative_control_rejected == Some(true)
    }
}

/// Uniform value of `s_j·s_π(j)`, which also fixes `ε`.
fn kappa(variant: &SigmaVariant, r: usize) -> Result<i64> {
    variant.square_sign(r)?.ok_or_else(|| {
        Error::Invalid("curve structures need a uniform sign mask (standard or split)".into())
    })
}

fn conjsub_form(f: &BinaryForm, eps: i64) -> BinaryForm {
    Laurent::from_form(f)
        .conjsub(eps)
        .to_form()
        .expect("polynomial stays polynomial")
}

/// Exact check of `conjsub(φ_j) = s_j·φ_π(j)` for every component.
pub fn is_equivariant(curve: &RationalCurve, variant: &SigmaVariant) -> Result<bool> {
    let r = curve.n + 1;
    let eps = kappa(variant, r)?;
    let signs = variant.signs(r)?;
    Ok(curve.phi.iter().zip(&signs).all(|(f, &(s, p))| {
        conjsub_form(f, eps) == curve.phi[p].scale(&Gq::from_int(s))
    }))
}

pub fn equivariance(curve: &RationalCurve) -> Result<Equivariance> {
    if (curve.n + 1) % 2 != 0 {
        return Ok(Equivariance {
            standard: false,
            split: false,
        });
    }
    Ok(Equivariance {
        standard: is_equivariant(curve, &SigmaVariant::Standard)?,
        split: is_equivariant(curve, &SigmaVariant::Split)?,
    })
}

impl TangentSpace {
    /// `R(q)_j = s_j·conjsub(q_π(j))` on tangent representatives.
    fn real_map(&self, q: &[BinaryForm], variant: &SigmaVariant) -> Result<Vec<BinaryForm>> {
        let eps = kappa(variant, q.len())?;
        Ok(variant
            .signs(q.len())?
            .into_iter()
            .map(|(s, p)| conjsub_form(&q[p], eps).scale(&Gq::from_int(s)))
            .collect())
    }

    /// Induced structure on the E-fiber, `σ0 = κ·R` on Čech representatives.
    fn sigma0(&self, e: &EFiberElement, variant: &SigmaVariant) -> Result<EFiberElement> {
        let curve = self.curve();
        let (d, r) = (curve.d, curve.n + 1);
        let eps = kappa(variant, r)?;
        let signs = variant.signs(r)?;
        let c = [
            Laurent::quotient(&e.p1, d - 2, d),
            Laurent::quotient(&e.p2, d - 2, d),
        ];
        let dphi = |c: &[Laurent; 2]| -> Vec<Laurent> {
            self.jacobian()
                .iter()
                .map(|row| c[0].mul_form(&row[0]).add(&c[1].mul_form(&row[1])))
                .collect()
        };
        // section on {x1 != 0}
        let b1: Vec<Laurent> = dphi(&c)
            .iter()
            .zip(&e.u)
            .map(|(l, u)| l.neg_part().add(&Laurent::from_form(&BinaryForm::constant(u.clone()))))
            .collect();
        let new_c = [c[1].conjsub(eps).scale(-1), c[0].conjsub(eps).scale(-eps)];
        let mut p = Vec::with_capacity(2);
        for l in &new_c {
            let f = l.shift(d - 2, d).to_form().ok_or_else(|| {
                Error::Inconsistent("transformed cocycle is not polynomial".into())
            })?;
            p.push(f);
        }
        let dphi_new = dphi(&new_c);
        let mut u = Vec::with_capacity(r);
        for (j, &(s, pj)) in signs.iter().enumerate() {
            let b0 = b1[pj].conjsub(eps).scale(eps * s);
            let total = b0.add(&dphi_new[j].nonneg_part());
            let f = total
                .to_form()
                .filter(|f| f.degree() == 0)
                .ok_or_else(|| Error::Inconsistent("transformed section is not constant".into()))?;
            u.push(f.coeff(0));
        }
        let [p1, p2]: [BinaryForm; 2] = p.try_into().expect("two forms");
        EFiberElement::new(d, curve.n, p1, p2, u)
    }

    /// `J0` (on E-fiber parameters) and `T` (on canonical tangent coordinates)
    /// with `σ0(v) = J0·conj(v)` and `τ(w) = T·conj(w)`.
    pub fn quaternionic_data(&self, variant: &SigmaVariant) -> Result<QuaternionicData> {
        if !is_equivariant(self.curve(), variant)? {
            return Err(Error::Invalid("curve is not equivariant for this involution".into()));
        }
        let j_cols: Vec<Vec<Gq>> = self
            .e_basis()
            .iter()
            .map(|e| Ok(self.sigma0(e, variant)?.params()))
            .collect::<Result<_>>()?;
        let j0 = ExactMatrix::from_cols(self.e_dim(), &j_cols)?;
        let t_cols: Vec<Vec<Gq>> = (0..self.dim())
            .map(|b| {
                let mut v = vec![Gq::zero(); self.dim()];
                v[b] = Gq::one();
                self.coords(&self.real_map(&self.lift(&v), variant)?)
            })
            .collect::<Result<_>>()?;
        let t = ExactMatrix::from_cols(self.dim(), &t_cols)?;
        Ok(QuaternionicData {
            j0,
            t,
            variant: variant.clone(),
        })
    }
}

/// Equivariance detection and, for an equivariant curve, the structure check
/// on its Kronecker module together with the `T -> -T` control.
pub fn quaternionic_report(curve: &RationalCurve) -> Result<QuaternionicReport> {
    if curve.n != 3 {
        return Err(Error::Invalid("quaternionic report needs a space curve".into()));
    }
    let eq = equivariance(curve)?;
    let variant = if eq.standard {
        Some(SigmaVariant::Standard)
    } else if eq.split {
        Some(SigmaVariant::Split)
    } else {
        None
    };
    let Some(variant) = variant else {
        return Ok(QuaternionicReport {
            equivariance: eq,
            variant: None,
            check: None,
            negative_control_rejected: None,
            data: None,
        });
    };
    let ts = TangentSpace::new(curve)?;
    let km: KroneckerModule = ts.kronecker_module()?;
    let data = ts.quaternionic_data(&variant)?;
    let check = km.is_quaternionic(&data)?;
    let flipped = QuaternionicData {
        t: data.t.scale(&-Gq::one()),
        ..data.clone()
    };
    let control = !km.is_quaternionic(&flipped)?.equivariant;
    Ok(QuaternionicReport {
        equivariance: eq,
        variant: Some(variant),
        check: Some(check),
        negative_control_rejected: Some(control),
        data: Some(data),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{sigma_cubic, split_quartic, twisted_cubic};

    #[test]
    fn equivariance_detection() {
        assert_eq!(
            equivariance(&sigma_cubic()).unwrap(),
            Equivariance { standard: true, split: false }
        );
        assert_eq!(
            equivariance(&split_quartic()).unwrap(),
            Equivariance { standard: false, split: true }
        );
        let tc = equivariance(&twisted_cubic()).unwrap();
        assert!(!tc.standard && !tc.split);
    }

    #[test]
    fn sigma_cubic_structures() {
        let rep = quaternionic_report(&sigma_cubic()).unwrap();
        let check = rep.check.clone().unwrap();
        assert!(check.j0_square_ok, "J0 conj(J0) = -I");
        assert!(check.t_square_ok, "T conj(T) = I");
        assert!(check.equivariant);
        assert_eq!(rep.negative_control_rejected, Some(true));
        assert!(rep.passed());
    }

    #[test]
    fn split_quartic_structures() {
        let rep = quaternionic_report(&split_quartic()).unwrap();
        assert_eq!(rep.variant, Some(SigmaVariant::Split));
        assert!(rep.passed(), "{:?}", rep.check);
    }

    #[test]
    fn non_equivariant_curve_reports_no_structure() {
        let rep = quaternionic_report(&twisted_cubic()).unwrap();
        assert!(rep.variant.is_none() && rep.check.is_none());
    }
}
