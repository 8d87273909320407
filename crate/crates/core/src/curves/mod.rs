//! Parametrized rational curves `φ: P^1 -> P^n` and their normal bundles.

mod laurent;
mod quaternionic;
mod tangent;

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use quaternionic::{
    equivariance, is_equivariant, quaternionic_report, Equivariance, QuaternionicReport,
};
pub use tangent::{same_span, EFiberElement, TangentSpace};

use crate::bundles::{
    generic_section_splitting, RecursionVariant, SteinerResolution, ValidatedResolution,
};
use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::matrix::ExactMatrix;
use crate::minors::maximal_minor_gcd;
use crate::scalar::Gq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCurve {
    #[serde(rename = "ambient")]
    pub n: usize,
    #[serde(rename = "degree")]
    pub d: i64,
    pub phi: Vec<BinaryForm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveDiagnostics {
    pub basepoint_free: bool,
    pub nondegenerate: bool,
    pub immersed: bool,
    pub basepoint_gcd: BinaryForm,
    pub coefficient_rank: usize,
    /// Gcd of the 2x2 minors of `Dφ`; absent when they all vanish.
    pub immersion_gcd: Option<BinaryForm>,
}

impl CurveDiagnostics {
    pub fn valid(&self) -> bool {
        self.basepoint_free && self.nondegenerate && self.immersed
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalSplitting {
    pub degrees: Vec<i64>,
    /// `(a, b)` with degrees `[d + a, d + b]`, for space curves.
    pub ab: Option<(i64, i64)>,
    /// `a, b >= 2` and `a + b = 2d - 2`; `None` outside `P^3`.
    pub ghione_sacchiero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub h0_n: usize,
    pub expected_dim: usize,
    pub h0_n_minus_1: usize,
    pub expected_rank: usize,
    /// `h0(N) = h0(N(-1)) + 2d` for space curves.
    pub nseq_ok: Option<bool>,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.h0_n == self.expected_dim
            && self.h0_n_minus_1 == self.expected_rank
            && self.nseq_ok.unwrap_or(true)
    }
}

impl RationalCurve {
    pub fn new(n: usize, d: i64, phi: Vec<BinaryForm>) -> Result<Self> {
        let c = Self { n, d, phi };
        c.check_shape()?;
        Ok(c)
    }

    pub fn from_int_coeffs(rows: &[&[i64]]) -> Result<Self> {
        let phi: Vec<BinaryForm> = rows.iter().map(|r| BinaryForm::from_ints(r)).collect();
        let d = phi.first().map_or(0, BinaryForm::degree);
        Self::new(phi.len().saturating_sub(1), d, phi)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Invalid(format!("ambient dimension {} is below 3", self.n)));
        }
        if self.d < 3 {
            return Err(Error::Invalid(format!("degree {} is below 3", self.d)));
        }
        if self.phi.len() != self.n + 1 {
            return Err(Error::Dimension(format!(
                "P^{} needs {} forms, got {}",
                self.n,
                self.n + 1,
                self.phi.len()
            )));
        }
        if let Some(f) = self.phi.iter().find(|f| f.degree() != self.d) {
            return Err(Error::Degree(format!(
                "component of degree {} in a degree {} curve",
                f.degree(),
                self.d
            )));
        }
        Ok(())
    }

    /// Rows `(∂φ_i/∂x0, ∂φ_i/∂x1)`.
    pub fn jacobian(&self) -> Vec<Vec<BinaryForm>> {
        self.phi
            .iter()
            .map(|f| {
                vec![
                    f.derivative(0).expect("valid variable"),
                    f.derivative(1).expect("valid variable"),
                ]
            })
            .collect()
    }

    /// `Dφ(a, b) = a·∂0φ + b·∂1φ` componentwise.
    pub fn dphi(&self, a: &BinaryForm, b: &BinaryForm) -> Vec<BinaryForm> {
        self.jacobian()
            .iter()
            .map(|row| &a.multiply(&row[0]) + &b.multiply(&row[1]))
            .collect()
    }

    pub fn coefficient_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_rows(self.phi.iter().map(|f| f.coeffs().to_vec()).collect())
            .expect("equal degrees")
    }

    /// `f_t = Σ t_i φ_i`.
    pub fn hyperplane_form(&self, t: &[Gq]) -> Result<BinaryForm> {
        if t.len() != self.n + 1 {
            return Err(Error::Dimension(format!(
                "hyperplane vector of length {}, expected {}",
                t.len(),
                self.n + 1
            )));
        }
        if t.iter().all(Gq::is_zero) {
            return Err(Error::Invalid("hyperplane vector t must be nonzero".into()));
        }
        let mut acc = BinaryForm::zero(self.d);
        for (ti, f) in t.iter().zip(&self.phi) {
            acc = &acc + &f.scale(ti);
        }
        Ok(acc)
    }

    pub fn validate(&self) -> Result<CurveDiagnostics> {
        self.check_shape()?;
        let mut g = self.phi[0].clone();
        for f in &self.phi[1..] {
            if g.is_zero() && f.is_zero() {
                continue;
            }
            g = g.gcd(f)?;
        }
        let basepoint_free = g.is_constant();
        let coefficient_rank = self.coefficient_matrix().rank();
        let minors = maximal_minor_gcd(&self.jacobian(), 2, |_| 2 * (self.d - 1))?;
        let immersed = minors.gcd.as_ref().is_some_and(BinaryForm::is_constant);
        Ok(CurveDiagnostics {
            basepoint_free,
            nondegenerate: coefficient_rank == self.n + 1,
            immersed,
            basepoint_gcd: g,
            coefficient_rank,
            immersion_gcd: minors.gcd,
        })
    }

    /// `0 -> O(1)^2 --Dφ--> O(d)^(n+1) -> N -> 0`.
    pub fn normal_resolution(&self) -> Result<SteinerResolution> {
        self.check_shape()?;
        SteinerResolution::new(vec![1, 1], vec![self.d; self.n + 1], self.jacobian())
    }

    /// Validate and attach the normal bundle presentation.
    pub fn analyze(self) -> Result<ValidCurve> {
        let diagnostics = self.validate()?;
        if !diagnostics.valid() {
            return Err(Error::Invalid(format!(
                "curve fails validation (basepoint free {}, nondegenerate {}, immersed {})",
                diagnostics.basepoint_free, diagnostics.nondegenerate, diagnostics.immersed
            )));
        }
        let normal = self.normal_resolution()?.validated()?;
        Ok(ValidCurve {
            curve: self,
            diagnostics,
            normal,
        })
    }
}

/// A curve that passed validation, with its normal bundle presentation.
#[derive(Clone, Debug)]
pub struct ValidCurve {
    curve: RationalCurve,
    diagnostics: CurveDiagnostics,
    normal: ValidatedResolution,
}

impl ValidCurve {
    pub fn curve(&self) -> &RationalCurve {
        &self.curve
    }

    pub fn diagnostics(&self) -> &CurveDiagnostics {
        &self.diagnostics
    }

    pub fn normal_bundle(&self) -> &ValidatedResolution {
        &self.normal
    }

    pub fn n(&self) -> usize {
        self.curve.n
    }

    pub fn d(&self) -> i64 {
        self.curve.d
    }

    /// `h0(N(-i))`; the hyperplane class pulls back to degree `d`.
    pub fn h0_normal(&self, i: i64) -> usize {
        self.normal.h0_twist(-i * self.curve.d)
    }

    pub fn h1_normal(&self, i: i64) -> usize {
        self.normal.h1_twist(-i * self.curve.d)
    }

    pub fn normal_splitting(&self) -> Result<NormalSplitting> {
        let degrees = self.normal.splitting_type()?;
        let d = self.curve.d;
        let (ab, gs) = if self.curve.n == 3 {
            let (a, b) = (degrees[0] - d, degrees[1] - d);
            (Some((a, b)), Some(a >= 2 && b >= 2 && a + b == 2 * d - 2))
        } else {
            (None, None)
        };
        Ok(NormalSplitting {
            degrees,
            ab,
            ghione_sacchiero: gs,
        })
    }

    /// `[h0(N(-i))]` for `i = 0, 1, ...` up to and including the first zero.
    pub fn h0_list(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0.. {
            let h = self.h0_normal(i);
            out.push(h);
            if h == 0 {
                break;
            }
        }
        out
    }

    /// Rank of the bundle whose generic section splitting is recovered:
    /// `h0(N) - h0(N(-1)) = (n-1)d`.
    pub fn twistor_rank(&self) -> usize {
        (self.curve.n - 1) * self.curve.d as usize
    }

    pub fn twistor_generic_splitting(&self) -> Result<BTreeMap<usize, usize>> {
        generic_section_splitting(&self.h0_list(), self.twistor_rank(), RecursionVariant::Corrected)
    }

    pub fn dimension_report(&self) -> DimensionReport {
        let (n, d) = (self.curve.n, self.curve.d as usize);
        let h0_n = self.h0_normal(0);
        let h0_n_minus_1 = self.h0_normal(1);
        DimensionReport {
            h0_n,
            expected_dim: (n + 1) * d + n - 3,
            h0_n_minus_1,
            expected_rank: 2 * d + n - 3,
            nseq_ok: (n == 3).then(|| h0_n == h0_n_minus_1 + 2 * d),
        }
    }

    pub fn tangent_space(&self) -> Result<TangentSpace> {
        TangentSpace::new(&self.curve)
    }
}

const RANDOM_COEFF_BOUND: i64 = 9;
const RANDOM_ATTEMPTS: usize = 1000;

/// Random curve with integer coefficients in `[-9, 9]`, rejection-sampled
/// until it validates.
pub fn random_curve<R: Rng>(rng: &mut R, n: usize, d: i64) -> Result<ValidCurve> {
    if n < 3 || d < 3 {
        return Err(Error::Invalid(format!("random curves need n >= 3 and d >= 3, got n={n}, d={d}")));
    }
    for _ in 0..RANDOM_ATTEMPTS {
        let phi = (0..=n)
            .map(|_| {
                let coeffs = (0..=d)
                    .map(|_| Gq::from_int(rng.gen_range(-RANDOM_COEFF_BOUND..=RANDOM_COEFF_BOUND)))
                    .collect();
                BinaryForm::new(d, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Ok(valid) = RationalCurve::new(n, d, phi)?.analyze() {
            return Ok(valid);
        }
    }
    Err(Error::Invalid(format!("no valid curve found in {RANDOM_ATTEMPTS} attempts")))
}

/// The twisted cubic `(x0^3, x0^2 x1, x0 x1^2, x1^3)`.
pub fn twisted_cubic() -> RationalCurve {
    RationalCurve::from_int_coeffs(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])
        .expect("well-formed")
}

/// The cubic `(x0^3, x1^3, x0^2 x1, -x0 x1^2)`, equivariant for the standard involution.
pub fn sigma_cubic() -> RationalCurve {
    RationalCurve::from_int_coeffs(&[&[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, -1, 0]])
        .expect("well-formed")
}

/// The quartic `(x0^4, x1^4, x0^3 x1, x0 x1^3)`.
pub fn split_quartic() -> RationalCurve {
    RationalCurve::from_int_coeffs(&[
        &[1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1],
        &[0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0],
    ])
    .expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert!(twisted_cubic().validate().unwrap().valid());
        assert!(sigma_cubic().validate().unwrap().valid());
        let repeated =
            RationalCurve::from_int_coeffs(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, 0]])
                .unwrap();
        let diag = repeated.validate().unwrap();
        assert!(!diag.nondegenerate);
        assert_eq!(diag.coefficient_rank, 3);
        assert!(RationalCurve::from_int_coeffs(&[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).is_err());
    }

    #[test]
    fn twisted_cubic_invariants() {
        let c = twisted_cubic().analyze().unwrap();
        assert_eq!(c.h0_normal(1), 6);
        assert_eq!(c.h0_normal(0), 12);
        assert_eq!(c.normal_bundle().h0_twist(-6), 0);
        let s = c.normal_splitting().unwrap();
        assert_eq!(s.degrees, vec![5, 5]);
        assert_eq!(s.ab, Some((2, 2)));
        assert_eq!(c.twistor_generic_splitting().unwrap(), BTreeMap::from([(1, 6)]));
        let r = c.dimension_report();
        assert_eq!((r.h0_n, r.expected_dim, r.h0_n_minus_1, r.expected_rank), (12, 12, 6, 6));
        assert!(r.passed());
    }

    #[test]
    fn quartic_invariants() {
        let c = split_quartic().analyze().unwrap();
        assert_eq!(c.normal_splitting().unwrap().degrees, vec![7, 7]);
        assert_eq!(c.h0_list(), vec![16, 8, 0]);
        assert_eq!(c.twistor_generic_splitting().unwrap(), BTreeMap::from([(1, 8)]));
        assert_eq!(c.normal_bundle().h0_twist(-8), 0);
    }

    #[test]
    fn non_immersed_curve_has_non_free_cokernel() {
        // cusp-like: no linear term in x1 near [1:0]
        let c = RationalCurve::from_int_coeffs(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]])
            .unwrap();
        assert!(!c.validate().unwrap().immersed);
        let d = c.normal_resolution().unwrap().diagnostics().unwrap();
        assert!(!d.cokernel_locally_free);
    }
}
