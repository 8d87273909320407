//! Bundles on `P^1` presented as cokernels `0 -> ⊕O(e_j) -> ⊕O(f_i) -> N -> 0`.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::matrix::ExactMatrix;
use crate::minors::maximal_minor_gcd;

/// Presentation matrix with entry `(i, j)` of degree `f_i - e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerResolution {
    pub source_twists: Vec<i64>,
    pub target_twists: Vec<i64>,
    pub matrix: Vec<Vec<BinaryForm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionDiagnostics {
    pub generically_injective: bool,
    pub cokernel_locally_free: bool,
    /// Gcd of the maximal minors; absent when all of them vanish.
    pub witness: Option<BinaryForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistCohomology {
    pub k: i64,
    pub h0: usize,
    pub h1: usize,
}

fn h0_line(m: i64) -> usize {
    (m + 1).max(0) as usize
}

fn h1_line(m: i64) -> usize {
    (-m - 1).max(0) as usize
}

impl SteinerResolution {
    pub fn new(
        source_twists: Vec<i64>,
        target_twists: Vec<i64>,
        matrix: Vec<Vec<BinaryForm>>,
    ) -> Result<Self> {
        let res = Self {
            source_twists,
            target_twists,
            matrix,
        };
        res.check_shape()?;
        Ok(res)
    }

    pub fn rank(&self) -> usize {
        self.target_twists.len() - self.source_twists.len()
    }

    pub fn check_shape(&self) -> Result<()> {
        let (s, m) = (self.source_twists.len(), self.target_twists.len());
        if m <= s {
            return Err(Error::Dimension(format!(
                "need more target twists than source twists, got {m} and {s}"
            )));
        }
        if self.matrix.len() != m {
            return Err(Error::Dimension(format!(
                "matrix has {} rows, expected {m}",
                self.matrix.len()
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != s {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {s}",
                    row.len()
                )));
            }
            for (j, entry) in row.iter().enumerate() {
                let want = self.target_twists[i] - self.source_twists[j];
                if entry.degree() != want && !entry.is_zero() {
                    return Err(Error::Degree(format!(
                        "entry ({i},{j}) has degree {}, expected {want}",
                        entry.degree()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Validation flags; the witness is the gcd of the maximal minors.
    pub fn diagnostics(&self) -> Result<ResolutionDiagnostics> {
        self.check_shape()?;
        let s = self.source_twists.len();
        let sum_e: i64 = self.source_twists.iter().sum();
        let gcd = maximal_minor_gcd(&self.matrix, s, |rows| {
            rows.iter().map(|&i| self.target_twists[i]).sum::<i64>() - sum_e
        })?;
        let locally_free = gcd.gcd.as_ref().is_some_and(BinaryForm::is_constant);
        Ok(ResolutionDiagnostics {
            generically_injective: gcd.some_nonzero,
            cokernel_locally_free: locally_free,
            witness: gcd.gcd,
        })
    }

    /// Validate and attach a cohomology cache. Fails unless the cokernel is a
    /// vector bundle.
    pub fn validated(self) -> Result<ValidatedResolution> {
        let diagnostics = self.diagnostics()?;
        if !diagnostics.generically_injective {
            return Err(Error::Invalid("presentation matrix is not generically injective".into()));
        }
        if !diagnostics.cokernel_locally_free {
            return Err(Error::Invalid(format!(
                "cokernel is not locally free (minor gcd {})",
                diagnostics.witness.as_ref().map_or("0".into(), ToString::to_string)
            )));
        }
        Ok(ValidatedResolution {
            res: self,
            diagnostics,
            memo: Mutex::new(BTreeMap::new()),
        })
    }

    /// Rank of the Serre-dual connecting map
    /// `⊕ H0(O(-f_i-k-2)) -> ⊕ H0(O(-e_j-k-2))`, `(g_i) -> (Σ_i M_ij g_i)_j`.
    fn delta_rank(&self, k: i64) -> usize {
        let src: Vec<i64> = self.target_twists.iter().map(|f| -f - k - 2).collect();
        let dst: Vec<i64> = self.source_twists.iter().map(|e| -e - k - 2).collect();
        let cols: usize = src.iter().map(|&d| h0_line(d)).sum();
        let rows: usize = dst.iter().map(|&d| h0_line(d)).sum();
        if cols == 0 || rows == 0 {
            return 0;
        }
        let row_offsets = offsets(&dst);
        let mut m = ExactMatrix::zeros(rows, cols);
        let mut col = 0;
        for (i, &di) in src.iter().enumerate() {
            for a in 0..h0_line(di) {
                // basis monomial x0^(di-a) x1^a in summand i
                for (j, &dj) in dst.iter().enumerate() {
                    if dj < 0 {
                        continue;
                    }
                    let entry = &self.matrix[i][j];
                    for (b, c) in entry.coeffs().iter().enumerate() {
                        if !c.is_zero() {
                            m.set(row_offsets[j] + a + b, col, c.clone());
                        }
                    }
                }
                col += 1;
            }
        }
        m.rank()
    }

    fn twist_uncached(&self, k: i64) -> TwistCohomology {
        let h0b: usize = self.target_twists.iter().map(|f| h0_line(f + k)).sum();
        let h1b: usize = self.target_twists.iter().map(|f| h1_line(f + k)).sum();
        let h0a: usize = self.source_twists.iter().map(|e| h0_line(e + k)).sum();
        let h1a: usize = self.source_twists.iter().map(|e| h1_line(e + k)).sum();
        let delta = self.delta_rank(k);
        let h0 = (h0b + h1a) as i64 - (h0a + delta) as i64;
        let h1 = h1b as i64 - delta as i64;
        TwistCohomology {
            k,
            h0: usize::try_from(h0).expect("injective presentation has h0 >= 0"),
            h1: usize::try_from(h1).expect("connecting map rank bounded by h1"),
        }
    }

    /// `χ(N(k)) = Σ(f_i + k + 1) - Σ(e_j + k + 1)`.
    pub fn euler_characteristic(&self, k: i64) -> i64 {
        self.target_twists.iter().map(|f| f + k + 1).sum::<i64>()
            - self.source_twists.iter().map(|e| e + k + 1).sum::<i64>()
    }

    /// Block-diagonal direct sum of two presentations.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut source_twists = self.source_twists.clone();
        source_twists.extend(&other.source_twists);
        let mut target_twists = self.target_twists.clone();
        target_twists.extend(&other.target_twists);
        let mut matrix = Vec::new();
        for (i, row) in self.matrix.iter().enumerate() {
            let mut r = row.clone();
            r.extend(
                other
                    .source_twists
                    .iter()
                    .map(|e| BinaryForm::zero(self.target_twists[i] - e)),
            );
            matrix.push(r);
        }
        for (i, row) in other.matrix.iter().enumerate() {
            let mut r: Vec<BinaryForm> = self
                .source_twists
                .iter()
                .map(|e| BinaryForm::zero(other.target_twists[i] - e))
                .collect();
            r.extend(row.iter().cloned());
            matrix.push(r);
        }
        Self {
            source_twists,
            target_twists,
            matrix,
        }
    }
}

fn offsets(degrees: &[i64]) -> Vec<usize> {
    let mut out = Vec::with_capacity(degrees.len());
    let mut acc = 0;
    for &d in degrees {
        out.push(acc);
        acc += h0_line(d);
    }
    out
}

/// A resolution known to present a vector bundle, with memoized cohomology.
#[derive(Debug)]
pub struct ValidatedResolution {
    res: SteinerResolution,
    diagnostics: ResolutionDiagnostics,
    memo: Mutex<BTreeMap<i64, TwistCohomology>>,
}

impl Clone for ValidatedResolution {
    fn clone(&self) -> Self {
        let memo = self.memo.lock().expect("memo lock").clone();
        Self {
            res: self.res.clone(),
            diagnostics: self.diagnostics.clone(),
            memo: Mutex::new(memo),
        }
    }
}

impl ValidatedResolution {
    pub fn resolution(&self) -> &SteinerResolution {
        &self.res
    }

    pub fn diagnostics(&self) -> &ResolutionDiagnostics {
        &self.diagnostics
    }

    pub fn rank(&self) -> usize {
        self.res.rank()
    }

    pub fn twist(&self, k: i64) -> TwistCohomology {
        if let Some(t) = self.memo.lock().expect("memo lock").get(&k) {
            return *t;
        }
        let t = self.res.twist_uncached(k);
        self.memo.lock().expect("memo lock").insert(k, t);
        t
    }

    pub fn h0_twist(&self, k: i64) -> usize {
        self.twist(k).h0
    }

    pub fn h1_twist(&self, k: i64) -> usize {
        self.twist(k).h1
    }

    pub fn cohomology_table(&self, lo: i64, hi: i64) -> Vec<TwistCohomology> {
        (lo..=hi).map(|k| self.twist(k)).collect()
    }

    /// Range containing every splitting degree: each summand receives a
    /// nonzero map from some `O(f_i)`, and the degrees sum to `Σf - Σe`.
    pub fn degree_bounds(&self) -> (i64, i64) {
        let lo = *self.res.target_twists.iter().min().expect("nonempty targets");
        let total = self.total_degree();
        let hi = total - (self.rank() as i64 - 1) * lo;
        (lo, hi)
    }

    pub fn total_degree(&self) -> i64 {
        self.res.target_twists.iter().sum::<i64>() - self.res.source_twists.iter().sum::<i64>()
    }

    /// Sorted splitting degrees, recovered from `#{d_i >= -k} = h0(k) - h0(k-1)`.
    pub fn splitting_type(&self) -> Result<Vec<i64>> {
        let (lo, hi) = self.degree_bounds();
        if self.h0_twist(-hi - 1) != 0 {
            return Err(Error::Inconsistent(format!(
                "h0 at twist {} should vanish",
                -hi - 1
            )));
        }
        let at_least = |delta: i64| self.h0_twist(-delta) as i64 - self.h0_twist(-delta - 1) as i64;
        let mut out = Vec::new();
        let mut above = 0;
        for delta in (lo..=hi).rev() {
            let ge = at_least(delta);
            let mult = ge - above;
            if mult < 0 {
                return Err(Error::Inconsistent(format!("negative multiplicity at degree {delta}")));
            }
            out.extend(std::iter::repeat_n(delta, mult as usize));
            above = ge;
        }
        out.reverse();
        if out.len() != self.rank() || out.iter().sum::<i64>() != self.total_degree() {
            return Err(Error::Inconsistent(format!(
                "recovered degrees {out:?} do not match rank {} and degree {}",
                self.rank(),
                self.total_degree()
            )));
        }
        Ok(out)
    }
}

/// `Σ_i (d_i + k + 1)_+` for a split bundle.
pub fn h0_of_split(degrees: &[i64], k: i64) -> usize {
    degrees.iter().map(|d| h0_line(d + k)).sum()
}

pub fn validate_resolution(res: &SteinerResolution) -> Result<ResolutionDiagnostics> {
    res.diagnostics()
}

/// Which coefficient the top-down generic-section recursion uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecursionVariant {
    /// `r_i = h_i - Σ_{j>i} (j - i + 1) r_j`.
    Corrected,
    /// `r_i = h_i - (i + 1) Σ_{j>i} r_j`.
    Printed,
}

/// Raw recursion output `r_0, r_1, ...`, without any consistency checks.
pub fn recursion_values(h0_list: &[usize], variant: RecursionVariant) -> Vec<i64> {
    let n = h0_list.len();
    let mut r = vec![0i64; n];
    for i in (0..n).rev() {
        let correction: i64 = match variant {
            RecursionVariant::Corrected => (i + 1..n).map(|j| (j - i + 1) as i64 * r[j]).sum(),
            RecursionVariant::Printed => (i as i64 + 1) * (i + 1..n).map(|j| r[j]).sum::<i64>(),
        };
        r[i] = h0_list[i] as i64 - correction;
    }
    r
}

/// `h_i = Σ_{j >= i} (j - i + 1) r_j`, the value `h0(N(-i))` of a bundle
/// whose generic section splitting has `r_j` copies of `O(j)`.
pub fn evaluate_h0_list(r: &BTreeMap<usize, usize>, len: usize) -> Vec<usize> {
    (0..len)
        .map(|i| r.iter().filter(|(&j, _)| j >= i).map(|(&j, &m)| (j - i + 1) * m).sum())
        .collect()
}

/// Generic-section splitting `{i: r_i}` (entries with `r_i > 0`), checked
/// against the rank and by re-evaluation.
pub fn generic_section_splitting(
    h0_list: &[usize],
    rank: usize,
    variant: RecursionVariant,
) -> Result<BTreeMap<usize, usize>> {
    let raw = recursion_values(h0_list, variant);
    if let Some((i, v)) = raw.iter().enumerate().find(|(_, v)| **v < 0) {
        return Err(Error::Inconsistent(format!("recursion gives r_{i} = {v}")));
    }
    let out: BTreeMap<usize, usize> = raw
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0)
        .map(|(i, v)| (i, *v as usize))
        .collect();
    let total: usize = out.values().sum();
    if total != rank {
        return Err(Error::Inconsistent(format!(
            "multiplicities sum to {total}, expected rank {rank}"
        )));
    }
    let again = evaluate_h0_list(&out, h0_list.len());
    if again != h0_list {
        return Err(Error::Inconsistent(format!(
            "re-evaluation gives {again:?}, input was {h0_list:?}"
        )));
    }
    Ok(out)
}

/// Convenience: the Jacobian-style column `(f_0, ..., f_m)^T` with source twist `e`.
pub fn column_resolution(e: i64, forms: Vec<BinaryForm>) -> Result<SteinerResolution> {
    let target_twists = forms.iter().map(|f| f.degree() + e).collect();
    SteinerResolution::new(vec![e], target_twists, forms.into_iter().map(|f| vec![f]).collect())
}

/// Trivial presentation of `⊕ O(d_i)`.
pub fn split_bundle(degrees: &[i64]) -> SteinerResolution {
    SteinerResolution {
        source_twists: Vec::new(),
        target_twists: degrees.to_vec(),
        matrix: vec![Vec::new(); degrees.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(e: i64, forms: &[&[i64]]) -> SteinerResolution {
        column_resolution(e, forms.iter().map(|c| BinaryForm::from_ints(c)).collect()).unwrap()
    }

    #[test]
    fn column_examples() {
        let r = col(0, &[&[1, 0], &[0, 1]]);
        let d = r.diagnostics().unwrap();
        assert!(d.generically_injective && d.cokernel_locally_free);
        assert_eq!(r.validated().unwrap().splitting_type().unwrap(), vec![2]);

        let r = col(0, &[&[1, 0, 0], &[0, 1, 0]]);
        let d = r.diagnostics().unwrap();
        assert!(d.generically_injective && !d.cokernel_locally_free);
        assert_eq!(d.witness.unwrap(), BinaryForm::x0());
    }

    #[test]
    fn split_bundles_recover_their_degrees() {
        let v = split_bundle(&[3, -1, 0]).validated().unwrap();
        assert_eq!(v.splitting_type().unwrap(), vec![-1, 0, 3]);
        assert_eq!(v.h0_twist(0), 4 + 1);
        assert_eq!(v.h1_twist(-2), 1 + 2);
    }

    #[test]
    fn recursion_examples() {
        let out = generic_section_splitting(&[16, 8, 2], 8, RecursionVariant::Corrected).unwrap();
        assert_eq!(out, BTreeMap::from([(0, 2), (1, 4), (2, 2)]));
        assert_eq!(recursion_values(&[16, 8, 2], RecursionVariant::Printed)[0], 10);
        assert!(generic_section_splitting(&[16, 8, 2], 8, RecursionVariant::Printed).is_err());
        let out = generic_section_splitting(&[12, 6], 6, RecursionVariant::Corrected).unwrap();
        assert_eq!(out, BTreeMap::from([(1, 6)]));
        assert!(generic_section_splitting(&[], 0, RecursionVariant::Corrected).unwrap().is_empty());
        assert!(generic_section_splitting(&[3, 8], 8, RecursionVariant::Corrected).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(SteinerResolution::new(vec![0], vec![1], vec![vec![BinaryForm::x0()]]).is_err());
        assert!(SteinerResolution::new(
            vec![0],
            vec![1, 2],
            vec![vec![BinaryForm::x0()], vec![BinaryForm::x1()]]
        )
        .is_err());
    }
}
