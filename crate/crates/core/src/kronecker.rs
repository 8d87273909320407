//! Kronecker modules `α: V0 ⊗ C^r -> V1`, stored as `r` matrices `A_i` with
//! `α(v ⊗ z) = Σ z_i A_i v`.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::matrix::ExactMatrix;
use crate::minors::EvaluatedFormMatrix;
use crate::scalar::Gq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KroneckerModule {
    pub r: usize,
    pub k: usize,
    pub n: usize,
    pub maps: Vec<ExactMatrix>,
}

/// Involution on `C^r` acting pairwise: `σ(z)_j = s_j·conj(z_{π(j)})` with
/// `π = (0 1)(2 3)...`, `s_odd = +1` and `s_even = -1` exactly where the mask is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaVariant {
    Standard,
    Split,
    Mask(Vec<bool>),
}

impl SigmaVariant {
    /// Per-pair minus flags for `r` coordinates.
    pub fn mask(&self, r: usize) -> Result<Vec<bool>> {
        if r % 2 != 0 {
            return Err(Error::Dimension(format!("sigma needs an even dimension, got {r}")));
        }
        match self {
            Self::Standard => Ok(vec![true; r / 2]),
            Self::Split => Ok(vec![false; r / 2]),
            Self::Mask(m) if m.len() == r / 2 => Ok(m.clone()),
            Self::Mask(m) => Err(Error::Dimension(format!(
                "sign mask has {} entries, expected {}",
                m.len(),
                r / 2
            ))),
        }
    }

    /// Sign `s_j` and partner `π(j)` for every coordinate.
    pub fn signs(&self, r: usize) -> Result<Vec<(i64, usize)>> {
        let mask = self.mask(r)?;
        Ok((0..r)
            .map(|j| {
                let s = if j % 2 == 0 && mask[j / 2] { -1 } else { 1 };
                (s, j ^ 1)
            })
            .collect())
    }

    pub fn apply(&self, z: &[Gq]) -> Result<Vec<Gq>> {
        Ok(self
            .signs(z.len())?
            .into_iter()
            .map(|(s, p)| z[p].conj().scale(&num_rational::BigRational::from_integer(s.into())))
            .collect())
    }

    /// The `r×r` matrix `S` with `σ(z) = S·conj(z)`.
    pub fn matrix(&self, r: usize) -> Result<ExactMatrix> {
        let mut m = ExactMatrix::zeros(r, r);
        for (j, (s, p)) in self.signs(r)?.into_iter().enumerate() {
            m.set(j, p, Gq::from_int(s));
        }
        Ok(m)
    }

    /// `+1` if `σ² = I`, `-1` if `σ² = -I`, `None` for mixed masks.
    pub fn square_sign(&self, r: usize) -> Result<Option<i64>> {
        let mask = self.mask(r)?;
        Ok(if mask.iter().all(|&b| b) {
            Some(-1)
        } else if mask.iter().all(|&b| !b) {
            Some(1)
        } else {
            None
        })
    }
}

/// Structures `σ0(v) = J0·conj(v)` on `V0` and `τ(w) = T·conj(w)` on `V1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionicData {
    #[serde(rename = "J0")]
    pub j0: ExactMatrix,
    #[serde(rename = "T")]
    pub t: ExactMatrix,
    pub variant: SigmaVariant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuaternionicCheck {
    /// `J0·conj(J0)` equals the sign expected for the variant (or is not
    /// constrained, for mixed masks).
    pub j0_square_ok: bool,
    /// `T·conj(T) = I`.
    pub t_square_ok: bool,
    /// `α(σ0 v ⊗ σ z) = τ(α(v ⊗ z))` on a full basis.
    pub equivariant: bool,
}

impl QuaternionicCheck {
    pub fn passed(&self) -> bool {
        self.j0_square_ok && self.t_square_ok && self.equivariant
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Certificate {
    ExactPass {
        minor_gcd: BinaryForm,
    },
    ExactFail {
        witness: Option<Vec<Gq>>,
        locus: Option<BinaryForm>,
    },
    RandomizedPass {
        trials: usize,
    },
    RandomizedFail {
        witness: Vec<Gq>,
    },
}

impl Certificate {
    pub fn passed(&self) -> bool {
        matches!(self, Self::ExactPass { .. } | Self::RandomizedPass { .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::ExactPass { .. } | Self::ExactFail { .. })
    }
}

pub const DEFAULT_TRIALS: usize = 32;
const SAMPLE_BOUND: i64 = 1000;

impl KroneckerModule {
    pub fn new(maps: Vec<ExactMatrix>) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::Invalid("a Kronecker module needs r >= 1 maps".into()))?;
        let (n, k) = (first.rows(), first.cols());
        if let Some(bad) = maps.iter().find(|m| m.rows() != n || m.cols() != k) {
            return Err(Error::Dimension(format!(
                "map of shape {}x{} among {n}x{k} maps",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self {
            r: maps.len(),
            k,
            n,
            maps,
        })
    }

    /// Check the declared sizes against the stored maps.
    pub fn check(&self) -> Result<()> {
        let m = Self::new(self.maps.clone())?;
        if (m.r, m.k, m.n) != (self.r, self.k, self.n) {
            return Err(Error::Dimension(format!(
                "declared (r,k,n) = ({},{},{}) but maps give ({},{},{})",
                self.r, self.k, self.n, m.r, m.k, m.n
            )));
        }
        Ok(())
    }

    pub fn slice_matrix(&self, z: &[Gq]) -> Result<ExactMatrix> {
        if z.len() != self.r {
            return Err(Error::Dimension(format!(
                "slice vector of length {}, expected {}",
                z.len(),
                self.r
            )));
        }
        let mut acc = ExactMatrix::zeros(self.n, self.k);
        for (zi, a) in z.iter().zip(&self.maps) {
            if !zi.is_zero() {
                acc = acc.add(&a.scale(zi))?;
            }
        }
        Ok(acc)
    }

    pub fn evaluate(&self, v: &[Gq], z: &[Gq]) -> Result<Vec<Gq>> {
        if v.len() != self.k {
            return Err(Error::Dimension(format!(
                "vector of length {}, expected {}",
                v.len(),
                self.k
            )));
        }
        self.slice_matrix(z)?.mul_vec(v)
    }

    pub fn slice_rank(&self, z: &[Gq]) -> Result<usize> {
        if z.iter().all(Gq::is_zero) {
            return Err(Error::Invalid("slice direction z must be nonzero".into()));
        }
        Ok(self.slice_matrix(z)?.rank())
    }

    /// Maps `B_j = Σ_i W_j[i] A_i`.
    pub fn restrict(&self, w: &[Vec<Gq>]) -> Result<Self> {
        if w.is_empty() || w.len() > self.r {
            return Err(Error::Invalid(format!(
                "need between 1 and {} restriction vectors, got {}",
                self.r,
                w.len()
            )));
        }
        if w.iter().any(|v| v.len() != self.r) {
            return Err(Error::Dimension("restriction vectors must have length r".into()));
        }
        if crate::matrix::rank_of_vectors(w) != w.len() {
            return Err(Error::Invalid("restriction vectors are dependent".into()));
        }
        Self::new(w.iter().map(|v| self.slice_matrix(v)).collect::<Result<_>>()?)
    }

    /// Slice-injectivity certificate: exact for `r <= 2`, sampled otherwise.
    pub fn certificate(&self, seed: u64, trials: usize) -> Result<Certificate> {
        match self.r {
            1 => Ok(if self.maps[0].rank() == self.k {
                Certificate::ExactPass {
                    minor_gcd: BinaryForm::one(),
                }
            } else {
                Certificate::ExactFail {
                    witness: Some(vec![Gq::one()]),
                    locus: None,
                }
            }),
            2 => self.pencil_certificate(),
            _ => Ok(self.sampled_certificate(seed, trials)),
        }
    }

    fn pencil_certificate(&self) -> Result<Certificate> {
        let at_infinity = vec![Gq::zero(), Gq::one()];
        if self.maps[1].rank() < self.k {
            return Ok(Certificate::ExactFail {
                witness: Some(at_infinity),
                locus: None,
            });
        }
        if self.k == 0 {
            return Ok(Certificate::ExactPass {
                minor_gcd: BinaryForm::one(),
            });
        }
        let pencil: Vec<Vec<BinaryForm>> = (0..self.n)
            .map(|i| {
                (0..self.k)
                    .map(|j| {
                        BinaryForm::linear(self.maps[0].get(i, j).clone(), self.maps[1].get(i, j).clone())
                    })
                    .collect()
            })
            .collect();
        let eval = EvaluatedFormMatrix::new(&pencil, self.k + 1);
        let cols: Vec<usize> = (0..self.k).collect();
        let mut acc: Option<BinaryForm> = None;
        for rows in (0..self.n).combinations(self.k) {
            let minor = eval.minor(&rows, &cols, self.k as i64)?;
            if minor.is_zero() {
                continue;
            }
            let g = match acc {
                None => minor.normalized(),
                Some(g) => g.gcd(&minor)?,
            };
            let done = g.degree() == 0;
            acc = Some(g);
            if done {
                break;
            }
        }
        // the [0:1] slice is injective, so some minor is nonzero
        let g = acc.expect("nonzero minor");
        if g.degree() == 0 {
            return Ok(Certificate::ExactPass { minor_gcd: g });
        }
        Ok(Certificate::ExactFail {
            witness: pencil_root(&g),
            locus: Some(g),
        })
    }

    fn sampled_certificate(&self, seed: u64, trials: usize) -> Certificate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let z = loop {
                let z: Vec<Gq> = (0..self.r)
                    .map(|_| Gq::from_int(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)))
                    .collect();
                if z.iter().any(|c| !c.is_zero()) {
                    break z;
                }
            };
            if self.slice_matrix(&z).expect("length r").rank() < self.k {
                return Certificate::RandomizedFail { witness: z };
            }
        }
        Certificate::RandomizedPass { trials }
    }

    /// Exact check of `α(σ0 v ⊗ σ z) = τ(α(v ⊗ z))` on basis vectors, plus
    /// the structure identities of `J0` and `T`.
    pub fn is_quaternionic(&self, qd: &QuaternionicData) -> Result<QuaternionicCheck> {
        if qd.j0.rows() != self.k || qd.j0.cols() != self.k {
            return Err(Error::Dimension(format!("J0 must be {0}x{0}", self.k)));
        }
        if qd.t.rows() != self.n || qd.t.cols() != self.n {
            return Err(Error::Dimension(format!("T must be {0}x{0}", self.n)));
        }
        let square = qd.variant.square_sign(self.r)?;
        let j0_sq = qd.j0.mul(&qd.j0.conj())?;
        let j0_square_ok = match square {
            Some(s) => j0_sq == ExactMatrix::identity(self.k).scale(&Gq::from_int(s)),
            None => true,
        };
        let t_square_ok = qd.t.mul(&qd.t.conj())? == ExactMatrix::identity(self.n);
        let mut equivariant = true;
        'outer: for a in 0..self.k {
            let mut v = vec![Gq::zero(); self.k];
            v[a] = Gq::one();
            let sv = qd.j0.mul_vec(&v)?;
            for b in 0..self.r {
                let mut z = vec![Gq::zero(); self.r];
                z[b] = Gq::one();
                let lhs = self.evaluate(&sv, &qd.variant.apply(&z)?)?;
                let w: Vec<Gq> = self.evaluate(&v, &z)?.iter().map(Gq::conj).collect();
                if lhs != qd.t.mul_vec(&w)? {
                    equivariant = false;
                    break 'outer;
                }
            }
        }
        Ok(QuaternionicCheck {
            j0_square_ok,
            t_square_ok,
            equivariant,
        })
    }
}

/// A point `(z0, z1)` where the form vanishes, when one is easy to find.
fn pencil_root(g: &BinaryForm) -> Option<Vec<Gq>> {
    if g.degree() == 1 {
        let (a, b) = (g.coeff(0), g.coeff(1));
        let mut z = vec![b, -a];
        crate::matrix::normalize_leading(&mut z);
        return Some(z);
    }
    if g.x1_multiplicity() > 0 {
        return Some(vec![Gq::one(), Gq::zero()]);
    }
    for re in -8..=8 {
        for im in -8..=8 {
            let c = Gq::from_ints(re, im);
            if g.evaluate(&Gq::one(), &c).is_zero() {
                return Some(vec![Gq::one(), c]);
            }
        }
    }
    None
}

pub fn evaluate(km: &KroneckerModule, v: &[Gq], z: &[Gq]) -> Result<Vec<Gq>> {
    km.evaluate(v, z)
}

pub fn slice_rank(km: &KroneckerModule, z: &[Gq]) -> Result<usize> {
    km.slice_rank(z)
}

pub fn slice_injectivity_certificate(km: &KroneckerModule, seed: u64, trials: usize) -> Result<Certificate> {
    km.certificate(seed, trials)
}

pub fn is_quaternionic(km: &KroneckerModule, qd: &QuaternionicData) -> Result<bool> {
    Ok(km.is_quaternionic(qd)?.passed())
}

pub fn restrict(km: &KroneckerModule, w: &[Vec<Gq>]) -> Result<KroneckerModule> {
    km.restrict(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq;

    fn diag(a: i64, b: i64) -> ExactMatrix {
        ExactMatrix::from_int_rows(&[&[a, 0], &[0, b]])
    }

    #[test]
    fn evaluation_basics() {
        let km = KroneckerModule::new(vec![ExactMatrix::identity(2)]).unwrap();
        assert_eq!(km.evaluate(&[gq(1, 0), gq(0, 0)], &[gq(1, 0)]).unwrap(), vec![gq(1, 0), gq(0, 0)]);
        assert!(km.evaluate(&[gq(1, 0), gq(2, 0)], &[gq(0, 0)]).unwrap().iter().all(Gq::is_zero));
        assert!(km.slice_rank(&[gq(0, 0)]).is_err());
    }

    #[test]
    fn pencil_failures() {
        let km = KroneckerModule::new(vec![diag(1, 0), diag(0, 0)]).unwrap();
        let cert = km.certificate(0, DEFAULT_TRIALS).unwrap();
        assert_eq!(
            cert,
            Certificate::ExactFail {
                witness: Some(vec![gq(0, 0), gq(1, 0)]),
                locus: None
            }
        );
        let km = KroneckerModule::new(vec![ExactMatrix::zeros(2, 2), ExactMatrix::identity(2)]).unwrap();
        assert_eq!(km.slice_rank(&[gq(1, 0), gq(0, 0)]).unwrap(), 0);
        // z0·I + z1·diag(1, 2) degenerates at z0 = -z1 and z0 = -2 z1
        let km = KroneckerModule::new(vec![ExactMatrix::identity(2), diag(1, 2)]).unwrap();
        match km.certificate(0, DEFAULT_TRIALS).unwrap() {
            Certificate::ExactFail { witness: Some(z), locus: Some(g) } => {
                assert_eq!(g.degree(), 2);
                assert_eq!(km.slice_rank(&z).unwrap(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pencil_pass() {
        // column (z0, z1): injective on every slice
        let a = ExactMatrix::from_int_rows(&[&[1], &[0]]);
        let b = ExactMatrix::from_int_rows(&[&[0], &[1]]);
        let km = KroneckerModule::new(vec![a, b]).unwrap();
        assert!(matches!(km.certificate(0, 0).unwrap(), Certificate::ExactPass { .. }));
    }

    #[test]
    fn sigma_variants() {
        let z = vec![gq(1, 2), gq(3, -1), gq(0, 1), gq(5, 0)];
        let s = SigmaVariant::Standard;
        let twice = s.apply(&s.apply(&z).unwrap()).unwrap();
        assert_eq!(twice, z.iter().map(|c| -c.clone()).collect::<Vec<_>>());
        assert_eq!(s.apply(&z).unwrap()[0], -gq(3, 1));
        let sp = SigmaVariant::Split;
        assert_eq!(sp.apply(&sp.apply(&z).unwrap()).unwrap(), z);
        assert!(SigmaVariant::Mask(vec![true]).apply(&z).is_err());
        assert!(s.apply(&z[..3]).is_err());
    }

    #[test]
    fn restriction() {
        let km = KroneckerModule::new(vec![diag(1, 0), diag(0, 1), diag(1, 1)]).unwrap();
        let same = km
            .restrict(&[
                vec![gq(1, 0), gq(0, 0), gq(0, 0)],
                vec![gq(0, 0), gq(1, 0), gq(0, 0)],
                vec![gq(0, 0), gq(0, 0), gq(1, 0)],
            ])
            .unwrap();
        assert_eq!(same, km);
        assert!(km.restrict(&[vec![gq(1, 0), gq(0, 0), gq(0, 0)], vec![gq(2, 0), gq(0, 0), gq(0, 0)]]).is_err());
    }
}
