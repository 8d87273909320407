//! Tangent cosets `(degree-d forms)^(n+1) / Dφ(linear pairs)` and the α-map.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::laurent::Laurent;
use super::RationalCurve;
use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::kronecker::KroneckerModule;
use crate::matrix::{rank_of_vectors, ExactMatrix};
use crate::scalar::Gq;

/// `(p1, p2, u)` with `p1, p2` of degree `d - 1`, both divisible by `x1^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EFiberElement {
    pub p1: BinaryForm,
    pub p2: BinaryForm,
    pub u: Vec<Gq>,
}

impl EFiberElement {
    pub fn new(d: i64, n: usize, p1: BinaryForm, p2: BinaryForm, u: Vec<Gq>) -> Result<Self> {
        for p in [&p1, &p2] {
            if p.degree() != d - 1 && !p.is_zero() {
                return Err(Error::Degree(format!("E-fiber forms need degree {}", d - 1)));
            }
            if !p.is_zero() && p.x1_multiplicity() < 2 {
                return Err(Error::Invalid("E-fiber forms must be divisible by x1^2".into()));
            }
        }
        if u.len() != n + 1 {
            return Err(Error::Dimension(format!("u needs {} entries", n + 1)));
        }
        let fix = |p: BinaryForm| if p.is_zero() { BinaryForm::zero(d - 1) } else { p };
        Ok(Self {
            p1: fix(p1),
            p2: fix(p2),
            u,
        })
    }

    /// Parameter layout `[p1 coeffs 2..d-1, p2 coeffs 2..d-1, u_0..u_n]`.
    pub fn from_params(d: i64, n: usize, params: &[Gq]) -> Result<Self> {
        let m = (d - 2) as usize;
        if params.len() != 2 * m + n + 1 {
            return Err(Error::Dimension(format!(
                "E-fiber parameters: expected {}, got {}",
                2 * m + n + 1,
                params.len()
            )));
        }
        let form = |chunk: &[Gq]| {
            let mut coeffs = vec![Gq::zero(), Gq::zero()];
            coeffs.extend(chunk.iter().cloned());
            BinaryForm::new(d - 1, coeffs).expect("length d")
        };
        Ok(Self {
            p1: form(&params[..m]),
            p2: form(&params[m..2 * m]),
            u: params[2 * m..].to_vec(),
        })
    }

    pub fn params(&self) -> Vec<Gq> {
        let mut out: Vec<Gq> = self.p1.coeffs()[2..].to_vec();
        out.extend(self.p2.coeffs()[2..].iter().cloned());
        out.extend(self.u.iter().cloned());
        out
    }
}

/// Coset space of tangent representatives with canonical coordinates obtained
/// by eliminating the pivots of the reduced image of `Dφ(linear pairs)`.
#[derive(Clone, Debug)]
pub struct TangentSpace {
    curve: RationalCurve,
    jacobian: Vec<Vec<BinaryForm>>,
    reducers: Vec<Vec<Gq>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl TangentSpace {
    pub fn new(curve: &RationalCurve) -> Result<Self> {
        curve.check_shape()?;
        let (x0, x1, z) = (BinaryForm::x0(), BinaryForm::x1(), BinaryForm::zero(1));
        let pairs = [(&x0, &z), (&x1, &z), (&z, &x0), (&z, &x1)];
        let image: Vec<Vec<Gq>> = pairs
            .iter()
            .map(|(a, b)| flatten(&curve.dphi(a, b)))
            .collect();
        let (rref, pivots) = ExactMatrix::from_rows(image)?.rref();
        if pivots.len() != 4 {
            return Err(Error::Invalid(format!(
                "image of linear pairs has dimension {}, expected 4",
                pivots.len()
            )));
        }
        let ambient = (curve.n + 1) * (curve.d as usize + 1);
        let free = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        Ok(Self {
            curve: curve.clone(),
            jacobian: curve.jacobian(),
            reducers: rref.to_rows()[..4].to_vec(),
            pivots,
            free,
        })
    }

    pub fn curve(&self) -> &RationalCurve {
        &self.curve
    }

    pub(super) fn jacobian(&self) -> &[Vec<BinaryForm>] {
        &self.jacobian
    }

    pub fn ambient_dim(&self) -> usize {
        (self.curve.n + 1) * (self.curve.d as usize + 1)
    }

    /// `(n+1)(d+1) - 4`.
    pub fn dim(&self) -> usize {
        self.ambient_dim() - 4
    }

    /// `2d + n - 3`.
    pub fn e_dim(&self) -> usize {
        2 * self.curve.d as usize + self.curve.n - 3
    }

    pub fn flatten(&self, rep: &[BinaryForm]) -> Result<Vec<Gq>> {
        if rep.len() != self.curve.n + 1 || rep.iter().any(|f| f.degree() != self.curve.d) {
            return Err(Error::Dimension(format!(
                "tangent representative needs {} forms of degree {}",
                self.curve.n + 1,
                self.curve.d
            )));
        }
        Ok(flatten(rep))
    }

    pub fn unflatten(&self, v: &[Gq]) -> Vec<BinaryForm> {
        let w = self.curve.d as usize + 1;
        v.chunks(w)
            .map(|c| BinaryForm::new(self.curve.d, c.to_vec()).expect("chunk length"))
            .collect()
    }

    /// Coset representative with zero pivot coordinates.
    pub fn reduce(&self, v: &[Gq]) -> Vec<Gq> {
        let mut v = v.to_vec();
        for (row, &p) in self.reducers.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn coords_of_vector(&self, v: &[Gq]) -> Vec<Gq> {
        let r = self.reduce(v);
        self.free.iter().map(|&i| r[i].clone()).collect()
    }

    pub fn coords(&self, rep: &[BinaryForm]) -> Result<Vec<Gq>> {
        Ok(self.coords_of_vector(&self.flatten(rep)?))
    }

    /// Canonical representative for the given coordinates.
    pub fn lift(&self, coords: &[Gq]) -> Vec<BinaryForm> {
        let mut v = vec![Gq::zero(); self.ambient_dim()];
        for (&i, c) in self.free.iter().zip(coords) {
            v[i] = c.clone();
        }
        self.unflatten(&v)
    }

    pub fn canonical(&self, rep: &[BinaryForm]) -> Result<Vec<BinaryForm>> {
        Ok(self.unflatten(&self.reduce(&self.flatten(rep)?)))
    }

    pub fn e_basis(&self) -> Vec<EFiberElement> {
        let m = self.e_dim();
        (0..m)
            .map(|a| {
                let mut p = vec![Gq::zero(); m];
                p[a] = Gq::one();
                EFiberElement::from_params(self.curve.d, self.curve.n, &p).expect("basis length")
            })
            .collect()
    }

    /// Raw representative `(Dφ(p1,p2) mod f_t) + u·f_t`, with remainders taken
    /// on the default division chart or the chart with the given shift.
    pub fn alpha_raw(&self, e: &EFiberElement, t: &[Gq], shift: Option<i64>) -> Result<Vec<BinaryForm>> {
        let ft = self.curve.hyperplane_form(t)?;
        let dp = self.curve.dphi(&e.p1, &e.p2);
        dp.iter()
            .zip(&e.u)
            .map(|(g, ui)| {
                let g = if g.is_zero() {
                    BinaryForm::zero(2 * self.curve.d - 2)
                } else {
                    g.clone()
                };
                let dr = match shift {
                    Some(c) => g.divrem_with_shift(&ft, c)?,
                    None => g.divrem(&ft)?,
                };
                Ok(&dr.remainder + &ft.scale(ui))
            })
            .collect()
    }

    /// α(e ⊗ t) in canonical coordinates, via componentwise division.
    pub fn alpha_eval(&self, e: &EFiberElement, t: &[Gq]) -> Result<Vec<Gq>> {
        self.coords(&self.alpha_raw(e, t, None)?)
    }

    /// Representative of α(e ⊗ t) that is linear in `t`, built from the
    /// cocycle `c = (p1, p2) / (x0^(d-2) x1^d)`:
    /// `q = -f_t·[Dφ(c)]_+ + Dφ([f_t·c]_+) + u·f_t`.
    pub fn alpha_linear_raw(&self, e: &EFiberElement, t: &[Gq]) -> Result<Vec<BinaryForm>> {
        let d = self.curve.d;
        let ft = self.curve.hyperplane_form(t)?;
        let c = [
            Laurent::quotient(&e.p1, d - 2, d),
            Laurent::quotient(&e.p2, d - 2, d),
        ];
        let f = [c[0].mul_form(&ft).nonneg_part(), c[1].mul_form(&ft).nonneg_part()];
        self.jacobian
            .iter()
            .zip(&e.u)
            .map(|(row, ui)| {
                let dphi_c = c[0].mul_form(&row[0]).add(&c[1].mul_form(&row[1]));
                let b = dphi_c.nonneg_part();
                let dphi_f = f[0].mul_form(&row[0]).add(&f[1].mul_form(&row[1]));
                let q = b
                    .mul_form(&ft)
                    .neg()
                    .add(&dphi_f)
                    .add(&Laurent::from_form(&ft.scale(ui)));
                q.to_form().ok_or_else(|| {
                    Error::Inconsistent("cocycle representative is not polynomial".into())
                })
            })
            .collect()
    }

    pub fn alpha_linear(&self, e: &EFiberElement, t: &[Gq]) -> Result<Vec<Gq>> {
        self.coords(&self.alpha_linear_raw(e, t)?)
    }

    /// Columns `alpha_eval(basis_a, t)`, shape `dim × e_dim`.
    pub fn alpha_image_matrix(&self, t: &[Gq]) -> Result<ExactMatrix> {
        let cols: Vec<Vec<Gq>> = self
            .e_basis()
            .iter()
            .map(|e| self.alpha_eval(e, t))
            .collect::<Result<_>>()?;
        ExactMatrix::from_cols(self.dim(), &cols)
    }

    pub fn alpha_slice_rank(&self, t: &[Gq]) -> Result<usize> {
        Ok(self.alpha_image_matrix(t)?.rank())
    }

    /// The `(n+1)`-Kronecker module `A_i = α(· ⊗ e_i)` from the linear representative.
    pub fn kronecker_module(&self) -> Result<KroneckerModule> {
        let r = self.curve.n + 1;
        let basis = self.e_basis();
        let maps = (0..r)
            .map(|i| {
                let mut t = vec![Gq::zero(); r];
                t[i] = Gq::one();
                let cols: Vec<Vec<Gq>> = basis
                    .iter()
                    .map(|e| self.alpha_linear(e, &t))
                    .collect::<Result<_>>()?;
                ExactMatrix::from_cols(self.dim(), &cols)
            })
            .collect::<Result<_>>()?;
        KroneckerModule::new(maps)
    }

    fn two_minors(&self) -> BTreeMap<(usize, usize), BinaryForm> {
        let j = &self.jacobian;
        (0..=self.curve.n)
            .tuple_combinations()
            .map(|(a, b)| {
                let m = &j[a][0].multiply(&j[b][1]) - &j[a][1].multiply(&j[b][0]);
                ((a, b), m)
            })
            .collect()
    }

    /// Remainders mod `f_t` of all 3x3 minors of `[Dφ | rep]`, concatenated.
    pub fn vanishing_remainders(&self, rep: &[BinaryForm], t: &[Gq]) -> Result<Vec<Gq>> {
        self.flatten(rep)?;
        let ft = self.curve.hyperplane_form(t)?;
        let m2 = self.two_minors();
        let mut out = Vec::new();
        for (a, b, c) in (0..=self.curve.n).tuple_combinations() {
            // cofactor expansion along the rep column
            let minor = &(&rep[a].multiply(&m2[&(b, c)]) - &rep[b].multiply(&m2[&(a, c)]))
                + &rep[c].multiply(&m2[&(a, b)]);
            let minor = if minor.is_zero() {
                BinaryForm::zero(3 * self.curve.d - 2)
            } else {
                minor
            };
            out.extend(minor.divrem(&ft)?.remainder.coeffs().iter().cloned());
        }
        Ok(out)
    }

    /// `f_t` divides every 3x3 minor of `[Dφ | rep]`.
    pub fn vanishing_check(&self, rep: &[BinaryForm], t: &[Gq]) -> Result<bool> {
        Ok(self.vanishing_remainders(rep, t)?.iter().all(Gq::is_zero))
    }

    /// Basis (canonical coordinates) of the tangents vanishing along `f_t = 0`.
    pub fn vanishing_subspace(&self, t: &[Gq]) -> Result<Vec<Vec<Gq>>> {
        let ambient = self.ambient_dim();
        let cols: Vec<Vec<Gq>> = (0..ambient)
            .map(|i| {
                let mut v = vec![Gq::zero(); ambient];
                v[i] = Gq::one();
                self.vanishing_remainders(&self.unflatten(&v), t)
            })
            .collect::<Result<_>>()?;
        let rows = cols.first().map_or(0, Vec::len);
        let kernel = ExactMatrix::from_cols(rows, &cols)?.kernel_basis();
        let projected: Vec<Vec<Gq>> = kernel.iter().map(|v| self.coords_of_vector(v)).collect();
        Ok(row_space_basis(&projected))
    }
}

fn flatten(rep: &[BinaryForm]) -> Vec<Gq> {
    rep.iter().flat_map(|f| f.coeffs().iter().cloned()).collect()
}

/// Nonzero rows of the reduced echelon form.
pub(crate) fn row_space_basis(vectors: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = ExactMatrix::from_rows(vectors.to_vec())
        .expect("equal lengths")
        .rref();
    r.to_rows().into_iter().take(pivots.len()).collect()
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(a: &[Vec<Gq>], b: &[Vec<Gq>]) -> bool {
    let (ra, rb) = (rank_of_vectors(a), rank_of_vectors(b));
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    ra == rb && rank_of_vectors(&all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::twisted_cubic;
    use crate::scalar::gq;

    fn e3() -> Vec<Gq> {
        vec![gq(0, 0), gq(0, 0), gq(0, 0), gq(1, 0)]
    }

    #[test]
    fn dimensions() {
        let ts = TangentSpace::new(&twisted_cubic()).unwrap();
        assert_eq!(ts.dim(), 12);
        assert_eq!(ts.e_dim(), 6);
    }

    #[test]
    fn worked_representative_at_last_coordinate() {
        let ts = TangentSpace::new(&twisted_cubic()).unwrap();
        // p1 = c1 x1^2, p2 = c2 x1^2 with c1 = 2, c2 = 5, u = (1, 2, 3, 4)
        let params: Vec<Gq> = [2, 5, 1, 2, 3, 4].iter().map(|&v| gq(v, 0)).collect();
        let e = EFiberElement::from_params(3, 3, &params).unwrap();
        let raw = ts.alpha_raw(&e, &e3(), None).unwrap();
        let expected = [[0, 0, 6, 1], [0, 0, 5, 2], [0, 0, 0, 3], [0, 0, 0, 4]];
        for (f, want) in raw.iter().zip(expected) {
            assert_eq!(f, &BinaryForm::from_ints(&want));
        }
        let lin = ts.alpha_linear_raw(&e, &e3()).unwrap();
        assert_eq!(lin, raw);
    }

    #[test]
    fn zero_element_maps_to_zero() {
        let ts = TangentSpace::new(&twisted_cubic()).unwrap();
        let e = EFiberElement::from_params(3, 3, &vec![Gq::zero(); 6]).unwrap();
        let t = vec![gq(1, 0), gq(2, -1), gq(0, 0), gq(3, 0)];
        assert!(ts.alpha_eval(&e, &t).unwrap().iter().all(Gq::is_zero));
        assert!(ts.alpha_eval(&e, &vec![Gq::zero(); 4]).is_err());
    }

    #[test]
    fn canonicalization_is_idempotent_and_kills_image() {
        let c = twisted_cubic();
        let ts = TangentSpace::new(&c).unwrap();
        let img = c.dphi(&BinaryForm::x1(), &BinaryForm::from_ints(&[2, -1]));
        assert!(ts.coords(&img).unwrap().iter().all(Gq::is_zero));
        let v: Vec<Gq> = (0..16).map(|i| gq(i * 7 % 5 - 2, i % 3)).collect();
        let once = ts.reduce(&v);
        assert_eq!(ts.reduce(&once), once);
        assert_eq!(ts.coords(&ts.lift(&ts.coords_of_vector(&v))).unwrap(), ts.coords_of_vector(&v));
    }

    #[test]
    fn vanishing_examples() {
        let c = twisted_cubic();
        let ts = TangentSpace::new(&c).unwrap();
        let t = vec![gq(1, 0), gq(-2, 0), gq(3, 0), gq(1, 0)];
        let zero = vec![BinaryForm::zero(3); 4];
        assert!(ts.vanishing_check(&zero, &t).unwrap());
        let mut moved = zero.clone();
        moved[0] = BinaryForm::from_ints(&[1, 0, 0, 0]);
        assert!(!ts.vanishing_check(&moved, &t).unwrap());
        let sub = ts.vanishing_subspace(&t).unwrap();
        assert_eq!(sub.len(), 6);
    }

    #[test]
    fn e_fiber_validation() {
        let good = BinaryForm::from_ints(&[0, 0, 1]);
        let bad = BinaryForm::from_ints(&[0, 1, 0]);
        let u = vec![Gq::zero(); 4];
        assert!(EFiberElement::new(3, 3, good.clone(), good.clone(), u.clone()).is_ok());
        assert!(EFiberElement::new(3, 3, bad, good, u).is_err());
    }
}
