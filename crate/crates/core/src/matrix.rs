//! Dense matrices over `Q(i)` with exact rank, kernel, determinant and inertia.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Gq;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Gq>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Gq::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Gq::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from columns; every column must have length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Gq>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Gq::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Gq {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gq) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Gq] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Gq> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Gq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Gq::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Gq::conj).collect(),
        }
    }

    pub fn scale(&self, s: &Gq) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Gq::one()))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Gq]) -> Result<Vec<Gq>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Gq::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Rank over `Q(i)` by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss(self).rank
    }

    pub fn det(&self) -> Result<Gq> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Gq::one());
        }
        let out = bareiss(self);
        if out.rank < self.rows {
            return Ok(Gq::zero());
        }
        let last = out.last_pivot.expect("full rank has a pivot");
        let mut det = last.into_gq();
        if out.swaps % 2 == 1 {
            det = -det;
        }
        let scale = out
            .row_scales
            .iter()
            .fold(BigInt::one(), |acc, s| acc * s);
        Ok(det.scale(&BigRational::new(BigInt::one(), scale)))
    }

    /// Reduced row echelon form and its pivot columns. Pivot = first nonzero
    /// entry in column order, rows scanned top-down.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let pivot_entry = m.get(r, j);
                    if pivot_entry.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&factor * pivot_entry);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel, one vector per free column of the RREF,
    /// scaled so the first nonzero coordinate is 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Gq>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Gq::zero(); self.cols];
                v[f] = Gq::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                normalize_leading(&mut v);
                v
            })
            .collect()
    }

    /// Inertia `(positive, negative)` of a real symmetric matrix by exact
    /// congruence reduction.
    pub fn signature(&self) -> Result<(usize, usize)> {
        if self.rows != self.cols {
            return Err(Error::Invalid("signature needs a square matrix".into()));
        }
        if self.entries.iter().any(|e| !e.is_real()) {
            return Err(Error::Invalid("signature needs a real matrix".into()));
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::Invalid("signature needs a symmetric matrix".into()));
                }
            }
        }
        let mut s: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).re.clone()).collect())
            .collect();
        let mut active: Vec<usize> = (0..n).collect();
        let (mut pos, mut neg) = (0, 0);
        while !active.is_empty() {
            let diag = active.iter().copied().find(|&i| !s[i][i].is_zero());
            let pivot = match diag {
                Some(i) => i,
                None => {
                    let pair = active.iter().enumerate().find_map(|(ai, &i)| {
                        active[ai + 1..]
                            .iter()
                            .copied()
                            .find(|&j| !s[i][j].is_zero())
                            .map(|j| (i, j))
                    });
                    let Some((i, j)) = pair else { break };
                    // row_i += row_j, col_i += col_j makes s[i][i] = 2 s[i][j]
                    for &k in &active {
                        let v = s[j][k].clone();
                        s[i][k] += v;
                    }
                    for &k in &active {
                        let v = s[k][j].clone();
                        s[k][i] += v;
                    }
                    i
                }
            };
            let p = s[pivot][pivot].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&k| k != pivot);
            for &a in &active {
                if s[a][pivot].is_zero() {
                    continue;
                }
                let f = &s[a][pivot] / &p;
                for &b in &active {
                    let v = &f * &s[pivot][b];
                    s[a][b] -= v;
                }
            }
        }
        Ok((pos, neg))
    }
}

/// Scale a vector so its first nonzero coordinate is 1.
pub fn normalize_leading(v: &mut [Gq]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero");
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
        }
    }
}

/// Rank of a list of vectors (as rows).
pub fn rank_of_vectors(vectors: &[Vec<Gq>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ExactMatrix::from_rows(vectors.to_vec())
        .map(|m| m.rank())
        .unwrap_or(0)
}

pub fn mat_rank(m: &ExactMatrix) -> usize {
    m.rank()
}

pub fn mat_kernel_basis(m: &ExactMatrix) -> Vec<Vec<Gq>> {
    m.kernel_basis()
}

pub fn mat_signature(m: &ExactMatrix) -> Result<(usize, usize)> {
    m.signature()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self {
                re: &self.re * &o.re,
                im: BigInt::zero(),
            };
        }
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Exact division; the caller guarantees divisibility.
    fn div_exact(&self, d: &Self) -> Self {
        if d.im.is_zero() {
            return Self {
                re: &self.re / &d.re,
                im: &self.im / &d.re,
            };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!(re.is_multiple_of(&n) && im.is_multiple_of(&n));
        Self { re: re / &n, im: im / n }
    }

    fn into_gq(self) -> Gq {
        Gq::new(BigRational::from_integer(self.re), BigRational::from_integer(self.im))
    }
}

struct BareissOutcome {
    rank: usize,
    swaps: usize,
    last_pivot: Option<GaussInt>,
    row_scales: Vec<BigInt>,
}

fn bareiss(m: &ExactMatrix) -> BareissOutcome {
    let (rows, cols) = (m.rows, m.cols);
    let mut row_scales = Vec::with_capacity(rows);
    let mut a: Vec<Vec<GaussInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_lcm()));
            let out = row
                .iter()
                .map(|x| GaussInt {
                    re: (&x.re * BigRational::from_integer(l.clone())).to_integer(),
                    im: (&x.im * BigRational::from_integer(l.clone())).to_integer(),
                })
                .collect();
            row_scales.push(l);
            out
        })
        .collect();
    let one = GaussInt {
        re: BigInt::one(),
        im: BigInt::zero(),
    };
    let mut prev = one;
    let mut r = 0;
    let mut swaps = 0;
    let mut last_pivot = None;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let lhs = pivot.mul(&row[j]);
                let v = if lead.is_zero() || pivot_row[j].is_zero() {
                    lhs
                } else {
                    lhs.sub(&lead.mul(&pivot_row[j]))
                };
                row[j] = v.div_exact(&prev);
            }
            row[c] = GaussInt {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
        }
        prev = pivot.clone();
        last_pivot = Some(pivot);
        r += 1;
    }
    BareissOutcome {
        rank: r,
        swaps,
        last_pivot,
        row_scales,
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Gq>>::deserialize(deserializer)?;
        ExactMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq;

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(2).rank(), 2);
        assert_eq!(ExactMatrix::zeros(3, 3).rank(), 0);
        let m = ExactMatrix::from_rows(vec![vec![gq(1, 0), gq(0, 1)], vec![gq(0, 1), gq(-1, 0)]])
            .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let m = ExactMatrix::from_int_rows(&[&[1, 0]]);
        assert_eq!(m.kernel_basis(), vec![vec![gq(0, 0), gq(1, 0)]]);
        assert!(ExactMatrix::identity(3).kernel_basis().is_empty());
        let m = ExactMatrix::from_int_rows(&[&[1, 1], &[2, 2]]);
        assert_eq!(m.kernel_basis(), vec![vec![gq(1, 0), gq(-1, 0)]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = ExactMatrix::from_rows(vec![
            vec![gq(1, 1), gq(2, 0), gq(0, 3), gq(1, 0)],
            vec![gq(2, 2), gq(4, 0), gq(0, 6), gq(2, 0)],
            vec![gq(0, 0), gq(1, -1), gq(5, 0), gq(0, 0)],
        ])
        .unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len() + m.rank(), 4);
        for v in ker {
            assert!(m.mul_vec(&v).unwrap().iter().all(Gq::is_zero));
        }
    }

    #[test]
    fn determinant_matches_expansion() {
        let m = ExactMatrix::from_rows(vec![
            vec![gq(0, 0), gq(2, 0), gq(1, 0)],
            vec!["1/2".parse().unwrap(), gq(1, 1), gq(3, 0)],
            vec![gq(4, 0), gq(0, 0), gq(0, -1)],
        ])
        .unwrap();
        // cofactor expansion along the first row
        let e = |i: usize, j: usize| m.get(i, j).clone();
        let expected = -(e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        assert_eq!(m.det().unwrap(), expected);
        assert_eq!(ExactMatrix::zeros(2, 2).det().unwrap(), Gq::zero());
    }

    #[test]
    fn signature_examples() {
        let d = ExactMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        assert_eq!(d.signature().unwrap(), (1, 1));
        assert_eq!(ExactMatrix::identity(3).signature().unwrap(), (3, 0));
        let hyperbolic = ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(hyperbolic.signature().unwrap(), (1, 1));
        let degenerate = ExactMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(degenerate.signature().unwrap(), (1, 0));
        assert!(ExactMatrix::from_int_rows(&[&[0, 1], &[2, 0]]).signature().is_err());
        let complex = ExactMatrix::from_rows(vec![vec![gq(0, 1)]]).unwrap();
        assert!(complex.signature().is_err());
    }
}
