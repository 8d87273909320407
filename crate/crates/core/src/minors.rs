//! Minors of matrices of binary forms, computed by evaluation at `(1, c)` and
//! interpolation, plus gcds over families of such minors.

use itertools::Itertools;

use crate::error::Result;
use crate::form::BinaryForm;
use crate::matrix::ExactMatrix;
use crate::scalar::Gq;

/// A matrix of forms together with its values at `(1, c)` for `c = 0..points`.
pub struct EvaluatedFormMatrix {
    values: Vec<ExactMatrix>,
}

impl EvaluatedFormMatrix {
    /// `points` must exceed the degree of every minor that will be requested.
    pub fn new(matrix: &[Vec<BinaryForm>], points: usize) -> Self {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        let values = (0..points)
            .map(|c| {
                let u = Gq::from_int(c as i64);
                let one = Gq::one();
                let mut m = ExactMatrix::zeros(rows, cols);
                for (i, row) in matrix.iter().enumerate() {
                    for (j, f) in row.iter().enumerate() {
                        m.set(i, j, f.evaluate(&one, &u));
                    }
                }
                m
            })
            .collect();
        Self { values }
    }

    /// The minor on the given rows and columns, known to have `degree`.
    pub fn minor(&self, rows: &[usize], cols: &[usize], degree: i64) -> Result<BinaryForm> {
        if degree < 0 {
            return Ok(BinaryForm::zero(degree));
        }
        let vals: Vec<Gq> = self.values[..degree as usize + 1]
            .iter()
            .map(|m| {
                let sub: Vec<Vec<Gq>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect())
                    .collect();
                ExactMatrix::from_rows(sub)
                    .and_then(|s| s.det())
                    .expect("square submatrix")
            })
            .collect();
        BinaryForm::interpolate(degree, &vals)
    }
}

/// Outcome of scanning the maximal minors of a tall matrix of forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorGcd {
    /// Some maximal minor is a nonzero form.
    pub some_nonzero: bool,
    /// Gcd of all maximal minors (only meaningful when `some_nonzero`).
    pub gcd: Option<BinaryForm>,
}

/// Gcd of the `s×s` minors of an `m×s` matrix of forms whose row-subset minor
/// degree is given by `degree_of(rows)`. Stops early once the gcd is constant.
pub fn maximal_minor_gcd(
    matrix: &[Vec<BinaryForm>],
    s: usize,
    degree_of: impl Fn(&[usize]) -> i64,
) -> Result<MinorGcd> {
    let m = matrix.len();
    if s == 0 {
        return Ok(MinorGcd {
            some_nonzero: true,
            gcd: Some(BinaryForm::one()),
        });
    }
    let subsets: Vec<Vec<usize>> = (0..m).combinations(s).collect();
    let max_deg = subsets.iter().map(|r| degree_of(r)).max().unwrap_or(0).max(0);
    let eval = EvaluatedFormMatrix::new(matrix, max_deg as usize + 1);
    let cols: Vec<usize> = (0..s).collect();
    let mut acc: Option<BinaryForm> = None;
    for rows in subsets {
        let minor = eval.minor(&rows, &cols, degree_of(&rows))?;
        if minor.is_zero() {
            continue;
        }
        let next = match acc {
            None => minor.normalized(),
            Some(g) => g.gcd(&minor)?,
        };
        let done = next.degree() == 0;
        acc = Some(next);
        if done {
            break;
        }
    }
    Ok(MinorGcd {
        some_nonzero: acc.is_some(),
        gcd: acc,
    })
}
