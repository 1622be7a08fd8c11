//! Exact integer and rational matrix kernel.
//!
//! Nothing in here rounds. The floating-point helpers in [`float`] exist only
//! as an advisory cross-check for the exact inertia computations.

mod charpoly;
mod elimination;
pub mod float;
mod inertia;
mod snf;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use charpoly::{char_poly, descartes_inertia, descartes_positive_roots, faddeev_leverrier, CharPoly};
pub use elimination::{bareiss_det, bareiss_det_with, exact_rank, rank_profile, rank_with, RankProfile};
pub use inertia::{symmetric_inertia, symmetric_inertia_with, Inertia};
pub use snf::{smith_normal_form, smith_normal_form_with, SnfResult, SnfTransforms};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a symmetric matrix")]
    NotSymmetric,
}

/// How elimination routines pick their next pivot among the admissible
/// nonzero candidates. Results never depend on this; only coefficient growth
/// does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotPolicy {
    /// First admissible candidate in row-major scan order.
    First,
    /// Candidate of smallest absolute value.
    #[default]
    MinAbs,
    /// Candidate of largest absolute value.
    MaxAbs,
}

impl PivotPolicy {
    /// Index of the chosen candidate, or `None` if every candidate is zero.
    pub(crate) fn pick<'a, T, I>(self, candidates: I) -> Option<usize>
    where
        T: Signed + PartialOrd + 'a,
        I: IntoIterator<Item = &'a T>,
    {
        let mut best: Option<(usize, &T)> = None;
        for (k, v) in candidates.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let better = match (self, best) {
                (_, None) => true,
                (PivotPolicy::First, Some(_)) => false,
                (PivotPolicy::MinAbs, Some((_, b))) => v.abs() < b.abs(),
                (PivotPolicy::MaxAbs, Some((_, b))) => v.abs() > b.abs(),
            };
            if better {
                best = Some((k, v));
                if self == PivotPolicy::First {
                    break;
                }
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct BigIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl BigIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigIntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        BigIntMatrix { rows, cols, data: entries.iter().map(|&e| BigInt::from(e)).collect() }
    }

    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&e| BigInt::from(e)));
        }
        BigIntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_pair_matrix(m: &crate::pair_matrix::PairMatrix) -> Self {
        Self::from_i64(m.dim(), m.dim(), m.entries())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &BigIntMatrix) -> BigIntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BigIntMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub(crate) fn to_row_vecs(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }

    pub(crate) fn from_row_vecs(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        BigIntMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for BigIntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for BigIntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for BigIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BigIntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// JSON number when the value fits in 64 bits, decimal string otherwise.
pub fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = BigIntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]);
        let b = a.transpose();
        assert_eq!(a.mul(&b), BigIntMatrix::from_rows(&[[14, 32], [32, 77]]));
        assert!(a.mul(&b).is_symmetric());
        assert!(!a.is_symmetric());
    }

    #[test]
    fn pivot_pick() {
        let v: Vec<BigInt> = [0, -3, 2, 5].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(PivotPolicy::First.pick(&v), Some(1));
        assert_eq!(PivotPolicy::MinAbs.pick(&v), Some(2));
        assert_eq!(PivotPolicy::MaxAbs.pick(&v), Some(3));
        let z = vec![BigInt::zero(); 3];
        assert_eq!(PivotPolicy::MinAbs.pick(&z), None);
    }

    #[test]
    fn large_values_serialize_as_strings() {
        assert_eq!(bigint_json(&BigInt::from(-7)), serde_json::json!(-7));
        let big = BigInt::from(i64::MAX) * 4;
        assert!(bigint_json(&big).is_string());
    }
}
