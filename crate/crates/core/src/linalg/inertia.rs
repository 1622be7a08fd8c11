//! Inertia of a symmetric matrix by congruence diagonalization over Q.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BigIntMatrix, LinalgError, PivotPolicy};

/// `(n_zero, n_plus, n_minus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub n_zero: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl Inertia {
    pub fn new(n_zero: usize, n_plus: usize, n_minus: usize) -> Self {
        Inertia { n_zero, n_plus, n_minus }
    }

    pub fn dim(&self) -> usize {
        self.n_zero + self.n_plus + self.n_minus
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n_zero, self.n_plus, self.n_minus)
    }
}

fn symmetric_swap(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

pub fn symmetric_inertia(m: &BigIntMatrix) -> Result<Inertia, LinalgError> {
    symmetric_inertia_with(m, PivotPolicy::MaxAbs)
}

/// `policy` selects among the nonzero diagonal entries of the trailing block.
/// When that diagonal is entirely zero but the block is not, a 2x2 pivot
/// `[[0, a], [a, 0]]` is eliminated instead, contributing one positive and one
/// negative square.
pub fn symmetric_inertia_with(m: &BigIntMatrix, policy: PivotPolicy) -> Result<Inertia, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = m
        .to_row_vecs()
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut out = Inertia::new(0, 0, 0);
    let mut k = 0;
    while k < n {
        if let Some(off) = policy.pick((k..n).map(|i| &a[i][i])) {
            symmetric_swap(&mut a, k, k + off);
            let d = a[k][k].clone();
            if d.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            let pivot_row = a[k].clone();
            for row in a.iter_mut().skip(k + 1) {
                if row[k].is_zero() {
                    continue;
                }
                let factor = &row[k] / &d;
                for s in k + 1..n {
                    if !pivot_row[s].is_zero() {
                        let t = &factor * &pivot_row[s];
                        row[s] -= t;
                    }
                }
            }
            k += 1;
            continue;
        }

        let off_diag = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((i, j)) = off_diag else {
            out.n_zero += n - k;
            break;
        };
        // j > i >= k, so the first swap never moves column j.
        symmetric_swap(&mut a, k, i);
        symmetric_swap(&mut a, k + 1, j);
        let pivot = a[k][k + 1].clone();
        let (row_x, row_y) = (a[k].clone(), a[k + 1].clone());
        for r in k + 2..n {
            let (x, y) = (row_x[r].clone(), row_y[r].clone());
            if x.is_zero() && y.is_zero() {
                continue;
            }
            for s in k + 2..n {
                let t = (&x * &row_y[s] + &y * &row_x[s]) / &pivot;
                if !t.is_zero() {
                    a[r][s] -= t;
                }
            }
        }
        out.n_plus += 1;
        out.n_minus += 1;
        k += 2;
    }
    Ok(out)
}
