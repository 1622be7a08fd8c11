//! Fraction-free (Bareiss) elimination: determinant and rank.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BigIntMatrix, LinalgError, PivotPolicy};

/// One Bareiss step on the trailing block below/right of `(k, k)`.
///
/// Afterwards every trailing entry equals the `(k+1) x (k+1)` minor built from
/// the leading pivots plus that entry's row and column, so the division by the
/// previous pivot is exact.
fn bareiss_step(a: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let (top, bottom) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    let pivot = &pivot_row[k];
    let cols = pivot_row.len();
    for row in bottom.iter_mut() {
        let lead = std::mem::take(&mut row[k]);
        for j in k + 1..cols {
            let mut v = &row[j] * pivot;
            if !lead.is_zero() && !pivot_row[j].is_zero() {
                v -= &lead * &pivot_row[j];
            }
            if !prev.is_one() {
                v /= prev;
            }
            row[j] = v;
        }
    }
}

/// Exact determinant with partial pivoting on the first nonzero entry.
pub fn bareiss_det(m: &BigIntMatrix) -> Result<BigInt, LinalgError> {
    bareiss_det_with(m, PivotPolicy::First)
}

pub fn bareiss_det_with(m: &BigIntMatrix, policy: PivotPolicy) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_row_vecs();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(offset) = policy.pick(a[k..].iter().map(|row| &row[k])) else {
            return Ok(BigInt::zero());
        };
        if offset != 0 {
            a.swap(k, k + offset);
            negate = !negate;
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Rank together with the rows and columns of a nonsingular `rank x rank`
/// submatrix, found by complete pivoting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

pub fn rank_profile(m: &BigIntMatrix, policy: PivotPolicy) -> RankProfile {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_row_vecs();
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < rows.min(cols) {
        let width = cols - k;
        let found = policy.pick(a[k..].iter().flat_map(|row| row[k..].iter()));
        let Some(flat) = found else { break };
        let (pi, pj) = (k + flat / width, k + flat % width);
        a.swap(k, pi);
        row_perm.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            col_perm.swap(k, pj);
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
        k += 1;
    }
    row_perm.truncate(k);
    col_perm.truncate(k);
    RankProfile { rank: k, pivot_rows: row_perm, pivot_cols: col_perm }
}

/// Rank over the rationals.
pub fn exact_rank(m: &BigIntMatrix) -> usize {
    rank_profile(m, PivotPolicy::MinAbs).rank
}

pub fn rank_with(m: &BigIntMatrix, policy: PivotPolicy) -> usize {
    rank_profile(m, policy).rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let m = BigIntMatrix::from_rows(&[[2, 3], [3, 4]]);
        assert_eq!(bareiss_det(&m).unwrap(), BigInt::from(-1));
        assert_eq!(bareiss_det(&BigIntMatrix::identity(5)).unwrap(), BigInt::one());
        assert_eq!(bareiss_det(&BigIntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
        // needs a row swap
        let m = BigIntMatrix::from_rows(&[[0, 1, 2], [3, 0, 1], [1, 1, 0]]);
        assert_eq!(bareiss_det(&m).unwrap(), BigInt::from(7));
        let singular = BigIntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(bareiss_det(&singular).unwrap(), BigInt::zero());
    }

    #[test]
    fn det_requires_square() {
        let m = BigIntMatrix::zeros(2, 3);
        assert_eq!(bareiss_det(&m), Err(LinalgError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn ranks() {
        assert_eq!(exact_rank(&BigIntMatrix::zeros(4, 3)), 0);
        let p3 = BigIntMatrix::from_rows(&[[2, 3, 2], [3, 4, 3], [2, 3, 2]]);
        assert_eq!(exact_rank(&p3), 2);
        let wide = BigIntMatrix::from_rows(&[[1, 2, 3, 4], [2, 4, 6, 8]]);
        assert_eq!(exact_rank(&wide), 1);
    }

    #[test]
    fn profile_selects_nonsingular_block() {
        let m = BigIntMatrix::from_rows(&[[0, 0, 0], [0, 2, 4], [0, 1, 3]]);
        for policy in [PivotPolicy::First, PivotPolicy::MinAbs, PivotPolicy::MaxAbs] {
            let prof = rank_profile(&m, policy);
            assert_eq!(prof.rank, 2);
            let block = m.select(&prof.pivot_rows, &prof.pivot_cols);
            assert_ne!(bareiss_det(&block).unwrap(), BigInt::zero());
        }
    }
}
