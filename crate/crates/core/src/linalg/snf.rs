//! Smith normal form over the integers by repeated gcd reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{bigint_json, BigIntMatrix, PivotPolicy};

/// Invariant factors in divisibility-chain order: nonzero factors ascending
/// along the chain, then the zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub invariant_factors: Vec<BigInt>,
}

/// Unimodular `u` (rows x rows) and `v` (cols x cols) with `u * m * v = diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfTransforms {
    pub u: BigIntMatrix,
    pub v: BigIntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Every nonzero factor divides the next one and zeros come last.
    pub fn satisfies_chain(&self) -> bool {
        let f = &self.invariant_factors;
        let r = self.rank();
        f[..r].iter().all(|d| d.is_positive())
            && f[r..].iter().all(Zero::is_zero)
            && f[..r].windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }

    /// Zeros first, then the nonzero chain. This is the order used in reports.
    pub fn zeros_first(&self) -> Vec<BigInt> {
        let r = self.rank();
        let mut out = self.invariant_factors[r..].to_vec();
        out.extend_from_slice(&self.invariant_factors[..r]);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let factors: Vec<_> = self.zeros_first().iter().map(bigint_json).collect();
        serde_json::json!({ "invariant_factors": factors })
    }

    /// The diagonal matrix of the same shape as the input.
    pub fn diagonal(&self, rows: usize, cols: usize) -> BigIntMatrix {
        let mut d = BigIntMatrix::zeros(rows, cols);
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d[(i, i)] = f.clone();
        }
        d
    }
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `dst -= q * src` on two rows of `m`.
fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (s, d) = if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// `col dst -= q * col src`.
fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

impl Reducer {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for row in v.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
    }

    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        row_axpy(&mut self.a, dst, src, q);
        if let Some(u) = &mut self.u {
            row_axpy(u, dst, src, q);
        }
    }

    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        col_axpy(&mut self.a, dst, src, q);
        if let Some(v) = &mut self.v {
            col_axpy(v, dst, src, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    /// Diagonalizes the matrix; returns the number of nonzero pivots.
    fn diagonalize(&mut self, policy: PivotPolicy) -> usize {
        let (rows, cols) = (self.rows(), self.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let width = cols - t;
            let Some(flat) = policy.pick(self.a[t..].iter().flat_map(|row| row[t..].iter())) else {
                break;
            };
            self.swap_rows(t, t + flat / width);
            self.swap_cols(t, t + flat % width);

            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let q = &self.a[i][t] / &self.a[t][t];
                        if !q.is_zero() {
                            self.sub_row(i, t, &q);
                        }
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let q = &self.a[t][j] / &self.a[t][t];
                        if !q.is_zero() {
                            self.sub_col(j, t, &q);
                        }
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if clean {
                    break;
                }
                // A remainder smaller than the pivot survived: make the
                // smallest entry of the pivot cross the new pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    let v = &self.a[i][t];
                    if !v.is_zero() && v.abs() < self.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let v = &self.a[t][j];
                    if !v.is_zero() && v.abs() < self.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    /// Replaces diagonal entries `(a, b)` at positions `i < j` by
    /// `(gcd, lcm)` using unimodular operations.
    fn gcd_lcm(&mut self, i: usize, j: usize) {
        let a = self.a[i][i].clone();
        let b = self.a[j][j].clone();
        let ext = a.extended_gcd(&b);
        let (g, s, t) = (ext.gcd, ext.x, ext.y);
        if (&b % &a).is_zero() {
            return;
        }
        // col_i += col_j
        self.sub_col(i, j, &BigInt::from(-1));
        // [row_i; row_j] <- [[s, t], [-b/g, a/g]] [row_i; row_j]
        let combine = |m: &mut Vec<Vec<BigInt>>| {
            let ri = m[i].clone();
            let rj = m[j].clone();
            let (bg, ag) = (&b / &g, &a / &g);
            for k in 0..ri.len() {
                m[i][k] = &s * &ri[k] + &t * &rj[k];
                m[j][k] = &ag * &rj[k] - &bg * &ri[k];
            }
        };
        combine(&mut self.a);
        if let Some(u) = &mut self.u {
            combine(u);
        }
        // col_j -= (t b / g) col_i
        let q = &t * &b / &g;
        self.sub_col(j, i, &q);
        debug_assert_eq!(self.a[i][i], g);
    }
}

pub fn smith_normal_form(m: &BigIntMatrix) -> SnfResult {
    smith_normal_form_with(m, PivotPolicy::MinAbs, false).0
}

/// Full entry point: pivot policy and optional transform tracking.
pub fn smith_normal_form_with(
    m: &BigIntMatrix,
    policy: PivotPolicy,
    track: bool,
) -> (SnfResult, Option<SnfTransforms>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.to_row_vecs(),
        u: track.then(|| identity_rows(rows)),
        v: track.then(|| identity_rows(cols)),
    };
    let rank = r.diagonalize(policy);
    // Post-pass: enforce the divisibility chain on the nonzero diagonal.
    for i in 0..rank {
        for j in i + 1..rank {
            r.gcd_lcm(i, j);
        }
    }
    let factors: Vec<BigInt> = (0..rows.min(cols)).map(|i| r.a[i][i].clone()).collect();
    let transforms = match (r.u, r.v) {
        (Some(u), Some(v)) => Some(SnfTransforms {
            u: BigIntMatrix::from_row_vecs(u, rows),
            v: BigIntMatrix::from_row_vecs(v, cols),
        }),
        _ => None,
    };
    (SnfResult { invariant_factors: factors }, transforms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_transforms(m: &BigIntMatrix) -> SnfResult {
        let (res, tr) = smith_normal_form_with(m, PivotPolicy::MinAbs, true);
        let tr = tr.unwrap();
        assert_eq!(tr.u.mul(m).mul(&tr.v), res.diagonal(m.rows(), m.cols()));
        assert_eq!(super::super::bareiss_det(&tr.u).unwrap().abs(), BigInt::one());
        assert_eq!(super::super::bareiss_det(&tr.v).unwrap().abs(), BigInt::one());
        assert!(res.satisfies_chain());
        res
    }

    #[test]
    fn diagonal_needs_chain_fix() {
        let m = BigIntMatrix::from_rows(&[[2, 0], [0, 3]]);
        assert_eq!(check_transforms(&m).invariant_factors, ints(&[1, 6]));
    }

    #[test]
    fn p3_matrix() {
        let m = BigIntMatrix::from_rows(&[[2, 3, 2], [3, 4, 3], [2, 3, 2]]);
        let res = check_transforms(&m);
        assert_eq!(res.invariant_factors, ints(&[1, 1, 0]));
        assert_eq!(res.zeros_first(), ints(&[0, 1, 1]));
        assert_eq!(res.to_json(), serde_json::json!({"invariant_factors": [0, 1, 1]}));
    }

    #[test]
    fn rectangular_and_zero() {
        let m = BigIntMatrix::from_rows(&[[4, 6, 8], [6, 9, 12]]);
        assert_eq!(check_transforms(&m).invariant_factors, ints(&[1, 0]));
        let z = BigIntMatrix::zeros(2, 3);
        assert_eq!(check_transforms(&z).invariant_factors, ints(&[0, 0]));
        let m = BigIntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        assert_eq!(check_transforms(&m).invariant_factors, ints(&[2, 6, 12]));
    }
}
