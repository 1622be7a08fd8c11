//! Exact characteristic polynomials and Descartes sign counting.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use super::elimination::rank_profile;
use super::{BigIntMatrix, Inertia, LinalgError, PivotPolicy};

/// Monic `det(xI - A)`; `coefficients[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub coefficients: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Multiplicity of the root `0`.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coefficients.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        CharPoly { coefficients: coefficients.iter().map(|&c| BigInt::from(c)).collect() }
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            if !mag.is_one() || k == 0 {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn mat_mul<T: Clone + Num>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![T::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let aik = &a[i][k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    out[i][j] = out[i][j].clone() + aik.clone() * bk[j].clone();
                }
            }
        }
    }
    out
}

/// Faddeev–LeVerrier: `M_1 = I`, `c_{n-k} = -tr(A M_k) / k`,
/// `M_{k+1} = A M_k + c_{n-k} I`. Over the integers every division is exact.
///
/// Returns the coefficients in ascending powers, leading `1` included.
pub fn faddeev_leverrier<T: Clone + Num + FromPrimitive>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for k in 1..=n {
        let am = mat_mul(a, &m);
        let trace = (0..n).fold(T::zero(), |acc, i| acc + am[i][i].clone());
        let kk = T::from_usize(k).expect("dimension fits the scalar type");
        let c = T::zero() - trace / kk;
        coeffs[n - k] = c.clone();
        if k < n {
            m = am;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = row[i].clone() + c.clone();
            }
        }
    }
    coeffs
}

/// Exact `det(xI - A)`.
///
/// Rank-deficient input is first compressed: with `A = C R` for a column
/// basis `C`, `det(xI_N - C R) = x^(N-r) det(xI_r - R C)`, and Faddeev–LeVerrier
/// runs on the `r x r` core only.
pub fn char_poly(m: &BigIntMatrix) -> Result<CharPoly, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let prof = rank_profile(m, PivotPolicy::MinAbs);
    let r = prof.rank;
    if r == n {
        let coeffs = faddeev_leverrier(&m.to_row_vecs());
        return Ok(CharPoly { coefficients: coeffs });
    }
    let mut coefficients = vec![BigInt::zero(); n + 1];
    if r == 0 {
        coefficients[n] = BigInt::one();
        return Ok(CharPoly { coefficients });
    }

    // A = A[:,J] A[I,J]^{-1} A[I,:], so the core is A[I,J]^{-1} A[I,:] A[:,J].
    let all: Vec<usize> = (0..n).collect();
    let rows_i = m.select(&prof.pivot_rows, &all);
    let cols_j = m.select(&all, &prof.pivot_cols);
    let block = m.select(&prof.pivot_rows, &prof.pivot_cols);
    let product = rows_i.mul(&cols_j);
    let core = solve_rational(&block, &product);
    let small = faddeev_leverrier(&core);
    for (k, c) in small.into_iter().enumerate() {
        assert!(c.is_integer(), "characteristic polynomial of an integer matrix has integer coefficients");
        coefficients[k + n - r] = c.to_integer();
    }
    Ok(CharPoly { coefficients })
}

/// `block^{-1} rhs` by Gauss–Jordan over Q; `block` must be nonsingular.
fn solve_rational(block: &BigIntMatrix, rhs: &BigIntMatrix) -> Vec<Vec<BigRational>> {
    let r = block.rows();
    let c = rhs.cols();
    let mut aug: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| BigRational::from_integer(block[(i, j)].clone()))
                .chain((0..c).map(|j| BigRational::from_integer(rhs[(i, j)].clone())))
                .collect()
        })
        .collect();
    for k in 0..r {
        let p = (k..r).find(|&i| !aug[i][k].is_zero()).expect("nonsingular block");
        aug.swap(k, p);
        let inv = aug[k][k].recip();
        for x in aug[k].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = aug[k].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[r..].to_vec()).collect()
}

fn sign_variations<'a>(coeffs: impl Iterator<Item = (usize, &'a BigInt)>, alternate: bool) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for (k, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        let mut positive = c.is_positive();
        if alternate && k % 2 == 1 {
            positive = !positive;
        }
        if last.is_some_and(|l| l != positive) {
            count += 1;
        }
        last = Some(positive);
    }
    count
}

/// Sign variations of the nonzero coefficients. Exact for real-rooted
/// polynomials.
pub fn descartes_positive_roots(p: &CharPoly) -> usize {
    sign_variations(p.coefficients.iter().enumerate(), false)
}

/// Positive roots, negative roots (through `p(-x)`), and the zero root.
pub fn descartes_inertia(p: &CharPoly) -> Inertia {
    Inertia {
        n_zero: p.zero_root_multiplicity(),
        n_plus: descartes_positive_roots(p),
        n_minus: sign_variations(p.coefficients.iter().enumerate(), true),
    }
}
