//! Floating-point eigenvalues, used only to cross-check exact results.

use nalgebra::DMatrix;

use super::Inertia;

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Sign counts with `|lambda| <= threshold` treated as zero.
pub fn float_inertia(eigenvalues: &[f64], threshold: f64) -> Inertia {
    let mut out = Inertia::new(0, 0, 0);
    for &l in eigenvalues {
        if l.abs() <= threshold {
            out.n_zero += 1;
        } else if l > 0.0 {
            out.n_plus += 1;
        } else {
            out.n_minus += 1;
        }
    }
    out
}

/// `|a - b| <= tol * max(|a|, |b|, 1)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let eig = symmetric_eigenvalues(&[vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert!(rel_close(eig[0], -2.0, 1e-12) && rel_close(eig[1], 2.0, 1e-12));
        assert_eq!(float_inertia(&eig, 1e-9), Inertia::new(0, 1, 1));
    }
}
