//! Small dense linear solves for the regression fitters.
//!
//! The systems here are tiny (normal equations and information matrices up
//! to a few dozen columns), so plain Gaussian elimination with partial
//! pivoting is enough. The solver reports the first column whose pivot
//! collapses, which the regression callers translate into a collinearity
//! error naming the offending predictor.

use crate::error::{Error, Result};

/// Solve `A x = b` for square row-major `A` (n x n).
///
/// `names` supplies predictor labels for the singularity report; when it is
/// shorter than `n` the bare column index is used.
pub fn solve_linear(a: &[f64], b: &[f64], n: usize, names: &[String]) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);

    let mut m = a.to_vec();
    let mut rhs = b.to_vec();

    // Scale reference for the pivot-collapse check.
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let tol = scale * 1e-12;

    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = m[perm[col] * n + col].abs();
        for row in col + 1..n {
            let v = m[perm[row] * n + col].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        if pivot_val <= tol {
            let name = names
                .get(col)
                .cloned()
                .unwrap_or_else(|| format!("x{col}"));
            return Err(Error::Collinear { column: col, name });
        }
        perm.swap(col, pivot_row);
        let p = perm[col];
        let pivot = m[p * n + col];
        for row in col + 1..n {
            let r = perm[row];
            let factor = m[r * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[r * n + k] -= factor * m[p * n + k];
            }
            rhs[r] -= factor * rhs[p];
        }
    }

    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let p = perm[col];
        let mut acc = rhs[p];
        for k in col + 1..n {
            acc -= m[p * n + k] * x[k];
        }
        x[col] = acc / m[p * n + col];
    }
    Ok(x)
}

/// Invert a symmetric positive-definite-ish matrix by solving against the
/// identity columns. Used for standard errors from information matrices.
pub fn invert_symmetric(a: &[f64], n: usize, names: &[String]) -> Result<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve_linear(a, &e, n, names)?;
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Ok(inv)
}
