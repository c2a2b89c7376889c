//! Ordinary least squares via the normal equations, with a rank check.

use crate::error::{Error, Result};

use super::linalg::{invert_symmetric, solve_linear};
use super::logistic::{gaussian_ll, RegressionResult};
use super::special::students_t_two_sided_p;

/// Least-squares fit of `y` on the rows of `x` (each row is one observation,
/// columns include any constant the caller wants).
///
/// Returns the shared [`RegressionResult`]: `z` carries t statistics, `p`
/// their two-sided tail at n-k degrees of freedom, and `pseudo_r2` carries
/// the centered R-squared (which presumes the design spans a constant).
pub fn ols(x: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<RegressionResult> {
    let n = x.len();
    if n == 0 || n != y.len() {
        return Err(Error::InvalidArgument {
            msg: format!("design has {n} rows, response has {}", y.len()),
        });
    }
    let k = x[0].len();
    if x.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidArgument {
            msg: "ragged design matrix".into(),
        });
    }
    if n <= k {
        return Err(Error::InsufficientData {
            msg: format!("{n} rows for {k} columns"),
        });
    }

    // X'X and X'y
    let mut xtx = vec![0.0; k * k];
    let mut xty = vec![0.0; k];
    for (row, &yi) in x.iter().zip(y) {
        for a in 0..k {
            xty[a] += row[a] * yi;
            for b in 0..k {
                xtx[a * k + b] += row[a] * row[b];
            }
        }
    }

    let coef = solve_linear(&xtx, &xty, k, names)?;

    let mut sse = 0.0;
    for (row, &yi) in x.iter().zip(y) {
        let fitted: f64 = row.iter().zip(&coef).map(|(a, b)| a * b).sum();
        let r = yi - fitted;
        sse += r * r;
    }
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    let r2 = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };

    let df = (n - k) as f64;
    let sigma2 = sse / df;
    let cov = invert_symmetric(&xtx, k, names)?;
    let se: Vec<f64> = (0..k).map(|j| (sigma2 * cov[j * k + j]).sqrt()).collect();
    let t: Vec<f64> = coef
        .iter()
        .zip(&se)
        .map(|(c, s)| if *s > 0.0 { c / s } else { 0.0 })
        .collect();
    let p: Vec<f64> = t.iter().map(|tv| students_t_two_sided_p(*tv, df)).collect();

    let ll_model = gaussian_ll(n, sse);
    let ll_null = gaussian_ll(n, sst);

    Ok(RegressionResult {
        names: names.to_vec(),
        coef,
        se,
        z: t,
        p,
        ll_model,
        ll_null,
        pseudo_r2: r2,
        n,
        iterations: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear_data_recovered() {
        // y = 2 + 3x, no noise
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| 2.0 + 3.0 * i as f64).collect();
        let names = vec!["const".into(), "x".into()];
        let r = ols(&x, &y, &names).unwrap();
        assert!((r.coef[0] - 2.0).abs() < 1e-10);
        assert!((r.coef[1] - 3.0).abs() < 1e-10);
        assert!((r.pseudo_r2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_response_gives_zero_slope() {
        // centered regressor, y constant in the regressor direction
        let x: Vec<Vec<f64>> = vec![
            vec![1.0, -2.0],
            vec![1.0, -1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 2.0],
        ];
        let y = vec![3.0, 3.0, 3.0, 3.0, 3.0];
        let names = vec!["const".into(), "x".into()];
        let r = ols(&x, &y, &names).unwrap();
        assert!(r.coef[1].abs() < 1e-12);
    }

    #[test]
    fn matches_independent_solve_on_random_system() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let x: Vec<Vec<f64>> = (0..10)
            .map(|_| vec![1.0, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let y: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let names = vec!["c".into(), "a".into(), "b".into()];
        let r = ols(&x, &y, &names).unwrap();

        // independent route: Cramer's rule on the 3x3 normal equations
        let k = 3;
        let mut xtx = [[0.0f64; 3]; 3];
        let mut xty = [0.0f64; 3];
        for (row, &yi) in x.iter().zip(&y) {
            for a in 0..k {
                xty[a] += row[a] * yi;
                for b in 0..k {
                    xtx[a][b] += row[a] * row[b];
                }
            }
        }
        let det3 = |m: &[[f64; 3]; 3]| -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det3(&xtx);
        for j in 0..k {
            let mut mj = xtx;
            for row in 0..k {
                mj[row][j] = xty[row];
            }
            let oracle = det3(&mj) / d;
            assert!((r.coef[j] - oracle).abs() < 1e-9, "coef {j}");
        }
    }

    #[test]
    fn residuals_orthogonal_to_design() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let x: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![1.0, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
            .collect();
        let y: Vec<f64> = (0..30).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let names = vec!["c".into(), "a".into(), "b".into()];
        let r = ols(&x, &y, &names).unwrap();
        for j in 0..3 {
            let dot: f64 = x
                .iter()
                .zip(&y)
                .map(|(row, &yi)| {
                    let fitted: f64 = row.iter().zip(&r.coef).map(|(a, b)| a * b).sum();
                    row[j] * (yi - fitted)
                })
                .sum();
            assert!(dot.abs() < 1e-8, "column {j} dot {dot}");
        }
    }

    #[test]
    fn rank_deficiency_is_an_error() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, i as f64, 2.0 * i as f64]).collect();
        let y: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let names = vec!["c".into(), "x".into(), "x2".into()];
        assert!(matches!(ols(&x, &y, &names), Err(Error::Collinear { .. })));
    }
}
