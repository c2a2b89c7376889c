//! Pearson correlation and the all-pairs screening report with Bonferroni
//! correction.

use crate::error::{Error, Result};

use super::special::students_t_two_sided_p;

/// Pearson correlation coefficient of two equal-length samples.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::InsufficientData {
            msg: format!("need >= 3 paired points, got {} and {}", x.len(), y.len()),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantFeature {
            name: "correlation input".into(),
        });
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

#[derive(Debug, Clone)]
pub struct CorrelationCell {
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub names: Vec<String>,
    /// Upper-triangular by (i, j) with i < j; diagonal omitted.
    pub cells: Vec<(usize, usize, CorrelationCell)>,
    /// Columns with zero variance; correlations with them are undefined.
    pub constant_columns: Vec<usize>,
    /// Per-comparison threshold after Bonferroni correction.
    pub corrected_alpha: f64,
}

/// Pairwise correlations between the columns of `data` (rows = observations).
///
/// Significance is tested with the t transform at `alpha` divided by the
/// number of tested pairs. Constant columns are flagged rather than fatal;
/// their cells carry no r.
pub fn pearson_matrix(data: &[Vec<f64>], names: &[String], alpha: f64) -> Result<CorrelationReport> {
    let n_rows = data.len();
    if n_rows < 3 {
        return Err(Error::InsufficientData {
            msg: format!("need >= 3 rows, got {n_rows}"),
        });
    }
    let n_cols = data[0].len();
    if data.iter().any(|row| row.len() != n_cols) {
        return Err(Error::InvalidArgument {
            msg: "ragged factor matrix".into(),
        });
    }

    let mut constant_columns = Vec::new();
    for j in 0..n_cols {
        let first = data[0][j];
        if data.iter().all(|row| row[j] == first) {
            constant_columns.push(j);
        }
    }

    let testable: Vec<usize> = (0..n_cols).filter(|j| !constant_columns.contains(j)).collect();
    let n_tested_pairs = testable.len() * testable.len().saturating_sub(1) / 2;
    let corrected_alpha = if n_tested_pairs > 0 {
        alpha / n_tested_pairs as f64
    } else {
        alpha
    };

    let df = (n_rows - 2) as f64;
    let mut cells = Vec::new();
    for i in 0..n_cols {
        for j in i + 1..n_cols {
            if constant_columns.contains(&i) || constant_columns.contains(&j) {
                cells.push((
                    i,
                    j,
                    CorrelationCell {
                        r: None,
                        p: None,
                        significant: false,
                    },
                ));
                continue;
            }
            let xi: Vec<f64> = data.iter().map(|row| row[i]).collect();
            let xj: Vec<f64> = data.iter().map(|row| row[j]).collect();
            let r = pearson(&xi, &xj)?;
            let p = if r.abs() >= 1.0 {
                0.0
            } else {
                let t = r * (df / (1.0 - r * r)).sqrt();
                students_t_two_sided_p(t, df)
            };
            cells.push((
                i,
                j,
                CorrelationCell {
                    r: Some(r),
                    p: Some(p),
                    significant: p < corrected_alpha,
                },
            ));
        }
    }

    Ok(CorrelationReport {
        names: names.to_vec(),
        cells,
        constant_columns,
        corrected_alpha,
    })
}
