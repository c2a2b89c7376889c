//! Logistic regression by iteratively reweighted least squares, with Wald
//! inference and the likelihood-ratio pseudo-r2.

use crate::error::{Error, Result};

use super::linalg::{invert_symmetric, solve_linear};
use super::pairs::PairItem;
use super::special::normal_two_sided_p;

/// Coefficient on the edge of a separation diagnosis.
const SEPARATION_LIMIT: f64 = 50.0;
const MAX_ITER: usize = 100;
const LL_TOL: f64 = 1e-10;

/// Fitted regression with per-coefficient inference.
///
/// For the logistic fits `z`/`p` are Wald normal statistics and `pseudo_r2`
/// is the likelihood-ratio index 1 - ll_model/ll_null. For the Gaussian
/// variant (see [`super::ols`]) `z` carries t statistics and `pseudo_r2`
/// carries R-squared.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    pub names: Vec<String>,
    pub coef: Vec<f64>,
    pub se: Vec<f64>,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub ll_model: f64,
    pub ll_null: f64,
    pub pseudo_r2: f64,
    pub n: usize,
    pub iterations: usize,
}

impl RegressionResult {
    /// Predicted success probability for one item's predictor values
    /// (without the leading constant).
    pub fn predict_proba(&self, diffs: &[f64]) -> f64 {
        let mut eta = self.coef[0];
        for (c, x) in self.coef[1..].iter().zip(diffs) {
            eta += c * x;
        }
        logistic(eta)
    }
}

fn logistic(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

fn log_likelihood(items: &[PairItem], coef: &[f64], active: &[usize]) -> f64 {
    let mut ll = 0.0;
    for item in items {
        let mut eta = coef[0];
        for (slot, &col) in active.iter().enumerate() {
            eta += coef[slot + 1] * item.diffs[col];
        }
        // numerically stable: ln sigma(eta) = -ln(1 + e^-eta)
        let lp = -(1.0 + (-eta).exp()).ln();
        let lq = -(1.0 + eta.exp()).ln();
        ll += if item.label == 1 { lp } else { lq };
    }
    ll
}

/// Unpenalized maximum-likelihood logistic regression with an intercept.
///
/// Predictor columns that are identically zero cannot move the likelihood;
/// they are reported with zero coefficient and infinite standard error
/// rather than tripping the singularity check.
pub fn fit_logistic(items: &[PairItem], names: &[String]) -> Result<RegressionResult> {
    fit_impl(items, names, 0.0, true)
}

/// Ridge-penalized logistic regression (penalty on non-intercept
/// coefficients), used by the leave-one-out classifier where unpenalized
/// fits would diverge on separable folds.
pub fn fit_logistic_ridge(
    items: &[PairItem],
    names: &[String],
    ridge: f64,
) -> Result<RegressionResult> {
    fit_impl(items, names, ridge, false)
}

fn fit_impl(
    items: &[PairItem],
    names: &[String],
    ridge: f64,
    check_separation: bool,
) -> Result<RegressionResult> {
    let n = items.len();
    let n_pred = items.first().map(|i| i.diffs.len()).unwrap_or(0);
    if n < n_pred + 2 {
        return Err(Error::InsufficientData {
            msg: format!("{n} items for {n_pred} predictors"),
        });
    }
    let n_ones = items.iter().filter(|i| i.label == 1).count();
    if n_ones == 0 || n_ones == n {
        return Err(Error::InsufficientData {
            msg: "both labels must be present".into(),
        });
    }

    // Identically-zero columns are excluded from the solve.
    let active: Vec<usize> = (0..n_pred)
        .filter(|&j| items.iter().any(|it| it.diffs[j] != 0.0))
        .collect();
    let k = active.len() + 1; // with intercept

    let mut solve_names = vec!["const".to_string()];
    for &j in &active {
        solve_names.push(names.get(j).cloned().unwrap_or_else(|| format!("x{j}")));
    }

    let mut coef = vec![0.0; k];
    let mut ll = log_likelihood(items, &coef, &active);
    let mut iterations = 0;

    for _ in 0..MAX_ITER {
        iterations += 1;
        // gradient and observed information of the (penalized) likelihood
        let mut grad = vec![0.0; k];
        let mut info = vec![0.0; k * k];
        for item in items {
            let mut eta = coef[0];
            for (slot, &col) in active.iter().enumerate() {
                eta += coef[slot + 1] * item.diffs[col];
            }
            let p = logistic(eta);
            let w = p * (1.0 - p);
            let resid = item.label as f64 - p;
            let mut row = Vec::with_capacity(k);
            row.push(1.0);
            for &col in &active {
                row.push(item.diffs[col]);
            }
            for a in 0..k {
                grad[a] += row[a] * resid;
                for b in 0..k {
                    info[a * k + b] += row[a] * w * row[b];
                }
            }
        }
        if ridge > 0.0 {
            for j in 1..k {
                grad[j] -= ridge * coef[j];
                info[j * k + j] += ridge;
            }
        }

        let step = solve_linear(&info, &grad, k, &solve_names)?;

        // step-halving keeps the (penalized) log-likelihood non-decreasing
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = coef.iter().zip(&step).map(|(c, s)| c + scale * s).collect();
            let trial_ll = penalized_ll(items, &trial, &active, ridge);
            let current_ll = penalized_ll_value(ll, &coef, ridge);
            if trial_ll >= current_ll - 1e-12 {
                let new_ll = log_likelihood(items, &trial, &active);
                coef = trial;
                let delta = (new_ll - ll).abs();
                ll = new_ll;
                accepted = true;
                if check_separation {
                    for (j, c) in coef.iter().enumerate() {
                        if c.abs() > SEPARATION_LIMIT {
                            return Err(Error::Separation {
                                name: solve_names[j].clone(),
                                limit: SEPARATION_LIMIT,
                            });
                        }
                    }
                }
                if delta < LL_TOL {
                    return finalize(items, names, &active, coef, ll, iterations, ridge, n);
                }
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break; // no ascent direction left; treat as converged
        }
    }

    finalize(items, names, &active, coef, ll, iterations, ridge, n)
}

fn penalized_ll(items: &[PairItem], coef: &[f64], active: &[usize], ridge: f64) -> f64 {
    penalized_ll_value(log_likelihood(items, coef, active), coef, ridge)
}

fn penalized_ll_value(ll: f64, coef: &[f64], ridge: f64) -> f64 {
    if ridge > 0.0 {
        ll - 0.5 * ridge * coef[1..].iter().map(|c| c * c).sum::<f64>()
    } else {
        ll
    }
}

#[allow(clippy::too_many_arguments)]
fn finalize(
    items: &[PairItem],
    names: &[String],
    active: &[usize],
    coef: Vec<f64>,
    ll: f64,
    iterations: usize,
    ridge: f64,
    n: usize,
) -> Result<RegressionResult> {
    let k = coef.len();
    let mut solve_names = vec!["const".to_string()];
    for &j in active {
        solve_names.push(names.get(j).cloned().unwrap_or_else(|| format!("x{j}")));
    }

    // information at the optimum for Wald standard errors
    let mut info = vec![0.0; k * k];
    for item in items {
        let mut eta = coef[0];
        for (slot, &col) in active.iter().enumerate() {
            eta += coef[slot + 1] * item.diffs[col];
        }
        let p = logistic(eta);
        let w = p * (1.0 - p);
        let mut row = Vec::with_capacity(k);
        row.push(1.0);
        for &col in active {
            row.push(item.diffs[col]);
        }
        for a in 0..k {
            for b in 0..k {
                info[a * k + b] += row[a] * w * row[b];
            }
        }
    }
    if ridge > 0.0 {
        for j in 1..k {
            info[j * k + j] += ridge;
        }
    }
    let cov = invert_symmetric(&info, k, &solve_names)?;

    let n_pred = items.first().map(|i| i.diffs.len()).unwrap_or(0);
    let base = items.iter().filter(|i| i.label == 1).count() as f64 / n as f64;
    let ll_null = n as f64 * (base * base.ln() + (1.0 - base) * (1.0 - base).ln());
    let pseudo_r2 = 1.0 - ll / ll_null;

    // scatter active results back into full predictor order
    let full_names: Vec<String> = std::iter::once("const".to_string())
        .chain((0..n_pred).map(|j| names.get(j).cloned().unwrap_or_else(|| format!("x{j}"))))
        .collect();
    let mut full_coef = vec![0.0; n_pred + 1];
    let mut full_se = vec![f64::INFINITY; n_pred + 1];
    full_coef[0] = coef[0];
    full_se[0] = cov[0].sqrt();
    for (slot, &col) in active.iter().enumerate() {
        full_coef[col + 1] = coef[slot + 1];
        full_se[col + 1] = cov[(slot + 1) * k + (slot + 1)].sqrt();
    }
    let z: Vec<f64> = full_coef
        .iter()
        .zip(&full_se)
        .map(|(c, s)| if s.is_finite() { c / s } else { 0.0 })
        .collect();
    let p: Vec<f64> = z
        .iter()
        .zip(&full_se)
        .map(|(zv, s)| if s.is_finite() { normal_two_sided_p(*zv) } else { 1.0 })
        .collect();

    Ok(RegressionResult {
        names: full_names,
        coef: full_coef,
        se: full_se,
        z,
        p,
        ll_model: ll,
        ll_null,
        pseudo_r2,
        n,
        iterations,
    })
}

/// Gaussian log-likelihood at the MLE variance, shared with the OLS variant.
pub(super) fn gaussian_ll(n: usize, sse: f64) -> f64 {
    let n = n as f64;
    let sigma2 = (sse / n).max(f64::MIN_POSITIVE);
    -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0)
}
