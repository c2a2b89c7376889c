//! Decline and stability curve fitting over normalized frequency series.
//!
//! The decline model is a line `a*(b - t)` that crosses zero at decade `b`
//! and stays at zero afterwards; `t` is 1-based. For a fixed crossing the
//! optimal slope has a closed form (least squares of the points at `t <= b`
//! against the regressor `b - t`, clamped positive), so the fitter sweeps a
//! dense grid of crossings and then sharpens the best one with a ternary
//! search. The stability model is the horizontal line of best fit, i.e. the
//! series mean.

use rayon::prelude::*;

use crate::corpus::{normalize_series, WordSeries};
use crate::error::Result;

/// Grid step for the crossing-parameter sweep.
const B_GRID_STEP: f64 = 0.01;
/// Slope floor keeping the fitted `a` strictly positive.
const A_FLOOR: f64 = 1e-12;

/// Fitted decline curve: slope `a`, zero crossing `b` (in 1-based decades),
/// and the minimized mean squared error over all points.
#[derive(Debug, Clone, Copy)]
pub struct PiecewiseFit {
    pub a: f64,
    pub b: f64,
    pub mse: f64,
}

/// Horizontal fit: level (the mean) and its MSE (population variance).
#[derive(Debug, Clone, Copy)]
pub struct StabilityFit {
    pub level: f64,
    pub mse: f64,
}

/// Candidate filters applied before ranking.
#[derive(Debug, Clone)]
pub struct FilterPolicy {
    /// Minimum word length in characters.
    pub min_length: usize,
    /// Minimum relative frequency in the first decade.
    pub min_initial_relfreq: f64,
    /// Minimum fitted crossing decade for decline candidates.
    pub min_crossing: f64,
    /// Optional stability cutoff: stable candidates above this MSE are dropped.
    pub max_stable_mse: Option<f64>,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        FilterPolicy {
            min_length: 4,
            min_initial_relfreq: 5e-6,
            min_crossing: 10.0,
            max_stable_mse: None,
        }
    }
}

/// A ranked candidate with its fit.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub word: String,
    pub pos: String,
    pub length: usize,
    pub initial_relfreq: f64,
    /// Ranking metric: the fit MSE (lower is better).
    pub metric: f64,
    /// Slope for decliners, level for stables.
    pub a: f64,
    /// Crossing decade; `None` for stable candidates.
    pub b: Option<f64>,
}

/// Fit the piecewise decline curve to a normalized series (1-based `t`).
pub fn fit_decline(y: &[f64]) -> PiecewiseFit {
    let n = y.len();
    assert!(n >= 2, "need at least two decades");

    // Prefix sums over t = 1..=n so each candidate crossing evaluates in O(1):
    // for integer k = floor(b), the decline piece covers t in [1, k].
    //   sum_yt[k]  = sum of y_t * t for t <= k
    //   sum_y[k]   = sum of y_t for t <= k
    //   sum_t[k], sum_t2[k], sum_y2 tail handled via total.
    let mut sum_y = vec![0.0; n + 1];
    let mut sum_yt = vec![0.0; n + 1];
    let mut sum_t = vec![0.0; n + 1];
    let mut sum_t2 = vec![0.0; n + 1];
    let mut sum_y2 = vec![0.0; n + 1];
    for t in 1..=n {
        let yt = y[t - 1];
        let tf = t as f64;
        sum_y[t] = sum_y[t - 1] + yt;
        sum_yt[t] = sum_yt[t - 1] + yt * tf;
        sum_t[t] = sum_t[t - 1] + tf;
        sum_t2[t] = sum_t2[t - 1] + tf * tf;
        sum_y2[t] = sum_y2[t - 1] + yt * yt;
    }
    let total_y2 = sum_y2[n];

    let mse_at = |b: f64| -> (f64, f64) {
        let k = (b.floor() as usize).min(n);
        if k == 0 {
            // no point on the decline piece; the curve is zero everywhere
            return (A_FLOOR, total_y2 / n as f64);
        }
        // optimal a for the active set: a* = sum y_t (b - t) / sum (b - t)^2
        let num = b * sum_y[k] - sum_yt[k];
        let den = (k as f64) * b * b - 2.0 * b * sum_t[k] + sum_t2[k];
        let a = if den > 0.0 { (num / den).max(A_FLOOR) } else { A_FLOOR };
        // SSE = sum_{t<=k} (y_t - a(b-t))^2 + sum_{t>k} y_t^2
        let head = sum_y2[k] - 2.0 * a * (b * sum_y[k] - sum_yt[k]) + a * a * den;
        let tail = total_y2 - sum_y2[k];
        (a, (head + tail) / n as f64)
    };

    // dense sweep over b in (0, n]
    let steps = (n as f64 / B_GRID_STEP).round() as usize;
    let mut best_b = B_GRID_STEP;
    let mut best = mse_at(best_b);
    for i in 2..=steps {
        let b = i as f64 * B_GRID_STEP;
        let (a, mse) = mse_at(b);
        if mse < best.1 {
            best = (a, mse);
            best_b = b;
        }
    }

    // local ternary refinement around the best grid point
    let mut lo = (best_b - B_GRID_STEP).max(f64::MIN_POSITIVE);
    let mut hi = (best_b + B_GRID_STEP).min(n as f64);
    for _ in 0..80 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if mse_at(m1).1 <= mse_at(m2).1 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let refined_b = 0.5 * (lo + hi);
    let refined = mse_at(refined_b);
    if refined.1 < best.1 {
        PiecewiseFit {
            a: refined.0,
            b: refined_b,
            mse: refined.1,
        }
    } else {
        PiecewiseFit {
            a: best.0,
            b: best_b,
            mse: best.1,
        }
    }
}

/// Fit the horizontal line of best fit: level = mean, MSE = population variance.
pub fn fit_stable(y: &[f64]) -> StabilityFit {
    let n = y.len() as f64;
    let level = y.iter().sum::<f64>() / n;
    let mse = y.iter().map(|v| (v - level) * (v - level)).sum::<f64>() / n;
    StabilityFit { level, mse }
}

/// Rank decline candidates by ascending decline MSE.
///
/// Filters: word shorter than the policy minimum, first-decade relative
/// frequency below the floor, fitted crossing below the minimum, optional
/// stoplist membership, and series with no mass at all.
pub fn rank_decliners(
    words: &[WordSeries],
    policy: &FilterPolicy,
    stoplist: Option<&std::collections::HashSet<String>>,
) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = words
        .par_iter()
        .filter_map(|w| {
            if w.length < policy.min_length || w.rel[0] < policy.min_initial_relfreq {
                return None;
            }
            if let Some(stop) = stoplist {
                if stop.contains(&w.word) {
                    return None;
                }
            }
            let y = normalize_series(w).ok()?;
            let fit = fit_decline(&y);
            if fit.b < policy.min_crossing {
                return None;
            }
            Some(Candidate {
                word: w.word.clone(),
                pos: w.pos.clone(),
                length: w.length,
                initial_relfreq: w.rel[0],
                metric: fit.mse,
                a: fit.a,
                b: Some(fit.b),
            })
        })
        .collect();
    sort_candidates(&mut out);
    out
}

/// Rank stability candidates by ascending horizontal-fit MSE.
pub fn rank_stable(
    words: &[WordSeries],
    policy: &FilterPolicy,
    stoplist: Option<&std::collections::HashSet<String>>,
) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = words
        .par_iter()
        .filter_map(|w| {
            if w.length < policy.min_length || w.rel[0] < policy.min_initial_relfreq {
                return None;
            }
            if let Some(stop) = stoplist {
                if stop.contains(&w.word) {
                    return None;
                }
            }
            let y = normalize_series(w).ok()?;
            let fit = fit_stable(&y);
            if let Some(cutoff) = policy.max_stable_mse {
                if fit.mse > cutoff {
                    return None;
                }
            }
            Some(Candidate {
                word: w.word.clone(),
                pos: w.pos.clone(),
                length: w.length,
                initial_relfreq: w.rel[0],
                metric: fit.mse,
                a: fit.level,
                b: None,
            })
        })
        .collect();
    sort_candidates(&mut out);
    out
}

fn sort_candidates(out: &mut [Candidate]) {
    out.sort_by(|x, y| {
        x.metric
            .partial_cmp(&y.metric)
            .expect("finite metrics")
            .then_with(|| x.word.cmp(&y.word))
            .then_with(|| x.pos.cmp(&y.pos))
    });
}

/// Render candidates in the exchange format `word pos metric a b`
/// (b column empty for stable candidates).
pub fn candidate_tsv_row(c: &Candidate) -> String {
    match c.b {
        Some(b) => format!(
            "{}\t{}\t{:.9e}\t{:.9e}\t{:.4}",
            c.word, c.pos, c.metric, c.a, b
        ),
        None => format!("{}\t{}\t{:.9e}\t{:.9e}\t", c.word, c.pos, c.metric, c.a),
    }
}
