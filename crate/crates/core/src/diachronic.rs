//! Per-word temporal regression of contextual diversity on time, log book
//! count, and frequency, plus the declining-vs-stable comparison of the
//! resulting time slopes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corpus::{ContextTable, CorpusMeta};
use crate::distribution::contextual_diversity;
use crate::error::{Error, Result};
use crate::stats::{one_sample_wilcoxon, ols, wilcoxon_signed_rank, WilcoxonResult};

/// Minimum decades with a defined diversity value for a word to be fit.
pub const DEFAULT_MIN_DECADES: usize = 5;

/// Per-word fit of CDiv_t = b0 + b1 ln(B_t) + b2 F_t + b3 t.
#[derive(Debug, Clone)]
pub struct DiachronicFit {
    pub word: String,
    /// Intercept, ln-books, frequency, time.
    pub beta: [f64; 4],
    pub r2: f64,
    pub n_decades: usize,
    /// Regressors dropped as constant (collinear with the intercept);
    /// indices into `beta`.
    pub dropped: Vec<usize>,
}

/// Contextual diversity per decade; `None` where the word has no
/// in-vocabulary contexts in that decade.
pub fn cdiv_series(word: &str, tables: &[ContextTable]) -> Vec<Option<f64>> {
    tables
        .iter()
        .map(|t| contextual_diversity(word, t).ok())
        .collect()
}

/// Regress a word's diversity series on [1, ln B_t, F_t, t] over its defined
/// decades (t is 1-based). Constant non-intercept regressors are dropped
/// with a flag instead of failing the solve.
pub fn fit_diachronic(
    word: &str,
    cdiv: &[Option<f64>],
    meta: &CorpusMeta,
    freq: &[f64],
    min_decades: usize,
) -> Result<DiachronicFit> {
    if cdiv.len() != meta.books_per_decade.len() || cdiv.len() != freq.len() {
        return Err(Error::InvalidArgument {
            msg: format!(
                "series lengths differ: cdiv {}, meta {}, freq {}",
                cdiv.len(),
                meta.books_per_decade.len(),
                freq.len()
            ),
        });
    }
    let defined: Vec<usize> = (0..cdiv.len()).filter(|&t| cdiv[t].is_some()).collect();
    if defined.len() < min_decades.max(2) {
        return Err(Error::InsufficientData {
            msg: format!(
                "'{word}' has {} defined decades, need {min_decades}",
                defined.len()
            ),
        });
    }

    // regressor columns in beta order: [const, ln B, F, t]
    let raw_cols: Vec<Vec<f64>> = vec![
        defined.iter().map(|_| 1.0).collect(),
        defined
            .iter()
            .map(|&t| (meta.books_per_decade[t] as f64).ln())
            .collect(),
        defined.iter().map(|&t| freq[t]).collect(),
        defined.iter().map(|&t| (t + 1) as f64).collect(),
    ];
    let y: Vec<f64> = defined.iter().map(|&t| cdiv[t].unwrap()).collect();

    let mut dropped = Vec::new();
    let mut kept = vec![0usize]; // the intercept always stays
    for j in 1..4 {
        let col = &raw_cols[j];
        let constant = col.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12);
        if constant {
            dropped.push(j);
        } else {
            kept.push(j);
        }
    }

    let names_all = ["const", "ln_books", "freq", "time"];
    let names: Vec<String> = kept.iter().map(|&j| names_all[j].to_string()).collect();
    let rows: Vec<Vec<f64>> = (0..defined.len())
        .map(|i| kept.iter().map(|&j| raw_cols[j][i]).collect())
        .collect();

    let fit = ols(&rows, &y, &names)?;
    let mut beta = [0.0; 4];
    for (slot, &j) in kept.iter().enumerate() {
        beta[j] = fit.coef[slot];
    }

    Ok(DiachronicFit {
        word: word.into(),
        beta,
        r2: fit.pseudo_r2,
        n_decades: defined.len(),
        dropped,
    })
}

/// Fit every word of a set against per-decade diversity values, skipping
/// words below the decade floor. `cdivs` maps word -> per-decade series.
pub fn fit_set(
    cdivs: &BTreeMap<String, Vec<Option<f64>>>,
    meta: &CorpusMeta,
    freqs: &BTreeMap<String, Vec<f64>>,
    min_decades: usize,
) -> BTreeMap<String, DiachronicFit> {
    let entries: Vec<(&String, &Vec<Option<f64>>)> = cdivs.iter().collect();
    entries
        .par_iter()
        .filter_map(|(word, series)| {
            let freq = freqs.get(*word)?;
            fit_diachronic(word, series, meta, freq, min_decades)
                .ok()
                .map(|f| ((*word).clone(), f))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Five-number summary plus mean, for boxplot-style reporting.
#[derive(Debug, Clone, Copy)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub n: usize,
}

/// Linear-interpolation quantile on a sorted copy of the data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

pub fn box_stats(values: &[f64]) -> Option<BoxStats> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    Some(BoxStats {
        min: sorted[0],
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        n: sorted.len(),
    })
}

/// Comparison of the time slopes across the two matched sets.
#[derive(Debug, Clone)]
pub struct Beta3Comparison {
    pub paired: WilcoxonResult,
    pub dec_vs_zero: WilcoxonResult,
    pub stb_vs_zero: WilcoxonResult,
    pub dec_stats: BoxStats,
    pub stb_stats: BoxStats,
    /// Pairs where either side lacked a fit.
    pub excluded_pairs: usize,
    pub included_pairs: usize,
}

/// Paired test of declining vs stable time slopes plus one-sample tests of
/// each set against zero. Pairs missing either fit are excluded and counted.
pub fn compare_beta3(
    pairs: &[(String, String)],
    dec_fits: &BTreeMap<String, DiachronicFit>,
    stb_fits: &BTreeMap<String, DiachronicFit>,
) -> Result<Beta3Comparison> {
    let mut dec_vals = Vec::new();
    let mut stb_vals = Vec::new();
    let mut excluded = 0usize;
    for (d, s) in pairs {
        match (dec_fits.get(d), stb_fits.get(s)) {
            (Some(fd), Some(fs)) => {
                dec_vals.push(fd.beta[3]);
                stb_vals.push(fs.beta[3]);
            }
            _ => excluded += 1,
        }
    }
    if dec_vals.is_empty() {
        return Err(Error::InsufficientData {
            msg: "no pairs with fits on both sides".into(),
        });
    }
    let paired = wilcoxon_signed_rank(&dec_vals, &stb_vals)?;
    let dec_vs_zero = one_sample_wilcoxon(&dec_vals, 0.0)?;
    let stb_vs_zero = one_sample_wilcoxon(&stb_vals, 0.0)?;
    Ok(Beta3Comparison {
        paired,
        dec_vs_zero,
        stb_vs_zero,
        dec_stats: box_stats(&dec_vals).expect("nonempty"),
        stb_stats: box_stats(&stb_vals).expect("nonempty"),
        excluded_pairs: excluded,
        included_pairs: dec_vals.len(),
    })
}
