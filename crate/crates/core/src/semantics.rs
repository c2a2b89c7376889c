//! Semantic factor estimators: neighborhood density in an embedding space,
//! concreteness prediction by Beta regression on embeddings, and meaning
//! counts from a dated meanings database.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;
use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{Error, Result};
use crate::stats::{pearson, solve_linear, trigamma};

/// Word vectors of a fixed dimension. Zero vectors are rejected at load
/// because cosine similarity is undefined for them.
#[derive(Debug, Clone)]
pub struct EmbeddingSpace {
    pub dimension: usize,
    words: Vec<String>,
    matrix: Vec<f64>, // row-major, one row per word
    norms: Vec<f64>,
    index: HashMap<String, usize>,
}

impl EmbeddingSpace {
    pub fn from_vectors(entries: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let dimension = entries
            .first()
            .map(|(_, v)| v.len())
            .ok_or(Error::NoData)?;
        let mut words = Vec::with_capacity(entries.len());
        let mut matrix = Vec::with_capacity(entries.len() * dimension);
        let mut norms = Vec::with_capacity(entries.len());
        let mut index = HashMap::new();
        for (word, vec) in entries {
            if vec.len() != dimension {
                return Err(Error::InvalidVector {
                    word,
                    msg: format!("dimension {} != {}", vec.len(), dimension),
                });
            }
            let norm = vec.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::InvalidVector {
                    word,
                    msg: "zero vector".into(),
                });
            }
            index.insert(word.clone(), words.len());
            words.push(word);
            matrix.extend_from_slice(&vec);
            norms.push(norm);
        }
        Ok(EmbeddingSpace {
            dimension,
            words,
            matrix,
            norms,
            index,
        })
    }

    /// Text format: one word per line, `word v1 v2 ... vd`, space-separated.
    pub fn load(path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
        let mut entries = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = lineno + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let word = it
                .next()
                .ok_or_else(|| Error::parse(path, lineno, "empty row"))?
                .to_string();
            let vec: Vec<f64> = it
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::parse(path, lineno, format!("bad component '{f}'")))
                })
                .collect::<Result<_>>()?;
            if vec.is_empty() {
                return Err(Error::parse(path, lineno, "vector has no components"));
            }
            entries.push((word, vec));
        }
        Self::from_vectors(entries)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.matrix[i * self.dimension..(i + 1) * self.dimension])
    }

    fn cosine_rows(&self, i: usize, j: usize) -> f64 {
        let d = self.dimension;
        let a = &self.matrix[i * d..(i + 1) * d];
        let b = &self.matrix[j * d..(j + 1) * d];
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        dot / (self.norms[i] * self.norms[j])
    }
}

/// Mean cosine similarity of `word` to its `k` nearest neighbors, found by
/// exact full scan. Ties in similarity break by word order for determinism.
pub fn semantic_density(word: &str, space: &EmbeddingSpace, k: usize) -> Result<f64> {
    let &i = space.index.get(word).ok_or_else(|| Error::MissingWord {
        word: word.into(),
        resource: "embedding space".into(),
    })?;
    if space.len() < k + 1 {
        return Err(Error::InsufficientData {
            msg: format!("space of {} words cannot supply {k} neighbors", space.len()),
        });
    }
    let mut sims: Vec<(f64, usize)> = (0..space.len())
        .filter(|&j| j != i)
        .map(|j| (space.cosine_rows(i, j), j))
        .collect();
    sims.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("finite cosines")
            .then_with(|| space.words[a.1].cmp(&space.words[b.1]))
    });
    Ok(sims[..k].iter().map(|(s, _)| s).sum::<f64>() / k as f64)
}

/// Fill missing entries with the mean of the present ones; flags mark fills.
pub fn impute_mean(values: &BTreeMap<String, Option<f64>>) -> Result<BTreeMap<String, (f64, bool)>> {
    let present: Vec<f64> = values.values().filter_map(|v| *v).collect();
    if present.is_empty() {
        return Err(Error::NoData);
    }
    let mean = present.iter().sum::<f64>() / present.len() as f64;
    Ok(values
        .iter()
        .map(|(w, v)| match v {
            Some(x) => (w.clone(), (*x, false)),
            None => (w.clone(), (mean, true)),
        })
        .collect())
}

/// Beta regression model: mean mu = logistic(x . weights) with precision phi.
#[derive(Debug, Clone)]
pub struct BetaRegModel {
    /// Intercept first, then one weight per embedding dimension.
    pub weights: Vec<f64>,
    pub phi: f64,
}

/// Fit diagnostics surfaced alongside the model.
#[derive(Debug, Clone)]
pub struct BetaRegFit {
    pub model: BetaRegModel,
    pub iterations: usize,
    pub grad_norm: f64,
    /// Targets clamped into the open interval at load.
    pub clamped: usize,
    /// Degenerate targets forced an intercept-only fit.
    pub intercept_only: bool,
    pub log_likelihood: f64,
}

/// Clamp bound keeping targets strictly inside (0, 1).
pub const TARGET_CLAMP: f64 = 1e-4;
const BETA_MAX_ITER: usize = 500;
const BETA_GRAD_TOL: f64 = 1e-6;

fn logistic(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

fn beta_ll(x: &[Vec<f64>], y: &[f64], weights: &[f64], phi: f64) -> f64 {
    let mut ll = 0.0;
    for (row, &yi) in x.iter().zip(y) {
        let eta: f64 = weights[0]
            + row
                .iter()
                .zip(&weights[1..])
                .map(|(a, b)| a * b)
                .sum::<f64>();
        let mu = logistic(eta).clamp(1e-12, 1.0 - 1e-12);
        ll += ln_gamma(phi) - ln_gamma(mu * phi) - ln_gamma((1.0 - mu) * phi)
            + (mu * phi - 1.0) * yi.ln()
            + ((1.0 - mu) * phi - 1.0) * (1.0 - yi).ln();
    }
    ll
}

/// Maximum-likelihood Beta regression on embedding features.
///
/// Fisher scoring on (weights, ln phi) with step halving; the expected
/// information follows Ferrari & Cribari-Neto's logit-link Beta regression.
/// Targets are clamped to [TARGET_CLAMP, 1 - TARGET_CLAMP] and the clamp
/// count reported. Degenerate targets (all equal after clamping) fall back
/// to an intercept-only fit with a flag.
pub fn fit_beta_regression(x: &[Vec<f64>], y: &[f64]) -> Result<BetaRegFit> {
    let n = x.len();
    if n == 0 || n != y.len() {
        return Err(Error::InvalidArgument {
            msg: format!("{n} design rows vs {} targets", y.len()),
        });
    }
    let dim = x[0].len();
    if x.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidArgument {
            msg: "ragged design matrix".into(),
        });
    }
    if n < dim + 2 {
        return Err(Error::InsufficientData {
            msg: format!("{n} samples for {dim} features"),
        });
    }

    let mut clamped = 0usize;
    let y: Vec<f64> = y
        .iter()
        .map(|&v| {
            if !(0.0..=1.0).contains(&v) {
                return f64::NAN;
            }
            let c = v.clamp(TARGET_CLAMP, 1.0 - TARGET_CLAMP);
            if c != v {
                clamped += 1;
            }
            c
        })
        .collect();
    if y.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument {
            msg: "targets must lie in [0, 1]".into(),
        });
    }

    let degenerate = y.windows(2).all(|w| w[0] == w[1]);
    let x_eff: Vec<Vec<f64>> = if degenerate && dim > 0 {
        x.iter().map(|_| Vec::new()).collect()
    } else {
        x.to_vec()
    };
    let dim_eff = x_eff[0].len();

    // init: intercept at the logit of the mean target, slopes 0, moderate phi
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let mut weights = vec![0.0; dim_eff + 1];
    weights[0] = (mean_y / (1.0 - mean_y)).ln();
    let mut log_phi = 5.0f64.ln();

    let mut ll = beta_ll(&x_eff, &y, &weights, log_phi.exp());
    let mut iterations = 0;
    let mut grad_norm = f64::INFINITY;
    let k = dim_eff + 2; // weights + ln phi

    for _ in 0..BETA_MAX_ITER {
        iterations += 1;
        let phi = log_phi.exp();

        // gradient and expected information in (weights, ln phi)
        let mut grad = vec![0.0; k];
        let mut info = vec![0.0; k * k];
        for (row, &yi) in x_eff.iter().zip(&y) {
            let eta: f64 = weights[0]
                + row
                    .iter()
                    .zip(&weights[1..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
            let mu = logistic(eta).clamp(1e-12, 1.0 - 1e-12);
            let dmu = mu * (1.0 - mu); // d mu / d eta for the logit link
            let y_star = (yi / (1.0 - yi)).ln();
            let mu_star = digamma(mu * phi) - digamma((1.0 - mu) * phi);
            let tg_a = trigamma(mu * phi);
            let tg_b = trigamma((1.0 - mu) * phi);

            let mut feat = Vec::with_capacity(dim_eff + 1);
            feat.push(1.0);
            feat.extend_from_slice(row);

            // score wrt beta_j: phi (y* - mu*) dmu x_j
            let g_common = phi * (y_star - mu_star) * dmu;
            // score wrt phi: mu (y* - mu*) + ln(1-y) - psi((1-mu)phi) + psi(phi)
            let score_phi =
                mu * (y_star - mu_star) + (1.0 - yi).ln() - digamma((1.0 - mu) * phi) + digamma(phi);

            for a in 0..=dim_eff {
                grad[a] += g_common * feat[a];
            }
            grad[dim_eff + 1] += score_phi * phi; // chain rule to ln phi

            // expected information blocks (logit-link Beta regression),
            // chained onto (beta, ln phi)
            let w_bb = phi * phi * (tg_a + tg_b) * dmu * dmu;
            let cross = phi * (mu * tg_a - (1.0 - mu) * tg_b) * dmu;
            let d_pp = tg_a * mu * mu + tg_b * (1.0 - mu) * (1.0 - mu) - trigamma(phi);

            for a in 0..=dim_eff {
                for b in 0..=dim_eff {
                    info[a * k + b] += w_bb * feat[a] * feat[b];
                }
                info[a * k + dim_eff + 1] += cross * feat[a] * phi;
                info[(dim_eff + 1) * k + a] += cross * feat[a] * phi;
            }
            info[(dim_eff + 1) * k + (dim_eff + 1)] += d_pp * phi * phi;
        }

        grad_norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if grad_norm < BETA_GRAD_TOL {
            break;
        }

        let names: Vec<String> = (0..k).map(|i| format!("theta{i}")).collect();
        let step = solve_linear(&info, &grad, k, &names)?;

        // damped update: halve until the likelihood does not fall
        let mut scale = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let mut w_try = weights.clone();
            for j in 0..=dim_eff {
                w_try[j] += scale * step[j];
            }
            let lp_try = log_phi + scale * step[dim_eff + 1];
            if lp_try.is_finite() && lp_try.abs() < 30.0 {
                let ll_try = beta_ll(&x_eff, &y, &w_try, lp_try.exp());
                if ll_try.is_finite() && ll_try >= ll - 1e-12 {
                    debug_assert!(
                        ll_try >= ll - 1e-9,
                        "beta regression likelihood decreased"
                    );
                    weights = w_try;
                    log_phi = lp_try;
                    ll = ll_try;
                    moved = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !moved {
            break;
        }
    }

    if grad_norm >= BETA_GRAD_TOL && iterations >= BETA_MAX_ITER {
        return Err(Error::NonConvergence {
            msg: format!("beta regression: gradient max-norm {grad_norm:.3e} after {iterations} iterations"),
        });
    }

    // expand intercept-only weights back to the full dimension
    let full_weights = if degenerate && dim > 0 {
        let mut w = vec![0.0; dim + 1];
        w[0] = weights[0];
        w
    } else {
        weights
    };

    Ok(BetaRegFit {
        model: BetaRegModel {
            weights: full_weights,
            phi: log_phi.exp(),
        },
        iterations,
        grad_norm,
        clamped,
        intercept_only: degenerate && dim > 0,
        log_likelihood: ll,
    })
}

/// Predicted concreteness: logistic(embedding . weights), strictly in (0, 1).
pub fn predict_concreteness(
    word: &str,
    space: &EmbeddingSpace,
    model: &BetaRegModel,
) -> Result<f64> {
    let v = space.vector(word).ok_or_else(|| Error::MissingWord {
        word: word.into(),
        resource: "embedding space".into(),
    })?;
    Ok(predict_from_vector(v, model))
}

pub fn predict_from_vector(v: &[f64], model: &BetaRegModel) -> f64 {
    let eta: f64 = model.weights[0]
        + v.iter()
            .zip(&model.weights[1..])
            .map(|(a, b)| a * b)
            .sum::<f64>();
    logistic(eta)
}

/// Pearson correlation between model predictions and held-out ratings.
pub fn eval_concreteness(
    model: &BetaRegModel,
    space: &EmbeddingSpace,
    heldout: &BTreeMap<String, f64>,
) -> Result<f64> {
    let mut preds = Vec::new();
    let mut truths = Vec::new();
    for (word, &rating) in heldout {
        if let Some(v) = space.vector(word) {
            preds.push(predict_from_vector(v, model));
            truths.push(rating);
        }
    }
    if preds.len() < 3 {
        return Err(Error::InsufficientData {
            msg: format!("{} held-out words found in the space, need >= 3", preds.len()),
        });
    }
    pearson(&preds, &truths)
}

/// Dated meaning intervals per word; an open end means the meaning persists.
#[derive(Debug, Clone, Default)]
pub struct MeaningsDB {
    pub entries: BTreeMap<String, Vec<(i32, Option<i32>)>>,
}

impl MeaningsDB {
    /// TSV rows `word<TAB>first_year<TAB>last_year` (empty last = open).
    pub fn load(path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
        let mut entries: BTreeMap<String, Vec<(i32, Option<i32>)>> = BTreeMap::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = lineno + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected 3 columns, got {}", fields.len()),
                ));
            }
            let first: i32 = fields[1]
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad year '{}'", fields[1])))?;
            let last: Option<i32> = if fields[2].is_empty() {
                None
            } else {
                Some(fields[2].parse().map_err(|_| {
                    Error::parse(path, lineno, format!("bad year '{}'", fields[2]))
                })?)
            };
            if let Some(l) = last {
                if first > l {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("interval {first}-{l} runs backwards"),
                    ));
                }
            }
            entries.entry(fields[0].to_string()).or_default().push((first, last));
        }
        Ok(MeaningsDB { entries })
    }
}

/// Number of meaning intervals overlapping `[window.0, window.1]`, or `None`
/// when the word is absent (the caller imputes by mean).
pub fn num_meanings(word: &str, db: &MeaningsDB, window: (i32, i32)) -> Result<Option<usize>> {
    if window.0 > window.1 {
        return Err(Error::InvalidArgument {
            msg: format!("window {}-{} runs backwards", window.0, window.1),
        });
    }
    Ok(db.entries.get(word).map(|intervals| {
        intervals
            .iter()
            .filter(|(first, last)| *first <= window.1 && last.map_or(true, |l| l >= window.0))
            .count()
    }))
}

/// Semantic densities for many words against one space, in parallel.
pub fn semantic_density_many(
    words: &[String],
    space: &EmbeddingSpace,
    k: usize,
) -> Vec<Option<f64>> {
    words
        .par_iter()
        .map(|w| semantic_density(w, space, k).ok())
        .collect()
}
