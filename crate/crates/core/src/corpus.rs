//! Data model and ingestion for decade-binned frequencies, per-decade corpus
//! metadata, context co-occurrence tables, and auxiliary lexical resources.
//!
//! File formats:
//! - frequency TSV: `word<TAB>pos<TAB>count_d0<TAB>...<TAB>count_dN`, UTF-8,
//!   `#`-prefixed comment lines skipped;
//! - meta TSV: `decade_index<TAB>token_total<TAB>book_total`;
//! - tokenized corpus: one file per decade, whitespace-separated tokens, one
//!   sentence per line (context windows never cross lines).
//!
//! All loaded structures are immutable after ingestion and safe to share
//! across worker threads.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// The decade grid: `count` bins of ten years starting at `start_year`.
/// Model time `t` is 1-based (bin index + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecadeAxis {
    pub start_year: i32,
    pub count: usize,
}

impl DecadeAxis {
    pub fn new(start_year: i32, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidArgument {
                msg: format!("decade axis needs >= 2 bins, got {count}"),
            });
        }
        Ok(DecadeAxis { start_year, count })
    }

    /// Conventional 1800-2010 grid.
    pub fn default_1800() -> Self {
        DecadeAxis {
            start_year: 1800,
            count: 21,
        }
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + 10 * self.count as i32
    }
}

/// One word's decade-binned counts plus derived relative frequencies.
#[derive(Debug, Clone)]
pub struct WordSeries {
    pub word: String,
    pub pos: String,
    /// Character count of `word`.
    pub length: usize,
    pub raw: Vec<u64>,
    /// raw[t] / tokens_per_decade[t].
    pub rel: Vec<f64>,
}

/// Per-decade corpus totals: tokens and unique books.
#[derive(Debug, Clone)]
pub struct CorpusMeta {
    pub tokens_per_decade: Vec<u64>,
    pub books_per_decade: Vec<u64>,
}

/// Co-occurrence table for one decade.
///
/// `context_vocab` holds the admissible context words (frequency ranks in
/// `(head_exclude, vocab_size]`), `prior` their renormalized frequencies in
/// the same order, and `counts` the tallied ±1-token neighbors per target
/// word (in-vocabulary neighbors only, both window positions pooled).
#[derive(Debug, Clone)]
pub struct ContextTable {
    pub decade: usize,
    pub counts: HashMap<String, HashMap<String, u64>>,
    pub context_vocab: Vec<String>,
    pub prior: Vec<f64>,
    vocab_index: HashMap<String, usize>,
}

impl ContextTable {
    /// Assemble a table from already-tallied parts, enforcing the invariants
    /// the file loader guarantees: prior sums to 1 over the vocabulary and
    /// is strictly positive.
    pub fn from_parts(
        decade: usize,
        counts: HashMap<String, HashMap<String, u64>>,
        context_vocab: Vec<String>,
        prior: Vec<f64>,
    ) -> Result<Self> {
        if context_vocab.len() != prior.len() {
            return Err(Error::InvalidArgument {
                msg: "vocabulary and prior lengths differ".into(),
            });
        }
        let total: f64 = prior.iter().sum();
        if (total - 1.0).abs() > 1e-9 || prior.iter().any(|p| *p <= 0.0) {
            return Err(Error::InvalidArgument {
                msg: format!("prior must be strictly positive and sum to 1, sums to {total}"),
            });
        }
        let vocab_index: HashMap<String, usize> = context_vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(ContextTable {
            decade,
            counts,
            context_vocab,
            prior,
            vocab_index,
        })
    }

    pub fn vocab_rank(&self, word: &str) -> Option<usize> {
        self.vocab_index.get(word).copied()
    }

    pub fn prior_of(&self, word: &str) -> Option<f64> {
        self.vocab_index.get(word).map(|&i| self.prior[i])
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Load per-decade token and book totals.
pub fn load_meta(path: &Path, axis: &DecadeAxis) -> Result<CorpusMeta> {
    let reader = open(path)?;
    let mut tokens = vec![None; axis.count];
    let mut books = vec![None; axis.count];
    let mut rows = 0usize;
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
        let decade: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad decade index '{}'", fields[0])))?;
        if decade >= axis.count {
            return Err(Error::parse(
                path,
                lineno,
                format!("decade {decade} outside axis of {} bins", axis.count),
            ));
        }
        let tok: u64 = fields[1]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad token total '{}'", fields[1])))?;
        let bk: u64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad book total '{}'", fields[2])))?;
        if tok == 0 || bk == 0 {
            return Err(Error::parse(
                path,
                lineno,
                format!("nonpositive totals for decade {decade}"),
            ));
        }
        if tokens[decade].is_some() {
            return Err(Error::Duplicate {
                path: path.into(),
                line: lineno,
                key: format!("decade {decade}"),
            });
        }
        tokens[decade] = Some(tok);
        books[decade] = Some(bk);
        rows += 1;
    }
    if rows != axis.count {
        return Err(Error::parse(
            path,
            0,
            format!("meta has {rows} decades, axis has {}", axis.count),
        ));
    }
    Ok(CorpusMeta {
        tokens_per_decade: tokens.into_iter().map(|t| t.unwrap()).collect(),
        books_per_decade: books.into_iter().map(|b| b.unwrap()).collect(),
    })
}

/// Load the frequency TSV; relative frequencies come from the meta totals.
///
/// Output is sorted by (word, pos). Duplicate (word, pos) rows, wrong column
/// counts, and unparsable counts are errors citing the line number.
pub fn load_frequencies(
    path: &Path,
    axis: &DecadeAxis,
    meta: &CorpusMeta,
) -> Result<Vec<WordSeries>> {
    let reader = open(path)?;
    let mut seen: BTreeMap<(String, String), Vec<u64>> = BTreeMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 + axis.count {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected {} columns, got {}", 2 + axis.count, fields.len()),
            ));
        }
        let word = fields[0].to_string();
        let pos = fields[1].to_string();
        if word.is_empty() {
            return Err(Error::parse(path, lineno, "empty word"));
        }
        let mut raw = Vec::with_capacity(axis.count);
        for (i, f) in fields[2..].iter().enumerate() {
            let c: u64 = f.parse().map_err(|_| {
                Error::parse(
                    path,
                    lineno,
                    format!("bad count '{f}' in decade column {i}"),
                )
            })?;
            raw.push(c);
        }
        if seen.contains_key(&(word.clone(), pos.clone())) {
            return Err(Error::Duplicate {
                path: path.into(),
                line: lineno,
                key: format!("{word}/{pos}"),
            });
        }
        seen.insert((word, pos), raw);
    }

    let mut out = Vec::with_capacity(seen.len());
    for ((word, pos), raw) in seen {
        let rel: Vec<f64> = raw
            .iter()
            .zip(&meta.tokens_per_decade)
            .map(|(&c, &t)| c as f64 / t as f64)
            .collect();
        let length = word.chars().count();
        out.push(WordSeries {
            word,
            pos,
            length,
            raw,
            rel,
        });
    }
    Ok(out)
}

/// Normalize a series to unit mass across the decades.
pub fn normalize_series(s: &WordSeries) -> Result<Vec<f64>> {
    normalize_rel(&s.rel).ok_or_else(|| Error::DegenerateSeries {
        word: s.word.clone(),
    })
}

/// Normalize any nonnegative vector to unit sum; `None` when it has no mass.
pub fn normalize_rel(rel: &[f64]) -> Option<Vec<f64>> {
    let total: f64 = rel.iter().sum();
    if total <= 0.0 {
        return None;
    }
    Some(rel.iter().map(|v| v / total).collect())
}

/// Build a decade's context table from its tokenized corpus file.
///
/// The context vocabulary is the words at frequency ranks
/// `(head_exclude, vocab_size]` (ties broken lexicographically); windows are
/// the immediate left and right neighbor within a line, pooled into one
/// count. `targets` optionally restricts which words get a tallied row —
/// vocabulary and prior are unaffected by the restriction.
pub fn build_context_table(
    tokens_path: &Path,
    decade: usize,
    vocab_size: usize,
    head_exclude: usize,
    targets: Option<&std::collections::BTreeSet<String>>,
) -> Result<ContextTable> {
    if head_exclude >= vocab_size {
        return Err(Error::InvalidArgument {
            msg: format!("head_exclude {head_exclude} must be < vocab_size {vocab_size}"),
        });
    }

    // pass 1: unigram tallies
    let reader = open(tokens_path)?;
    let mut unigram: HashMap<String, u64> = HashMap::new();
    let mut lines: Vec<String> = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(tokens_path, e))?;
        for tok in line.split_whitespace() {
            *unigram.entry(tok.to_string()).or_insert(0) += 1;
        }
        lines.push(line);
    }
    if unigram.len() < vocab_size {
        return Err(Error::VocabTooSmall {
            distinct: unigram.len(),
            needed: vocab_size,
        });
    }

    // rank by (count desc, word asc)
    let mut ranked: Vec<(&String, &u64)> = unigram.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let context_vocab: Vec<String> = ranked[head_exclude..vocab_size]
        .iter()
        .map(|(w, _)| (*w).clone())
        .collect();
    let vocab_index: HashMap<String, usize> = context_vocab
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let vocab_total: u64 = context_vocab.iter().map(|w| unigram[w]).sum();
    let prior: Vec<f64> = context_vocab
        .iter()
        .map(|w| unigram[w] as f64 / vocab_total as f64)
        .collect();

    // pass 2: +-1 token windows, line-local
    let mut counts: HashMap<String, HashMap<String, u64>> = HashMap::new();
    for line in &lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        for (i, &target) in toks.iter().enumerate() {
            if let Some(t) = targets {
                if !t.contains(target) {
                    continue;
                }
            }
            let mut tally = |neighbor: &str| {
                if vocab_index.contains_key(neighbor) {
                    *counts
                        .entry(target.to_string())
                        .or_default()
                        .entry(neighbor.to_string())
                        .or_insert(0) += 1;
                }
            };
            if i > 0 {
                tally(toks[i - 1]);
            }
            if i + 1 < toks.len() {
                tally(toks[i + 1]);
            }
        }
    }

    Ok(ContextTable {
        decade,
        counts,
        context_vocab,
        prior,
        vocab_index,
    })
}
