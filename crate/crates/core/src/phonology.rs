//! Phonological factor estimators over IPA-style transcriptions: typicality
//! under a phoneme language model, lexicon-wide soft neighborhood density,
//! and syllable density.
//!
//! The language model is behind the [`PhonemeLm`] trait; the shipped default
//! is a Lidstone-smoothed trigram with a start-boundary symbol, trained on a
//! seeded multinomial sample of word tokens. The typicality formula consumes
//! only next-phone log-probabilities, so any conforming model plugs in.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Start-of-word boundary symbol; part of every model inventory.
pub const BOUNDARY: &str = "<#>";

/// A word's phone sequence with its syllabic-nucleus mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcription {
    pub word: String,
    pub phones: Vec<String>,
    pub nuclei_mask: Vec<bool>,
}

/// Next-phone language model over a closed phoneme inventory.
///
/// Implementations guarantee strictly negative-or-zero log-probabilities
/// that exponentiate to a distribution summing to 1 over the inventory for
/// every reachable prefix.
pub trait PhonemeLm {
    fn inventory(&self) -> &[String];
    /// Natural-log probability of `next` after `prefix` (word-initial
    /// prefixes are implicitly boundary-padded).
    fn log_prob(&self, prefix: &[String], next: &str) -> Result<f64>;
}

/// Lidstone-smoothed n-gram phoneme model (default order 3, alpha 0.1).
#[derive(Debug, Clone)]
pub struct NGramPhonemeLm {
    pub order: usize,
    pub alpha: f64,
    symbols: Vec<String>, // sorted; includes BOUNDARY
    index: HashMap<String, u32>,
    counts: HashMap<Vec<u32>, HashMap<u32, u64>>,
    totals: HashMap<Vec<u32>, u64>,
}

impl NGramPhonemeLm {
    /// Untrained model over the given symbols: every conditional is uniform.
    pub fn from_inventory<I: IntoIterator<Item = String>>(symbols: I, alpha: f64) -> Result<Self> {
        let mut set: BTreeSet<String> = symbols.into_iter().collect();
        set.insert(BOUNDARY.to_string());
        if set.len() < 2 {
            return Err(Error::InvalidArgument {
                msg: "phoneme inventory must contain at least one symbol".into(),
            });
        }
        if alpha <= 0.0 {
            return Err(Error::InvalidArgument {
                msg: format!("smoothing constant must be positive, got {alpha}"),
            });
        }
        let symbols: Vec<String> = set.into_iter().collect();
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Ok(NGramPhonemeLm {
            order: 3,
            alpha,
            symbols,
            index,
            counts: HashMap::new(),
            totals: HashMap::new(),
        })
    }

    fn observe(&mut self, phones: &[String]) {
        let b = self.index[BOUNDARY];
        let mut ctx: Vec<u32> = vec![b; self.order - 1];
        for p in phones {
            let id = self.index[p.as_str()];
            *self
                .counts
                .entry(ctx.clone())
                .or_default()
                .entry(id)
                .or_insert(0) += 1;
            *self.totals.entry(ctx.clone()).or_insert(0) += 1;
            ctx.rotate_left(1);
            let last = ctx.len() - 1;
            ctx[last] = id;
        }
    }

    /// Sorted text dump of the count tables; identical dumps mean identical
    /// trained models.
    pub fn canonical_dump(&self) -> String {
        let mut rows: Vec<String> = Vec::new();
        for (ctx, nexts) in &self.counts {
            let ctx_syms: Vec<&str> = ctx.iter().map(|&i| self.symbols[i as usize].as_str()).collect();
            for (next, n) in nexts {
                rows.push(format!(
                    "{}\t{}\t{}",
                    ctx_syms.join(" "),
                    self.symbols[*next as usize],
                    n
                ));
            }
        }
        rows.sort();
        rows.join("\n")
    }
}

impl PhonemeLm for NGramPhonemeLm {
    fn inventory(&self) -> &[String] {
        &self.symbols
    }

    fn log_prob(&self, prefix: &[String], next: &str) -> Result<f64> {
        let next_id = *self.index.get(next).ok_or_else(|| Error::UnknownSymbol {
            word: String::new(),
            symbol: next.into(),
        })?;
        let b = self.index[BOUNDARY];
        let mut ctx: Vec<u32> = vec![b; self.order - 1];
        for p in prefix.iter().rev().take(self.order - 1).rev() {
            let id = *self.index.get(p.as_str()).ok_or_else(|| Error::UnknownSymbol {
                word: String::new(),
                symbol: p.into(),
            })?;
            ctx.rotate_left(1);
            let last = ctx.len() - 1;
            ctx[last] = id;
        }
        let v = self.symbols.len() as f64;
        let total = self.totals.get(&ctx).copied().unwrap_or(0) as f64;
        let count = self
            .counts
            .get(&ctx)
            .and_then(|m| m.get(&next_id))
            .copied()
            .unwrap_or(0) as f64;
        Ok(((count + self.alpha) / (total + self.alpha * v)).ln())
    }
}

/// Load a pronunciation lexicon: `word<TAB>phone phone ...` rows.
///
/// Nuclei are classified by membership in `vowels`. When a full `inventory`
/// is supplied, phones outside it (and outside the vowel set) are an error;
/// without one, any symbol is accepted. Duplicate words keep the last row,
/// with a warning recorded.
pub fn load_pronunciations(
    path: &Path,
    vowels: &BTreeSet<String>,
    inventory: Option<&BTreeSet<String>>,
) -> Result<(BTreeMap<String, Transcription>, Vec<String>)> {
    let reader = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let mut out: BTreeMap<String, Transcription> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, phones_field) = line.split_once('\t').ok_or_else(|| {
            Error::parse(path, lineno, "expected word<TAB>phones")
        })?;
        let phones: Vec<String> = phones_field
            .split_whitespace()
            .map(|s| s.to_string())
            .collect();
        if phones.is_empty() {
            return Err(Error::parse(path, lineno, format!("'{word}' has no phones")));
        }
        for p in &phones {
            if p == BOUNDARY {
                return Err(Error::UnknownSymbol {
                    word: word.into(),
                    symbol: p.clone(),
                });
            }
            if let Some(inv) = inventory {
                if !inv.contains(p) && !vowels.contains(p) {
                    return Err(Error::UnknownSymbol {
                        word: word.into(),
                        symbol: p.clone(),
                    });
                }
            }
        }
        let nuclei_mask: Vec<bool> = phones.iter().map(|p| vowels.contains(p)).collect();
        let t = Transcription {
            word: word.to_string(),
            phones,
            nuclei_mask,
        };
        if out.insert(word.to_string(), t).is_some() {
            warnings.push(format!("{}:{lineno}: duplicate entry for '{word}', keeping the last", path.display()));
        }
    }
    Ok((out, warnings))
}

/// Vowel-set file: one nucleus symbol per line.
pub fn load_symbol_set(path: &Path) -> Result<BTreeSet<String>> {
    let reader = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let mut set = BTreeSet::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let sym = line.trim();
        if sym.is_empty() || sym.starts_with('#') {
            continue;
        }
        set.insert(sym.to_string());
    }
    Ok(set)
}

/// Train the default trigram model on a seeded multinomial token sample.
///
/// Words are drawn with replacement proportionally to their relative
/// frequencies (restricted to the lexicon/frequency overlap); the draw order
/// is fixed by the seed, so training is reproducible bit for bit.
pub fn train_phoneme_lm(
    lexicon: &BTreeMap<String, Transcription>,
    freqs: &BTreeMap<String, f64>,
    sample_size: usize,
    seed: u64,
    alpha: f64,
) -> Result<NGramPhonemeLm> {
    let items: Vec<(&String, f64)> = freqs
        .iter()
        .filter(|(w, f)| lexicon.contains_key(*w) && **f > 0.0)
        .map(|(w, f)| (w, *f))
        .collect();
    if items.is_empty() {
        return Err(Error::NoData);
    }
    let mut symbols: BTreeSet<String> = BTreeSet::new();
    for t in lexicon.values() {
        symbols.extend(t.phones.iter().cloned());
    }
    let mut lm = NGramPhonemeLm::from_inventory(symbols, alpha)?;

    let mut cumulative = Vec::with_capacity(items.len());
    let mut acc = 0.0;
    for (_, f) in &items {
        acc += f;
        cumulative.push(acc);
    }
    let total = acc;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_size {
        let r: f64 = rng.gen::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c < r).min(items.len() - 1);
        let word = items[idx].0;
        lm.observe(&lexicon[word].phones);
    }
    Ok(lm)
}

/// Mean next-phone log-probability over the transcription (no end-of-word
/// term): sum_i ln P(phone_i | phones_1..i-1) / k.
pub fn phonological_typicality(w: &Transcription, lm: &dyn PhonemeLm) -> Result<f64> {
    if w.phones.is_empty() {
        return Err(Error::InvalidArgument {
            msg: format!("'{}' has an empty transcription", w.word),
        });
    }
    let mut total = 0.0;
    for i in 0..w.phones.len() {
        let lp = lm.log_prob(&w.phones[..i], &w.phones[i]).map_err(|e| match e {
            Error::UnknownSymbol { symbol, .. } => Error::UnknownSymbol {
                word: w.word.clone(),
                symbol,
            },
            other => other,
        })?;
        total += lp;
    }
    Ok(total / w.phones.len() as f64)
}

/// Edit distance over phone symbols divided by the longer length.
pub fn normalized_levenshtein(u: &Transcription, v: &Transcription) -> f64 {
    let d = levenshtein(&u.phones, &v.phones);
    d as f64 / u.phones.len().max(v.phones.len()) as f64
}

/// Plain unit-cost edit distance between symbol sequences.
pub fn levenshtein(a: &[String], b: &[String]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, sa) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, sb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(sa != sb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Soft neighborhood size: sum over the lexicon of exp(-normalized distance).
/// Includes the self term (exp(0) = 1) when `w` is in the lexicon.
pub fn phonological_density(w: &Transcription, lexicon: &[Transcription]) -> f64 {
    lexicon
        .par_iter()
        .map(|v| (-normalized_levenshtein(w, v)).exp())
        .sum()
}

/// Syllabic nuclei per segment; 0 signals a degenerate all-consonant
/// transcription (callers should warn).
pub fn phonological_complexity(w: &Transcription) -> f64 {
    if w.phones.is_empty() {
        return 0.0;
    }
    let nuclei = w.nuclei_mask.iter().filter(|&&b| b).count();
    nuclei as f64 / w.phones.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn t(word: &str, phones: &[&str], vowels: &[&str]) -> Transcription {
        let vset: BTreeSet<String> = vowels.iter().map(|s| s.to_string()).collect();
        let phones: Vec<String> = phones.iter().map(|s| s.to_string()).collect();
        let nuclei_mask = phones.iter().map(|p| vset.contains(p)).collect();
        Transcription {
            word: word.into(),
            phones,
            nuclei_mask,
        }
    }

    #[test]
    fn load_parses_phones_and_mask() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("lex.tsv");
        let mut f = File::create(&p).unwrap();
        writeln!(f, "cat\tk \u{e6} t").unwrap();
        let vowels: BTreeSet<String> = ["\u{e6}".to_string()].into();
        let (lex, warnings) = load_pronunciations(&p, &vowels, None).unwrap();
        assert!(warnings.is_empty());
        let cat = &lex["cat"];
        assert_eq!(cat.phones, vec!["k", "\u{e6}", "t"]);
        assert_eq!(cat.nuclei_mask, vec![false, true, false]);
    }

    #[test]
    fn empty_phones_rejected_and_duplicates_warn() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("lex.tsv");
        let mut f = File::create(&p).unwrap();
        writeln!(f, "cat\t").unwrap();
        let vowels = BTreeSet::new();
        assert!(load_pronunciations(&p, &vowels, None).is_err());

        let p2 = dir.path().join("lex2.tsv");
        let mut f = File::create(&p2).unwrap();
        writeln!(f, "cat\tk a t").unwrap();
        writeln!(f, "cat\tk a t s").unwrap();
        let (lex, warnings) = load_pronunciations(&p2, &vowels, None).unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(lex["cat"].phones.len(), 4); // last row wins
    }

    #[test]
    fn unknown_symbol_with_inventory() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("lex.tsv");
        let mut f = File::create(&p).unwrap();
        writeln!(f, "cat\tk a q").unwrap();
        let vowels: BTreeSet<String> = ["a".to_string()].into();
        let inventory: BTreeSet<String> = ["k".to_string(), "t".to_string()].into();
        match load_pronunciations(&p, &vowels, Some(&inventory)) {
            Err(Error::UnknownSymbol { word, symbol }) => {
                assert_eq!(word, "cat");
                assert_eq!(symbol, "q");
            }
            other => panic!("expected unknown-symbol error, got {other:?}"),
        }
    }

    #[test]
    fn single_word_lexicon_counting() {
        let mut lexicon = BTreeMap::new();
        lexicon.insert("w".to_string(), t("w", &["a"], &["a"]));
        let mut freqs = BTreeMap::new();
        freqs.insert("w".to_string(), 1.0);
        let n = 1000;
        let lm = train_phoneme_lm(&lexicon, &freqs, n, 1, 0.1).unwrap();
        // P(a | start) = (N + alpha) / (N + alpha * |inv|); inventory = {a, boundary}
        let expected = ((n as f64 + 0.1) / (n as f64 + 0.1 * 2.0)).ln();
        let lp = lm.log_prob(&[], "a").unwrap();
        assert!((lp - expected).abs() < 1e-12);
    }

    #[test]
    fn trained_counts_match_independent_tally() {
        let mut lexicon = BTreeMap::new();
        lexicon.insert("ab".to_string(), t("ab", &["a", "b"], &["a"]));
        lexicon.insert("ba".to_string(), t("ba", &["b", "a"], &["a"]));
        let mut freqs = BTreeMap::new();
        freqs.insert("ab".to_string(), 0.5);
        freqs.insert("ba".to_string(), 0.5);
        let lm = train_phoneme_lm(&lexicon, &freqs, 500, 7, 0.1).unwrap();

        // independent re-draw of the same seeded sample, tallied by hand
        let items = ["ab", "ba"]; // sorted order, equal weights
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut n_ab = 0u64;
        for _ in 0..500 {
            let r: f64 = rng.gen::<f64>() * 1.0;
            if r < 0.5 {
                n_ab += 1;
            }
        }
        let n_ba = 500 - n_ab;
        let _ = items;
        // context (boundary, boundary): next 'a' seen n_ab times, 'b' n_ba
        let v = 3.0; // a, b, boundary
        let expect_a = ((n_ab as f64 + 0.1) / (500.0 + 0.1 * v)).ln();
        let got_a = lm.log_prob(&[], "a").unwrap();
        assert!((got_a - expect_a).abs() < 1e-12);
        // context (boundary, a): always followed by b in 'ab'
        let expect_b = ((n_ab as f64 + 0.1) / (n_ab as f64 + 0.1 * v)).ln();
        let got_b = lm.log_prob(&["a".to_string()], "b").unwrap();
        assert!((got_b - expect_b).abs() < 1e-12);
    }

    #[test]
    fn fixed_seed_training_reproducible() {
        let mut lexicon = BTreeMap::new();
        for (w, ph) in [("pat", vec!["p", "a", "t"]), ("tap", vec!["t", "a", "p"]), ("apt", vec!["a", "p", "t"])] {
            let phr: Vec<&str> = ph.iter().copied().collect();
            lexicon.insert(w.to_string(), t(w, &phr, &["a"]));
        }
        let freqs: BTreeMap<String, f64> = lexicon
            .keys()
            .map(|w| (w.clone(), 1.0 / 3.0))
            .collect();
        let a = train_phoneme_lm(&lexicon, &freqs, 2000, 42, 0.1).unwrap();
        let b = train_phoneme_lm(&lexicon, &freqs, 2000, 42, 0.1).unwrap();
        assert_eq!(a.canonical_dump(), b.canonical_dump());
        let c = train_phoneme_lm(&lexicon, &freqs, 2000, 43, 0.1).unwrap();
        assert_ne!(a.canonical_dump(), c.canonical_dump());
    }

    #[test]
    fn uniform_model_typicality_is_minus_ln_v() {
        let lm = NGramPhonemeLm::from_inventory(
            ["p", "a", "t", "k"].iter().map(|s| s.to_string()),
            0.1,
        )
        .unwrap();
        let v = lm.inventory().len() as f64; // 5 with the boundary
        let word = t("pat", &["p", "a", "t"], &["a"]);
        let typ = phonological_typicality(&word, &lm).unwrap();
        assert!((typ + v.ln()).abs() < 1e-12);
    }

    #[test]
    fn conditionals_sum_to_one_for_random_prefixes() {
        use rand::seq::SliceRandom;
        let mut lexicon = BTreeMap::new();
        for (w, ph) in [
            ("pat", vec!["p", "a", "t"]),
            ("spat", vec!["s", "p", "a", "t"]),
            ("tips", vec!["t", "i", "p", "s"]),
        ] {
            let phr: Vec<&str> = ph.iter().copied().collect();
            lexicon.insert(w.to_string(), t(w, &phr, &["a", "i"]));
        }
        let freqs: BTreeMap<String, f64> =
            lexicon.keys().map(|w| (w.clone(), 1.0)).collect();
        let lm = train_phoneme_lm(&lexicon, &freqs, 300, 3, 0.1).unwrap();
        let inv: Vec<String> = lm.inventory().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let len = rng.gen_range(0..4usize);
            let prefix: Vec<String> = (0..len)
                .map(|_| inv.choose(&mut rng).unwrap().clone())
                .collect();
            let total: f64 = inv
                .iter()
                .map(|s| lm.log_prob(&prefix, s).unwrap().exp())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "prefix {prefix:?} sums to {total}");
        }
    }

    #[test]
    fn typicality_matches_hand_chained_conditionals() {
        let mut lexicon = BTreeMap::new();
        lexicon.insert("aba".to_string(), t("aba", &["a", "b", "a"], &["a"]));
        let freqs: BTreeMap<String, f64> = [("aba".to_string(), 1.0)].into();
        let lm = train_phoneme_lm(&lexicon, &freqs, 100, 1, 0.1).unwrap();
        let word = t("aba", &["a", "b", "a"], &["a"]);
        let typ = phonological_typicality(&word, &lm).unwrap();
        let chain = [
            lm.log_prob(&[], "a").unwrap(),
            lm.log_prob(&["a".to_string()], "b").unwrap(),
            lm.log_prob(&["a".to_string(), "b".to_string()], "a").unwrap(),
        ];
        let expected = chain.iter().sum::<f64>() / 3.0;
        assert!((typ - expected).abs() < 1e-12);
    }

    #[test]
    fn typicality_depends_only_on_phones() {
        let lm = NGramPhonemeLm::from_inventory(
            ["x", "y"].iter().map(|s| s.to_string()),
            0.1,
        )
        .unwrap();
        let a = t("spelledone", &["x", "y"], &["y"]);
        let b = t("other", &["x", "y"], &["y"]);
        assert_eq!(
            phonological_typicality(&a, &lm).unwrap(),
            phonological_typicality(&b, &lm).unwrap()
        );
    }

    #[test]
    fn unknown_phone_names_word_and_symbol() {
        let lm = NGramPhonemeLm::from_inventory(["a".to_string()], 0.1).unwrap();
        let w = t("weird", &["a", "zz"], &["a"]);
        match phonological_typicality(&w, &lm) {
            Err(Error::UnknownSymbol { word, symbol }) => {
                assert_eq!(word, "weird");
                assert_eq!(symbol, "zz");
            }
            other => panic!("expected unknown symbol, got {other:?}"),
        }
    }

    #[test]
    fn levenshtein_basics() {
        let a = t("same", &["s", "a", "m"], &["a"]);
        assert_eq!(normalized_levenshtein(&a, &a), 0.0);

        let b = t("diff", &["x", "y", "z"], &[]);
        assert_eq!(normalized_levenshtein(&a, &b), 1.0);

        let kitten = t("kitten", &["k", "i", "t", "t", "e", "n"], &["i", "e"]);
        let sitting = t("sitting", &["s", "i", "t", "t", "i", "n", "g"], &["i"]);
        assert!((normalized_levenshtein(&kitten, &sitting) - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn levenshtein_matches_dp_table_oracle() {
        use rand::seq::SliceRandom;
        let symbols = ["p", "t", "k", "a", "i"];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rand_word = |rng: &mut ChaCha8Rng| -> Vec<String> {
            let len = rng.gen_range(1..8usize);
            (0..len)
                .map(|_| symbols.choose(rng).unwrap().to_string())
                .collect()
        };
        // independent full-table DP
        fn oracle(a: &[String], b: &[String]) -> usize {
            let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
            for i in 0..=a.len() {
                d[i][0] = i;
            }
            for j in 0..=b.len() {
                d[0][j] = j;
            }
            for i in 1..=a.len() {
                for j in 1..=b.len() {
                    let cost = usize::from(a[i - 1] != b[j - 1]);
                    d[i][j] = (d[i - 1][j] + 1)
                        .min(d[i][j - 1] + 1)
                        .min(d[i - 1][j - 1] + cost);
                }
            }
            d[a.len()][b.len()]
        }
        for _ in 0..300 {
            let a = rand_word(&mut rng);
            let b = rand_word(&mut rng);
            assert_eq!(levenshtein(&a, &b), oracle(&a, &b));
        }
    }

    #[test]
    fn metric_properties_on_random_triples() {
        use rand::seq::SliceRandom;
        let symbols = ["p", "t", "a"];
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rand_t = |rng: &mut ChaCha8Rng| -> Transcription {
            let len = rng.gen_range(1..6usize);
            let phones: Vec<&str> = (0..len)
                .map(|_| *symbols.choose(rng).unwrap())
                .collect();
            t("w", &phones, &["a"])
        };
        for _ in 0..200 {
            let a = rand_t(&mut rng);
            let b = rand_t(&mut rng);
            let c = rand_t(&mut rng);
            // symmetry of the normalized distance
            assert_eq!(normalized_levenshtein(&a, &b), normalized_levenshtein(&b, &a));
            // zero iff equal phone sequences
            if a.phones == b.phones {
                assert_eq!(normalized_levenshtein(&a, &b), 0.0);
            } else {
                assert!(normalized_levenshtein(&a, &b) > 0.0);
            }
            // triangle inequality on the raw distance
            let ab = levenshtein(&a.phones, &b.phones);
            let bc = levenshtein(&b.phones, &c.phones);
            let ac = levenshtein(&a.phones, &c.phones);
            assert!(ac <= ab + bc);
        }
    }

    #[test]
    fn density_closed_forms() {
        let w = t("w", &["p", "a"], &["a"]);
        assert!((phonological_density(&w, &[w.clone()]) - 1.0).abs() < 1e-15);

        let v = t("v", &["t", "i"], &["i"]); // distance 1 after normalization
        let expected = 1.0 + (-1.0f64).exp();
        assert!((phonological_density(&w, &[w.clone(), v]) - expected).abs() < 1e-12);
    }

    #[test]
    fn density_matches_naive_double_loop() {
        use rand::seq::SliceRandom;
        let symbols = ["p", "t", "k", "s", "a", "i", "u"];
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let lexicon: Vec<Transcription> = (0..100)
            .map(|i| {
                let len = rng.gen_range(2..9usize);
                let phones: Vec<&str> = (0..len)
                    .map(|_| *symbols.choose(&mut rng).unwrap())
                    .collect();
                t(&format!("w{i}"), &phones, &["a", "i", "u"])
            })
            .collect();
        for w in lexicon.iter().take(10) {
            let fast = phonological_density(w, &lexicon);
            let mut slow = 0.0;
            for v in &lexicon {
                let mut dtab = vec![vec![0usize; v.phones.len() + 1]; w.phones.len() + 1];
                for i in 0..=w.phones.len() {
                    dtab[i][0] = i;
                }
                for j in 0..=v.phones.len() {
                    dtab[0][j] = j;
                }
                for i in 1..=w.phones.len() {
                    for j in 1..=v.phones.len() {
                        let cost = usize::from(w.phones[i - 1] != v.phones[j - 1]);
                        dtab[i][j] = (dtab[i - 1][j] + 1)
                            .min(dtab[i][j - 1] + 1)
                            .min(dtab[i - 1][j - 1] + cost);
                    }
                }
                let nd = dtab[w.phones.len()][v.phones.len()] as f64
                    / w.phones.len().max(v.phones.len()) as f64;
                slow += (-nd).exp();
            }
            assert!((fast - slow).abs() < 1e-9, "fast {fast} slow {slow}");
        }
    }

    #[test]
    fn density_bounds_when_word_in_lexicon() {
        let lexicon: Vec<Transcription> = vec![
            t("w1", &["p", "a"], &["a"]),
            t("w2", &["t", "a"], &["a"]),
            t("w3", &["k", "i", "p"], &["i"]),
        ];
        for w in &lexicon {
            let d = phonological_density(w, &lexicon);
            assert!(d >= 1.0 && d <= lexicon.len() as f64);
        }
    }

    #[test]
    fn complexity_cases() {
        let v = t("v", &["a"], &["a"]);
        assert_eq!(phonological_complexity(&v), 1.0);

        let mixed = t("m", &["p", "a", "t", "i", "u"], &["a", "i", "u"]);
        assert!((phonological_complexity(&mixed) - 0.6).abs() < 1e-15);

        let cons = t("c", &["p", "t", "k"], &["a"]);
        assert_eq!(phonological_complexity(&cons), 0.0);
    }
}
