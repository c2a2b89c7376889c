//! Contextual diversity: how close a word's neighbor distribution sits to
//! the corpus-wide context prior.
//!
//! For a word w with conditional context distribution P(c|w) and prior P(c),
//! the divergence D = sum_c P(c|w) ln(P(c|w) / P(c)) is taken over the
//! observed support (no smoothing; the prior is strictly positive on the
//! whole context vocabulary). Contextual diversity is exp(-D), in (0, 1],
//! with 1 meaning the word's contexts mirror the language at large.

use crate::corpus::ContextTable;
use crate::error::{Error, Result};

/// A word's conditional context distribution within one decade.
#[derive(Debug, Clone)]
pub struct ContextProfile {
    pub word: String,
    pub decade: usize,
    /// (context-vocab index, P(c|w)) over the observed support, index-sorted.
    pub cond: Vec<(usize, f64)>,
}

/// Build P(c|w) from the table's tallies for `w`.
pub fn context_profile(word: &str, table: &ContextTable) -> Result<ContextProfile> {
    let counts = table.counts.get(word).ok_or_else(|| Error::NoContext {
        word: word.into(),
    })?;
    let mut entries: Vec<(usize, u64)> = counts
        .iter()
        .filter_map(|(c, &n)| table.vocab_rank(c).map(|i| (i, n)))
        .collect();
    if entries.is_empty() {
        return Err(Error::NoContext { word: word.into() });
    }
    entries.sort_by_key(|&(i, _)| i);
    let total: u64 = entries.iter().map(|&(_, n)| n).sum();
    let cond = entries
        .into_iter()
        .map(|(i, n)| (i, n as f64 / total as f64))
        .collect();
    Ok(ContextProfile {
        word: word.into(),
        decade: table.decade,
        cond,
    })
}

/// D = sum over the profile's support of P(c|w) ln(P(c|w)/P(c)); natural log.
pub fn kl_to_prior(profile: &ContextProfile, table: &ContextTable) -> f64 {
    let mut kl = 0.0;
    for &(idx, p) in &profile.cond {
        let q = table.prior[idx];
        debug_assert!(q > 0.0, "prior must be positive on the context vocabulary");
        kl += p * (p / q).ln();
    }
    kl.max(0.0)
}

/// exp(-D): 1 when the word's contexts match the prior, near 0 when peaked.
pub fn contextual_diversity(word: &str, table: &ContextTable) -> Result<f64> {
    let profile = context_profile(word, table)?;
    Ok((-kl_to_prior(&profile, table)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// A table built directly from parts, bypassing file ingestion.
    fn table(vocab: &[(&str, f64)], counts: &[(&str, &[(&str, u64)])]) -> ContextTable {
        let context_vocab: Vec<String> = vocab.iter().map(|(w, _)| w.to_string()).collect();
        let prior: Vec<f64> = vocab.iter().map(|(_, p)| *p).collect();
        let mut cmap: HashMap<String, HashMap<String, u64>> = HashMap::new();
        for (target, neigh) in counts {
            let inner: HashMap<String, u64> =
                neigh.iter().map(|(c, n)| (c.to_string(), *n)).collect();
            cmap.insert(target.to_string(), inner);
        }
        ContextTable::from_parts(0, cmap, context_vocab, prior).unwrap()
    }

    #[test]
    fn single_context_profile() {
        let t = table(&[("c0", 0.5), ("c1", 0.5)], &[("w", &[("c0", 4)])]);
        let p = context_profile("w", &t).unwrap();
        assert_eq!(p.cond, vec![(0, 1.0)]);
    }

    #[test]
    fn three_to_one_counts() {
        let t = table(
            &[("c0", 0.5), ("c1", 0.5)],
            &[("w", &[("c0", 3), ("c1", 1)])],
        );
        let p = context_profile("w", &t).unwrap();
        assert_eq!(p.cond, vec![(0, 0.75), (1, 0.25)]);
    }

    #[test]
    fn all_neighbors_out_of_vocab_is_no_context() {
        let t = table(&[("c0", 1.0)], &[("w", &[("rare", 5)])]);
        assert!(matches!(
            context_profile("w", &t),
            Err(Error::NoContext { .. })
        ));
    }

    #[test]
    fn kl_of_prior_equal_profile_is_zero() {
        let t = table(
            &[("c0", 0.25), ("c1", 0.75)],
            &[("w", &[("c0", 1), ("c1", 3)])],
        );
        let p = context_profile("w", &t).unwrap();
        assert!(kl_to_prior(&p, &t).abs() < 1e-12);
        assert!((contextual_diversity("w", &t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_profile_closed_form() {
        // single context with prior 0.01 -> KL = ln 100, CDiv = 0.01
        let vocab: Vec<(String, f64)> = (0..100).map(|i| (format!("c{i:02}"), 0.01)).collect();
        let vocab_refs: Vec<(&str, f64)> = vocab.iter().map(|(w, p)| (w.as_str(), *p)).collect();
        let t = table(&vocab_refs, &[("w", &[("c00", 7)])]);
        let p = context_profile("w", &t).unwrap();
        let kl = kl_to_prior(&p, &t);
        assert!((kl - 100.0f64.ln()).abs() < 1e-9);
        let cdiv = contextual_diversity("w", &t).unwrap();
        assert!((cdiv - 0.01).abs() < 1e-9);
    }

    #[test]
    fn random_profile_matches_direct_summation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let raw: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let prior: Vec<(String, f64)> = raw
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("c{i}"), v / total))
            .collect();
        let prior_refs: Vec<(&str, f64)> = prior.iter().map(|(w, p)| (w.as_str(), *p)).collect();
        let counts: Vec<(String, u64)> = (0..5)
            .map(|i| (format!("c{i}"), rng.gen_range(1..50)))
            .collect();
        let counts_refs: Vec<(&str, u64)> = counts.iter().map(|(w, n)| (w.as_str(), *n)).collect();
        let t = table(&prior_refs, &[("w", &counts_refs)]);

        let p = context_profile("w", &t).unwrap();
        let kl = kl_to_prior(&p, &t);

        // independent route: sorted Kahan summation over explicit ratios
        let n_total: u64 = counts.iter().map(|(_, n)| n).sum();
        let mut terms: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(i, (_, n))| {
                let pw = *n as f64 / n_total as f64;
                pw * (pw / (raw[i] / total)).ln()
            })
            .collect();
        terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        for t in terms {
            let y = t - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        assert!((kl - acc).abs() < 1e-12, "kl {kl} oracle {acc}");
    }

    #[test]
    fn cdiv_bounds_and_count_scaling() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let k = rng.gen_range(1..8usize);
            let raw_prior: Vec<f64> = (0..10).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = raw_prior.iter().sum();
            let vocab: Vec<(String, f64)> = raw_prior
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("c{i}"), v / total))
                .collect();
            let vocab_refs: Vec<(&str, f64)> =
                vocab.iter().map(|(w, p)| (w.as_str(), *p)).collect();
            let counts: Vec<(String, u64)> = (0..k)
                .map(|i| (format!("c{i}"), rng.gen_range(1..30)))
                .collect();
            let count_refs: Vec<(&str, u64)> =
                counts.iter().map(|(w, n)| (w.as_str(), *n)).collect();
            let t = table(&vocab_refs, &[("w", &count_refs)]);
            let cdiv = contextual_diversity("w", &t).unwrap();
            assert!(cdiv > 0.0 && cdiv <= 1.0, "cdiv {cdiv}");

            // invariant: uniform scaling of counts changes nothing
            let scaled: Vec<(String, u64)> =
                counts.iter().map(|(w, n)| (w.clone(), n * 13)).collect();
            let scaled_refs: Vec<(&str, u64)> =
                scaled.iter().map(|(w, n)| (w.as_str(), *n)).collect();
            let t2 = table(&vocab_refs, &[("w", &scaled_refs)]);
            let cdiv2 = contextual_diversity("w", &t2).unwrap();
            assert!((cdiv - cdiv2).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_toward_prior_does_not_decrease_cdiv() {
        // move the conditional along the mixture path toward the prior and
        // check KL decreases monotonically at sampled points
        let prior = [0.4, 0.3, 0.2, 0.1];
        let cond = [0.85, 0.05, 0.05, 0.05];
        let kl_of = |q: &[f64]| -> f64 {
            q.iter()
                .zip(&prior)
                .filter(|(p, _)| **p > 0.0)
                .map(|(p, pr)| p * (p / pr).ln())
                .sum()
        };
        let mut last = f64::INFINITY;
        for step in 0..=10 {
            let lam = step as f64 / 10.0;
            let mixed: Vec<f64> = cond
                .iter()
                .zip(&prior)
                .map(|(c, p)| (1.0 - lam) * c + lam * p)
                .collect();
            let kl = kl_of(&mixed);
            assert!(kl <= last + 1e-12, "kl rose along the mixture path");
            last = kl;
        }
    }
}
