//! Greedy covariate matching of declining words to stable controls.
//!
//! Per-pair constraints: initial relative frequency within ±10% (base = the
//! declining word), length within ±2 characters, identical POS. On top of
//! that the stable set's total character length must land within 1 of the
//! declining set's total; the greedy pass cannot guarantee that, so a
//! bounded repair pass swaps matched stable words for unused eligible ones
//! until the budget holds.

use crate::error::{Error, Result};
use crate::stats::{wilcoxon_signed_rank, WilcoxonResult};
use crate::trajectory::Candidate;

/// Frequency window half-width (multiplicative, declining word as base).
pub const FREQ_WINDOW: f64 = 0.10;
/// Maximum |length difference| in characters.
pub const LENGTH_WINDOW: i64 = 2;
/// Maximum |sum-of-lengths difference| between the two sets.
pub const LENGTH_BUDGET: i64 = 1;

/// One declining word paired with its stable control.
#[derive(Debug, Clone)]
pub struct MatchedPair {
    pub dec: String,
    pub stb: String,
    pub pos: String,
    pub dec_freq: f64,
    pub stb_freq: f64,
    pub dec_len: usize,
    pub stb_len: usize,
}

impl MatchedPair {
    /// rel0(stb) / rel0(dec).
    pub fn freq_ratio(&self) -> f64 {
        self.stb_freq / self.dec_freq
    }

    /// length(stb) - length(dec).
    pub fn length_delta(&self) -> i64 {
        self.stb_len as i64 - self.dec_len as i64
    }
}

/// Matching output: the pairs plus decliners that found no control.
#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub pairs: Vec<MatchedPair>,
    pub unmatched: Vec<String>,
    /// Swaps performed by the repair pass.
    pub repair_swaps: usize,
}

fn eligible(dec: &Candidate, stb: &Candidate) -> bool {
    if dec.pos != stb.pos || dec.word == stb.word {
        return false;
    }
    let ratio = stb.initial_relfreq / dec.initial_relfreq;
    if (ratio - 1.0).abs() > FREQ_WINDOW {
        return false;
    }
    (stb.length as i64 - dec.length as i64).abs() <= LENGTH_WINDOW
}

/// Greedily match each decliner (in ranked order) to the first eligible
/// stable word in stability order, then repair the global length budget.
///
/// Decliners with no eligible control are reported, not fatal; an
/// unrepairable budget is an error carrying the final deficit.
pub fn match_pairs(decliners: &[Candidate], stables: &[Candidate]) -> Result<MatchOutcome> {
    let mut used = vec![false; stables.len()];
    let mut picks: Vec<(usize, usize)> = Vec::new(); // (decliner idx, stable idx)
    let mut unmatched = Vec::new();

    for (di, dec) in decliners.iter().enumerate() {
        let mut found = None;
        for (si, stb) in stables.iter().enumerate() {
            if !used[si] && eligible(dec, stb) {
                found = Some(si);
                break;
            }
        }
        match found {
            Some(si) => {
                used[si] = true;
                picks.push((di, si));
            }
            None => unmatched.push(dec.word.clone()),
        }
    }

    // repair: first-improvement swaps of a matched stable word for an unused
    // eligible one that shrinks the total-length deficit
    let deficit = |picks: &[(usize, usize)]| -> i64 {
        picks
            .iter()
            .map(|&(di, si)| stables[si].length as i64 - decliners[di].length as i64)
            .sum()
    };
    let mut current = deficit(&picks);
    let max_swaps = 10 * picks.len().max(1);
    let mut swaps = 0usize;
    'repair: while current.abs() > LENGTH_BUDGET && swaps < max_swaps {
        for p in 0..picks.len() {
            let (di, si) = picks[p];
            for (cand, stb) in stables.iter().enumerate() {
                if used[cand] || !eligible(&decliners[di], stb) {
                    continue;
                }
                let delta = stb.length as i64 - stables[si].length as i64;
                if (current + delta).abs() < current.abs() {
                    used[si] = false;
                    used[cand] = true;
                    picks[p] = (di, cand);
                    current += delta;
                    swaps += 1;
                    continue 'repair;
                }
            }
        }
        // no improving swap exists
        break;
    }
    if current.abs() > LENGTH_BUDGET {
        return Err(Error::BudgetViolation { deficit: current });
    }

    let pairs = picks
        .into_iter()
        .map(|(di, si)| {
            let d = &decliners[di];
            let s = &stables[si];
            MatchedPair {
                dec: d.word.clone(),
                stb: s.word.clone(),
                pos: d.pos.clone(),
                dec_freq: d.initial_relfreq,
                stb_freq: s.initial_relfreq,
                dec_len: d.length,
                stb_len: s.length,
            }
        })
        .collect();

    Ok(MatchOutcome {
        pairs,
        unmatched,
        repair_swaps: swaps,
    })
}

/// Covariate-balance report for a matched set.
#[derive(Debug, Clone)]
pub struct MatchValidation {
    pub freq_test: WilcoxonResult,
    pub length_test: WilcoxonResult,
    /// True when neither covariate shows a significant imbalance (p >= 0.05).
    pub pass: bool,
}

/// Paired signed-rank tests on initial frequency and on length across pairs.
pub fn validate_matching(pairs: &[MatchedPair]) -> Result<MatchValidation> {
    if pairs.len() < 6 {
        return Err(Error::InsufficientData {
            msg: format!("{} pairs, need >= 6 for a signed-rank check", pairs.len()),
        });
    }
    let dec_freq: Vec<f64> = pairs.iter().map(|p| p.dec_freq).collect();
    let stb_freq: Vec<f64> = pairs.iter().map(|p| p.stb_freq).collect();
    let dec_len: Vec<f64> = pairs.iter().map(|p| p.dec_len as f64).collect();
    let stb_len: Vec<f64> = pairs.iter().map(|p| p.stb_len as f64).collect();
    let freq_test = wilcoxon_signed_rank(&dec_freq, &stb_freq)?;
    let length_test = wilcoxon_signed_rank(&dec_len, &stb_len)?;
    let pass = freq_test.p_two_sided >= 0.05 && length_test.p_two_sided >= 0.05;
    Ok(MatchValidation {
        freq_test,
        length_test,
        pass,
    })
}

/// Exchange-format row: `dec stb pos dec_freq stb_freq dec_len stb_len`.
pub fn pair_tsv_row(p: &MatchedPair) -> String {
    format!(
        "{}\t{}\t{}\t{:.9e}\t{:.9e}\t{}\t{}",
        p.dec, p.stb, p.pos, p.dec_freq, p.stb_freq, p.dec_len, p.stb_len
    )
}
