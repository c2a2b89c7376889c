//! Construction of regression items from matched word pairs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One regression item: a word pair in either dec:stb (label 1) or stb:dec
/// (label 0) order, with per-factor differences first-minus-second.
#[derive(Debug, Clone)]
pub struct PairItem {
    pub label: u8,
    pub diffs: Vec<f64>,
}

/// Turn matched (declining, stable) word pairs into labeled difference items.
///
/// A seeded random half of the pairs keeps the dec:stb order (label 1,
/// diffs = dec - stb); the rest are flipped. The split is exactly half, with
/// the extra item on the label-1 side when the count is odd. Item order
/// follows the input pair order.
pub fn build_pair_items(
    pairs: &[(String, String)],
    factors: &BTreeMap<String, Vec<f64>>,
    seed: u64,
) -> Result<Vec<PairItem>> {
    if pairs.is_empty() {
        return Err(Error::InsufficientData {
            msg: "no pairs to build items from".into(),
        });
    }
    let lookup = |word: &str| -> Result<&Vec<f64>> {
        factors.get(word).ok_or_else(|| Error::MissingWord {
            word: word.into(),
            resource: "factor table".into(),
        })
    };

    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_forward = (pairs.len() + 1) / 2;
    let mut forward = vec![false; pairs.len()];
    for &idx in order.iter().take(n_forward) {
        forward[idx] = true;
    }

    let mut items = Vec::with_capacity(pairs.len());
    for (idx, (dec, stb)) in pairs.iter().enumerate() {
        let fd = lookup(dec)?;
        let fs = lookup(stb)?;
        if fd.len() != fs.len() {
            return Err(Error::InvalidArgument {
                msg: format!("factor dimension mismatch for pair {dec}:{stb}"),
            });
        }
        let (label, diffs) = if forward[idx] {
            (1, fd.iter().zip(fs).map(|(a, b)| a - b).collect())
        } else {
            (0, fs.iter().zip(fd).map(|(a, b)| a - b).collect())
        };
        items.push(PairItem { label, diffs });
    }
    Ok(items)
}
