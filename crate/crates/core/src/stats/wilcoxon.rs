//! Paired Wilcoxon signed-rank test.
//!
//! Zero differences are dropped (Wilcoxon's original treatment), tied
//! absolute differences share average ranks. For small effective samples the
//! two-sided p-value is exact over all 2^n sign assignments (counted by a
//! meet-in-the-middle sweep over integer doubled ranks, so it is bit-for-bit
//! identical to naive enumeration); larger samples use the tie-corrected
//! normal approximation with continuity correction.

use crate::error::{Error, Result};

use super::special::normal_two_sided_p;

/// Largest effective n for which the exact sign enumeration is used.
pub const EXACT_THRESHOLD: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone)]
pub struct WilcoxonResult {
    /// Pairs remaining after zero differences are dropped.
    pub n_effective: usize,
    /// Sum of ranks of positive differences (W+).
    pub w_statistic: f64,
    pub p_two_sided: f64,
    pub method: WilcoxonMethod,
    /// True when every difference was zero: no signal, p fixed at 1.
    pub degenerate: bool,
}

/// Paired two-sided test of `x` against `y`.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<WilcoxonResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument {
            msg: format!("paired samples differ in length: {} vs {}", x.len(), y.len()),
        });
    }
    if x.is_empty() {
        return Err(Error::InsufficientData {
            msg: "empty paired sample".into(),
        });
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    signed_rank_on_diffs(&diffs, None)
}

/// One-sample signed-rank test of `x` against the location `mu0`.
pub fn one_sample_wilcoxon(x: &[f64], mu0: f64) -> Result<WilcoxonResult> {
    if x.is_empty() {
        return Err(Error::InsufficientData {
            msg: "empty sample".into(),
        });
    }
    let diffs: Vec<f64> = x.iter().map(|v| v - mu0).collect();
    signed_rank_on_diffs(&diffs, None)
}

/// Like [`wilcoxon_signed_rank`] but with the exact/approximate choice forced.
pub fn wilcoxon_with_method(x: &[f64], y: &[f64], method: WilcoxonMethod) -> Result<WilcoxonResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument {
            msg: format!("paired samples differ in length: {} vs {}", x.len(), y.len()),
        });
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    signed_rank_on_diffs(&diffs, Some(method))
}

fn signed_rank_on_diffs(diffs: &[f64], force: Option<WilcoxonMethod>) -> Result<WilcoxonResult> {
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    let n = nonzero.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            n_effective: 0,
            w_statistic: 0.0,
            p_two_sided: 1.0,
            method: WilcoxonMethod::Exact,
            degenerate: true,
        });
    }

    // Average ranks of |d|, kept as doubled integers so tie averages stay exact.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        nonzero[a]
            .abs()
            .partial_cmp(&nonzero[b].abs())
            .expect("finite differences")
            .then(a.cmp(&b))
    });
    let mut doubled_ranks = vec![0u64; n];
    let mut tie_sizes: Vec<u64> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && nonzero[order[j + 1]].abs() == nonzero[order[i]].abs() {
            j += 1;
        }
        // ranks i+1 ..= j+1 share the average; doubled average = (i+1) + (j+1)
        let doubled = (i as u64 + 1) + (j as u64 + 1);
        for &idx in &order[i..=j] {
            doubled_ranks[idx] = doubled;
        }
        tie_sizes.push((j - i + 1) as u64);
        i = j + 1;
    }

    let w_plus_doubled: u64 = (0..n)
        .filter(|&k| nonzero[k] > 0.0)
        .map(|k| doubled_ranks[k])
        .sum();
    let w_statistic = w_plus_doubled as f64 / 2.0;

    let method = force.unwrap_or(if n <= EXACT_THRESHOLD {
        WilcoxonMethod::Exact
    } else {
        WilcoxonMethod::NormalApprox
    });

    let p = match method {
        WilcoxonMethod::Exact => exact_two_sided_p(&doubled_ranks, w_plus_doubled),
        WilcoxonMethod::NormalApprox => normal_approx_p(n, w_statistic, &tie_sizes),
    };

    Ok(WilcoxonResult {
        n_effective: n,
        w_statistic,
        p_two_sided: p,
        method,
        degenerate: false,
    })
}

/// Exact two-sided p over all 2^n sign assignments.
///
/// The null distribution of W+ is symmetric around S/2 (S = sum of ranks) even
/// under ties, so the two-sided p counts assignments at least as far from S/2
/// as the observed statistic. All arithmetic is on integer doubled ranks.
fn exact_two_sided_p(doubled_ranks: &[u64], observed_doubled: u64) -> f64 {
    let n = doubled_ranks.len();
    let total: i64 = doubled_ranks.iter().map(|&r| r as i64).sum();
    let dev = (2 * observed_doubled as i64 - total).abs();
    if dev == 0 {
        // observed statistic sits at the center of symmetry
        return 1.0;
    }

    // Meet in the middle: enumerate subset sums of each half.
    let (left, right) = doubled_ranks.split_at(n / 2);
    let left_sums = subset_sums(left);
    let mut right_sums = subset_sums(right);
    right_sums.sort_unstable();

    // Count pairs with |2(a + b) - total| >= dev, i.e.
    // b >= (total + dev)/2 - a  or  b <= (total - dev)/2 - a.
    let mut count: u64 = 0;
    let hi_num = total + dev; // 2(a+b) >= hi_num
    let lo_num = total - dev; // 2(a+b) <= lo_num (disjoint from the high tail since dev > 0)
    for &a in &left_sums {
        let a2 = 2 * a;
        // smallest b with 2b >= hi_num - a2
        let hi_threshold = div_ceil(hi_num - a2, 2);
        let idx = right_sums.partition_point(|&b| b < hi_threshold);
        count += (right_sums.len() - idx) as u64;
        // largest b with 2b <= lo_num - a2
        let lo_threshold = div_floor(lo_num - a2, 2);
        let idx = right_sums.partition_point(|&b| b <= lo_threshold);
        count += idx as u64;
    }
    count as f64 / (1u64 << n) as f64
}

fn subset_sums(ranks: &[u64]) -> Vec<i64> {
    let mut sums = vec![0i64];
    for &r in ranks {
        let len = sums.len();
        for k in 0..len {
            sums.push(sums[k] + r as i64);
        }
    }
    sums
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a >= 0 {
        (a + b - 1) / b
    } else {
        a / b
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a >= 0 {
        a / b
    } else {
        (a - b + 1) / b
    }
}

/// Tie-corrected normal approximation with continuity correction.
fn normal_approx_p(n: usize, w_plus: f64, tie_sizes: &[u64]) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let centered = w_plus - mean;
    let correction = 0.5 * centered.signum();
    let z = (centered - correction) / var.sqrt();
    normal_two_sided_p(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive full 2^n enumeration, the independent check for the exact path.
    fn enumeration_p(diffs: &[f64]) -> f64 {
        let nonzero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
        let n = nonzero.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| nonzero[a].abs().partial_cmp(&nonzero[b].abs()).unwrap());
        let mut doubled = vec![0i64; n];
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && nonzero[order[j + 1]].abs() == nonzero[order[i]].abs() {
                j += 1;
            }
            for &idx in &order[i..=j] {
                doubled[idx] = (i as i64 + 1) + (j as i64 + 1);
            }
            i = j + 1;
        }
        let total: i64 = doubled.iter().sum();
        let observed: i64 = (0..n)
            .filter(|&k| nonzero[k] > 0.0)
            .map(|k| doubled[k])
            .sum();
        let dev = (2 * observed - total).abs();
        let mut count = 0u64;
        for mask in 0u64..(1 << n) {
            let s: i64 = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| doubled[k]).sum();
            if (2 * s - total).abs() >= dev {
                count += 1;
            }
        }
        count as f64 / (1u64 << n) as f64
    }

    #[test]
    fn five_positive_diffs() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [0.0; 5];
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        assert_eq!(r.w_statistic, 15.0);
        assert_eq!(r.p_two_sided, 2.0 / 32.0);
        assert_eq!(r.method, WilcoxonMethod::Exact);
        assert!(!r.degenerate);
    }

    #[test]
    fn all_zero_diffs_degenerate() {
        let x = [1.0, 2.0, 3.0];
        let r = wilcoxon_signed_rank(&x, &x).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_two_sided, 1.0);
        assert_eq!(r.n_effective, 0);
    }

    #[test]
    fn one_sample_at_location_is_degenerate() {
        let x = [2.0, 2.0, 2.0];
        let r = one_sample_wilcoxon(&x, 2.0).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn one_sample_all_positive() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let r = one_sample_wilcoxon(&x, 0.0).unwrap();
        assert_eq!(r.p_two_sided, 0.0625);
    }

    #[test]
    fn one_sample_symmetric_is_insignificant() {
        let x = [-2.0, -1.0, 1.0, 2.0];
        let r = one_sample_wilcoxon(&x, 0.0).unwrap();
        assert_eq!(r.p_two_sided, enumeration_p(&x));
        assert!(r.p_two_sided > 0.5);
    }

    #[test]
    fn exact_matches_enumeration_on_small_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let diffs: Vec<f64> = (0..n)
                .map(|_| {
                    // quantized so ties actually occur
                    let v: i32 = rng.gen_range(-4..=4);
                    v as f64 / 2.0
                })
                .collect();
            let x = diffs.clone();
            let y = vec![0.0; n];
            let r = wilcoxon_signed_rank(&x, &y).unwrap();
            let oracle = enumeration_p(&diffs);
            if diffs.iter().all(|&d| d == 0.0) {
                assert!(r.degenerate);
            } else {
                assert_eq!(r.p_two_sided, oracle, "diffs {diffs:?}");
            }
        }
    }

    #[test]
    fn normal_approx_close_to_exact_in_transition_range() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 20..=25 {
            for _ in 0..10 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let y = vec![0.0; n];
                let exact = wilcoxon_with_method(&x, &y, WilcoxonMethod::Exact).unwrap();
                let approx = wilcoxon_with_method(&x, &y, WilcoxonMethod::NormalApprox).unwrap();
                assert!(
                    (exact.p_two_sided - approx.p_two_sided).abs() < 0.01,
                    "n={n} exact={} approx={}",
                    exact.p_two_sided,
                    approx.p_two_sided
                );
            }
        }
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]).is_err());
    }
}
