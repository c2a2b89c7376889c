//! Distribution tails and the one polygamma function statrs does not ship.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

/// Two-sided tail probability of a standard normal statistic.
pub fn normal_two_sided_p(z: f64) -> f64 {
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * (1.0 - n.cdf(z.abs()))).clamp(f64::MIN_POSITIVE, 1.0)
}

/// Two-sided tail probability of a Student-t statistic with `df` degrees of freedom.
pub fn students_t_two_sided_p(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid dof");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(f64::MIN_POSITIVE, 1.0)
}

/// Trigamma function psi'(x) for x > 0.
///
/// Recurrence up to x >= 6, then the asymptotic expansion
/// 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7) - 1/(30x^9).
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma defined here for positive arguments only");
    let mut x = x;
    let mut acc = 0.0;
    while x < 6.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        + 0.5 * inv2
        + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)));
    acc + series
}
