//! Statistical kernel: signed-rank tests, correlation screening, logistic
//! regression with inference, ordinary least squares, feature scaling, and
//! leave-one-out pair classification.
//!
//! Everything here is deterministic given its inputs (plus explicit seeds);
//! distribution tail probabilities come from `statrs`, all test statistics
//! and estimators are computed in this module.

mod linalg;
mod logistic;
mod loo;
mod ols;
mod pairs;
mod pearson;
mod scale;
mod special;
mod wilcoxon;

pub use linalg::{invert_symmetric, solve_linear};
pub use logistic::{fit_logistic, fit_logistic_ridge, RegressionResult};
pub use loo::loo_classify;
pub use ols::ols;
pub use pairs::{build_pair_items, PairItem};
pub use pearson::{pearson, pearson_matrix, CorrelationCell, CorrelationReport};
pub use scale::minmax_scale;
pub use special::{normal_two_sided_p, students_t_two_sided_p, trigamma};
pub use wilcoxon::{
    one_sample_wilcoxon, wilcoxon_signed_rank, wilcoxon_with_method, WilcoxonMethod,
    WilcoxonResult,
};
