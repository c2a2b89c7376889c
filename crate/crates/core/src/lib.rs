//! Lexical decline analysis over decade-binned corpora.
//!
//! The pipeline stages, in order:
//!
//! 1. [`corpus`] — ingest decade-binned frequencies, per-decade metadata,
//!    context co-occurrence tables, and auxiliary lexical resources.
//! 2. [`trajectory`] — fit a piecewise decline curve and a horizontal
//!    stability line to each normalized frequency series, then rank and
//!    filter declining / stable candidates.
//! 3. [`matching`] — pair each declining word with a stable control of
//!    similar initial frequency, length, and part of speech.
//! 4. [`semantics`], [`distribution`], [`phonology`] — per-word factor
//!    estimators (semantic density, concreteness via Beta regression,
//!    number of meanings, contextual diversity, phonological typicality /
//!    density / complexity); [`factors`] assembles them into one table.
//! 5. [`stats`] — paired signed-rank tests, correlation screening,
//!    logistic regression on pairwise differences, leave-one-out pair
//!    classification.
//! 6. [`diachronic`] — per-word regression of contextual diversity on
//!    time, log book count, and frequency.
//!
//! [`synth`] produces seeded synthetic input bundles with plantable
//! effects so the whole pipeline can be exercised without proprietary
//! corpora.

pub mod corpus;
pub mod diachronic;
pub mod distribution;
pub mod error;
pub mod factors;
pub mod matching;
pub mod phonology;
pub mod semantics;
pub mod stats;
pub mod synth;
pub mod trajectory;

pub use corpus::{ContextTable, CorpusMeta, DecadeAxis, WordSeries};
pub use error::{Error, Result};
pub use factors::{FactorTable, FactorVector, FACTOR_COUNT, FACTOR_NAMES};
pub use matching::MatchedPair;
pub use stats::{PairItem, RegressionResult, WilcoxonResult};
pub use trajectory::{FilterPolicy, PiecewiseFit, StabilityFit};
