//! Truthful multi-source summarization by leave-one-out peer prediction.
//!
//! Each source in a retrieved pool is judged on atomic claims drawn from a
//! draft written *without* its document. A source earns credit for agreeing
//! with peers on a claim beyond the agreement expected by chance, measured
//! against a permuted off-task baseline. Sources scoring below a threshold are
//! dropped before the final summary is written.
//!
//! * [`model`]: stances, stance matrices, strategies, world configuration.
//! * [`mechanism`]: the scoring rule, majority baseline, inclusion rules.
//! * [`analytics`]: expected scores, tail bounds and sample-size calculators.
//! * [`simulator`]: synthetic worlds and Monte Carlo experiments.
//! * [`pipeline`]: the two-pass summarization pipeline over pluggable providers.
//! * [`cli`]: the `tts` command-line front end.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod mechanism;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
pub use mechanism::{score_all, source_score, OffTaskPermutation, DEFAULT_THRESHOLD};
pub use model::{policy_informativeness, validate_config, ScoreReport, SourceStrategy, Stance, StanceMatrix, WorldConfig};
