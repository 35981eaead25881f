//! Coreset-based pool active learning over embedding spaces.
//!
//! The crate implements farthest-first traversal as both a labeled-set
//! compression scheme (stratified per class) and an active-learning query
//! strategy (batched max-min selection against the labeled set), alongside
//! softmax-response and random baselines, small deterministic learners, a
//! session harness that produces learning curves, and bit-exact file
//! formats for embeddings and results.
//!
//! Everything is reproducible: a single seed pins the generators, the
//! learner initialization, and every query sequence, and farthest-first
//! scans return identical selections at any thread count.

pub mod dataio;
pub mod dataset;
pub mod ff;
pub mod learner;
pub mod pool;
pub mod rng;
pub mod session;
pub mod strategies;

pub use dataset::{squared_distance, DatasetError, EmbeddingDataset, LabelProbe};
pub use ff::{
    ff_active_batch, ff_compress, ff_compress_from_seeds, ff_traverse, kcenter_check_suite,
    kcenter_optimal_radius, kcenter_radius, Coreset, FfError, KcenterCheckCase, TraversalResult,
};
pub use learner::{
    evaluate_accuracy, extract_representation, fit, predict_proba, training_gradient,
    training_loss, EvaluationRecord, LearnerConfig, LearnerError, LearnerKind, Model, ProbMatrix,
};
pub use pool::{PoolError, PoolState};
pub use rng::{derive_seed, Rng};
pub use session::{
    run_budget_constrained, run_compression_eval, run_error_reduction, CompressionEval, ReprSource,
    RoundEntry, SessionConfig, SessionError, SessionRecord, TerminalStatus,
};
pub use strategies::{query_ff, query_random, query_softmax_response, StrategyError, StrategyKind};
