//! Active-learning session orchestration: the budget-constrained and
//! error-reduction protocols, plus the compression evaluation harness.
//!
//! A session owns a working dataset formed by concatenating the initial
//! labeled set with the pool (pool labels stay hidden until committed),
//! drives rounds of query → reveal → retrain → evaluate, and logs one entry
//! per round. Learner seeds derive from (session seed, round) and strategy
//! randomness from a separate stream, so swapping the learner never perturbs
//! a random query sequence. Training subsets are always materialized in
//! ascending dataset order, which makes training insensitive to selection
//! order and enables exact-recovery checks.

use crate::dataset::{DatasetError, EmbeddingDataset};
use crate::ff::{ff_compress, Coreset, FfError};
use crate::learner::{
    evaluate_accuracy, extract_representation, fit, predict_proba, LearnerConfig, LearnerError,
    LearnerKind, Model,
};
use crate::pool::{PoolError, PoolState};
use crate::rng::{derive_seed, Rng};
use crate::strategies::{
    query_ff, query_random, query_softmax_response, StrategyError, StrategyKind,
};
use std::time::Instant;
use thiserror::Error;

/// Seed-derivation stream tags.
const LEARNER_STREAM: u64 = 1;
const STRATEGY_STREAM: u64 = 2;

#[derive(Debug, Error, PartialEq)]
pub enum SessionError {
    #[error("invalid session config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Ff(#[from] FfError),
}

/// Which embedding space farthest-first distances are measured in: the
/// ingested vectors as-is, or the current model's hidden representation
/// re-extracted after every retrain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReprSource {
    Static,
    Model,
}

impl std::str::FromStr for ReprSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(ReprSource::Static),
            "model" => Ok(ReprSource::Model),
            other => Err(format!(
                "unknown representation source '{other}' (expected static|model)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub strategy: StrategyKind,
    pub batch: usize,
    pub budget: Option<usize>,
    pub epsilon: Option<f64>,
    pub learner: LearnerConfig,
    pub seed: u64,
    pub representation_source: ReprSource,
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), SessionError> {
        if self.batch == 0 {
            return Err(SessionError::InvalidConfig(
                "batch size must be at least 1".to_string(),
            ));
        }
        match (self.budget, self.epsilon) {
            (Some(_), Some(_)) => Err(SessionError::InvalidConfig(
                "budget and epsilon are mutually exclusive".to_string(),
            )),
            (None, None) => Err(SessionError::InvalidConfig(
                "exactly one of budget or epsilon must be set".to_string(),
            )),
            (None, Some(eps)) if !(0.0..=1.0).contains(&eps) => Err(SessionError::InvalidConfig(
                format!("epsilon must lie in [0, 1], got {eps}"),
            )),
            _ => {
                if self.representation_source == ReprSource::Model
                    && self.learner.kind != LearnerKind::Mlp
                {
                    return Err(SessionError::InvalidConfig(
                        "representation source 'model' requires the mlp learner".to_string(),
                    ));
                }
                self.learner.validate()?;
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    BudgetExhausted,
    EpsilonReached,
    PoolExhausted,
}

/// One row of the learning curve. `wall_secs` is informational and excluded
/// from equality and serialization; everything else is deterministic.
#[derive(Debug, Clone)]
pub struct RoundEntry {
    pub round: usize,
    pub labeled_count: usize,
    pub test_accuracy: f64,
    pub strategy: StrategyKind,
    pub wall_secs: f64,
}

impl PartialEq for RoundEntry {
    fn eq(&self, other: &Self) -> bool {
        self.round == other.round
            && self.labeled_count == other.labeled_count
            && self.test_accuracy.to_bits() == other.test_accuracy.to_bits()
            && self.strategy == other.strategy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionRecord {
    pub entries: Vec<RoundEntry>,
    pub status: TerminalStatus,
    /// Pool-dataset row indices revealed, in commit order.
    pub queried: Vec<usize>,
    pub seed: u64,
}

impl SessionRecord {
    pub fn labels_revealed(&self) -> usize {
        self.queried.len()
    }
}

struct SessionLoop<'a> {
    combined: EmbeddingDataset,
    test: &'a EmbeddingDataset,
    cfg: &'a SessionConfig,
    state: PoolState,
    strategy_rng: Rng,
    model: Model,
    entries: Vec<RoundEntry>,
    queried: Vec<usize>,
    init_len: usize,
    static_cache_ready: bool,
}

impl<'a> SessionLoop<'a> {
    fn start(
        pool: &EmbeddingDataset,
        init: &EmbeddingDataset,
        test: &'a EmbeddingDataset,
        cfg: &'a SessionConfig,
    ) -> Result<Self, SessionError> {
        cfg.validate()?;
        let combined = EmbeddingDataset::concat(init, pool)?;
        let init_len = init.n();
        let state = PoolState::new(
            (0..init_len).collect(),
            (init_len..combined.n()).collect(),
            combined.n(),
        )?;
        // Train f_0 on L_0 = S_m and log it as round 0.
        let started = Instant::now();
        let model = train_on(&combined, state.labeled(), cfg, 0)?;
        let mut this = SessionLoop {
            combined,
            test,
            cfg,
            state,
            strategy_rng: Rng::new(derive_seed(cfg.seed, STRATEGY_STREAM, 0)),
            model,
            entries: Vec::new(),
            queried: Vec::new(),
            init_len,
            static_cache_ready: false,
        };
        this.log_round(0, started)?;
        Ok(this)
    }

    fn log_round(&mut self, round: usize, started: Instant) -> Result<(), SessionError> {
        let eval = evaluate_accuracy(&self.model, self.test)?;
        self.entries.push(RoundEntry {
            round,
            labeled_count: self.state.labeled().len(),
            test_accuracy: eval.accuracy,
            strategy: self.cfg.strategy,
            wall_secs: started.elapsed().as_secs_f64(),
        });
        Ok(())
    }

    fn last_accuracy(&self) -> f64 {
        self.entries.last().expect("round 0 logged").test_accuracy
    }

    /// Queries, reveals, retrains, and logs one round of `want` points.
    fn run_round(&mut self, round: usize, want: usize) -> Result<usize, SessionError> {
        let started = Instant::now();
        let batch = match self.cfg.strategy {
            StrategyKind::Random => query_random(&self.state, want, &mut self.strategy_rng)?,
            StrategyKind::Sr => {
                let pool_rows = self.combined.subset_unlabeled(self.state.pool())?;
                let probs = predict_proba(&self.model, &pool_rows)?;
                query_softmax_response(&self.state, &probs, want)?
            }
            StrategyKind::Ff => match self.cfg.representation_source {
                ReprSource::Static => {
                    if !self.static_cache_ready {
                        self.state.rebuild_mindist(&self.combined);
                        self.static_cache_ready = true;
                    }
                    query_ff(&self.combined, &self.state, want)?
                }
                ReprSource::Model => {
                    let space = extract_representation(&self.model, &self.combined)?;
                    self.state.rebuild_mindist(&space);
                    query_ff(&space, &self.state, want)?
                }
            },
        };
        // Committing reveals the batch's labels; in the static space the
        // cache is folded forward incrementally.
        self.state.commit(&batch, &self.combined)?;
        self.queried
            .extend(batch.iter().map(|&i| i - self.init_len));
        self.model = train_on(&self.combined, self.state.labeled(), self.cfg, round as u64)?;
        self.log_round(round, started)?;
        Ok(batch.len())
    }

    fn finish(self, status: TerminalStatus) -> SessionRecord {
        SessionRecord {
            entries: self.entries,
            status,
            queried: self.queried,
            seed: self.cfg.seed,
        }
    }
}

/// Retrains from scratch on the given rows of `ds`, materialized in
/// ascending index order, with the round-derived seed.
fn train_on(
    ds: &EmbeddingDataset,
    rows: &[usize],
    cfg: &SessionConfig,
    round: u64,
) -> Result<Model, SessionError> {
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    let train = ds.subset(&sorted)?;
    let mut learner_cfg = cfg.learner.clone();
    learner_cfg.init_seed = derive_seed(cfg.seed, LEARNER_STREAM, round);
    let mut rng = Rng::new(learner_cfg.init_seed);
    Ok(fit(&train, &learner_cfg, &mut rng)?)
}

/// Budget-constrained protocol: reveal up to `budget` pool labels in rounds
/// of `batch`, retraining and evaluating after each round.
pub fn run_budget_constrained(
    ds_pool: &EmbeddingDataset,
    ds_init_labeled: &EmbeddingDataset,
    ds_test: &EmbeddingDataset,
    cfg: &SessionConfig,
) -> Result<SessionRecord, SessionError> {
    let budget = cfg.budget.ok_or_else(|| {
        SessionError::InvalidConfig("budget-constrained run requires a budget".to_string())
    })?;
    let mut session = SessionLoop::start(ds_pool, ds_init_labeled, ds_test, cfg)?;
    let mut remaining = budget;
    let mut round = 0;
    while remaining > 0 && !session.state.pool().is_empty() {
        round += 1;
        let want = cfg.batch.min(remaining);
        let got = session.run_round(round, want)?;
        remaining -= got;
    }
    let status = if remaining > 0 {
        TerminalStatus::PoolExhausted
    } else {
        TerminalStatus::BudgetExhausted
    };
    Ok(session.finish(status))
}

/// Error-reduction protocol: keep querying full batches until test accuracy
/// improves on round 0 by at least `epsilon`, or the pool runs out. Whether
/// the target is achievable is unknowable in advance; the terminal status
/// reports which way the run ended.
pub fn run_error_reduction(
    ds_pool: &EmbeddingDataset,
    ds_init_labeled: &EmbeddingDataset,
    ds_test: &EmbeddingDataset,
    cfg: &SessionConfig,
) -> Result<SessionRecord, SessionError> {
    let epsilon = cfg.epsilon.ok_or_else(|| {
        SessionError::InvalidConfig("error-reduction run requires epsilon".to_string())
    })?;
    let mut session = SessionLoop::start(ds_pool, ds_init_labeled, ds_test, cfg)?;
    let target = session.last_accuracy() + epsilon;
    let mut round = 0;
    let status = loop {
        if session.last_accuracy() >= target {
            break TerminalStatus::EpsilonReached;
        }
        if session.state.pool().is_empty() {
            break TerminalStatus::PoolExhausted;
        }
        round += 1;
        session.run_round(round, cfg.batch)?;
    };
    Ok(session.finish(status))
}

/// The three accuracies of the compression evaluation protocol, plus the
/// subsets that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionEval {
    pub accuracy_full: f64,
    pub accuracy_ffcomp: f64,
    pub accuracy_random: f64,
    pub coreset: Coreset,
    pub random_subset: Vec<usize>,
}

/// Trains the same learner on the full training set, on its farthest-first
/// compression to (at most) `c` points, and on a uniformly random subset of
/// the same size, evaluating each on the test set with identical config and
/// seed. Training subsets are sorted before materialization, so equal index
/// sets produce bit-identical models.
pub fn run_compression_eval(
    ds_train: &EmbeddingDataset,
    ds_test: &EmbeddingDataset,
    c: usize,
    learner_cfg: &LearnerConfig,
    rng: &mut Rng,
) -> Result<CompressionEval, SessionError> {
    let coreset = ff_compress(ds_train, c, rng)?;
    let size = coreset.selected.len();
    // Uniform subset of the same size, via partial Fisher-Yates.
    let mut scratch: Vec<usize> = (0..ds_train.n()).collect();
    for i in 0..size {
        let j = i + rng.next_index(scratch.len() - i);
        scratch.swap(i, j);
    }
    scratch.truncate(size);
    let random_subset = scratch;

    let fit_subset = |indices: &[usize]| -> Result<f64, SessionError> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        let train = ds_train.subset(&sorted)?;
        let mut fit_rng = Rng::new(learner_cfg.init_seed);
        let model = fit(&train, learner_cfg, &mut fit_rng)?;
        Ok(evaluate_accuracy(&model, ds_test)?.accuracy)
    };

    let all: Vec<usize> = (0..ds_train.n()).collect();
    let accuracy_full = fit_subset(&all)?;
    let accuracy_ffcomp = fit_subset(&coreset.selected)?;
    let accuracy_random = fit_subset(&random_subset)?;
    Ok(CompressionEval {
        accuracy_full,
        accuracy_ffcomp,
        accuracy_random,
        coreset,
        random_subset,
    })
}
