//! The three query strategies the harness compares: farthest-first,
//! softmax response (least confidence), and uniform random.
//!
//! Strategies are pure functions of immutable inputs. None of them reads a
//! pool label: farthest-first sees only vectors, softmax response sees only
//! a probability matrix, and random sees only the index set.

use crate::dataset::EmbeddingDataset;
use crate::ff::{ff_active_batch, FfError};
use crate::learner::ProbMatrix;
use crate::pool::PoolState;
use crate::rng::Rng;
use thiserror::Error;

pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("pool exhausted")]
    EmptyPool,
    #[error("probability matrix has {got} rows, pool has {pool}")]
    RowCountMismatch { got: usize, pool: usize },
    #[error("probability row {row} sums to {sum}, expected 1")]
    RowNotNormalized { row: usize, sum: f64 },
    #[error(transparent)]
    Ff(#[from] FfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Ff,
    Sr,
    Random,
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StrategyKind::Ff => write!(f, "ff"),
            StrategyKind::Sr => write!(f, "sr"),
            StrategyKind::Random => write!(f, "random"),
        }
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ff" => Ok(StrategyKind::Ff),
            "sr" => Ok(StrategyKind::Sr),
            "random" => Ok(StrategyKind::Random),
            other => Err(format!(
                "unknown strategy '{other}' (expected ff|sr|random)"
            )),
        }
    }
}

/// min(b, |pool|) indices sampled uniformly without replacement.
pub fn query_random(
    state: &PoolState,
    b: usize,
    rng: &mut Rng,
) -> Result<Vec<usize>, StrategyError> {
    let pool = state.pool();
    if pool.is_empty() {
        return Err(StrategyError::EmptyPool);
    }
    let take = b.min(pool.len());
    // Partial Fisher-Yates: only the first `take` slots are finalized.
    let mut scratch: Vec<usize> = pool.to_vec();
    for i in 0..take {
        let j = i + rng.next_index(scratch.len() - i);
        scratch.swap(i, j);
    }
    scratch.truncate(take);
    Ok(scratch)
}

/// Least-confidence selection: scores each pool row as 1 − max class
/// probability and returns the min(b, |pool|) highest scorers, descending,
/// ties toward the lowest dataset index. Rows of `probabilities` align with
/// the pool order.
pub fn query_softmax_response(
    state: &PoolState,
    probabilities: &ProbMatrix,
    b: usize,
) -> Result<Vec<usize>, StrategyError> {
    let pool = state.pool();
    if pool.is_empty() {
        return Err(StrategyError::EmptyPool);
    }
    if probabilities.n() != pool.len() {
        return Err(StrategyError::RowCountMismatch {
            got: probabilities.n(),
            pool: pool.len(),
        });
    }
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(pool.len());
    for (row, &idx) in pool.iter().enumerate() {
        let probs = probabilities.row(row);
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(StrategyError::RowNotNormalized { row, sum });
        }
        let confidence = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        scored.push((1.0 - confidence, idx));
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    Ok(scored
        .into_iter()
        .take(b.min(pool.len()))
        .map(|(_, i)| i)
        .collect())
}

/// Farthest-first querying; delegates to [`ff_active_batch`].
pub fn query_ff(
    ds: &EmbeddingDataset,
    state: &PoolState,
    b: usize,
) -> Result<Vec<usize>, StrategyError> {
    Ok(ff_active_batch(ds, state, b)?)
}
