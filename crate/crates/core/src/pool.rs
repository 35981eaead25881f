//! Pool bookkeeping: the labeled/unlabeled index partition of a dataset and
//! the incremental min-distance cache consumed by farthest-first scans.

use crate::dataset::{sq_dist, EmbeddingDataset};
use rayon::prelude::*;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PoolError {
    #[error("index {index} out of range for dataset of {n} rows")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} appears in both the labeled set and the pool")]
    Overlap(usize),
    #[error("duplicate index {0}")]
    Duplicate(usize),
    #[error("cannot commit index {0}: not in the pool")]
    NotInPool(usize),
}

/// Work size (pool entries × dimension) below which cache maintenance stays
/// serial. Either path yields bit-identical caches.
const PARALLEL_WORK: usize = 1 << 15;

/// Index partition of a dataset into labeled set L_t and pool U_t, plus the
/// cached squared distance of each pool row to its nearest labeled point.
///
/// The cache is lazy: it starts unfresh (unless the labeled set is empty,
/// where all-infinite is already correct) and becomes fresh after
/// [`rebuild_mindist`](Self::rebuild_mindist). While fresh, `commit` keeps it
/// current incrementally; random- or uncertainty-only sessions never pay for
/// distance maintenance they do not use.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolState {
    labeled: Vec<usize>,
    pool: Vec<usize>,
    round: usize,
    mindist: Vec<f64>,
    mindist_fresh: bool,
}

impl PoolState {
    pub fn new(labeled: Vec<usize>, pool: Vec<usize>, n_rows: usize) -> Result<Self, PoolError> {
        let mut seen = HashSet::with_capacity(labeled.len() + pool.len());
        for &i in &labeled {
            if i >= n_rows {
                return Err(PoolError::IndexOutOfRange {
                    index: i,
                    n: n_rows,
                });
            }
            if !seen.insert(i) {
                return Err(PoolError::Duplicate(i));
            }
        }
        for &i in &pool {
            if i >= n_rows {
                return Err(PoolError::IndexOutOfRange {
                    index: i,
                    n: n_rows,
                });
            }
            if labeled.contains(&i) {
                return Err(PoolError::Overlap(i));
            }
            if !seen.insert(i) {
                return Err(PoolError::Duplicate(i));
            }
        }
        let mindist = vec![f64::INFINITY; pool.len()];
        // With no labeled points the all-infinite sentinel is the cache.
        let mindist_fresh = labeled.is_empty();
        Ok(PoolState {
            labeled,
            pool,
            round: 0,
            mindist,
            mindist_fresh,
        })
    }

    pub fn labeled(&self) -> &[usize] {
        &self.labeled
    }

    pub fn pool(&self) -> &[usize] {
        &self.pool
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// The min-distance cache, or `None` when it needs a rebuild. Entry i
    /// corresponds to `pool()[i]`.
    pub fn mindist(&self) -> Option<&[f64]> {
        if self.mindist_fresh {
            Some(&self.mindist)
        } else {
            None
        }
    }

    /// Full recomputation of the cache against the given embedding rows.
    /// Required after the embedding space changes (e.g. a retrained
    /// representation) or before the first farthest-first query.
    pub fn rebuild_mindist(&mut self, ds: &EmbeddingDataset) {
        let labeled = &self.labeled;
        let compute = |&idx: &usize| -> f64 {
            let row = ds.row(idx);
            let mut best = f64::INFINITY;
            for &l in labeled {
                let d2 = sq_dist(row, ds.row(l));
                if d2 < best {
                    best = d2;
                }
            }
            best
        };
        if self.pool.len() * ds.dim() * self.labeled.len().max(1) >= PARALLEL_WORK {
            self.mindist = self.pool.par_iter().map(compute).collect();
        } else {
            self.mindist = self.pool.iter().map(compute).collect();
        }
        self.mindist_fresh = true;
    }

    /// Moves `picks` from the pool to the labeled set (in the given order),
    /// bumps the round counter, and — when the cache is fresh — folds the
    /// newly labeled rows into it.
    pub fn commit(&mut self, picks: &[usize], ds: &EmbeddingDataset) -> Result<(), PoolError> {
        let mut pick_set = HashSet::with_capacity(picks.len());
        for &p in picks {
            if !pick_set.insert(p) {
                return Err(PoolError::Duplicate(p));
            }
            if !self.pool.contains(&p) {
                return Err(PoolError::NotInPool(p));
            }
        }
        // Drop picked entries from pool and cache in lockstep.
        let mut kept_pool = Vec::with_capacity(self.pool.len() - picks.len());
        let mut kept_mindist = Vec::with_capacity(self.pool.len() - picks.len());
        for (i, &idx) in self.pool.iter().enumerate() {
            if !pick_set.contains(&idx) {
                kept_pool.push(idx);
                kept_mindist.push(self.mindist[i]);
            }
        }
        self.pool = kept_pool;
        self.mindist = kept_mindist;
        if self.mindist_fresh && !picks.is_empty() {
            for &p in picks {
                let new_row = ds.row(p);
                let pool = &self.pool;
                let update = |(md, &idx): (&mut f64, &usize)| {
                    let d2 = sq_dist(ds.row(idx), new_row);
                    if d2 < *md {
                        *md = d2;
                    }
                };
                if pool.len() * ds.dim() >= PARALLEL_WORK {
                    self.mindist
                        .par_iter_mut()
                        .zip(pool.par_iter())
                        .for_each(update);
                } else {
                    self.mindist.iter_mut().zip(pool.iter()).for_each(update);
                }
            }
        }
        self.labeled.extend_from_slice(picks);
        self.round += 1;
        Ok(())
    }
}
