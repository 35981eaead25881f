//! Farthest-first traversal: the greedy max-min engine behind both coreset
//! compression and active batch querying, plus the k-center radius oracle
//! used to verify its 2-approximation property.
//!
//! All selection runs on squared Euclidean distances — the argmax of a min is
//! unchanged by the monotone square, and dropping the square root keeps the
//! dominant candidate scan cheap. Ties always break toward the lowest dataset
//! index, and the parallel scan reduces shards with the same rule, so results
//! are identical at any thread count.

use crate::dataset::{sq_dist, EmbeddingDataset};
use crate::pool::PoolState;
use crate::rng::Rng;
use rayon::prelude::*;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FfError {
    #[error("exhausted candidates: requested {requested}, only {available} selectable")]
    ExhaustedCandidates { requested: usize, available: usize },
    #[error("pool exhausted")]
    PoolExhausted,
    #[error("labeled set is empty")]
    EmptyLabeledSet,
    #[error("centers set is empty")]
    EmptyCenters,
    #[error("class {class} has {have} members, per-class quota is {quota}")]
    ClassQuota {
        class: u32,
        have: usize,
        quota: usize,
    },
    #[error("dataset has no labels")]
    UnlabeledDataset,
    #[error("target size {c} is below the class count {k}")]
    TargetTooSmall { c: usize, k: u32 },
    #[error("expected one seed per class ({k}), got {got}")]
    SeedCountMismatch { k: u32, got: usize },
    #[error("seed {index} has label {got}, expected class {expected}")]
    SeedClassMismatch {
        index: usize,
        got: u32,
        expected: u32,
    },
    #[error("index {index} out of range ({n} rows)")]
    IndexOutOfRange { index: usize, n: usize },
}

/// A greedy traversal: the selected dataset indices in order, and the
/// max-min squared distance at the moment each was selected.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversalResult {
    pub order: Vec<usize>,
    pub gaps: Vec<f64>,
}

/// Stratified coreset: one index list per class plus their flattened union.
#[derive(Debug, Clone, PartialEq)]
pub struct Coreset {
    pub per_class: Vec<Vec<usize>>,
    pub selected: Vec<usize>,
}

/// Scan work (candidates × dimension) below which the scan stays serial.
const PARALLEL_SCAN_WORK: usize = 1 << 15;

/// One farthest-first step: fold `new_center` (the previous selection) into
/// the cache, then return the position and value of the candidate with the
/// largest cached min-distance. Ties break toward the lowest dataset index,
/// in the serial loop and in the parallel reduction alike.
fn scan_step(
    ds: &EmbeddingDataset,
    candidates: &[usize],
    mindist: &mut [f64],
    new_center: Option<usize>,
) -> Option<(usize, f64)> {
    let center_row = new_center.map(|c| ds.row(c));
    if candidates.len() * ds.dim() >= PARALLEL_SCAN_WORK {
        candidates
            .par_iter()
            .zip(mindist.par_iter_mut())
            .enumerate()
            .map(|(pos, (&cand, md))| {
                if let Some(row) = center_row {
                    let d2 = sq_dist(ds.row(cand), row);
                    if d2 < *md {
                        *md = d2;
                    }
                }
                (*md, cand, pos)
            })
            .reduce_with(better_of)
            .map(|(value, _, pos)| (pos, value))
    } else {
        let mut best: Option<(f64, usize, usize)> = None;
        for (pos, (&cand, md)) in candidates.iter().zip(mindist.iter_mut()).enumerate() {
            if let Some(row) = center_row {
                let d2 = sq_dist(ds.row(cand), row);
                if d2 < *md {
                    *md = d2;
                }
            }
            let entry = (*md, cand, pos);
            best = Some(match best {
                None => entry,
                Some(b) => better_of(b, entry),
            });
        }
        best.map(|(value, _, pos)| (pos, value))
    }
}

/// Max by (value, lowest index): a total order, so the parallel reduction is
/// associative and thread-schedule independent.
#[inline]
fn better_of(a: (f64, usize, usize), b: (f64, usize, usize)) -> (f64, usize, usize) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

fn check_indices(ds: &EmbeddingDataset, indices: &[usize]) -> Result<(), FfError> {
    for &i in indices {
        if i >= ds.n() {
            return Err(FfError::IndexOutOfRange {
                index: i,
                n: ds.n(),
            });
        }
    }
    Ok(())
}

/// Greedy farthest-first traversal: selects `count` indices from
/// `candidate_indices`, each maximizing its minimum squared distance to
/// `seed_indices` plus everything selected before it.
///
/// With no seeds the cache starts all-infinite and the first pick falls back
/// to the lowest candidate index. Cost is O(|candidates| · d) per selection.
pub fn ff_traverse(
    ds: &EmbeddingDataset,
    candidate_indices: &[usize],
    seed_indices: &[usize],
    count: usize,
) -> Result<TraversalResult, FfError> {
    check_indices(ds, candidate_indices)?;
    check_indices(ds, seed_indices)?;
    let seed_set: HashSet<usize> = seed_indices.iter().copied().collect();
    let mut cands: Vec<usize> = candidate_indices
        .iter()
        .copied()
        .filter(|i| !seed_set.contains(i))
        .collect();
    if count > cands.len() {
        return Err(FfError::ExhaustedCandidates {
            requested: count,
            available: cands.len(),
        });
    }
    let mut mindist: Vec<f64> = if seed_indices.is_empty() {
        vec![f64::INFINITY; cands.len()]
    } else {
        cands
            .iter()
            .map(|&i| {
                seed_indices
                    .iter()
                    .map(|&s| sq_dist(ds.row(i), ds.row(s)))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    };
    let mut order = Vec::with_capacity(count);
    let mut gaps = Vec::with_capacity(count);
    let mut new_center = None;
    for _ in 0..count {
        let (pos, gap) =
            scan_step(ds, &cands, &mut mindist, new_center).expect("candidates remain");
        let picked = cands[pos];
        order.push(picked);
        gaps.push(gap);
        new_center = Some(picked);
        // Tie-breaking keys off index values, so order within the candidate
        // buffer does not matter and swap_remove is safe.
        cands.swap_remove(pos);
        mindist.swap_remove(pos);
    }
    Ok(TraversalResult { order, gaps })
}

/// Stratified compression: per class, draw one random seed, then greedily
/// extend that class's coreset to ⌊c/k⌋ points by farthest-first traversal
/// restricted to the class's own rows (min-distances measured only within
/// the class's coreset). Any remainder c − k·⌊c/k⌋ is not distributed.
pub fn ff_compress(ds: &EmbeddingDataset, c: usize, rng: &mut Rng) -> Result<Coreset, FfError> {
    let (k, class_rows, quota) = compress_plan(ds, c)?;
    let mut seeds = Vec::with_capacity(k);
    for rows in &class_rows {
        seeds.push(rows[rng.next_index(rows.len())]);
    }
    compress_with(ds, class_rows, quota, &seeds, k)
}

/// [`ff_compress`] with explicit per-class seed rows instead of random
/// draws. `seeds[i]` must be a row of class i.
pub fn ff_compress_from_seeds(
    ds: &EmbeddingDataset,
    c: usize,
    seeds: &[usize],
) -> Result<Coreset, FfError> {
    let (k, class_rows, quota) = compress_plan(ds, c)?;
    if seeds.len() != k {
        return Err(FfError::SeedCountMismatch {
            k: k as u32,
            got: seeds.len(),
        });
    }
    check_indices(ds, seeds)?;
    for (class, &s) in seeds.iter().enumerate() {
        let got = ds.label_of(s).map_err(|_| FfError::UnlabeledDataset)?;
        if got as usize != class {
            return Err(FfError::SeedClassMismatch {
                index: s,
                got,
                expected: class as u32,
            });
        }
    }
    compress_with(ds, class_rows, quota, seeds, k)
}

/// Shared validation: class row lists (ascending) and the per-class quota.
fn compress_plan(
    ds: &EmbeddingDataset,
    c: usize,
) -> Result<(usize, Vec<Vec<usize>>, usize), FfError> {
    let k = ds.num_classes().ok_or(FfError::UnlabeledDataset)? as usize;
    if c < k {
        return Err(FfError::TargetTooSmall { c, k: k as u32 });
    }
    let quota = c / k;
    let mut class_rows: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..ds.n() {
        let label = ds.label_of(i).map_err(|_| FfError::UnlabeledDataset)?;
        class_rows[label as usize].push(i);
    }
    for (class, rows) in class_rows.iter().enumerate() {
        if rows.len() < quota {
            return Err(FfError::ClassQuota {
                class: class as u32,
                have: rows.len(),
                quota,
            });
        }
    }
    Ok((k, class_rows, quota))
}

fn compress_with(
    ds: &EmbeddingDataset,
    class_rows: Vec<Vec<usize>>,
    quota: usize,
    seeds: &[usize],
    k: usize,
) -> Result<Coreset, FfError> {
    let mut per_class = Vec::with_capacity(k);
    let mut selected = Vec::with_capacity(k * quota);
    for (class, rows) in class_rows.into_iter().enumerate() {
        let seed = seeds[class];
        // The seed counts toward the quota, so |C_i| = ⌊c/k⌋ exactly.
        let mut members = vec![seed];
        let trav = ff_traverse(ds, &rows, &[seed], quota - 1)?;
        members.extend(trav.order);
        selected.extend_from_slice(&members);
        per_class.push(members);
    }
    Ok(Coreset {
        per_class,
        selected,
    })
}

/// One batch of farthest-first active querying: up to `b` pool indices, each
/// maximizing its minimum squared distance to the labeled set plus the
/// points already selected this batch. The state is not mutated — the caller
/// commits the batch. Pool labels are never read.
pub fn ff_active_batch(
    ds: &EmbeddingDataset,
    state: &PoolState,
    b: usize,
) -> Result<Vec<usize>, FfError> {
    if state.labeled().is_empty() {
        return Err(FfError::EmptyLabeledSet);
    }
    if state.pool().is_empty() {
        return Err(FfError::PoolExhausted);
    }
    let take = b.min(state.pool().len());
    let mut cands: Vec<usize> = state.pool().to_vec();
    let mut mindist: Vec<f64> = match state.mindist() {
        Some(cached) => cached.to_vec(),
        // Stale or absent cache: pay the full scan against the labeled set.
        None => cands
            .iter()
            .map(|&i| {
                state
                    .labeled()
                    .iter()
                    .map(|&l| sq_dist(ds.row(i), ds.row(l)))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    };
    let mut order = Vec::with_capacity(take);
    let mut new_center = None;
    for _ in 0..take {
        let (pos, _gap) =
            scan_step(ds, &cands, &mut mindist, new_center).expect("candidates remain");
        let picked = cands[pos];
        order.push(picked);
        new_center = Some(picked);
        cands.swap_remove(pos);
        mindist.swap_remove(pos);
    }
    Ok(order)
}

/// True (not squared) k-center radius: the maximum over `over` of the
/// Euclidean distance to the nearest center.
pub fn kcenter_radius(
    ds: &EmbeddingDataset,
    centers: &[usize],
    over: &[usize],
) -> Result<f64, FfError> {
    if centers.is_empty() {
        return Err(FfError::EmptyCenters);
    }
    check_indices(ds, centers)?;
    check_indices(ds, over)?;
    let mut worst = 0.0f64;
    for &i in over {
        let row = ds.row(i);
        let nearest = centers
            .iter()
            .map(|&c| sq_dist(row, ds.row(c)))
            .fold(f64::INFINITY, f64::min);
        if nearest > worst {
            worst = nearest;
        }
    }
    Ok(worst.sqrt())
}

/// Exact optimal k-center radius over all rows, by enumerating every size-k
/// subset of rows as candidate centers. Exponential — this is the
/// brute-force oracle behind the 2-approximation check, not a solver.
pub fn kcenter_optimal_radius(ds: &EmbeddingDataset, k: usize) -> Result<f64, FfError> {
    let n = ds.n();
    if k == 0 || k > n {
        return Err(FfError::EmptyCenters);
    }
    let all: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let r = kcenter_radius(ds, &combo, &all)?;
        if r < best {
            best = r;
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// One instance of the 2-approximation check.
#[derive(Debug, Clone)]
pub struct KcenterCheckCase {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub ff_radius: f64,
    pub optimal_radius: f64,
    pub ratio: f64,
    pub gaps: Vec<f64>,
}

/// Random small instances comparing the farthest-first radius against the
/// brute-force optimum. Each case should satisfy ratio ≤ 2.
pub fn kcenter_check_suite(
    instances: usize,
    max_n: usize,
    max_k: usize,
    seed: u64,
) -> Vec<KcenterCheckCase> {
    let mut rng = Rng::new(seed);
    let mut cases = Vec::with_capacity(instances);
    for _ in 0..instances {
        let k = 2 + rng.next_index(max_k.saturating_sub(1).max(1));
        let n = (k + 1) + rng.next_index(max_n.saturating_sub(k).max(1));
        let d = 1 + rng.next_index(3);
        let vectors: Vec<f32> = (0..n * d)
            .map(|_| (rng.next_f64() * 2.0 - 1.0) as f32)
            .collect();
        let ds = EmbeddingDataset::unlabeled(n, d, vectors).expect("valid instance");
        let all: Vec<usize> = (0..n).collect();
        let start = rng.next_index(n);
        let trav = ff_traverse(&ds, &all, &[start], k - 1).expect("traversal");
        let mut centers = vec![start];
        centers.extend_from_slice(&trav.order);
        let ff_radius = kcenter_radius(&ds, &centers, &all).expect("radius");
        let optimal_radius = kcenter_optimal_radius(&ds, k).expect("brute force");
        let ratio = if optimal_radius == 0.0 {
            if ff_radius == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            ff_radius / optimal_radius
        };
        cases.push(KcenterCheckCase {
            n,
            d,
            k,
            ff_radius,
            optimal_radius,
            ratio,
            gaps: trav.gaps,
        });
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_dataset(coords: &[f32]) -> EmbeddingDataset {
        EmbeddingDataset::unlabeled(coords.len(), 1, coords.to_vec()).unwrap()
    }

    /// Naive reference: recompute every candidate's min-distance from
    /// scratch at each step, on true (unsquared) distances. Independent of
    /// the incremental path and of the squared-distance shortcut.
    pub(super) fn naive_ff(
        ds: &EmbeddingDataset,
        candidates: &[usize],
        seeds: &[usize],
        count: usize,
    ) -> (Vec<usize>, Vec<f64>) {
        let mut chosen: Vec<usize> = seeds.to_vec();
        let mut remaining: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|i| !seeds.contains(i))
            .collect();
        let mut order = Vec::new();
        let mut gaps = Vec::new();
        for _ in 0..count {
            let mut best_idx = usize::MAX;
            let mut best_val = f64::NEG_INFINITY;
            for &cand in &remaining {
                let min_d = chosen
                    .iter()
                    .map(|&s| sq_dist(ds.row(cand), ds.row(s)).sqrt())
                    .fold(f64::INFINITY, f64::min);
                if min_d > best_val || (min_d == best_val && cand < best_idx) {
                    best_val = min_d;
                    best_idx = cand;
                }
            }
            order.push(best_idx);
            gaps.push(best_val * best_val);
            chosen.push(best_idx);
            remaining.retain(|&i| i != best_idx);
        }
        (order, gaps)
    }

    #[test]
    fn traverse_line_example() {
        // Oracle-derived: seeds {0} on [0],[1],[2],[10] gives [3,2,1] with
        // gaps [100,4,1].
        let ds = line_dataset(&[0.0, 1.0, 2.0, 10.0]);
        let (oracle_order, oracle_gaps) = naive_ff(&ds, &[0, 1, 2, 3], &[0], 3);
        assert_eq!(oracle_order, vec![3, 2, 1]);
        assert_eq!(oracle_gaps, vec![100.0, 4.0, 1.0]);
        let got = ff_traverse(&ds, &[0, 1, 2, 3], &[0], 3).unwrap();
        assert_eq!(got.order, oracle_order);
        assert_eq!(got.gaps, oracle_gaps);
    }

    #[test]
    fn traverse_zero_count_is_empty() {
        let ds = line_dataset(&[0.0, 1.0]);
        let got = ff_traverse(&ds, &[0, 1], &[0, 1], 0).unwrap();
        assert!(got.order.is_empty());
        assert!(got.gaps.is_empty());
    }

    #[test]
    fn traverse_duplicate_rows_tie_break() {
        let ds = line_dataset(&[5.0, 5.0]);
        let got = ff_traverse(&ds, &[0, 1], &[0], 1).unwrap();
        assert_eq!(got.order, vec![1]);
        assert_eq!(got.gaps, vec![0.0]);
    }

    #[test]
    fn traverse_exhausted_candidates() {
        let ds = line_dataset(&[0.0, 1.0]);
        let err = ff_traverse(&ds, &[0, 1], &[0], 2).unwrap_err();
        assert_eq!(
            err,
            FfError::ExhaustedCandidates {
                requested: 2,
                available: 1
            }
        );
    }

    #[test]
    fn traverse_empty_seeds_starts_lowest_index() {
        let ds = line_dataset(&[3.0, 7.0, 1.0]);
        let got = ff_traverse(&ds, &[0, 1, 2], &[], 3).unwrap();
        assert_eq!(got.order[0], 0);
        assert_eq!(got.gaps[0], f64::INFINITY);
        // Greedy monotonicity holds through the sentinel.
        assert!(got.gaps.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn compress_quota_one_is_seeds_only() {
        let ds = EmbeddingDataset::labeled(4, 1, vec![0.0, 1.0, 10.0, 11.0], vec![0, 0, 1, 1], 2)
            .unwrap();
        let coreset = ff_compress_from_seeds(&ds, 2, &[1, 2]).unwrap();
        assert_eq!(coreset.per_class, vec![vec![1], vec![2]]);
        assert_eq!(coreset.selected, vec![1, 2]);
    }

    #[test]
    fn compress_forced_seed_line_example() {
        // Class 0 rows [0],[1],[9] at indices 0,1,2. Seed forced to index 0
        // with quota 2: next pick is [9] (gap 81), so C_0 = [0, 2].
        let ds = EmbeddingDataset::labeled(
            5,
            1,
            vec![0.0, 1.0, 9.0, 100.0, 101.0],
            vec![0, 0, 0, 1, 1],
            2,
        )
        .unwrap();
        let (oracle_order, oracle_gaps) = naive_ff(&ds, &[0, 1, 2], &[0], 1);
        assert_eq!(oracle_order, vec![2]);
        assert_eq!(oracle_gaps, vec![81.0]);
        let coreset = ff_compress_from_seeds(&ds, 4, &[0, 3]).unwrap();
        assert_eq!(coreset.per_class[0], vec![0, 2]);
        assert_eq!(coreset.per_class[1], vec![3, 4]);
        assert_eq!(coreset.selected, vec![0, 2, 3, 4]);
    }

    #[test]
    fn compress_quota_error_names_class() {
        let ds = EmbeddingDataset::labeled(3, 1, vec![0.0, 1.0, 9.0], vec![0, 0, 1], 2).unwrap();
        let err = ff_compress(&ds, 4, &mut Rng::new(1)).unwrap_err();
        assert_eq!(
            err,
            FfError::ClassQuota {
                class: 1,
                have: 1,
                quota: 2
            }
        );
    }

    #[test]
    fn compress_full_size_is_permutation() {
        // c = n with balanced classes exhausts every class.
        let ds = EmbeddingDataset::labeled(
            6,
            1,
            vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0],
            vec![0, 0, 0, 1, 1, 1],
            2,
        )
        .unwrap();
        let coreset = ff_compress(&ds, 6, &mut Rng::new(7)).unwrap();
        let mut sorted = coreset.selected.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(coreset.per_class[0].len(), 3);
        assert_eq!(coreset.per_class[1].len(), 3);
    }

    #[test]
    fn compress_remainder_not_distributed() {
        let ds = EmbeddingDataset::labeled(
            6,
            1,
            vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0],
            vec![0, 0, 0, 1, 1, 1],
            2,
        )
        .unwrap();
        // c = 5, k = 2: quota 2 each, |S_c| = 4.
        let coreset = ff_compress(&ds, 5, &mut Rng::new(3)).unwrap();
        assert_eq!(coreset.selected.len(), 4);
    }

    #[test]
    fn compress_unlabeled_rejected() {
        let ds = line_dataset(&[0.0, 1.0]);
        assert_eq!(
            ff_compress(&ds, 2, &mut Rng::new(1)).unwrap_err(),
            FfError::UnlabeledDataset
        );
    }

    #[test]
    fn active_batch_line_example() {
        let ds = line_dataset(&[0.0, 1.0, 2.0, 10.0]);
        let (oracle_order, _) = naive_ff(&ds, &[1, 2, 3], &[0], 2);
        assert_eq!(oracle_order, vec![3, 2]);
        let mut state = PoolState::new(vec![0], vec![1, 2, 3], 4).unwrap();
        state.rebuild_mindist(&ds);
        let got = ff_active_batch(&ds, &state, 2).unwrap();
        assert_eq!(got, oracle_order);
        // State untouched.
        assert_eq!(state.pool(), &[1, 2, 3]);
        assert_eq!(state.labeled(), &[0]);
    }

    #[test]
    fn active_batch_clamps_to_pool() {
        let ds = line_dataset(&[0.0, 1.0, 2.0, 10.0]);
        let mut state = PoolState::new(vec![0], vec![1, 2, 3], 4).unwrap();
        state.rebuild_mindist(&ds);
        let got = ff_active_batch(&ds, &state, 99).unwrap();
        assert_eq!(got, vec![3, 2, 1]);
    }

    #[test]
    fn active_batch_identical_rows_ascending() {
        let ds = line_dataset(&[4.0, 4.0, 4.0, 4.0]);
        let mut state = PoolState::new(vec![0], vec![1, 2, 3], 4).unwrap();
        state.rebuild_mindist(&ds);
        let got = ff_active_batch(&ds, &state, 3).unwrap();
        assert_eq!(got, vec![1, 2, 3]);
    }

    #[test]
    fn active_batch_requires_labeled_and_pool() {
        let ds = line_dataset(&[0.0, 1.0]);
        let empty_labeled = PoolState::new(vec![], vec![0, 1], 2).unwrap();
        assert_eq!(
            ff_active_batch(&ds, &empty_labeled, 1).unwrap_err(),
            FfError::EmptyLabeledSet
        );
        let empty_pool = PoolState::new(vec![0, 1], vec![], 2).unwrap();
        assert_eq!(
            ff_active_batch(&ds, &empty_pool, 1).unwrap_err(),
            FfError::PoolExhausted
        );
    }

    #[test]
    fn active_batch_works_without_fresh_cache() {
        let ds = line_dataset(&[0.0, 1.0, 2.0, 10.0]);
        let stale = PoolState::new(vec![0], vec![1, 2, 3], 4).unwrap();
        assert!(stale.mindist().is_none());
        let mut fresh = stale.clone();
        fresh.rebuild_mindist(&ds);
        assert_eq!(
            ff_active_batch(&ds, &stale, 2).unwrap(),
            ff_active_batch(&ds, &fresh, 2).unwrap()
        );
    }

    #[test]
    fn kcenter_radius_examples() {
        let ds = line_dataset(&[0.0, 1.0, 2.0, 10.0]);
        let all = [0, 1, 2, 3];
        assert_eq!(kcenter_radius(&ds, &[0], &all).unwrap(), 10.0);
        assert_eq!(kcenter_radius(&ds, &all, &all).unwrap(), 0.0);
        // Enumerated by hand over all point-center pairs: worst point is [2].
        assert_eq!(kcenter_radius(&ds, &[0, 3], &all).unwrap(), 2.0);
        assert_eq!(
            kcenter_radius(&ds, &[], &all).unwrap_err(),
            FfError::EmptyCenters
        );
    }

    #[test]
    fn brute_force_optimal_on_line() {
        let ds = line_dataset(&[0.0, 1.0, 2.0, 10.0]);
        // k = 2: best split is centers {1, 3} -> radius 1.
        assert_eq!(kcenter_optimal_radius(&ds, 2).unwrap(), 1.0);
    }

    #[test]
    fn check_suite_respects_bound() {
        let cases = kcenter_check_suite(10, 8, 3, 12345);
        assert_eq!(cases.len(), 10);
        for case in &cases {
            assert!(case.ratio >= 1.0 - 1e-12, "greedy beat optimal: {case:?}");
            assert!(case.ratio <= 2.0 + 1e-12, "bound violated: {case:?}");
        }
    }
}
