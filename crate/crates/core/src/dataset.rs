//! Embedding datasets: n×d row-major matrices with optional class labels.
//!
//! Vectors are stored in single precision (matching the on-disk format);
//! every distance is accumulated in double precision. Label access funnels
//! through [`EmbeddingDataset::label_of`] so that an attached [`LabelProbe`]
//! can observe exactly which labels a computation read — the basis of the
//! label-hygiene tests for query strategies.

use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("shape mismatch: {n} rows of dimension {d} need {expected} values, got {got}")]
    ShapeMismatch {
        n: usize,
        d: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite entry at row {row}")]
    NonFinite { row: usize },
    #[error("label {label} out of range at row {row} (k = {k})")]
    LabelOutOfRange { row: usize, label: u32, k: u32 },
    #[error("label count {got} does not match row count {n}")]
    LabelCountMismatch { n: usize, got: usize },
    #[error("dataset must have n >= 1 and d >= 1")]
    Empty,
    #[error("class count k must be at least 1")]
    NoClasses,
    #[error("dataset has no labels")]
    Unlabeled,
    #[error("row index {index} out of range ({n} rows)")]
    RowOutOfRange { index: usize, n: usize },
    #[error("cannot concatenate: {0}")]
    IncompatibleConcat(String),
}

/// Records every label read made through `label_of`. Clones share the
/// underlying log, so a probe handed to a dataset can be inspected later.
#[derive(Debug, Clone, Default)]
pub struct LabelProbe {
    reads: Arc<Mutex<Vec<usize>>>,
}

impl LabelProbe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, row: usize) {
        self.reads.lock().unwrap().push(row);
    }

    /// Row indices read so far, in read order.
    pub fn reads(&self) -> Vec<usize> {
        self.reads.lock().unwrap().clone()
    }

    pub fn count(&self) -> usize {
        self.reads.lock().unwrap().len()
    }
}

/// n rows of d-dimensional embedding vectors, optionally labeled with class
/// ids in {0, …, k−1}. Immutable after construction.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingDataset {
    n: usize,
    d: usize,
    vectors: Vec<f32>,
    labels: Option<Vec<u32>>,
    num_classes: Option<u32>,
    probe: Option<LabelProbe>,
}

impl PartialEq for EmbeddingDataset {
    // Bitwise on the payload so round-trip tests distinguish e.g. -0.0 from 0.0.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.d == other.d
            && self.vectors.len() == other.vectors.len()
            && self
                .vectors
                .iter()
                .zip(other.vectors.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
            && self.labels == other.labels
            && self.num_classes == other.num_classes
    }
}

impl EmbeddingDataset {
    pub fn unlabeled(n: usize, d: usize, vectors: Vec<f32>) -> Result<Self, DatasetError> {
        let ds = EmbeddingDataset {
            n,
            d,
            vectors,
            labels: None,
            num_classes: None,
            probe: None,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn labeled(
        n: usize,
        d: usize,
        vectors: Vec<f32>,
        labels: Vec<u32>,
        k: u32,
    ) -> Result<Self, DatasetError> {
        let ds = EmbeddingDataset {
            n,
            d,
            vectors,
            labels: Some(labels),
            num_classes: Some(k),
            probe: None,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Checks every dataset invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.n == 0 || self.d == 0 {
            return Err(DatasetError::Empty);
        }
        let expected = self.n * self.d;
        if self.vectors.len() != expected {
            return Err(DatasetError::ShapeMismatch {
                n: self.n,
                d: self.d,
                expected,
                got: self.vectors.len(),
            });
        }
        for row in 0..self.n {
            if self.vectors[row * self.d..(row + 1) * self.d]
                .iter()
                .any(|v| !v.is_finite())
            {
                return Err(DatasetError::NonFinite { row });
            }
        }
        match (&self.labels, self.num_classes) {
            (None, None) => {}
            (Some(labels), Some(k)) => {
                if k == 0 {
                    return Err(DatasetError::NoClasses);
                }
                if labels.len() != self.n {
                    return Err(DatasetError::LabelCountMismatch {
                        n: self.n,
                        got: labels.len(),
                    });
                }
                for (row, &label) in labels.iter().enumerate() {
                    if label >= k {
                        return Err(DatasetError::LabelOutOfRange { row, label, k });
                    }
                }
            }
            // Constructors cannot produce these, but validate defends anyway.
            (Some(_), None) | (None, Some(_)) => return Err(DatasetError::Unlabeled),
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.vectors[i * self.d..(i + 1) * self.d]
    }

    pub fn vectors(&self) -> &[f32] {
        &self.vectors
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn num_classes(&self) -> Option<u32> {
        self.num_classes
    }

    /// The label of row `i`. Recorded by the attached probe, if any.
    pub fn label_of(&self, i: usize) -> Result<u32, DatasetError> {
        if i >= self.n {
            return Err(DatasetError::RowOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let labels = self.labels.as_ref().ok_or(DatasetError::Unlabeled)?;
        if let Some(probe) = &self.probe {
            probe.record(i);
        }
        Ok(labels[i])
    }

    /// Raw label slice without probe accounting. For carriers that copy
    /// labels verbatim into a derived dataset (bootstrap inflation,
    /// representation extraction) without acting on them.
    pub(crate) fn labels_untracked(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn attach_label_probe(&mut self, probe: LabelProbe) {
        self.probe = Some(probe);
    }

    /// New dataset of the given rows, labels carried (each label read is
    /// recorded by the probe — materializing a training subset is exactly
    /// the point where hidden labels are revealed).
    pub fn subset(&self, indices: &[usize]) -> Result<Self, DatasetError> {
        let mut vectors = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            if i >= self.n {
                return Err(DatasetError::RowOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
            vectors.extend_from_slice(self.row(i));
        }
        match self.num_classes {
            Some(k) => {
                let mut labels = Vec::with_capacity(indices.len());
                for &i in indices {
                    labels.push(self.label_of(i)?);
                }
                EmbeddingDataset::labeled(indices.len(), self.d, vectors, labels, k)
            }
            None => EmbeddingDataset::unlabeled(indices.len(), self.d, vectors),
        }
    }

    /// New dataset of the given rows with labels dropped. Strategies that
    /// need pool vectors (softmax scoring) use this so no label is touched.
    pub fn subset_unlabeled(&self, indices: &[usize]) -> Result<Self, DatasetError> {
        let mut vectors = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            if i >= self.n {
                return Err(DatasetError::RowOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
            vectors.extend_from_slice(self.row(i));
        }
        EmbeddingDataset::unlabeled(indices.len(), self.d, vectors)
    }

    /// Row-wise concatenation. Both must have the same dimension and the
    /// same labeling (both labeled with equal k, or both unlabeled). Labels
    /// are carried verbatim; the result has no probe attached.
    pub fn concat(a: &Self, b: &Self) -> Result<Self, DatasetError> {
        if a.d != b.d {
            return Err(DatasetError::DimensionMismatch {
                left: a.d,
                right: b.d,
            });
        }
        let mut vectors = Vec::with_capacity((a.n + b.n) * a.d);
        vectors.extend_from_slice(&a.vectors);
        vectors.extend_from_slice(&b.vectors);
        match (a.labels_untracked(), b.labels_untracked()) {
            (Some(la), Some(lb)) => {
                let (ka, kb) = (a.num_classes.unwrap(), b.num_classes.unwrap());
                if ka != kb {
                    return Err(DatasetError::IncompatibleConcat(format!(
                        "class counts differ: {ka} vs {kb}"
                    )));
                }
                let mut labels = Vec::with_capacity(a.n + b.n);
                labels.extend_from_slice(la);
                labels.extend_from_slice(lb);
                EmbeddingDataset::labeled(a.n + b.n, a.d, vectors, labels, ka)
            }
            (None, None) => EmbeddingDataset::unlabeled(a.n + b.n, a.d, vectors),
            _ => Err(DatasetError::IncompatibleConcat(
                "one side labeled, the other not".to_string(),
            )),
        }
    }

    /// Copy with labels replaced. Used by tests that permute hidden pool
    /// labels to demonstrate strategies are label-blind.
    pub fn with_labels(&self, labels: Vec<u32>, k: u32) -> Result<Self, DatasetError> {
        EmbeddingDataset::labeled(self.n, self.d, self.vectors.clone(), labels, k)
    }
}

/// Squared Euclidean distance between two equal-length vectors, accumulated
/// in double precision.
pub fn squared_distance(u: &[f32], v: &[f32]) -> Result<f64, DatasetError> {
    if u.len() != v.len() {
        return Err(DatasetError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(sq_dist(u, v))
}

/// Hot-path squared distance; callers guarantee equal lengths.
#[inline]
pub(crate) fn sq_dist(u: &[f32], v: &[f32]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = 0.0f64;
    for i in 0..u.len() {
        let diff = f64::from(u[i]) - f64::from(v[i]);
        acc += diff * diff;
    }
    acc
}
