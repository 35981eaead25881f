//! Trainable classifiers over embedding vectors: multinomial logistic
//! regression and a one-hidden-layer rectifier network, both fit by
//! full-batch gradient descent on softmax cross-entropy with L2 weight
//! decay.
//!
//! Training is single-threaded and retrains from scratch, with the gradient
//! accumulated over examples in storage order; given the same data, config,
//! and seed, two fits produce bit-identical weights. Loss and gradient are
//! exposed separately ([`training_loss`], [`training_gradient`]) so tests
//! can check the analytic gradient against finite differences.

use crate::dataset::EmbeddingDataset;
use crate::rng::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LearnerError {
    #[error("training set has no labels")]
    UnlabeledTrainingSet,
    #[error("need at least 2 classes, got {0}")]
    TooFewClasses(u32),
    #[error("training diverged: non-finite loss at epoch {0}")]
    Diverged(usize),
    #[error("input dimension {got} does not match model dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("model has no hidden representation")]
    NoHiddenRepresentation,
    #[error("invalid learner config: {0}")]
    InvalidConfig(String),
    #[error("evaluation set has no labels")]
    UnlabeledEvalSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Logistic,
    Mlp,
}

impl std::fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LearnerKind::Logistic => write!(f, "logistic"),
            LearnerKind::Mlp => write!(f, "mlp"),
        }
    }
}

impl std::str::FromStr for LearnerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "logistic" => Ok(LearnerKind::Logistic),
            "mlp" => Ok(LearnerKind::Mlp),
            other => Err(format!("unknown learner '{other}' (expected logistic|mlp)")),
        }
    }
}

/// Training hyper-parameters. `hidden_units` only applies to the mlp kind.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub kind: LearnerKind,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub init_seed: u64,
}

impl LearnerConfig {
    pub fn logistic() -> Self {
        LearnerConfig {
            kind: LearnerKind::Logistic,
            hidden_units: 0,
            learning_rate: 0.1,
            epochs: 2000,
            l2: 1e-4,
            init_seed: 0,
        }
    }

    pub fn mlp(hidden_units: usize) -> Self {
        LearnerConfig {
            kind: LearnerKind::Mlp,
            hidden_units,
            learning_rate: 0.1,
            epochs: 2000,
            l2: 1e-4,
            init_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), LearnerError> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(LearnerError::InvalidConfig(format!(
                "learning_rate must be finite and positive, got {}",
                self.learning_rate
            )));
        }
        if !self.l2.is_finite() || self.l2 < 0.0 {
            return Err(LearnerError::InvalidConfig(format!(
                "l2 must be finite and nonnegative, got {}",
                self.l2
            )));
        }
        if self.kind == LearnerKind::Mlp && self.hidden_units == 0 {
            return Err(LearnerError::InvalidConfig(
                "mlp requires hidden_units >= 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Weight tensors. Matrices are row-major with the input dimension as rows:
/// logistic weights are d×k; mlp weights are d×h then h×k.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Logistic {
        weights: Vec<f64>,
        bias: Vec<f64>,
    },
    Mlp {
        w1: Vec<f64>,
        b1: Vec<f64>,
        w2: Vec<f64>,
        b2: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    input_dim: usize,
    num_classes: usize,
    hidden_units: usize,
    params: ModelParams,
    pub epochs_run: usize,
    pub final_loss: f64,
}

impl Model {
    pub fn kind(&self) -> LearnerKind {
        match self.params {
            ModelParams::Logistic { .. } => LearnerKind::Logistic,
            ModelParams::Mlp { .. } => LearnerKind::Mlp,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn hidden_units(&self) -> usize {
        self.hidden_units
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// All parameters as one flat vector, in a fixed order (w1, b1, w2, b2
    /// for the mlp; weights, bias for logistic). Used by gradient checks.
    pub fn params_flat(&self) -> Vec<f64> {
        match &self.params {
            ModelParams::Logistic { weights, bias } => {
                let mut flat = weights.clone();
                flat.extend_from_slice(bias);
                flat
            }
            ModelParams::Mlp { w1, b1, w2, b2 } => {
                let mut flat = w1.clone();
                flat.extend_from_slice(b1);
                flat.extend_from_slice(w2);
                flat.extend_from_slice(b2);
                flat
            }
        }
    }

    /// Inverse of [`params_flat`](Self::params_flat).
    pub fn set_params_flat(&mut self, flat: &[f64]) {
        match &mut self.params {
            ModelParams::Logistic { weights, bias } => {
                let (w, b) = flat.split_at(weights.len());
                weights.copy_from_slice(w);
                bias.copy_from_slice(b);
            }
            ModelParams::Mlp { w1, b1, w2, b2 } => {
                let mut offset = 0;
                for buf in [w1, b1, w2, b2] {
                    let len = buf.len();
                    buf.copy_from_slice(&flat[offset..offset + len]);
                    offset += len;
                }
            }
        }
    }

    fn logits_into(&self, x: &[f32], hidden_scratch: &mut [f64], logits: &mut [f64]) {
        match &self.params {
            ModelParams::Logistic { weights, bias } => {
                logits.copy_from_slice(bias);
                for (j, &xj) in x.iter().enumerate() {
                    let xj = f64::from(xj);
                    let row = &weights[j * self.num_classes..(j + 1) * self.num_classes];
                    for (c, &w) in row.iter().enumerate() {
                        logits[c] += xj * w;
                    }
                }
            }
            ModelParams::Mlp { w1, b1, w2, b2 } => {
                hidden_scratch.copy_from_slice(b1);
                for (j, &xj) in x.iter().enumerate() {
                    let xj = f64::from(xj);
                    let row = &w1[j * self.hidden_units..(j + 1) * self.hidden_units];
                    for (h, &w) in row.iter().enumerate() {
                        hidden_scratch[h] += xj * w;
                    }
                }
                for h in hidden_scratch.iter_mut() {
                    if *h < 0.0 {
                        *h = 0.0;
                    }
                }
                logits.copy_from_slice(b2);
                for (h, &ah) in hidden_scratch.iter().enumerate() {
                    if ah == 0.0 {
                        continue;
                    }
                    let row = &w2[h * self.num_classes..(h + 1) * self.num_classes];
                    for (c, &w) in row.iter().enumerate() {
                        logits[c] += ah * w;
                    }
                }
            }
        }
    }
}

/// Fraction of correct argmax predictions on a labeled set.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRecord {
    pub n_correct: usize,
    pub n_eval: usize,
    pub accuracy: f64,
}

/// Row-stochastic n×k probability matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMatrix {
    n: usize,
    k: usize,
    data: Vec<f64>,
}

impl ProbMatrix {
    pub fn new(n: usize, k: usize, data: Vec<f64>) -> Result<Self, LearnerError> {
        if data.len() != n * k {
            return Err(LearnerError::InvalidConfig(format!(
                "probability matrix needs {} values, got {}",
                n * k,
                data.len()
            )));
        }
        Ok(ProbMatrix { n, k, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }
}

const INIT_SCALE: f64 = 0.05;

/// Trains a model by full-batch gradient descent from a small-uniform
/// initialization drawn from `rng`. Retrains from scratch — no warm start.
pub fn fit(
    train: &EmbeddingDataset,
    cfg: &LearnerConfig,
    rng: &mut Rng,
) -> Result<Model, LearnerError> {
    cfg.validate()?;
    let k = train
        .num_classes()
        .ok_or(LearnerError::UnlabeledTrainingSet)? as usize;
    if k < 2 {
        return Err(LearnerError::TooFewClasses(k as u32));
    }
    let labels = gather_labels(train)?;
    let d = train.dim();
    let h = if cfg.kind == LearnerKind::Mlp {
        cfg.hidden_units
    } else {
        0
    };
    let mut uniform = |len: usize| -> Vec<f64> {
        (0..len)
            .map(|_| (rng.next_f64() * 2.0 - 1.0) * INIT_SCALE)
            .collect()
    };
    let params = match cfg.kind {
        LearnerKind::Logistic => ModelParams::Logistic {
            weights: uniform(d * k),
            bias: vec![0.0; k],
        },
        LearnerKind::Mlp => ModelParams::Mlp {
            w1: uniform(d * h),
            b1: vec![0.0; h],
            w2: uniform(h * k),
            b2: vec![0.0; k],
        },
    };
    let mut model = Model {
        input_dim: d,
        num_classes: k,
        hidden_units: h,
        params,
        epochs_run: 0,
        final_loss: f64::NAN,
    };
    for epoch in 0..cfg.epochs {
        let (loss, grad) = loss_and_gradient(train, &labels, &model, cfg.l2);
        if !loss.is_finite() {
            return Err(LearnerError::Diverged(epoch));
        }
        let mut flat = model.params_flat();
        for (p, g) in flat.iter_mut().zip(grad.iter()) {
            *p -= cfg.learning_rate * g;
        }
        model.set_params_flat(&flat);
        model.epochs_run = epoch + 1;
    }
    let final_loss = training_loss(train, &model, cfg.l2)?;
    if !final_loss.is_finite() {
        return Err(LearnerError::Diverged(cfg.epochs));
    }
    model.final_loss = final_loss;
    Ok(model)
}

fn gather_labels(train: &EmbeddingDataset) -> Result<Vec<usize>, LearnerError> {
    (0..train.n())
        .map(|i| {
            train
                .label_of(i)
                .map(|l| l as usize)
                .map_err(|_| LearnerError::UnlabeledTrainingSet)
        })
        .collect()
}

/// Mean softmax cross-entropy plus (l2/2)·‖W‖² over the weight matrices
/// (biases are not decayed), evaluated at the model's current parameters.
pub fn training_loss(
    train: &EmbeddingDataset,
    model: &Model,
    l2: f64,
) -> Result<f64, LearnerError> {
    if train.dim() != model.input_dim {
        return Err(LearnerError::DimensionMismatch {
            expected: model.input_dim,
            got: train.dim(),
        });
    }
    let labels = gather_labels(train)?;
    let k = model.num_classes;
    let mut hidden = vec![0.0f64; model.hidden_units];
    let mut logits = vec![0.0f64; k];
    let mut ce_sum = 0.0f64;
    for i in 0..train.n() {
        model.logits_into(train.row(i), &mut hidden, &mut logits);
        ce_sum += log_sum_exp(&logits) - logits[labels[i]];
    }
    let mut penalty = 0.0;
    match &model.params {
        ModelParams::Logistic { weights, .. } => {
            penalty += weights.iter().map(|w| w * w).sum::<f64>();
        }
        ModelParams::Mlp { w1, w2, .. } => {
            penalty += w1.iter().map(|w| w * w).sum::<f64>();
            penalty += w2.iter().map(|w| w * w).sum::<f64>();
        }
    }
    Ok(ce_sum / train.n() as f64 + 0.5 * l2 * penalty)
}

/// Analytic gradient of [`training_loss`] in `params_flat` order.
pub fn training_gradient(
    train: &EmbeddingDataset,
    model: &Model,
    l2: f64,
) -> Result<Vec<f64>, LearnerError> {
    if train.dim() != model.input_dim {
        return Err(LearnerError::DimensionMismatch {
            expected: model.input_dim,
            got: train.dim(),
        });
    }
    let labels = gather_labels(train)?;
    Ok(loss_and_gradient(train, &labels, model, l2).1)
}

/// Loss and gradient in one pass. Examples are accumulated in storage order
/// so training is insensitive to how a subset was assembled, provided the
/// caller materializes subsets in canonical index order.
fn loss_and_gradient(
    train: &EmbeddingDataset,
    labels: &[usize],
    model: &Model,
    l2: f64,
) -> (f64, Vec<f64>) {
    let n = train.n();
    let k = model.num_classes;
    let d = model.input_dim;
    let scale = 1.0 / n as f64;
    let mut ce_sum = 0.0f64;
    match &model.params {
        ModelParams::Logistic { weights, bias } => {
            let mut gw = vec![0.0f64; weights.len()];
            let mut gb = vec![0.0f64; bias.len()];
            let mut logits = vec![0.0f64; k];
            let mut hidden: [f64; 0] = [];
            for i in 0..n {
                let x = train.row(i);
                model.logits_into(x, &mut hidden, &mut logits);
                let lse = log_sum_exp(&logits);
                ce_sum += lse - logits[labels[i]];
                for c in 0..k {
                    // dL/dz_c = p_c − 1{c = y}
                    let mut g = (logits[c] - lse).exp();
                    if c == labels[i] {
                        g -= 1.0;
                    }
                    gb[c] += g;
                    for (j, &xj) in x.iter().enumerate() {
                        gw[j * k + c] += f64::from(xj) * g;
                    }
                }
            }
            let mut flat = Vec::with_capacity(gw.len() + gb.len());
            for (idx, g) in gw.iter().enumerate() {
                flat.push(g * scale + l2 * weights[idx]);
            }
            flat.extend(gb.iter().map(|g| g * scale));
            (ce_sum * scale + 0.5 * l2 * sq_norm(weights), flat)
        }
        ModelParams::Mlp { w1, b1, w2, b2 } => {
            let h = model.hidden_units;
            let mut gw1 = vec![0.0f64; w1.len()];
            let mut gb1 = vec![0.0f64; b1.len()];
            let mut gw2 = vec![0.0f64; w2.len()];
            let mut gb2 = vec![0.0f64; b2.len()];
            let mut hidden = vec![0.0f64; h];
            let mut logits = vec![0.0f64; k];
            let mut dz = vec![0.0f64; k];
            let mut dh = vec![0.0f64; h];
            for i in 0..n {
                let x = train.row(i);
                model.logits_into(x, &mut hidden, &mut logits);
                let lse = log_sum_exp(&logits);
                ce_sum += lse - logits[labels[i]];
                for c in 0..k {
                    dz[c] = (logits[c] - lse).exp();
                    if c == labels[i] {
                        dz[c] -= 1.0;
                    }
                    gb2[c] += dz[c];
                }
                for (hu, &ah) in hidden.iter().enumerate() {
                    // Rectifier subgradient: active iff the unit fired.
                    if ah > 0.0 {
                        let mut acc = 0.0;
                        let row = &w2[hu * k..(hu + 1) * k];
                        for c in 0..k {
                            gw2[hu * k + c] += ah * dz[c];
                            acc += row[c] * dz[c];
                        }
                        dh[hu] = acc;
                    } else {
                        dh[hu] = 0.0;
                    }
                }
                for hu in 0..h {
                    let g = dh[hu];
                    if g == 0.0 {
                        continue;
                    }
                    gb1[hu] += g;
                    for (j, &xj) in x.iter().enumerate() {
                        gw1[j * h + hu] += f64::from(xj) * g;
                    }
                }
            }
            let mut flat = Vec::with_capacity(d * h + h + h * k + k);
            for (idx, g) in gw1.iter().enumerate() {
                flat.push(g * scale + l2 * w1[idx]);
            }
            flat.extend(gb1.iter().map(|g| g * scale));
            for (idx, g) in gw2.iter().enumerate() {
                flat.push(g * scale + l2 * w2[idx]);
            }
            flat.extend(gb2.iter().map(|g| g * scale));
            let penalty = 0.5 * l2 * (sq_norm(w1) + sq_norm(w2));
            (ce_sum * scale + penalty, flat)
        }
    }
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + z.iter().map(|&v| (v - m).exp()).sum::<f64>().ln()
}

/// Softmax class probabilities for every row, computed with max-subtraction.
pub fn predict_proba(model: &Model, ds: &EmbeddingDataset) -> Result<ProbMatrix, LearnerError> {
    if ds.dim() != model.input_dim {
        return Err(LearnerError::DimensionMismatch {
            expected: model.input_dim,
            got: ds.dim(),
        });
    }
    let k = model.num_classes;
    let mut hidden = vec![0.0f64; model.hidden_units];
    let mut logits = vec![0.0f64; k];
    let mut data = Vec::with_capacity(ds.n() * k);
    for i in 0..ds.n() {
        model.logits_into(ds.row(i), &mut hidden, &mut logits);
        let lse = log_sum_exp(&logits);
        data.extend(logits.iter().map(|&z| (z - lse).exp()));
    }
    ProbMatrix::new(ds.n(), k, data)
}

/// Argmax-class accuracy on a labeled set, ties toward the lowest class id.
pub fn evaluate_accuracy(
    model: &Model,
    test: &EmbeddingDataset,
) -> Result<EvaluationRecord, LearnerError> {
    if !test.is_labeled() {
        return Err(LearnerError::UnlabeledEvalSet);
    }
    if test.dim() != model.input_dim {
        return Err(LearnerError::DimensionMismatch {
            expected: model.input_dim,
            got: test.dim(),
        });
    }
    let mut hidden = vec![0.0f64; model.hidden_units];
    let mut logits = vec![0.0f64; model.num_classes];
    let mut n_correct = 0;
    for i in 0..test.n() {
        model.logits_into(test.row(i), &mut hidden, &mut logits);
        let mut best = 0;
        for c in 1..logits.len() {
            if logits[c] > logits[best] {
                best = c;
            }
        }
        if best as u32
            == test
                .label_of(i)
                .map_err(|_| LearnerError::UnlabeledEvalSet)?
        {
            n_correct += 1;
        }
    }
    Ok(EvaluationRecord {
        n_correct,
        n_eval: test.n(),
        accuracy: n_correct as f64 / test.n() as f64,
    })
}

/// Hidden-layer activations of an mlp as a new embedding dataset (n×h).
/// Labels are carried through unchanged.
pub fn extract_representation(
    model: &Model,
    inputs: &EmbeddingDataset,
) -> Result<EmbeddingDataset, LearnerError> {
    let (w1, b1) = match &model.params {
        ModelParams::Mlp { w1, b1, .. } => (w1, b1),
        ModelParams::Logistic { .. } => return Err(LearnerError::NoHiddenRepresentation),
    };
    if inputs.dim() != model.input_dim {
        return Err(LearnerError::DimensionMismatch {
            expected: model.input_dim,
            got: inputs.dim(),
        });
    }
    let h = model.hidden_units;
    let mut vectors = Vec::with_capacity(inputs.n() * h);
    let mut hidden = vec![0.0f64; h];
    for i in 0..inputs.n() {
        hidden.copy_from_slice(b1);
        for (j, &xj) in inputs.row(i).iter().enumerate() {
            let xj = f64::from(xj);
            let row = &w1[j * h..(j + 1) * h];
            for (hu, &w) in row.iter().enumerate() {
                hidden[hu] += xj * w;
            }
        }
        vectors.extend(hidden.iter().map(|&v| v.max(0.0) as f32));
    }
    let out = match (inputs.labels_untracked(), inputs.num_classes()) {
        (Some(labels), Some(k)) => {
            EmbeddingDataset::labeled(inputs.n(), h, vectors, labels.to_vec(), k)
        }
        _ => EmbeddingDataset::unlabeled(inputs.n(), h, vectors),
    };
    out.map_err(|e| LearnerError::InvalidConfig(format!("representation build failed: {e}")))
}
