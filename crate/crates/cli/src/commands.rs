//! The four commands: `active`, `compress`, `demo2d`, `kcenter-check`.
//!
//! Every command that writes a results file also writes a `<out>.manifest`
//! with the fully resolved configuration and input digests; identical flags
//! and seed always produce byte-identical outputs.

use crate::manifest::Manifest;
use crate::CliError;
use ffal::dataio::{gen_three_gaussians, load_csv_embeddings, load_embeddings, results_csv_string};
use ffal::{
    derive_seed, ff_compress, kcenter_check_suite, run_budget_constrained, run_compression_eval,
    run_error_reduction, Coreset, EmbeddingDataset, LearnerConfig, LearnerKind, ReprSource, Rng,
    RoundEntry, SessionConfig, StrategyKind,
};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Demo seed-stream tags (data, held-out test, initial labels).
const DEMO_DATA_STREAM: u64 = 40;
const DEMO_TEST_STREAM: u64 = 41;
const DEMO_INIT_STREAM: u64 = 42;

/// Loads FFAL binary embeddings, or CSV when the extension is `.csv`.
/// A missing input is a usage error.
pub fn load_input(path: &Path) -> Result<EmbeddingDataset, CliError> {
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "input file not found: {}",
            path.display()
        )));
    }
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let loaded = if is_csv {
        load_csv_embeddings(path)
    } else {
        load_embeddings(path)
    };
    loaded.map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone)]
pub struct LearnerFlags {
    pub kind: LearnerKind,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl LearnerFlags {
    pub fn to_config(&self) -> LearnerConfig {
        LearnerConfig {
            kind: self.kind,
            hidden_units: self.hidden_units,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            l2: self.l2,
            init_seed: 0,
        }
    }

    fn stamp(&self, manifest: &mut Manifest) {
        manifest
            .set("learner", self.kind)
            .set("hidden-units", self.hidden_units)
            .set("learning-rate", self.learning_rate)
            .set("epochs", self.epochs)
            .set("l2", self.l2);
    }
}

#[derive(Debug, Clone)]
pub struct ActiveOptions {
    pub pool: PathBuf,
    pub init: PathBuf,
    pub test: PathBuf,
    pub strategy: StrategyKind,
    pub batch: usize,
    pub budget: Option<usize>,
    pub epsilon: Option<f64>,
    pub learner: LearnerFlags,
    pub repr: ReprSource,
    pub seed: u64,
    pub out: PathBuf,
}

pub fn cmd_active(opts: &ActiveOptions) -> Result<(), CliError> {
    let pool = load_input(&opts.pool)?;
    let init = load_input(&opts.init)?;
    let test = load_input(&opts.test)?;
    let cfg = SessionConfig {
        strategy: opts.strategy,
        batch: opts.batch,
        budget: opts.budget,
        epsilon: opts.epsilon,
        learner: opts.learner.to_config(),
        seed: opts.seed,
        representation_source: opts.repr,
    };
    cfg.validate()?;
    let record = match (opts.budget, opts.epsilon) {
        (Some(_), None) => run_budget_constrained(&pool, &init, &test, &cfg)?,
        (None, Some(_)) => run_error_reduction(&pool, &init, &test, &cfg)?,
        _ => unreachable!("validated above"),
    };
    std::fs::write(&opts.out, results_csv_string(&record.entries, opts.seed))?;
    let mut manifest = Manifest::new("active");
    manifest
        .set("pool", opts.pool.display())
        .set("init", opts.init.display())
        .set("test", opts.test.display())
        .set("strategy", opts.strategy)
        .set("batch", opts.batch)
        .set("repr", repr_name(opts.repr))
        .set("seed", opts.seed)
        .set("out", opts.out.display());
    if let Some(budget) = opts.budget {
        manifest.set("budget", budget);
    }
    if let Some(epsilon) = opts.epsilon {
        manifest.set("epsilon", epsilon);
    }
    opts.learner.stamp(&mut manifest);
    manifest.digest_input("pool", &opts.pool)?;
    manifest.digest_input("init", &opts.init)?;
    manifest.digest_input("test", &opts.test)?;
    manifest.write_beside(&opts.out)?;
    println!(
        "wrote {} rounds to {} (status {:?}, {} labels revealed)",
        record.entries.len(),
        opts.out.display(),
        record.status,
        record.labels_revealed()
    );
    Ok(())
}

fn repr_name(repr: ReprSource) -> &'static str {
    match repr {
        ReprSource::Static => "static",
        ReprSource::Model => "model",
    }
}

#[derive(Debug, Clone)]
pub struct CompressOptions {
    pub train: PathBuf,
    pub target_size: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub eval: Option<PathBuf>,
    pub learner: LearnerFlags,
}

pub fn cmd_compress(opts: &CompressOptions) -> Result<(), CliError> {
    let train = load_input(&opts.train)?;
    let mut rng = Rng::new(opts.seed);
    let mut manifest = Manifest::new("compress");
    manifest
        .set("train", opts.train.display())
        .set("target-size", opts.target_size)
        .set("seed", opts.seed)
        .set("out", opts.out.display());
    manifest.digest_input("train", &opts.train)?;
    let coreset: Coreset;
    if let Some(eval_path) = &opts.eval {
        let test = load_input(eval_path)?;
        let mut learner_cfg = opts.learner.to_config();
        learner_cfg.init_seed = derive_seed(opts.seed, 1, 0);
        let eval = run_compression_eval(&train, &test, opts.target_size, &learner_cfg, &mut rng)?;
        let report = format!(
            "accuracy_full={:.6}\naccuracy_ffcomp={:.6}\naccuracy_random={:.6}\n",
            eval.accuracy_full, eval.accuracy_ffcomp, eval.accuracy_random
        );
        let mut report_path = opts.out.as_os_str().to_owned();
        report_path.push(".report");
        std::fs::write(PathBuf::from(report_path), &report)?;
        print!("{report}");
        manifest.set("eval", eval_path.display());
        opts.learner.stamp(&mut manifest);
        manifest.digest_input("eval", eval_path)?;
        coreset = eval.coreset;
    } else {
        coreset = ff_compress(&train, opts.target_size, &mut rng)?;
    }
    let mut indices = coreset.selected.clone();
    indices.sort_unstable();
    let mut body = String::with_capacity(indices.len() * 8);
    for idx in &indices {
        body.push_str(&idx.to_string());
        body.push('\n');
    }
    std::fs::write(&opts.out, body)?;
    manifest.write_beside(&opts.out)?;
    println!(
        "selected {} of {} rows into {}",
        indices.len(),
        train.n(),
        opts.out.display()
    );
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Demo2dOptions {
    pub n: usize,
    pub queries: usize,
    pub test_n: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for Demo2dOptions {
    fn default() -> Self {
        Demo2dOptions {
            n: 200,
            queries: 30,
            test_n: 2000,
            seed: 0,
            out: PathBuf::from("demo2d.csv"),
            hidden_units: 64,
            learning_rate: 0.6,
            epochs: 2500,
            l2: 2.5e-3,
        }
    }
}

/// The 2-D simulation: three Gaussians, two initial labels (one per class),
/// then `queries` single-point rounds for each of FF, SR, and random, all
/// with the mlp learner and model-space FF distances. One CSV holds the
/// three curves, grouped by strategy.
pub fn cmd_demo2d(opts: &Demo2dOptions) -> Result<(), CliError> {
    let data = gen_three_gaussians(
        opts.n,
        &mut Rng::new(derive_seed(opts.seed, DEMO_DATA_STREAM, 0)),
    )?;
    let test = gen_three_gaussians(
        opts.test_n.max(3),
        &mut Rng::new(derive_seed(opts.seed, DEMO_TEST_STREAM, 0)),
    )?;
    let mut init_rng = Rng::new(derive_seed(opts.seed, DEMO_INIT_STREAM, 0));
    let mut init_idx = Vec::with_capacity(2);
    for class in 0..2u32 {
        let rows: Vec<usize> = (0..data.n())
            .filter(|&i| data.label_of(i).unwrap() == class)
            .collect();
        init_idx.push(rows[init_rng.next_index(rows.len())]);
    }
    init_idx.sort_unstable();
    let pool_idx: Vec<usize> = (0..data.n()).filter(|i| !init_idx.contains(i)).collect();
    let init = data
        .subset(&init_idx)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let pool = data
        .subset(&pool_idx)
        .map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut learner = LearnerConfig::mlp(opts.hidden_units);
    learner.learning_rate = opts.learning_rate;
    learner.epochs = opts.epochs;
    learner.l2 = opts.l2;
    let mut entries: Vec<RoundEntry> = Vec::new();
    for strategy in [StrategyKind::Ff, StrategyKind::Sr, StrategyKind::Random] {
        let cfg = SessionConfig {
            strategy,
            batch: 1,
            budget: Some(opts.queries),
            epsilon: None,
            learner: learner.clone(),
            seed: opts.seed,
            representation_source: ReprSource::Model,
        };
        let record = run_budget_constrained(&pool, &init, &test, &cfg)?;
        entries.extend(record.entries);
    }
    std::fs::write(&opts.out, results_csv_string(&entries, opts.seed))?;
    let mut manifest = Manifest::new("demo2d");
    manifest
        .set("n", opts.n)
        .set("queries", opts.queries)
        .set("test-n", opts.test_n)
        .set("seed", opts.seed)
        .set("out", opts.out.display())
        .set("hidden-units", opts.hidden_units)
        .set("learning-rate", opts.learning_rate)
        .set("epochs", opts.epochs)
        .set("l2", opts.l2);
    manifest.write_beside(&opts.out)?;
    println!(
        "wrote {} rows ({} strategies x {} rounds) to {}",
        entries.len(),
        3,
        opts.queries + 1,
        opts.out.display()
    );
    Ok(())
}

#[derive(Debug, Clone)]
pub struct KcenterCheckOptions {
    pub instances: usize,
    pub max_n: usize,
    pub max_k: usize,
    pub seed: u64,
}

impl Default for KcenterCheckOptions {
    fn default() -> Self {
        KcenterCheckOptions {
            instances: 50,
            max_n: 12,
            max_k: 4,
            seed: 0,
        }
    }
}

pub fn cmd_kcenter_check(opts: &KcenterCheckOptions) -> Result<(), CliError> {
    let cases = kcenter_check_suite(opts.instances, opts.max_n, opts.max_k, opts.seed);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut worst: f64 = 0.0;
    let mut violations = 0usize;
    for (i, case) in cases.iter().enumerate() {
        let ok = case.ratio <= 2.0;
        if !ok {
            violations += 1;
        }
        worst = worst.max(case.ratio);
        writeln!(
            out,
            "instance {i:>3}: n={:>2} d={} k={} ff_radius={:.6} optimal={:.6} ratio={:.4} {}",
            case.n,
            case.d,
            case.k,
            case.ff_radius,
            case.optimal_radius,
            case.ratio,
            if ok { "ok" } else { "VIOLATION" }
        )?;
    }
    writeln!(
        out,
        "{} instances, worst ratio {:.4}: {}",
        cases.len(),
        worst,
        if violations == 0 { "PASS" } else { "FAIL" }
    )?;
    if violations > 0 {
        return Err(CliError::Runtime(format!(
            "{violations} instances exceeded the 2-approximation bound"
        )));
    }
    Ok(())
}
