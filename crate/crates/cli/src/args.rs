//! clap argument definitions and their resolution against an optional
//! key=value config file. Flags always win over config values; defaults
//! apply last.

use crate::commands::{
    ActiveOptions, CompressOptions, Demo2dOptions, KcenterCheckOptions, LearnerFlags,
};
use crate::config::ConfigMap;
use crate::CliError;
use clap::{Args, Parser, Subcommand};
use ffal::{LearnerKind, ReprSource, StrategyKind};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "ffal",
    version,
    about = "Farthest-first active learning and coreset compression over embedding spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a pool-based active-learning session from embedding files
    Active(ActiveArgs),
    /// Compress a labeled embedding set by stratified farthest-first traversal
    Compress(CompressArgs),
    /// Compare FF, SR, and random on the built-in 2-D three-Gaussian problem
    Demo2d(Demo2dArgs),
    /// Check the k-center 2-approximation against brute-force enumeration
    KcenterCheck(KcenterCheckArgs),
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigMap, CliError> {
    match path {
        Some(p) => ConfigMap::load(p),
        None => Ok(ConfigMap::empty()),
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

#[derive(Args, Debug)]
pub struct LearnerArgs {
    /// Learner kind: logistic | mlp
    #[arg(long)]
    pub learner: Option<LearnerKind>,
    /// Hidden width of the mlp learner
    #[arg(long)]
    pub hidden_units: Option<usize>,
    /// Full-batch gradient-descent step size
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Training epochs per (re)fit
    #[arg(long)]
    pub epochs: Option<usize>,
    /// L2 weight-decay coefficient
    #[arg(long)]
    pub l2: Option<f64>,
}

impl LearnerArgs {
    fn resolve(
        &self,
        cfg: &ConfigMap,
        default_kind: LearnerKind,
    ) -> Result<LearnerFlags, CliError> {
        Ok(LearnerFlags {
            kind: cfg.pick(self.learner, "learner")?.unwrap_or(default_kind),
            hidden_units: cfg.pick(self.hidden_units, "hidden-units")?.unwrap_or(16),
            learning_rate: cfg
                .pick(self.learning_rate, "learning-rate")?
                .unwrap_or(0.1),
            epochs: cfg.pick(self.epochs, "epochs")?.unwrap_or(2000),
            l2: cfg.pick(self.l2, "l2")?.unwrap_or(1e-4),
        })
    }
}

#[derive(Args, Debug)]
pub struct ActiveArgs {
    /// Unlabeled pool embeddings (labels stay hidden until queried)
    #[arg(long)]
    pub pool: Option<PathBuf>,
    /// Initial labeled embeddings
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Held-out labeled test embeddings
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Query strategy: ff | sr | random
    #[arg(long)]
    pub strategy: Option<StrategyKind>,
    /// Points queried per round
    #[arg(long)]
    pub batch: Option<usize>,
    /// Total label budget (mutually exclusive with --epsilon)
    #[arg(long)]
    pub budget: Option<usize>,
    /// Target accuracy improvement in [0,1] (mutually exclusive with --budget)
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub learner: LearnerArgs,
    /// FF distance space: static | model
    #[arg(long)]
    pub repr: Option<ReprSource>,
    /// Seed pinning the whole run
    #[arg(long)]
    pub seed: Option<u64>,
    /// Results CSV path (manifest written beside it)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value config merged under explicit flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ActiveArgs {
    pub fn resolve(&self) -> Result<ActiveOptions, CliError> {
        let cfg = load_config(&self.config)?;
        let budget = cfg.pick(self.budget, "budget")?;
        let epsilon = cfg.pick(self.epsilon, "epsilon")?;
        match (budget, epsilon) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "--budget and --epsilon are mutually exclusive".to_string(),
                ))
            }
            (None, None) => {
                return Err(CliError::Usage(
                    "one of --budget or --epsilon is required".to_string(),
                ))
            }
            _ => {}
        }
        let learner = self.learner.resolve(&cfg, LearnerKind::Logistic)?;
        let repr = cfg.pick(self.repr, "repr")?.unwrap_or(ReprSource::Static);
        Ok(ActiveOptions {
            pool: required(cfg.pick(self.pool.clone(), "pool")?, "pool")?,
            init: required(cfg.pick(self.init.clone(), "init")?, "init")?,
            test: required(cfg.pick(self.test.clone(), "test")?, "test")?,
            strategy: required(cfg.pick(self.strategy, "strategy")?, "strategy")?,
            batch: required(cfg.pick(self.batch, "batch")?, "batch")?,
            budget,
            epsilon,
            learner,
            repr,
            seed: cfg.pick(self.seed, "seed")?.unwrap_or(0),
            out: required(cfg.pick(self.out.clone(), "out")?, "out")?,
        })
    }
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    /// Labeled embeddings to compress
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Coreset target size c (k·⌊c/k⌋ points are selected)
    #[arg(long)]
    pub target_size: Option<usize>,
    /// Seed for the per-class random seeds
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output index file, one ascending row index per line
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Labeled test embeddings; triggers the three-accuracy report
    #[arg(long)]
    pub eval: Option<PathBuf>,
    #[command(flatten)]
    pub learner: LearnerArgs,
    /// key=value config merged under explicit flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CompressArgs {
    pub fn resolve(&self) -> Result<CompressOptions, CliError> {
        let cfg = load_config(&self.config)?;
        Ok(CompressOptions {
            train: required(cfg.pick(self.train.clone(), "train")?, "train")?,
            target_size: required(cfg.pick(self.target_size, "target-size")?, "target-size")?,
            seed: cfg.pick(self.seed, "seed")?.unwrap_or(0),
            out: required(cfg.pick(self.out.clone(), "out")?, "out")?,
            eval: cfg.pick(self.eval.clone(), "eval")?,
            learner: self.learner.resolve(&cfg, LearnerKind::Logistic)?,
        })
    }
}

#[derive(Args, Debug)]
pub struct Demo2dArgs {
    /// Number of pool points sampled from the three Gaussians
    #[arg(long)]
    pub n: Option<usize>,
    /// Single-point query rounds per strategy
    #[arg(long)]
    pub queries: Option<usize>,
    /// Held-out test points drawn from the same distribution
    #[arg(long)]
    pub test_n: Option<usize>,
    /// Seed pinning data, initial labels, and training
    #[arg(long)]
    pub seed: Option<u64>,
    /// Results CSV path (three curves, grouped by strategy)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Hidden width of the demo mlp
    #[arg(long)]
    pub hidden_units: Option<usize>,
    /// Demo training step size
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Demo training epochs per refit
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Demo L2 weight decay
    #[arg(long)]
    pub l2: Option<f64>,
    /// key=value config merged under explicit flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Demo2dArgs {
    pub fn resolve(&self) -> Result<Demo2dOptions, CliError> {
        let cfg = load_config(&self.config)?;
        let defaults = Demo2dOptions::default();
        let n = cfg.pick(self.n, "n")?.unwrap_or(defaults.n);
        if n < 3 {
            return Err(CliError::Usage(format!("--n must be at least 3, got {n}")));
        }
        Ok(Demo2dOptions {
            n,
            queries: cfg
                .pick(self.queries, "queries")?
                .unwrap_or(defaults.queries),
            test_n: cfg.pick(self.test_n, "test-n")?.unwrap_or(defaults.test_n),
            seed: cfg.pick(self.seed, "seed")?.unwrap_or(defaults.seed),
            out: required(cfg.pick(self.out.clone(), "out")?, "out")?,
            hidden_units: cfg
                .pick(self.hidden_units, "hidden-units")?
                .unwrap_or(defaults.hidden_units),
            learning_rate: cfg
                .pick(self.learning_rate, "learning-rate")?
                .unwrap_or(defaults.learning_rate),
            epochs: cfg.pick(self.epochs, "epochs")?.unwrap_or(defaults.epochs),
            l2: cfg.pick(self.l2, "l2")?.unwrap_or(defaults.l2),
        })
    }
}

#[derive(Args, Debug)]
pub struct KcenterCheckArgs {
    /// Number of random instances
    #[arg(long)]
    pub instances: Option<usize>,
    /// Largest instance size (brute force enumerates C(n,k) subsets)
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Largest center count
    #[arg(long)]
    pub max_k: Option<usize>,
    /// Instance-generation seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// key=value config merged under explicit flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl KcenterCheckArgs {
    pub fn resolve(&self) -> Result<KcenterCheckOptions, CliError> {
        let cfg = load_config(&self.config)?;
        let defaults = KcenterCheckOptions::default();
        Ok(KcenterCheckOptions {
            instances: cfg
                .pick(self.instances, "instances")?
                .unwrap_or(defaults.instances),
            max_n: cfg.pick(self.max_n, "max-n")?.unwrap_or(defaults.max_n),
            max_k: cfg.pick(self.max_k, "max-k")?.unwrap_or(defaults.max_k),
            seed: cfg.pick(self.seed, "seed")?.unwrap_or(defaults.seed),
        })
    }
}
