use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lucid_core::Rational;

#[derive(Debug, Parser)]
#[command(name = "lucid", version, about = "Certifiably optimal rule lists and integer risk scores")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binarize a CSV into a dataset cache.
    Binarize(BinarizeArgs),
    /// Train a certifiably optimal rule list.
    TrainRulelist(RuleListArgs),
    /// Train an integer risk score on a coefficient lattice.
    TrainRiskslim(RiskSlimArgs),
    /// List every rule list within epsilon of the optimum.
    Rashomon(RuleListArgs),
    /// Find the cheapest feature flips that change a model's prediction.
    Counterfactual(CounterfactualArgs),
    /// Compare models and baselines on one train/test split.
    Compare(CompareArgs),
    /// Exhaustive search on tiny inputs, for auditing certificates.
    BruteForce(BruteForceArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file or dataset cache.
    #[arg(long)]
    pub input: PathBuf,
    /// Label column of a CSV input.
    #[arg(long)]
    pub label_col: Option<String>,
    /// Label value counted as positive.
    #[arg(long, default_value = "1")]
    pub positive: String,
    /// Binarization config file, or inline directives separated by `;`
    /// (for example `age=20,30;sex.categorical=true`).
    #[arg(long)]
    pub cutpoints: Option<String>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Hold out this fraction of rows (stratified) for testing.
    #[arg(long)]
    pub test_frac: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Search memory budget in MiB; the search stops with a gap beyond it.
    #[arg(long)]
    pub mem_budget: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct BinarizeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct MiningArgs {
    /// Most conditions per mined antecedent.
    #[arg(long, default_value_t = 2)]
    pub max_card: usize,
    /// Least fraction of rows an antecedent (and its complement) must cover.
    #[arg(long, default_value_t = 0.01)]
    pub min_support: f64,
    /// Mine only positive conditions.
    #[arg(long)]
    pub no_negations: bool,
}

#[derive(Debug, Args)]
pub struct RuleListArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    /// Penalty per rule, as a decimal or fraction.
    #[arg(long, default_value = "0.01")]
    pub lambda: Rational,
    #[arg(long, default_value_t = 4)]
    pub max_rules: usize,
    /// Rashomon tolerance on the objective.
    #[arg(long, default_value = "0")]
    pub epsilon: Rational,
    /// Comma-separated features or columns the model may not use.
    #[arg(long, value_delimiter = ',')]
    pub forbid: Vec<String>,
    /// Comma-separated features or columns the model must use.
    #[arg(long, value_delimiter = ',')]
    pub require: Vec<String>,
    /// Stop after this many prefix expansions.
    #[arg(long)]
    pub max_expansions: Option<u64>,
    /// Most models a Rashomon set may hold.
    #[arg(long, default_value_t = 100_000)]
    pub max_models: usize,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, default_value = "0.01")]
    pub lambda: Rational,
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    pub coef_min: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    pub coef_max: i64,
    #[arg(long)]
    pub sparsity_cap: Option<usize>,
    /// Comma-separated `feature:sign` pairs, sign one of `+`, `-`, `0`, `any`.
    #[arg(long)]
    pub signs: Option<String>,
}

#[derive(Debug, Args)]
pub struct RiskSlimArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Stop after this many branch-and-bound nodes.
    #[arg(long, default_value_t = 200_000)]
    pub max_nodes: u64,
}

#[derive(Debug, Args)]
pub struct CounterfactualArgs {
    /// Model or certificate JSON.
    #[arg(long)]
    pub model: PathBuf,
    /// Dataset supplying feature metadata and, with `--row`, the instance.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub label_col: Option<String>,
    #[arg(long, default_value = "1")]
    pub positive: String,
    #[arg(long)]
    pub cutpoints: Option<String>,
    /// Query file with instance, target, costs, immutables, budget and k.
    #[arg(long)]
    pub query: Option<PathBuf>,
    /// Instance as comma-separated 0/1 values.
    #[arg(long, conflicts_with = "row")]
    pub instance: Option<String>,
    /// Use this row of `--input` as the instance.
    #[arg(long)]
    pub row: Option<usize>,
    /// Target label, 0 or 1; defaults to the opposite of the prediction.
    #[arg(long)]
    pub target: Option<u8>,
    /// Comma-separated `feature:cost` pairs; `inf` freezes a feature.
    #[arg(long)]
    pub costs: Option<String>,
    /// Most flips allowed.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Number of counterfactuals to list, cheapest first.
    #[arg(long)]
    pub k: Option<usize>,
    /// Skip flip sets that contain a cheaper successful set.
    #[arg(long)]
    pub irredundant: bool,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.3)]
    pub test_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Interpretable model JSON; repeatable.
    #[arg(long)]
    pub model: Vec<PathBuf>,
    /// Baseline model JSON or `row_id,prediction` CSV; repeatable.
    #[arg(long)]
    pub baseline: Vec<PathBuf>,
    /// Also fit a rounded logistic-regression baseline on the training rows.
    #[arg(long)]
    pub logreg_baseline: bool,
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    pub coef_min: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    pub coef_max: i64,
    /// Largest tolerated test-accuracy lead of a baseline.
    #[arg(long, default_value = "0.01")]
    pub margin: Rational,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BruteKind {
    Rulelist,
    Lattice,
}

#[derive(Debug, Args)]
pub struct BruteForceArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value_t = BruteKind::Rulelist)]
    pub kind: BruteKind,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[arg(long, default_value = "0.01")]
    pub lambda: Rational,
    #[arg(long, default_value_t = 3)]
    pub max_rules: usize,
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    pub coef_min: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    pub coef_max: i64,
    #[arg(long)]
    pub sparsity_cap: Option<usize>,
    #[arg(long)]
    pub signs: Option<String>,
    /// Refuse inputs with more candidates than this.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_candidates: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}
