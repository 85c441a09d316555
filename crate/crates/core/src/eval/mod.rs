//! Metrics, stratified splits and model comparison reports.

mod compare;
mod metrics;
mod predictions;
mod split;

pub use compare::{compare, Candidate, ComparisonReport, ModelRow, PairDisagreement, Predictor, DEFAULT_MARGIN};
pub use metrics::{confusion, confusion_from_predictions, disagreement, disagreement_from_predictions, ConfusionReport};
pub use predictions::{load_predictions, read_predictions, PredictionFile};
pub use split::{split, split_dataset, Split};
