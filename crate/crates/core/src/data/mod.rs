//! Ingestion: CSV loading, binarization, antecedent mining and the on-disk
//! dataset cache.

mod antecedent;
mod binarize;
mod cache;
mod dataset;
mod mining;
mod raw;

pub use antecedent::{Antecedent, Condition, Conjunction};
pub use binarize::{binarize, lower_quantiles, BinarizationConfig, ColumnSpec};
pub use cache::{is_cache_file, read_cache, read_cache_from, write_cache, write_cache_to, CACHE_MAGIC, CACHE_VERSION};
pub use dataset::{one_hot_groups, Dataset, FeatureInfo, FeatureKind};
pub use mining::{mine_antecedents, MiningConfig};
pub use raw::{load_csv, read_csv, Column, ColumnKind, RawTable};
