//! Loading datasets from CSV files or caches.

use std::path::Path;

use anyhow::{bail, Context, Result};
use lucid_core::data::{binarize, is_cache_file, load_csv, read_cache, BinarizationConfig, Dataset};
use lucid_core::eval::{split, Split};
use serde_json::{json, Value};

use crate::args::{DataArgs, SplitArgs};
use crate::manifest::Run;

/// Reads `--cutpoints` as a file when one exists at that path, otherwise
/// as inline directives separated by `;`.
pub fn binarization_config(spec: Option<&str>, run: &mut Run) -> Result<BinarizationConfig> {
    let Some(spec) = spec else {
        return Ok(BinarizationConfig::default());
    };
    let path = Path::new(spec);
    if path.is_file() {
        run.input(path)?;
        return Ok(BinarizationConfig::load(path)?);
    }
    Ok(BinarizationConfig::parse(&spec.replace(';', "\n"))?)
}

pub fn load(
    input: &Path,
    label_col: Option<&str>,
    positive: &str,
    cutpoints: Option<&str>,
    run: &mut Run,
) -> Result<Dataset> {
    run.input(input)?;
    if is_cache_file(input) {
        if cutpoints.is_some() {
            log::warn!("--cutpoints is ignored for an already binarized cache");
        }
        return read_cache(input).with_context(|| format!("loading cache {}", input.display()));
    }
    let Some(label) = label_col else {
        bail!("{}: --label-col is required for CSV input", input.display());
    };
    let config = binarization_config(cutpoints, run)?;
    let raw = load_csv(input, label, positive)?;
    let ds = binarize(&raw, &config)?;
    log::info!("{}: {} rows, {} binary features", input.display(), ds.n(), ds.p());
    Ok(ds)
}

pub fn load_data(args: &DataArgs, run: &mut Run) -> Result<Dataset> {
    load(&args.input, args.label_col.as_deref(), &args.positive, args.cutpoints.as_deref(), run)
}

/// The training rows, plus the held-out rows when `--test-frac` is set.
pub fn training_split(ds: &Dataset, args: &SplitArgs, run: &mut Run) -> Result<(Dataset, Option<(Dataset, Split)>)> {
    run.seed(args.seed);
    match args.test_frac {
        None => Ok((ds.clone(), None)),
        Some(frac) => {
            let s = split(ds, frac, args.seed)?;
            let train = ds.select_rows(&s.train);
            let test = ds.select_rows(&s.test);
            Ok((train, Some((test, s))))
        }
    }
}

pub fn data_params(args: &DataArgs) -> Value {
    json!({
        "input": args.input.display().to_string(),
        "label_col": args.label_col,
        "positive": args.positive,
        "cutpoints": args.cutpoints,
    })
}
