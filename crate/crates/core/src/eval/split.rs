use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Row indices of a train/test partition, each sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Stratified split: each class sends `round(fraction * count)` of its rows
/// (at least one, at most all but one) to the test side. The same seed
/// always gives the same split.
pub fn split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<Split> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let label = ds.label();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [false, true] {
        let mut rows: Vec<usize> = (0..ds.n()).filter(|&i| label.get(i) == class).collect();
        if rows.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "class {} has {} row(s); a stratified split needs at least 2",
                u8::from(class),
                rows.len()
            )));
        }
        rows.shuffle(&mut rng);
        let k = ((test_fraction * rows.len() as f64).round() as usize).clamp(1, rows.len() - 1);
        test.extend_from_slice(&rows[..k]);
        train.extend_from_slice(&rows[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test, seed })
}

/// `split` materialized as (train, test) datasets.
pub fn split_dataset(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let s = split(ds, test_fraction, seed)?;
    Ok((ds.select_rows(&s.train), ds.select_rows(&s.test)))
}
