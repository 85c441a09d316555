use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Per-row predictions from an external model, keyed by row index of the
/// full input dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionFile {
    pub path: PathBuf,
    pub predictions: BTreeMap<usize, bool>,
}

impl PredictionFile {
    /// Predictions for `rows`, in order; fails on the first uncovered row.
    pub fn for_rows(&self, rows: &[usize]) -> Result<Vec<bool>> {
        rows.iter()
            .map(|i| {
                self.predictions.get(i).copied().ok_or_else(|| {
                    Error::InvalidParameter(format!("{}: no prediction for row {i}", self.path.display()))
                })
            })
            .collect()
    }

    pub fn covers(&self, rows: &[usize]) -> bool {
        rows.iter().all(|i| self.predictions.contains_key(i))
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "1" | "true" | "True" | "TRUE" => Some(true),
        "0" | "false" | "False" | "FALSE" => Some(false),
        _ => None,
    }
}

/// Reads `row_id,prediction` lines; a header line is skipped when its
/// first field is not a number. Predictions are 0/1 or true/false.
pub fn read_predictions<R: Read>(reader: R, path: &Path) -> Result<PredictionFile> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let bad = |line: usize, message: String| Error::Csv(format!("{}: line {line}: {message}", path.display()));
    let mut predictions = BTreeMap::new();
    for (i, record) in csv.records().enumerate() {
        let line = i + 1;
        let record = record.map_err(|e| bad(line, e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(line, format!("expected `row_id,prediction`, found {} fields", record.len())));
        }
        let Ok(row) = record[0].parse::<usize>() else {
            if i == 0 {
                continue;
            }
            return Err(bad(line, format!("`{}` is not a row id", &record[0])));
        };
        let value = parse_bool(&record[1]).ok_or_else(|| bad(line, format!("`{}` is not 0/1", &record[1])))?;
        if predictions.insert(row, value).is_some() {
            return Err(bad(line, format!("duplicate row id {row}")));
        }
    }
    Ok(PredictionFile {
        path: path.to_path_buf(),
        predictions,
    })
}

pub fn load_predictions(path: impl AsRef<Path>) -> Result<PredictionFile> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_predictions(file, path)
}
