use std::collections::HashSet;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Column {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    Categorical,
    /// Numeric with every present value in {0, 1}.
    Binary,
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            Column::Numeric(v) => {
                if v.iter().flatten().all(|&x| x == 0.0 || x == 1.0) {
                    ColumnKind::Binary
                } else {
                    ColumnKind::Numeric
                }
            }
            Column::Categorical(_) => ColumnKind::Categorical,
        }
    }

    pub fn is_missing(&self, row: usize) -> bool {
        match self {
            Column::Numeric(v) => v[row].is_none(),
            Column::Categorical(v) => v[row].is_none(),
        }
    }
}

/// A parsed table: named feature columns plus a binary label.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    names: Vec<String>,
    columns: Vec<Column>,
    label_name: String,
    positive_token: String,
    label: Vec<bool>,
}

impl RawTable {
    pub fn new(
        names: Vec<String>,
        columns: Vec<Column>,
        label_name: impl Into<String>,
        positive_token: impl Into<String>,
        label: Vec<bool>,
    ) -> Result<Self> {
        assert_eq!(names.len(), columns.len(), "one name per column");
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let n = label.len();
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::Binarize {
                    column: name.clone(),
                    message: format!("has {} entries, label has {n}", col.len()),
                });
            }
        }
        Ok(RawTable {
            names,
            columns,
            label_name: label_name.into(),
            positive_token: positive_token.into(),
            label,
        })
    }

    pub fn n(&self) -> usize {
        self.label.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.names.iter().position(|n| n == name).map(|i| &self.columns[i])
    }

    pub fn label(&self) -> &[bool] {
        &self.label
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn positive_token(&self) -> &str {
        &self.positive_token
    }
}

fn is_missing_token(s: &str) -> bool {
    matches!(s, "" | "NA" | "N/A" | "NaN" | "nan" | "?" | "null" | "NULL")
}

/// Loads a comma-separated file with a header row.
pub fn load_csv(path: impl AsRef<Path>, label_column: &str, positive: &str) -> Result<RawTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, path, label_column, positive)
}

/// Like [`load_csv`] but from any reader; `source` is only used in errors.
pub fn read_csv<R: Read>(
    reader: R,
    source: impl AsRef<Path>,
    label_column: &str,
    positive: &str,
) -> Result<RawTable> {
    let path: PathBuf = source.as_ref().to_path_buf();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile { path });
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingLabelColumn {
            path: path.clone(),
            column: label_column.to_string(),
        })?;

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
        // header is line 1
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        if rec.len() != headers.len() {
            return Err(Error::RaggedRow {
                path,
                row: line,
                expected: headers.len(),
                found: rec.len(),
            });
        }
        for (j, field) in rec.iter().enumerate() {
            cells[j].push(field.trim().to_string());
        }
    }
    if cells[label_idx].is_empty() {
        return Err(Error::EmptyFile { path });
    }

    let raw_labels = std::mem::take(&mut cells[label_idx]);
    let mut distinct: Vec<&str> = Vec::new();
    let mut label = Vec::with_capacity(raw_labels.len());
    for (i, tok) in raw_labels.iter().enumerate() {
        if is_missing_token(tok) {
            return Err(Error::MissingLabel {
                path,
                column: label_column.to_string(),
                row: i + 2,
            });
        }
        if !distinct.contains(&tok.as_str()) {
            distinct.push(tok);
            if distinct.len() > 2 {
                return Err(Error::NonBinaryLabel {
                    path,
                    column: label_column.to_string(),
                    count: raw_labels.iter().collect::<HashSet<_>>().len(),
                    token: tok.clone(),
                    row: i + 2,
                });
            }
        }
        label.push(tok == positive);
    }
    if !distinct.contains(&positive) {
        log::warn!(
            "{}: positive label `{positive}` never occurs in column `{label_column}`",
            path.display()
        );
    }

    let mut names = Vec::new();
    let mut columns = Vec::new();
    for (j, col) in cells.into_iter().enumerate() {
        if j == label_idx {
            continue;
        }
        names.push(headers[j].clone());
        columns.push(infer_column(col));
    }
    RawTable::new(names, columns, label_column, positive, label)
}

fn infer_column(cells: Vec<String>) -> Column {
    let numeric: Option<Vec<Option<f64>>> = cells
        .iter()
        .map(|c| {
            if is_missing_token(c) {
                Some(None)
            } else {
                c.parse::<f64>().ok().filter(|v| v.is_finite()).map(Some)
            }
        })
        .collect();
    match numeric {
        Some(values) if values.iter().any(Option::is_some) => Column::Numeric(values),
        _ => Column::Categorical(
            cells
                .into_iter()
                .map(|c| if is_missing_token(&c) { None } else { Some(c) })
                .collect(),
        ),
    }
}
