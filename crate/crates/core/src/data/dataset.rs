use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitvec::BitVector;
use crate::error::{Error, Result};

/// How a binary feature was derived from its source column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureKind {
    /// `column <= threshold`
    Threshold { threshold: f64 },
    /// `lo <= column <= hi`
    Interval { lo: f64, hi: f64 },
    /// `column == value` (one-hot)
    Category { value: String },
    /// 0/1 column used as-is
    Binary,
    /// the source value is missing
    Missing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureInfo {
    pub name: String,
    pub column: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl FeatureInfo {
    /// A standalone binary feature whose source column is itself.
    pub fn binary(name: impl Into<String>) -> Self {
        let name = name.into();
        FeatureInfo {
            column: name.clone(),
            name,
            kind: FeatureKind::Binary,
        }
    }

    /// True for features derived from a numeric column by a cutpoint, which
    /// may be physically linked to sibling features.
    pub fn is_derived(&self) -> bool {
        matches!(self.kind, FeatureKind::Threshold { .. } | FeatureKind::Interval { .. })
    }
}

/// Groups of one-hot features that come from the same categorical column.
pub fn one_hot_groups(features: &[FeatureInfo]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (j, f) in features.iter().enumerate() {
        if let FeatureKind::Category { .. } = f.kind {
            groups.entry(f.column.as_str()).or_default().push(j);
        }
    }
    groups.into_values().filter(|g| g.len() > 1).collect()
}

/// Immutable binarized training data stored column-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<FeatureInfo>,
    columns: Vec<BitVector>,
    label: BitVector,
    label_name: String,
}

impl Dataset {
    pub fn new(
        features: Vec<FeatureInfo>,
        columns: Vec<BitVector>,
        label: BitVector,
        label_name: impl Into<String>,
    ) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::NoFeatures);
        }
        assert_eq!(features.len(), columns.len(), "one column per feature");
        let n = label.len();
        for (f, c) in features.iter().zip(&columns) {
            if c.len() != n {
                return Err(Error::Binarize {
                    column: f.name.clone(),
                    message: format!("column has length {}, label has {n}", c.len()),
                });
            }
        }
        Ok(Dataset {
            features,
            columns,
            label,
            label_name: label_name.into(),
        })
    }

    /// Builds a dataset of plain binary features from row-major data.
    pub fn from_rows(names: &[&str], rows: &[Vec<bool>], labels: &[bool]) -> Result<Self> {
        assert_eq!(rows.len(), labels.len(), "one label per row");
        for r in rows {
            if r.len() != names.len() {
                return Err(Error::LengthMismatch {
                    expected: names.len(),
                    found: r.len(),
                });
            }
        }
        let features = names.iter().map(|n| FeatureInfo::binary(*n)).collect();
        let columns = (0..names.len())
            .map(|j| BitVector::from_fn(rows.len(), |i| rows[i][j]))
            .collect();
        Dataset::new(features, columns, BitVector::from_bools(labels), "label")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.label.len()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureInfo] {
        &self.features
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    #[inline]
    pub fn column(&self, j: usize) -> &BitVector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    #[inline]
    pub fn label(&self) -> &BitVector {
        &self.label
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn positives(&self) -> usize {
        self.label.count_ones()
    }

    pub fn row(&self, i: usize) -> Vec<bool> {
        self.columns.iter().map(|c| c.get(i)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        (0..self.n()).map(|i| self.row(i)).collect()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.label.to_bools()
    }

    /// Features matching `name`, either by feature name or by source column.
    pub fn resolve(&self, name: &str) -> Result<Vec<usize>> {
        let found: Vec<usize> = self
            .features
            .iter()
            .enumerate()
            .filter(|(_, f)| f.name == name || f.column == name)
            .map(|(j, _)| j)
            .collect();
        if found.is_empty() {
            Err(Error::UnknownFeature(name.to_string()))
        } else {
            Ok(found)
        }
    }

    /// Groups of one-hot features that come from the same categorical column.
    pub fn one_hot_groups(&self) -> Vec<Vec<usize>> {
        one_hot_groups(&self.features)
    }

    /// A new dataset with the given rows, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: self.features.clone(),
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
            label: self.label.select(rows),
            label_name: self.label_name.clone(),
        }
    }

    /// A new dataset restricted to the given features.
    pub fn select_features(&self, features: &[usize]) -> Result<Dataset> {
        Dataset::new(
            features.iter().map(|&j| self.features[j].clone()).collect(),
            features.iter().map(|&j| self.columns[j].clone()).collect(),
            self.label.clone(),
            self.label_name.clone(),
        )
    }
}
