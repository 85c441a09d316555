//! A common interface over the three model kinds, and loading any of them
//! from its JSON document.

use std::path::Path;

use serde_json::Value;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::par;
use crate::rules::json::{DnfDoc, RuleListDoc, DNF_KIND, RULE_LIST_KIND};
use crate::rules::{DnfModel, LabelNames, RuleList};
use crate::scoring::{render_card, ScoringDoc, ScoringSystem, SCORING_KIND};

/// A binary classifier over binarized rows.
pub trait Classifier: Sync {
    fn n_features(&self) -> usize;

    fn predict(&self, row: &[bool]) -> Result<bool>;

    /// Rules, conditions or nonzero coefficients, depending on the kind.
    fn size(&self) -> usize;

    fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<bool>> {
        if ds.p() != self.n_features() {
            return Err(Error::LengthMismatch {
                expected: self.n_features(),
                found: ds.p(),
            });
        }
        par::map_range(0..ds.n(), |i| self.predict(&ds.row(i))).into_iter().collect()
    }
}

impl Classifier for RuleList {
    fn n_features(&self) -> usize {
        RuleList::n_features(self)
    }
    fn predict(&self, row: &[bool]) -> Result<bool> {
        RuleList::predict(self, row)
    }
    fn size(&self) -> usize {
        RuleList::size(self)
    }
}

impl Classifier for DnfModel {
    fn n_features(&self) -> usize {
        DnfModel::n_features(self)
    }
    fn predict(&self, row: &[bool]) -> Result<bool> {
        DnfModel::predict(self, row)
    }
    fn size(&self) -> usize {
        DnfModel::size(self)
    }
}

impl Classifier for ScoringSystem {
    fn n_features(&self) -> usize {
        self.p()
    }
    fn predict(&self, row: &[bool]) -> Result<bool> {
        ScoringSystem::predict(self, row)
    }
    fn size(&self) -> usize {
        self.sparsity()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyModel {
    RuleList(RuleList),
    Dnf(DnfModel),
    Scoring(ScoringSystem),
}

impl Classifier for AnyModel {
    fn n_features(&self) -> usize {
        self.inner().n_features()
    }
    fn predict(&self, row: &[bool]) -> Result<bool> {
        self.inner().predict(row)
    }
    fn size(&self) -> usize {
        self.inner().size()
    }
}

/// A model together with the feature names it was trained on.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedModel {
    pub model: AnyModel,
    pub features: Vec<String>,
}

impl AnyModel {
    fn inner(&self) -> &dyn Classifier {
        match self {
            AnyModel::RuleList(m) => m,
            AnyModel::Dnf(m) => m,
            AnyModel::Scoring(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnyModel::RuleList(_) => RULE_LIST_KIND,
            AnyModel::Dnf(_) => DNF_KIND,
            AnyModel::Scoring(_) => SCORING_KIND,
        }
    }

    pub fn render(&self, features: &[String], labels: &LabelNames) -> String {
        let names: Vec<&str> = features.iter().map(String::as_str).collect();
        match self {
            AnyModel::RuleList(m) => m.render(&names, labels),
            AnyModel::Dnf(m) => m.render(&names),
            AnyModel::Scoring(m) => render_card(m, None),
        }
    }

    pub fn to_json(&self, features: &[String]) -> Value {
        let doc = match self {
            AnyModel::RuleList(m) => serde_json::to_value(RuleListDoc::new(m, features, None, None)),
            AnyModel::Dnf(m) => serde_json::to_value(DnfDoc::new(m, features)),
            AnyModel::Scoring(m) => serde_json::to_value(ScoringDoc::new(m, None)),
        };
        doc.expect("model documents always serialize")
    }
}

impl LoadedModel {
    /// Reads a model document, or the model embedded in a rule-list
    /// certificate.
    pub fn from_json(value: &Value) -> Result<Self> {
        let kind = value.get("kind").and_then(Value::as_str).unwrap_or_default();
        match kind {
            RULE_LIST_KIND => {
                let doc: RuleListDoc = serde_json::from_value(value.clone())?;
                Ok(LoadedModel {
                    model: AnyModel::RuleList(doc.to_model()?),
                    features: doc.features,
                })
            }
            DNF_KIND => {
                let doc: DnfDoc = serde_json::from_value(value.clone())?;
                Ok(LoadedModel {
                    model: AnyModel::Dnf(doc.to_model()?),
                    features: doc.features,
                })
            }
            SCORING_KIND => {
                let doc: ScoringDoc = serde_json::from_value(value.clone())?;
                Ok(LoadedModel {
                    model: AnyModel::Scoring(doc.to_model()?),
                    features: doc.features,
                })
            }
            _ => match value.get("model") {
                Some(inner) if inner.get("kind").is_some() => Self::from_json(inner),
                _ => Err(Error::InvalidParameter(format!(
                    "unrecognized model document kind `{kind}`"
                ))),
            },
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&serde_json::from_str(&text)?)
    }

    /// Fails unless `ds` has exactly the model's features, in order.
    pub fn check_dataset(&self, ds: &Dataset) -> Result<()> {
        let names = ds.feature_names();
        if names.len() != self.features.len() {
            return Err(Error::LengthMismatch {
                expected: self.features.len(),
                found: names.len(),
            });
        }
        match names.iter().zip(&self.features).find(|(a, b)| **a != b.as_str()) {
            Some((found, _)) => Err(Error::UnknownFeature(found.to_string())),
            None => Ok(()),
        }
    }
}
