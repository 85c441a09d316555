use crate::data::Conjunction;
use crate::error::{Error, Result};

/// Disjunction of conjunctions: predicts 1 iff any conjunction holds.
///
/// With no conjunctions this is the constant-0 model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DnfModel {
    conjunctions: Vec<Conjunction>,
    n_features: usize,
}

impl DnfModel {
    pub fn new(conjunctions: Vec<Conjunction>, n_features: usize) -> Result<Self> {
        for (i, c) in conjunctions.iter().enumerate() {
            if let Some(f) = c.max_feature() {
                if f >= n_features {
                    return Err(Error::LengthMismatch {
                        expected: n_features,
                        found: f + 1,
                    });
                }
            }
            if conjunctions[..i].contains(c) {
                return Err(Error::InvalidParameter(format!(
                    "conjunction {} repeats an earlier one",
                    i + 1
                )));
            }
        }
        Ok(DnfModel {
            conjunctions,
            n_features,
        })
    }

    pub fn conjunctions(&self) -> &[Conjunction] {
        &self.conjunctions
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Total number of conditions.
    pub fn size(&self) -> usize {
        self.conjunctions.iter().map(Conjunction::cardinality).sum()
    }

    pub fn predict(&self, row: &[bool]) -> Result<bool> {
        if row.len() != self.n_features {
            return Err(Error::LengthMismatch {
                expected: self.n_features,
                found: row.len(),
            });
        }
        Ok(self.conjunctions.iter().any(|c| c.matches(row)))
    }

    pub fn render(&self, feature_names: &[&str]) -> String {
        if self.conjunctions.is_empty() {
            return "predict 0\n".into();
        }
        let terms: Vec<String> = self
            .conjunctions
            .iter()
            .map(|c| format!("({})", c.render(feature_names)))
            .collect();
        format!("IF {} THEN predict 1\nELSE predict 0\n", terms.join(" OR "))
    }
}
