use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitvec::BitVector;
use crate::data::dataset::Dataset;

/// `feature == value`
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub feature: usize,
    pub value: bool,
}

impl Condition {
    pub fn new(feature: usize, value: bool) -> Self {
        Condition { feature, value }
    }

    #[inline]
    pub fn holds(&self, row: &[bool]) -> bool {
        row[self.feature] == self.value
    }

    pub fn render(&self, names: &[&str]) -> String {
        let name = names.get(self.feature).copied().unwrap_or("?");
        if self.value {
            name.to_string()
        } else {
            format!("not {name}")
        }
    }
}

/// A conjunction of conditions on distinct features, kept sorted by feature.
///
/// The empty conjunction is true everywhere.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Conjunction {
    conditions: Vec<Condition>,
}

impl Conjunction {
    /// Returns `None` if two conditions name the same feature.
    pub fn new(mut conditions: Vec<Condition>) -> Option<Self> {
        conditions.sort();
        if conditions.windows(2).any(|w| w[0].feature == w[1].feature) {
            return None;
        }
        Some(Conjunction { conditions })
    }

    pub fn single(feature: usize, value: bool) -> Self {
        Conjunction {
            conditions: vec![Condition::new(feature, value)],
        }
    }

    /// All conditions positive.
    pub fn of_features(features: &[usize]) -> Option<Self> {
        Self::new(features.iter().map(|&f| Condition::new(f, true)).collect())
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn cardinality(&self) -> usize {
        self.conditions.len()
    }

    pub fn features(&self) -> impl Iterator<Item = usize> + '_ {
        self.conditions.iter().map(|c| c.feature)
    }

    pub fn uses_feature(&self, feature: usize) -> bool {
        self.conditions.iter().any(|c| c.feature == feature)
    }

    pub fn max_feature(&self) -> Option<usize> {
        self.features().max()
    }

    #[inline]
    pub fn matches(&self, row: &[bool]) -> bool {
        self.conditions.iter().all(|c| c.holds(row))
    }

    /// Conditions the row fails.
    pub fn unmet(&self, row: &[bool]) -> Vec<Condition> {
        self.conditions.iter().copied().filter(|c| !c.holds(row)).collect()
    }

    /// Rows satisfying every condition.
    pub fn support(&self, ds: &Dataset) -> BitVector {
        let mut acc = BitVector::ones(ds.n());
        for c in &self.conditions {
            if c.value {
                acc.and_assign(ds.column(c.feature));
            } else {
                acc.and_not_assign(ds.column(c.feature));
            }
        }
        acc
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.conditions.is_empty() {
            return "true".into();
        }
        self.conditions
            .iter()
            .map(|c| c.render(names))
            .collect::<Vec<_>>()
            .join(" and ")
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .conditions
            .iter()
            .map(|c| format!("{}x{}", if c.value { "" } else { "!" }, c.feature))
            .collect();
        f.write_str(&parts.join("&"))
    }
}

/// A mined conjunction together with its support on the training data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antecedent {
    pub conjunction: Conjunction,
    pub support: BitVector,
}

impl Antecedent {
    pub fn new(conjunction: Conjunction, ds: &Dataset) -> Self {
        let support = conjunction.support(ds);
        Antecedent {
            conjunction,
            support,
        }
    }

    pub fn cardinality(&self) -> usize {
        self.conjunction.cardinality()
    }

    pub fn render(&self, names: &[&str]) -> String {
        self.conjunction.render(names)
    }
}
