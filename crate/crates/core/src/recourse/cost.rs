use std::collections::BTreeSet;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Per-feature flip costs. Immutable features can never be flipped.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    costs: Vec<f64>,
    immutable: BTreeSet<usize>,
}

impl CostModel {
    /// Cost 1 for every feature.
    pub fn uniform(p: usize) -> Self {
        CostModel {
            costs: vec![1.0; p],
            immutable: BTreeSet::new(),
        }
    }

    pub fn new(costs: Vec<f64>, immutable: impl IntoIterator<Item = usize>) -> Result<Self> {
        if let Some((j, c)) = costs.iter().enumerate().find(|(_, c)| !(**c >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "flip cost of feature {j} must be non-negative, got {c}"
            )));
        }
        let immutable: BTreeSet<usize> = immutable.into_iter().collect();
        if let Some(&j) = immutable.iter().find(|&&j| j >= costs.len()) {
            return Err(Error::LengthMismatch {
                expected: costs.len(),
                found: j + 1,
            });
        }
        Ok(CostModel { costs, immutable })
    }

    /// Parses `name:cost` pairs separated by commas; the cost `inf` or
    /// `immutable` freezes a feature. A source column name applies to every
    /// feature derived from it. Unlisted features cost 1.
    pub fn parse(text: &str, ds: &Dataset) -> Result<Self> {
        let mut costs = vec![1.0; ds.p()];
        let mut immutable = BTreeSet::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item.rsplit_once(':').ok_or_else(|| {
                Error::InvalidParameter(format!("expected `feature:cost`, got `{item}`"))
            })?;
            let features = ds.resolve(name.trim())?;
            match value.trim() {
                "inf" | "immutable" => immutable.extend(features),
                v => {
                    let c: f64 = v.parse().map_err(|_| {
                        Error::InvalidParameter(format!("`{v}` is not a cost"))
                    })?;
                    for j in features {
                        costs[j] = c;
                    }
                }
            }
        }
        Self::new(costs, immutable)
    }

    pub fn p(&self) -> usize {
        self.costs.len()
    }

    /// `None` for immutable or infinitely costly features.
    pub fn cost(&self, feature: usize) -> Option<f64> {
        let c = self.costs[feature];
        (!self.immutable.contains(&feature) && c.is_finite()).then_some(c)
    }

    pub fn is_immutable(&self, feature: usize) -> bool {
        self.cost(feature).is_none()
    }

    pub fn set_cost(&mut self, feature: usize, cost: f64) -> Result<()> {
        if !(cost >= 0.0) {
            return Err(Error::InvalidParameter(format!("flip cost must be non-negative, got {cost}")));
        }
        self.costs[feature] = cost;
        Ok(())
    }

    pub fn freeze(&mut self, feature: usize) {
        self.immutable.insert(feature);
    }
}
